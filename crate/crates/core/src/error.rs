use std::path::PathBuf;

use thiserror::Error;

use crate::model::{AgentId, Value, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The instance document is not well formed. `line`/`column` are 1-based,
    /// or 0 when the problem is tied to a field rather than a position.
    #[error("{}: {message}", located(path, *line, *column))]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid instance: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("assignment has no value for agent {0}")]
    MissingAgent(AgentId),

    #[error("assignment has {found} values but the instance has {expected} agents")]
    AssignmentLength { expected: usize, found: usize },

    #[error("value {value} is not in the domain of agent {agent}")]
    NotInDomain { agent: AgentId, value: Value },

    #[error("`{entry}` cannot be revealed by agent {agent}")]
    UnknownEntry { agent: AgentId, entry: String },

    #[error("domain size must be at least 1")]
    EmptyDomain,

    #[error("round budget must be at least 1")]
    ZeroBudget,

    #[error("unknown solver `{0}` (expected one of dsa, dsau, dbo, dbou, molex)")]
    UnknownSolver(String),

    #[error("search space of {size} assignments exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },

    #[error("the agents' domains share no common value")]
    EmptyIntersection,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sweep cell (density {density}, instance {instance}, {algorithm}): {source}")]
    Cell {
        density: f64,
        instance: usize,
        algorithm: String,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn located(path: &std::path::Path, line: usize, column: usize) -> String {
    if line == 0 {
        path.display().to_string()
    } else {
        format!("{}:{line}:{column}", path.display())
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
