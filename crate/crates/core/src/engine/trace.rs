use std::fmt::Write as _;

use crate::model::{AgentId, RevealEntry, Value};
use crate::solvers::Action;

/// One agent's line in a round.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentStep {
    pub agent: AgentId,
    pub action: Action,
    /// Value held after the step.
    pub value: Value,
    /// Entries disclosed for the first time in this round's send phase.
    pub revealed: Vec<RevealEntry>,
    pub charged: f64,
    pub est_current: f64,
    pub est_next: f64,
    pub cum_privacy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: u32,
    pub steps: Vec<AgentStep>,
    pub privacy_loss_per_agent: f64,
    pub solution_quality_per_agent: f64,
    pub total_cost_per_agent: f64,
    pub satisfied: bool,
}

pub const TRACE_HEADER: &str =
    "round\tagent\taction\tvalue\trevealed\tcharged\test_current\test_next\tcum_privacy";

/// Tab-separated trace, header first, one line per round and agent.
/// Agents are printed 1-based (`A1`, `A2`, ...).
pub fn trace_tsv(rounds: &[RoundTrace]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in rounds {
        for s in &r.steps {
            let action = match s.action {
                Action::Keep => "keep",
                Action::Change(_) => "change",
            };
            let revealed = if s.revealed.is_empty() {
                "-".to_string()
            } else {
                s.revealed
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let _ = writeln!(
                out,
                "{}\tA{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.round,
                s.agent.0 + 1,
                action,
                s.value,
                revealed,
                s.charged,
                s.est_current,
                s.est_next,
                s.cum_privacy
            );
        }
    }
    out
}
