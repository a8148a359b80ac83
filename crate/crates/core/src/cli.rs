//! Command-line front end: `gen`, `solve`, `trace-example`, `sweep` and
//! `oracle`.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 when the command fails.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{self, run_with_choices, trace_tsv};
use crate::error::{Error, Result};
use crate::experiments::{self, SweepConfig};
use crate::fixtures::{self, Scenario};
use crate::generator::{generate, GenConfig};
use crate::model::{load_instance, save_instance, AgentId, PrivacyScope, ProblemKind};
use crate::oracle;
use crate::solvers::{DivisorMode, SolverKind, SolverParams};

#[derive(Debug, Parser)]
#[command(
    name = "udcop",
    version,
    about = "Privacy-aware distributed constraint optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random meeting-scheduling instance.
    Gen(GenArgs),
    /// Run one solver on an instance file.
    Solve(SolveArgs),
    /// Print the trace of a built-in three-student scenario.
    TraceExample {
        #[arg(value_enum)]
        which: ExampleKind,
    },
    /// Run a density sweep and write metrics.csv, instances.csv and summary.txt.
    Sweep(SweepArgs),
    /// Print the optimal common value of an instance and its cost.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        /// Enumerate every assignment instead of scanning common values.
        #[arg(long)]
        enumerate: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleKind {
    Dsau,
    Molex,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 10)]
    agents: usize,
    #[arg(long, default_value_t = 10)]
    values: u32,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 9)]
    cost_max: u32,
    #[arg(long, default_value_t = 9)]
    privacy_max: u32,
    #[arg(long, default_value = "udcop")]
    kind: ProblemKind,
    /// Output path; the document is printed when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// DSA activation probability.
    #[arg(long, default_value_t = 0.6)]
    p: f64,
    #[arg(long, default_value = "revealed")]
    divisor: DivisorMode,
    /// Finite all-equal penalty used by local search.
    #[arg(long)]
    penalty: Option<f64>,
    /// Estimate-only acceptance for dsau/dbou.
    #[arg(long)]
    pure_alg2: bool,
    /// Rounds in conflict before a privacy-costly repair (default: domain size).
    #[arg(long)]
    patience: Option<u32>,
    /// Charge every sent value, not only values carrying a unary constraint.
    #[arg(long)]
    charge_all_values: bool,
}

impl ParamArgs {
    fn params(&self) -> SolverParams {
        SolverParams {
            activation: self.p,
            divisor: self.divisor,
            penalty: self.penalty,
            pure_alg2: self.pure_alg2,
            patience: self.patience,
            scope: if self.charge_all_values {
                PrivacyScope::AllValues
            } else {
                PrivacyScope::ConstrainedValues
            },
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "dsau")]
    algo: SolverKind,
    #[arg(long, default_value_t = 500)]
    rounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
    /// Write the per-round trace (tab-separated) to this path.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated densities.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5])]
    densities: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "dsa,dsau,dbo,dbou")]
    algos: Vec<SolverKind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    rounds: u32,
    #[arg(long, default_value_t = 10)]
    agents: usize,
    #[arg(long, default_value_t = 10)]
    values: u32,
    #[arg(long, default_value = "udcop")]
    kind: ProblemKind,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value = "sweep-out")]
    out_dir: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cmd: Command) -> Result<String> {
    match cmd {
        Command::Gen(a) => {
            let inst = generate(&GenConfig {
                n: a.agents,
                d: a.values,
                density: a.density,
                cost_max: a.cost_max,
                privacy_max: a.privacy_max,
                seed: a.seed,
                kind: a.kind,
            })?;
            match a.out {
                Some(path) => {
                    save_instance(&inst, &path)?;
                    Ok(format!("wrote {}\n", path.display()))
                }
                None => Ok(crate::model::to_json(&inst)),
            }
        }
        Command::Solve(a) => solve(a),
        Command::TraceExample { which } => match which {
            ExampleKind::Dsau => dsau_example_report(),
            ExampleKind::Molex => molex_example_report(),
        },
        Command::Sweep(a) => {
            let cfg = SweepConfig {
                densities: a.densities,
                instances: a.instances,
                template: GenConfig {
                    n: a.agents,
                    d: a.values,
                    kind: a.kind,
                    ..GenConfig::default()
                },
                algorithms: a.algos,
                params: a.params.params(),
                seed: a.seed,
                budget: a.rounds,
            };
            let rows = experiments::run_sweep(&cfg)?;
            experiments::write_outputs(&rows, &a.out_dir)?;
            let mut text = experiments::summary_text(&experiments::aggregate(&rows));
            let _ = writeln!(
                text,
                "\nwrote {} rows to {}",
                rows.len(),
                a.out_dir.display()
            );
            Ok(text)
        }
        Command::Oracle { input, enumerate } => {
            let inst = load_instance(&input)?;
            let r = if enumerate {
                oracle::exact_optimum_enum(&inst, oracle::DEFAULT_ENUM_LIMIT)?
            } else {
                oracle::exact_optimum_dms(&inst)?
            };
            Ok(format!("assignment {}\ncost {}\n", r.assignment, r.cost))
        }
    }
}

fn solve(a: SolveArgs) -> Result<String> {
    let inst = load_instance(&a.input)?;
    let (out, trace) = engine::run(&inst, a.algo, &a.params.params(), a.seed, a.rounds)?;
    if let Some(path) = &a.trace {
        std::fs::write(path, trace_tsv(&trace)).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    let m = &out.metrics;
    let mut s = String::new();
    let _ = writeln!(s, "algorithm {}", a.algo);
    let _ = writeln!(s, "assignment {}", out.final_assignment);
    let _ = writeln!(s, "satisfied {}", m.satisfied);
    let _ = writeln!(s, "rounds {}", out.rounds);
    let _ = writeln!(s, "messages {}", out.messages);
    let _ = writeln!(s, "privacy_loss_per_agent {}", m.privacy_loss_per_agent);
    let _ = writeln!(
        s,
        "solution_quality_per_agent {}",
        m.solution_quality_per_agent
    );
    if !m.satisfied {
        let _ = writeln!(
            s,
            "unpenalized_quality_per_agent {}",
            m.unpenalized_quality_per_agent
        );
    }
    let _ = writeln!(s, "total_cost_per_agent {}", m.total_cost_per_agent);
    Ok(s)
}

fn run_scenario(
    sc: &Scenario,
    solver: SolverKind,
) -> Result<(engine::Outcome, Vec<engine::RoundTrace>)> {
    run_with_choices(
        &sc.instance,
        solver,
        &SolverParams::default(),
        &mut sc.choices(),
        sc.budget,
    )
}

fn join<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// DSAU on the three-student instance from `(1,1,3)`.
pub fn dsau_example_report() -> Result<String> {
    let sc = fixtures::dsau_worked_example();
    let (out, trace) = run_scenario(&sc, SolverKind::Dsau)?;
    let mut s = trace_tsv(&trace);
    let agents: Vec<AgentId> = sc.instance.agents().collect();
    let _ = writeln!(s, "final assignment {}", out.final_assignment);
    let _ = writeln!(
        s,
        "utilities ({})",
        join(agents.iter().map(|a| out.agent_utility(*a)))
    );
    Ok(s)
}

/// Two scripted rounds of MO-lex next to two rounds of DSAU.
pub fn molex_example_report() -> Result<String> {
    let mut s = String::new();
    let mut privacy = Vec::new();
    for (label, sc, solver) in [
        ("dsau", fixtures::table2_dsau(), SolverKind::Dsau),
        ("molex", fixtures::table2_molex(), SolverKind::MoLex),
    ] {
        let (_, trace) = run_scenario(&sc, solver)?;
        let last = trace.last().expect("budget is at least 1");
        let values = join(last.steps.iter().map(|st| st.value));
        let cum: Vec<f64> = last.steps.iter().map(|st| st.cum_privacy).collect();
        let _ = writeln!(s, "# {label}");
        s.push_str(&trace_tsv(&trace));
        let _ = writeln!(s, "{label} achieved ({values})");
        let _ = writeln!(s, "{label} cumulative privacy ({})", join(&cum));
        privacy.push(cum);
    }
    let extra: Vec<f64> = privacy[1]
        .iter()
        .zip(&privacy[0])
        .map(|(m, u)| m - u)
        .collect();
    let _ = writeln!(s, "extra privacy loss of molex ({})", join(&extra));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("udcop").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn dsau_example() {
        let (code, out, _) = call(&["trace-example", "dsau"]);
        assert_eq!(code, 0);
        for n in ["150", "220", "240", "250", "265", "225"] {
            assert!(out.contains(n), "{n}");
        }
        assert!(out.contains("final assignment (1,1,1)"));
        assert!(out.contains("utilities (150,220,130)"));
    }

    #[test]
    fn molex_example() {
        let (code, out, _) = call(&["trace-example", "molex"]);
        assert_eq!(code, 0);
        assert!(out.contains("molex achieved (2,3,3)"));
        assert!(out.contains("molex cumulative privacy (100,110,10)"));
        assert!(out.contains("dsau cumulative privacy (80,100,90)"));
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = call(&["solve", "--in", "missing.file"]);
        assert_eq!(code, 2);
        assert!(err.contains("missing.file"));
        let (code, _, err) = call(&["solve", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("--bogus"));
        let (code, out, _) = call(&["sweep", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--densities"));
        let (code, _, _) = call(&["solve", "--in", "x", "--algo", "nope"]);
        assert_eq!(code, 1);
    }
}
