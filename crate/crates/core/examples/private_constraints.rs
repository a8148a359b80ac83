//! Privacy accounting when agents disclose constraint weights rather than
//! values: sending a value discloses the unary constraint on it (if any)
//! and the all-equal constraint, each charged once.
//!
//! cargo run --example private_constraints

use udcop::engine::{self, RevealLedger};
use udcop::fixtures;
use udcop::generator::{generate, GenConfig};
use udcop::model::{AgentId, ProblemKind, Value};
use udcop::solvers::{SolverKind, SolverParams};

fn main() -> udcop::Result<()> {
    let inst = fixtures::example3();
    let mut ledger = RevealLedger::new(inst.n, Default::default());
    for v in [3, 1, 3] {
        let (fresh, charged) = ledger.send_value(&inst, AgentId(1), Value(v))?;
        let names: Vec<String> = fresh.iter().map(|e| e.to_string()).collect();
        println!("A2 sends {v}: disclosed {names:?}, charged {charged}");
    }

    let inst = generate(&GenConfig {
        kind: ProblemKind::Udcoppc,
        density: 0.4,
        seed: 5,
        ..GenConfig::default()
    })?;
    for solver in [SolverKind::Dsa, SolverKind::Dsau] {
        let (out, _) = engine::run(&inst, solver, &SolverParams::default(), 5, 500)?;
        println!(
            "{solver}: privacy/agent {:.2} total/agent {:.2}",
            out.privacy_loss_per_agent(),
            out.total_cost_per_agent()
        );
    }
    Ok(())
}
