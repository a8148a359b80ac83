//! Run every solver on one generated instance and compare privacy loss,
//! solution quality and total cost per agent.
//!
//! cargo run --example compare_solvers

use udcop::engine;
use udcop::generator::{generate, GenConfig};
use udcop::oracle::exact_optimum_dms;
use udcop::solvers::{SolverKind, SolverParams};

fn main() -> udcop::Result<()> {
    let inst = generate(&GenConfig {
        density: 0.5,
        seed: 42,
        ..GenConfig::default()
    })?;
    let best = exact_optimum_dms(&inst)?;
    println!(
        "optimum {} cost {} ({:.2}/agent)",
        best.assignment,
        best.cost,
        best.cost / inst.n as f64
    );
    println!(
        "{:<6} {:>8} {:>8} {:>8} {:>7} {:>9}",
        "algo", "privacy", "quality", "total", "rounds", "agreed"
    );
    for solver in SolverKind::ALL {
        let (out, _) = engine::run(&inst, solver, &SolverParams::default(), 42, 500)?;
        println!(
            "{:<6} {:>8.2} {:>8.2} {:>8.2} {:>7} {:>9}",
            solver.name(),
            out.privacy_loss_per_agent(),
            out.solution_quality_per_agent(),
            out.total_cost_per_agent(),
            out.rounds,
            out.satisfied()
        );
    }
    Ok(())
}
