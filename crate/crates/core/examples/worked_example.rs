//! DSAU on the three-student meeting, from the initial view (1,1,3) with
//! first-round candidates (2,3,1).
//!
//! cargo run --example worked_example

use udcop::engine::{run_with_choices, trace_tsv};
use udcop::fixtures;
use udcop::solvers::{SolverKind, SolverParams};

fn main() -> udcop::Result<()> {
    let sc = fixtures::dsau_worked_example();
    let (out, trace) = run_with_choices(
        &sc.instance,
        SolverKind::Dsau,
        &SolverParams::default(),
        &mut sc.choices(),
        sc.budget,
    )?;
    print!("{}", trace_tsv(&trace));
    println!("final {}", out.final_assignment);
    for a in sc.instance.agents() {
        println!("A{} utility {}", a.0 + 1, out.agent_utility(a));
    }
    Ok(())
}
