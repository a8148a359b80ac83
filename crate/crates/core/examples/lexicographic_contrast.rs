//! Two scripted rounds of DSAU next to a DSA that compares (privacy, cost)
//! pairs lexicographically. The lexicographic agents move to values whose
//! privacy cost is lower, and pay for it in disclosed values.
//!
//! cargo run --example lexicographic_contrast

use udcop::engine::run_with_choices;
use udcop::fixtures;
use udcop::solvers::{mo_lex_compare, SolverKind, SolverParams};

fn main() -> udcop::Result<()> {
    println!(
        "(10,190) vs (100,120): {:?}",
        mo_lex_compare((10.0, 190.0), (100.0, 120.0))
    );
    println!(
        "(80,40) vs (10,230): {:?}",
        mo_lex_compare((80.0, 40.0), (10.0, 230.0))
    );

    for (name, sc, solver) in [
        ("dsau", fixtures::table2_dsau(), SolverKind::Dsau),
        ("molex", fixtures::table2_molex(), SolverKind::MoLex),
    ] {
        let (_, trace) = run_with_choices(
            &sc.instance,
            solver,
            &SolverParams::default(),
            &mut sc.choices(),
            sc.budget,
        )?;
        let last = trace.last().unwrap();
        let values: Vec<u32> = last.steps.iter().map(|s| s.value.0).collect();
        let privacy: Vec<f64> = last.steps.iter().map(|s| s.cum_privacy).collect();
        println!("{name:<6} values {values:?} cumulative privacy {privacy:?}");
    }
    Ok(())
}
