//! A reduced density sweep: 10 instances per density, all four
//! solvers, summary printed to stdout.
//!
//! cargo run --release --example density_sweep

use udcop::experiments::{aggregate, run_sweep, summary_text, SweepConfig};

fn main() -> udcop::Result<()> {
    let cfg = SweepConfig {
        instances: 10,
        seed: 2024,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg)?;
    print!("{}", summary_text(&aggregate(&rows)));
    Ok(())
}
