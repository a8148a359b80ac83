//! Generate a seeded meeting-scheduling instance and print it as JSON.
//!
//! cargo run --example generate_instance -- 0.4 17

use udcop::generator::{generate, GenConfig};
use udcop::model::{to_json, AgentId};

fn main() -> udcop::Result<()> {
    let mut args = std::env::args().skip(1);
    let density = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.3);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = GenConfig {
        n: 4,
        d: 5,
        density,
        seed,
        ..GenConfig::default()
    };
    let inst = generate(&cfg)?;
    eprintln!(
        "{} constrained values per agent; agent 0 costs {:?}",
        cfg.constrained_count(),
        inst.unary[AgentId(0).0]
    );
    print!("{}", to_json(&inst));
    Ok(())
}
