//! Privacy-aware distributed constraint optimization on meeting-scheduling
//! problems.
//!
//! Agents each own one variable, pay a unary cost for the value they end up
//! with, must all agree (an all-equal constraint), and lose privacy every
//! time they disclose a value (or, in UDCOPPC mode, a constraint weight).
//! The crate provides:
//!
//! * [`model`]: instances, validation, solution cost and a JSON format;
//! * [`generator`]: seeded random instances at a given constraint density;
//! * [`solvers`]: DSA, DSAU, DBO, DBOU and a lexicographic MO-DCOP DSA;
//! * [`engine`]: a synchronous simulator with a once-only reveal ledger;
//! * [`oracle`]: exact optima for small instances;
//! * [`experiments`]: density sweeps with CSV and text summaries.
//!
//! ```
//! use udcop::engine;
//! use udcop::generator::{generate, GenConfig};
//! use udcop::solvers::{SolverKind, SolverParams};
//!
//! let inst = generate(&GenConfig { seed: 7, ..GenConfig::default() }).unwrap();
//! let (outcome, _trace) = engine::run(&inst, SolverKind::Dsau, &SolverParams::default(), 7, 500).unwrap();
//! assert!(outcome.total_cost_per_agent() >= outcome.privacy_loss_per_agent());
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod generator;
pub mod model;
pub mod oracle;
pub mod seeding;
pub mod solvers;

pub use error::{Error, Result};
