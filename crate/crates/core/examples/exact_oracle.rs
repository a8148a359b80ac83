//! Exact optima: the common-value scan and full enumeration agree on
//! all-equal instances with an infinite penalty, but a small finite penalty
//! can make disagreement cheaper.
//!
//! cargo run --example exact_oracle

use udcop::fixtures;
use udcop::model::{Penalty, Value};
use udcop::oracle::{exact_optimum_dms, exact_optimum_enum, DEFAULT_ENUM_LIMIT};

fn main() -> udcop::Result<()> {
    let mut inst = fixtures::example1();
    let scan = exact_optimum_dms(&inst)?;
    let full = exact_optimum_enum(&inst, DEFAULT_ENUM_LIMIT)?;
    println!(
        "scan {} {}  enumeration {} {}",
        scan.assignment, scan.cost, full.assignment, full.cost
    );

    // make London expensive for the third student
    inst.unary[2].insert(Value(1), 500.0);
    let scan = exact_optimum_dms(&inst)?;
    inst.global.penalty = Penalty::Finite(100.0);
    let full = exact_optimum_enum(&inst, DEFAULT_ENUM_LIMIT)?;
    println!(
        "penalty 100: best agreement {} {}  enumeration {} {}",
        scan.assignment, scan.cost, full.assignment, full.cost
    );
    Ok(())
}
