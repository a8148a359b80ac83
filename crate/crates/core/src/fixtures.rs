//! The three-student meeting instances and the scripted scenarios built on
//! them.
//!
//! Values 1, 2 and 3 stand for London, Madrid and Rome. Agents are indexed
//! from 0, so agent 0 is the first student.

use crate::engine::ScriptedChoices;
use crate::model::{
    ConstraintId, CostTable, GlobalConstraint, Instance, Penalty, PrivacyTable, ProblemKind,
    RevealEntry, Value,
};

const TRAVEL: [[f64; 3]; 3] = [
    [70.0, 230.0, 270.0],
    [120.0, 400.0, 190.0],
    [40.0, 280.0, 230.0],
];
const PRIVACY: [[f64; 3]; 3] = [[80.0, 20.0, 40.0], [100.0, 30.0, 10.0], [80.0, 30.0, 10.0]];

fn base(kind: ProblemKind, privacy: Vec<PrivacyTable>) -> Instance {
    Instance {
        kind,
        n: 3,
        d: 3,
        domains: vec![(1..=3).map(Value).collect(); 3],
        unary: TRAVEL
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, c)| (Value(j as u32 + 1), *c))
                    .collect::<CostTable>()
            })
            .collect(),
        privacy,
        global: GlobalConstraint {
            penalty: Penalty::Infinite,
        },
    }
}

fn privacy_tables(key: impl Fn(Value) -> RevealEntry) -> Vec<PrivacyTable> {
    PRIVACY
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, c)| (key(Value(j as u32 + 1)), *c))
                .collect()
        })
        .collect()
}

/// Plain DCOP: travel costs and the all-equal constraint.
pub fn example1() -> Instance {
    base(ProblemKind::Dcop, Vec::new())
}

/// UDCOP: example 1 plus a privacy cost per value.
pub fn example2() -> Instance {
    base(ProblemKind::Udcop, privacy_tables(RevealEntry::Value))
}

/// UDCOPPC: the same privacy costs attached to the unary constraints.
pub fn example3() -> Instance {
    base(
        ProblemKind::Udcoppc,
        privacy_tables(|v| RevealEntry::Constraint(ConstraintId::Unary(v))),
    )
}

/// A fixed run: instance, initial values, per-round candidates and budget.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub instance: Instance,
    pub initial: Vec<Value>,
    /// `candidates[agent][round]`.
    pub candidates: Vec<Vec<Value>>,
    pub budget: u32,
}

impl Scenario {
    pub fn choices(&self) -> ScriptedChoices {
        ScriptedChoices::new(self.initial.clone(), self.candidates.clone(), 0)
    }
}

fn values(v: &[u32]) -> Vec<Value> {
    v.iter().map(|x| Value(*x)).collect()
}

/// DSAU from `(1,1,3)` with first-round candidates `(2,3,1)`, run to
/// quiescence.
pub fn dsau_worked_example() -> Scenario {
    Scenario {
        instance: example2(),
        initial: values(&[1, 1, 3]),
        candidates: vec![values(&[2]), values(&[3]), values(&[1])],
        budget: 20,
    }
}

/// Two rounds of DSAU for the side-by-side comparison with MO-lex.
pub fn table2_dsau() -> Scenario {
    Scenario {
        instance: example2(),
        initial: values(&[1, 1, 3]),
        candidates: vec![values(&[2, 1]), values(&[3, 1]), values(&[1, 1])],
        budget: 2,
    }
}

/// Two rounds of DSA with lexicographic `(privacy, cost)` comparison. In
/// the second round every agent reconsiders its current value.
pub fn table2_molex() -> Scenario {
    Scenario {
        instance: example2(),
        initial: values(&[1, 1, 3]),
        candidates: vec![values(&[2, 2]), values(&[3, 3]), values(&[1, 3])],
        budget: 2,
    }
}
