//! Exact optima for small instances.

use crate::error::{Error, Result};
use crate::model::{solution_cost, AgentId, Assignment, Instance, Value};

pub const DEFAULT_ENUM_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub assignment: Assignment,
    pub cost: f64,
}

/// Cheapest common value: `argmin_v Σ_i unary_i(v)` over the values every
/// agent can take. Ties go to the smallest value.
pub fn exact_optimum_dms(inst: &Instance) -> Result<OracleResult> {
    let mut best: Option<(Value, f64)> = None;
    for v in inst.common_values() {
        let cost: f64 = inst.agents().map(|a| inst.unary_cost(a, v)).sum();
        if best.is_none_or(|(_, c)| cost < c) {
            best = Some((v, cost));
        }
    }
    let (v, cost) = best.ok_or(Error::EmptyIntersection)?;
    Ok(OracleResult {
        assignment: Assignment(vec![v; inst.n]),
        cost,
    })
}

/// Enumerates every assignment, in lexicographic order of values, and keeps
/// the first one of minimum cost.
pub fn exact_optimum_enum(inst: &Instance, limit: u128) -> Result<OracleResult> {
    let size = inst
        .domains
        .iter()
        .try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
        .unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    if size == 0 {
        return Err(Error::EmptyDomain);
    }

    let mut idx = vec![0usize; inst.n];
    let mut best: Option<OracleResult> = None;
    loop {
        let a = Assignment(
            idx.iter()
                .enumerate()
                .map(|(i, k)| inst.domain(AgentId(i))[*k])
                .collect(),
        );
        let cost = solution_cost(inst, &a)?;
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(OracleResult {
                assignment: a,
                cost,
            });
        }
        // odometer, last agent fastest
        let mut i = inst.n;
        loop {
            if i == 0 {
                return Ok(best.expect("at least one assignment"));
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < inst.domains[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}
