use std::collections::BTreeSet;

use super::DivisorMode;
use crate::error::{Error, Result};
use crate::model::{AgentId, Instance, PrivacyScope, RevealEntry, Value};

/// A-priori probability that an assignment is not part of the final
/// solution: `1 - 1/|D_i|`.
pub fn utility_risk(domain_size: usize) -> Result<f64> {
    if domain_size == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(1.0 - 1.0 / domain_size as f64)
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateInputs<'a> {
    pub instance: &'a Instance,
    pub agent: AgentId,
    pub revealed: &'a BTreeSet<Value>,
    pub scope: PrivacyScope,
}

/// Privacy-aware cost of a revealed set: the unary costs of the revealed
/// values, normalised by `mode`, plus the privacy cost of every entry the
/// set discloses (each entry counted once).
pub fn estimate_cost(inputs: &EstimateInputs<'_>, mode: DivisorMode) -> f64 {
    let EstimateInputs {
        instance,
        agent,
        revealed,
        scope,
    } = *inputs;
    if revealed.is_empty() {
        return 0.0;
    }
    let unary: f64 = revealed
        .iter()
        .map(|v| instance.unary_cost(agent, *v))
        .sum();
    let cost = match mode {
        DivisorMode::Revealed => unary / revealed.len() as f64,
        DivisorMode::Domain => {
            let survival = 1.0 - utility_risk(instance.domain(agent).len()).unwrap_or(1.0);
            unary * survival
        }
    };
    let entries: BTreeSet<RevealEntry> = revealed
        .iter()
        .flat_map(|v| instance.reveal_entries(agent, *v))
        .collect();
    let privacy: f64 = entries
        .into_iter()
        .map(|e| instance.entry_cost(agent, e, scope))
        .sum();
    cost + privacy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn est(agent: usize, values: &[u32], mode: DivisorMode) -> f64 {
        let inst = fixtures::example2();
        let revealed: BTreeSet<Value> = values.iter().map(|v| Value(*v)).collect();
        estimate_cost(
            &EstimateInputs {
                instance: &inst,
                agent: AgentId(agent),
                revealed: &revealed,
                scope: PrivacyScope::default(),
            },
            mode,
        )
    }

    #[test]
    fn risk() {
        assert_eq!(utility_risk(1).unwrap(), 0.0);
        assert!((utility_risk(3).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((utility_risk(10).unwrap() - 0.9).abs() < 1e-12);
        assert!(matches!(utility_risk(0), Err(Error::EmptyDomain)));
    }

    #[test]
    fn worked_example_estimates() {
        let m = DivisorMode::Revealed;
        assert!((est(0, &[1], m) - 150.0).abs() < 1e-9);
        assert!((est(0, &[1, 2], m) - 250.0).abs() < 1e-9);
        assert!((est(2, &[3, 1], m) - 225.0).abs() < 1e-9);
        assert_eq!(est(1, &[], m), 0.0);
        // the other estimates quoted in the same example
        assert!((est(1, &[1], m) - 220.0).abs() < 1e-9);
        assert!((est(2, &[3], m) - 240.0).abs() < 1e-9);
        assert!((est(1, &[1, 3], m) - 265.0).abs() < 1e-9);
    }

    #[test]
    fn domain_divisor() {
        // (70 + 230) / 3 + 80 + 20
        assert!((est(0, &[1, 2], DivisorMode::Domain) - 200.0).abs() < 1e-9);
    }

    #[test]
    fn udcoppc_counts_all_equal_once() {
        let mut inst = fixtures::example3();
        inst.privacy[0].insert(
            RevealEntry::Constraint(crate::model::ConstraintId::AllEqual),
            5.0,
        );
        let revealed: BTreeSet<Value> = [Value(1), Value(2)].into();
        let e = estimate_cost(
            &EstimateInputs {
                instance: &inst,
                agent: AgentId(0),
                revealed: &revealed,
                scope: PrivacyScope::default(),
            },
            DivisorMode::Revealed,
        );
        assert!((e - (150.0 + 80.0 + 20.0 + 5.0)).abs() < 1e-9);
    }
}
