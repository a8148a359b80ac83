//! Random distributed meeting-scheduling instances.
//!
//! For each agent `i`, on the stream `[GENERATOR, i]` of the config seed:
//!
//! 1. one variable per agent, domain `{1..d}`, all-equal global constraint
//!    with infinite penalty;
//! 2. `round(density·d)` distinct values are sampled without replacement
//!    and receive a unary constraint;
//! 3. each of those, in increasing value order, draws a cost uniformly
//!    from `0..=cost_max`;
//! 4. every value `1..=d`, in order, draws a revelation cost uniformly from
//!    `0..=privacy_max`.
//!
//! In `udcoppc` mode the revelation cost of value `v` is attached to the
//! constraint `unary:v` and discarded when `v` is unconstrained, so both
//! kinds consume the same draws.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{
    ConstraintId, CostTable, GlobalConstraint, Instance, Penalty, PrivacyTable, ProblemKind,
    RevealEntry, Value,
};
use crate::seeding;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub d: u32,
    pub density: f64,
    pub cost_max: u32,
    pub privacy_max: u32,
    pub seed: u64,
    pub kind: ProblemKind,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n: 10,
            d: 10,
            density: 0.3,
            cost_max: 9,
            privacy_max: 9,
            seed: 0,
            kind: ProblemKind::Udcop,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("agents must be at least 1".into()));
        }
        if self.d < 1 {
            return Err(Error::Config("values must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Config(format!(
                "density {} is outside [0, 1]",
                self.density
            )));
        }
        if self.kind == ProblemKind::Dcop {
            return Err(Error::Config(
                "the generator produces udcop or udcoppc instances".into(),
            ));
        }
        Ok(())
    }

    /// Number of unary-constrained values per agent.
    pub fn constrained_count(&self) -> usize {
        (self.density * self.d as f64).round() as usize
    }
}

pub fn generate(cfg: &GenConfig) -> Result<Instance> {
    cfg.validate()?;
    let k = cfg.constrained_count();
    let domain: Vec<Value> = (1..=cfg.d).map(Value).collect();

    let mut unary = Vec::with_capacity(cfg.n);
    let mut privacy = Vec::with_capacity(cfg.n);
    for agent in 0..cfg.n {
        let mut rng = seeding::stream(cfg.seed, &[seeding::GENERATOR, agent as u64]);

        let mut picked: Vec<Value> = index::sample(&mut rng, cfg.d as usize, k)
            .into_iter()
            .map(|i| Value(i as u32 + 1))
            .collect();
        picked.sort_unstable();

        let mut costs = CostTable::new();
        for v in picked {
            costs.insert(v, rng.gen_range(0..=cfg.cost_max) as f64);
        }

        let mut reveal = PrivacyTable::new();
        for &v in &domain {
            let c = rng.gen_range(0..=cfg.privacy_max) as f64;
            match cfg.kind {
                ProblemKind::Udcoppc => {
                    if costs.contains_key(&v) {
                        reveal.insert(RevealEntry::Constraint(ConstraintId::Unary(v)), c);
                    }
                }
                _ => {
                    reveal.insert(RevealEntry::Value(v), c);
                }
            }
        }
        unary.push(costs);
        privacy.push(reveal);
    }

    Ok(Instance {
        kind: cfg.kind,
        n: cfg.n,
        d: cfg.d,
        domains: vec![domain; cfg.n],
        unary,
        privacy,
        global: GlobalConstraint {
            penalty: Penalty::Infinite,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, solution_cost, Assignment};

    #[test]
    fn default_shape() {
        let inst = generate(&GenConfig {
            seed: 11,
            ..GenConfig::default()
        })
        .unwrap();
        assert!(model::validate_instance(&inst).is_empty());
        for i in 0..10 {
            assert_eq!(inst.unary[i].len(), 3);
            assert_eq!(inst.privacy[i].len(), 10);
            assert!(inst.unary[i].values().all(|c| (0.0..=9.0).contains(c)));
            assert!(inst.privacy[i].values().all(|c| (0.0..=9.0).contains(c)));
        }
    }

    #[test]
    fn zero_density_has_no_unary_costs() {
        let inst = generate(&GenConfig {
            density: 0.0,
            seed: 3,
            ..GenConfig::default()
        })
        .unwrap();
        assert!(inst.unary.iter().all(|t| t.is_empty()));
        for v in 1..=10 {
            assert_eq!(
                solution_cost(&inst, &Assignment(vec![Value(v); 10])).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn deterministic_documents() {
        let cfg = GenConfig {
            seed: 99,
            density: 0.5,
            ..GenConfig::default()
        };
        assert_eq!(
            model::to_json(&generate(&cfg).unwrap()),
            model::to_json(&generate(&cfg).unwrap())
        );
        let other = GenConfig { seed: 100, ..cfg };
        assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn udcoppc_shares_draws_with_udcop() {
        let a = GenConfig {
            seed: 5,
            density: 0.4,
            ..GenConfig::default()
        };
        let b = GenConfig {
            kind: ProblemKind::Udcoppc,
            ..a.clone()
        };
        let (a, b) = (generate(&a).unwrap(), generate(&b).unwrap());
        assert!(model::validate_instance(&b).is_empty());
        assert_eq!(a.unary, b.unary);
        for i in 0..10 {
            for v in b.unary[i].keys() {
                let c = b.privacy[i][&RevealEntry::Constraint(ConstraintId::Unary(*v))];
                assert_eq!(c, a.privacy[i][&RevealEntry::Value(*v)]);
            }
            assert_eq!(b.privacy[i].len(), b.unary[i].len());
        }
    }

    #[test]
    fn rejects_bad_configs() {
        for cfg in [
            GenConfig {
                n: 0,
                ..GenConfig::default()
            },
            GenConfig {
                d: 0,
                ..GenConfig::default()
            },
            GenConfig {
                density: 1.5,
                ..GenConfig::default()
            },
            GenConfig {
                kind: ProblemKind::Dcop,
                ..GenConfig::default()
            },
        ] {
            assert!(generate(&cfg).is_err(), "{cfg:?}");
        }
    }
}
