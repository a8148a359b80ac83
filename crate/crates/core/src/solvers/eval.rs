use std::collections::BTreeMap;

use crate::engine::AgentView;
use crate::model::{AgentId, Instance, Value};

/// `(neighbour, own value, neighbour value)`: one conflicting pair of
/// assignments as seen by the owning agent.
pub type WeightKey = (AgentId, Value, Value);

/// Breakout weights. Missing pairs weigh 1; weights only grow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightTable {
    raised: BTreeMap<WeightKey, u32>,
}

impl WeightTable {
    pub fn get(&self, key: WeightKey) -> u32 {
        self.raised.get(&key).copied().unwrap_or(1)
    }

    pub fn bump(&mut self, key: WeightKey) {
        *self.raised.entry(key).or_insert(1) += 1;
    }

    /// Pairs whose weight was raised above 1.
    pub fn raised(&self) -> impl Iterator<Item = (WeightKey, u32)> + '_ {
        self.raised.iter().map(|(k, w)| (*k, *w))
    }

    pub fn total_raise(&self) -> u64 {
        self.raised.values().map(|w| u64::from(*w - 1)).sum()
    }
}

/// Share of the all-equal penalty carried by each incident pair, so that an
/// agent disagreeing with every neighbour pays the full penalty.
pub fn pair_penalty(penalty: f64, n: usize) -> f64 {
    if n <= 1 {
        penalty
    } else {
        penalty / (n - 1) as f64
    }
}

/// Neighbours in `view` holding a value other than `value`.
pub fn conflicts(agent: AgentId, value: Value, view: &AgentView) -> usize {
    view.iter()
        .filter(|(j, w)| *j != agent && *w != value)
        .count()
}

/// Unary cost of `value` plus the weighted pairwise share of the all-equal
/// penalty for every neighbour whose viewed value differs. Neighbours
/// absent from the view do not conflict.
pub fn local_eval(
    inst: &Instance,
    agent: AgentId,
    value: Value,
    view: &AgentView,
    pair_penalty: f64,
    weights: Option<&WeightTable>,
) -> f64 {
    let mut total = inst.unary_cost(agent, value);
    for (j, w) in view.iter() {
        if j == agent || w == value {
            continue;
        }
        let weight = weights.map_or(1, |t| t.get((j, value, w)));
        total += f64::from(weight) * pair_penalty;
    }
    total
}
