use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{AgentId, Instance, PrivacyScope, RevealEntry, Value};

/// What each agent has disclosed so far and what it cost.
#[derive(Debug, Clone, PartialEq)]
pub struct RevealLedger {
    scope: PrivacyScope,
    entries: Vec<BTreeMap<RevealEntry, f64>>,
    values: Vec<BTreeSet<Value>>,
    cost: Vec<f64>,
}

impl RevealLedger {
    pub fn new(n: usize, scope: PrivacyScope) -> Self {
        Self {
            scope,
            entries: vec![BTreeMap::new(); n],
            values: vec![BTreeSet::new(); n],
            cost: vec![0.0; n],
        }
    }

    /// Records `entry` for `agent` and returns the privacy charged: its cost
    /// on first disclosure, 0 afterwards.
    pub fn record_reveal(
        &mut self,
        inst: &Instance,
        agent: AgentId,
        entry: RevealEntry,
    ) -> Result<f64> {
        if !inst.owns_entry(agent, entry) {
            return Err(Error::UnknownEntry {
                agent,
                entry: entry.to_string(),
            });
        }
        if self.entries[agent.0].contains_key(&entry) {
            return Ok(0.0);
        }
        let c = inst.entry_cost(agent, entry, self.scope);
        self.entries[agent.0].insert(entry, c);
        self.cost[agent.0] += c;
        Ok(c)
    }

    /// Records that `agent` sent `value`, disclosing every entry it carries.
    /// Returns the entries disclosed for the first time and their total cost.
    pub fn send_value(
        &mut self,
        inst: &Instance,
        agent: AgentId,
        value: Value,
    ) -> Result<(Vec<RevealEntry>, f64)> {
        if !inst.in_domain(agent, value) {
            return Err(Error::NotInDomain { agent, value });
        }
        self.values[agent.0].insert(value);
        let mut fresh = Vec::new();
        let mut charged = 0.0;
        for e in inst.reveal_entries(agent, value) {
            if !self.entries[agent.0].contains_key(&e) {
                charged += self.record_reveal(inst, agent, e)?;
                fresh.push(e);
            }
        }
        Ok((fresh, charged))
    }

    pub fn revealed_values(&self, agent: AgentId) -> &BTreeSet<Value> {
        &self.values[agent.0]
    }

    /// Disclosed entries with the amount charged for each.
    pub fn entries(&self, agent: AgentId) -> impl Iterator<Item = (RevealEntry, f64)> + '_ {
        self.entries[agent.0].iter().map(|(e, c)| (*e, *c))
    }

    pub fn cost(&self, agent: AgentId) -> f64 {
        self.cost[agent.0]
    }

    pub fn total(&self) -> f64 {
        self.cost.iter().sum()
    }

    pub fn scope(&self) -> PrivacyScope {
        self.scope
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::ConstraintId;

    #[test]
    fn charges_once() {
        let inst = fixtures::example2();
        let mut l = RevealLedger::new(3, PrivacyScope::default());
        let e = RevealEntry::Value(Value(1));
        assert_eq!(l.record_reveal(&inst, AgentId(0), e).unwrap(), 80.0);
        assert_eq!(l.record_reveal(&inst, AgentId(0), e).unwrap(), 0.0);
        assert_eq!(l.cost(AgentId(0)), 80.0);
    }

    #[test]
    fn udcoppc_constraint_weight() {
        let inst = fixtures::example3();
        let mut l = RevealLedger::new(3, PrivacyScope::default());
        let e = RevealEntry::Constraint(ConstraintId::Unary(Value(3)));
        assert_eq!(l.record_reveal(&inst, AgentId(1), e).unwrap(), 10.0);
        let (fresh, charged) = l.send_value(&inst, AgentId(1), Value(3)).unwrap();
        assert_eq!(fresh, vec![RevealEntry::Constraint(ConstraintId::AllEqual)]);
        assert_eq!(charged, 0.0);
    }

    #[test]
    fn foreign_entries_are_rejected() {
        let inst = fixtures::example2();
        let mut l = RevealLedger::new(3, PrivacyScope::default());
        let err = l
            .record_reveal(&inst, AgentId(0), RevealEntry::Value(Value(7)))
            .unwrap_err();
        assert!(matches!(err, Error::UnknownEntry { .. }));
        assert!(l
            .record_reveal(
                &inst,
                AgentId(0),
                RevealEntry::Constraint(ConstraintId::AllEqual)
            )
            .is_err());
    }

    #[test]
    fn cost_is_sum_of_entries() {
        let inst = fixtures::example2();
        let mut l = RevealLedger::new(3, PrivacyScope::default());
        for v in [3, 1, 3, 2] {
            l.send_value(&inst, AgentId(2), Value(v)).unwrap();
        }
        let sum: f64 = l.entries(AgentId(2)).map(|(_, c)| c).sum();
        assert_eq!(sum, l.cost(AgentId(2)));
        assert_eq!(sum, 120.0);
        assert_eq!(l.revealed_values(AgentId(2)).len(), 3);
    }
}
