use crate::model::{AgentId, Value};

/// Last value received from each neighbour.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentView {
    slots: Vec<Option<Value>>,
}

impl AgentView {
    pub fn new(n: usize) -> Self {
        Self {
            slots: vec![None; n],
        }
    }

    pub fn set(&mut self, from: AgentId, value: Value) {
        self.slots[from.0] = Some(value);
    }

    pub fn get(&self, agent: AgentId) -> Option<Value> {
        self.slots.get(agent.0).copied().flatten()
    }

    /// Known `(neighbour, value)` pairs in agent order.
    pub fn iter(&self) -> impl Iterator<Item = (AgentId, Value)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.map(|v| (AgentId(j), v)))
    }
}
