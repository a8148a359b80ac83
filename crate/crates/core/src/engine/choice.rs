//! Sources of the random draws a run consumes.

use rand::Rng;

use crate::model::{AgentId, Value};
use crate::seeding::{self, Stream};

/// Random decisions requested by the engine. Each agent has its own
/// sequence: one initial value, then per round either a candidate value
/// (DSAU, MO-lex) or an activation coin (DSA).
pub trait Choices {
    fn initial(&mut self, agent: AgentId, domain: &[Value]) -> Value;
    fn candidate(&mut self, round: u32, agent: AgentId, domain: &[Value]) -> Value;
    /// Uniform draw in `[0, 1)`.
    fn coin(&mut self, round: u32, agent: AgentId) -> f64;
}

/// One `[RUN, agent]` stream per agent.
#[derive(Debug, Clone)]
pub struct SeededChoices {
    streams: Vec<Stream>,
}

impl SeededChoices {
    pub fn new(seed: u64, n: usize) -> Self {
        Self {
            streams: (0..n)
                .map(|i| seeding::stream(seed, &[seeding::RUN, i as u64]))
                .collect(),
        }
    }

    fn pick(&mut self, agent: AgentId, domain: &[Value]) -> Value {
        domain[self.streams[agent.0].gen_range(0..domain.len())]
    }
}

impl Choices for SeededChoices {
    fn initial(&mut self, agent: AgentId, domain: &[Value]) -> Value {
        self.pick(agent, domain)
    }

    fn candidate(&mut self, _round: u32, agent: AgentId, domain: &[Value]) -> Value {
        self.pick(agent, domain)
    }

    fn coin(&mut self, _round: u32, agent: AgentId) -> f64 {
        self.streams[agent.0].gen()
    }
}

/// Replays fixed initial values and per-round candidates, deferring to a
/// seeded source once a script runs out.
#[derive(Debug, Clone)]
pub struct ScriptedChoices {
    initial: Vec<Value>,
    /// `candidates[agent][round]`.
    candidates: Vec<Vec<Value>>,
    fallback: SeededChoices,
}

impl ScriptedChoices {
    pub fn new(initial: Vec<Value>, candidates: Vec<Vec<Value>>, seed: u64) -> Self {
        let n = initial.len();
        Self {
            initial,
            candidates,
            fallback: SeededChoices::new(seed, n),
        }
    }
}

impl Choices for ScriptedChoices {
    fn initial(&mut self, agent: AgentId, domain: &[Value]) -> Value {
        match self.initial.get(agent.0) {
            Some(v) => *v,
            None => self.fallback.initial(agent, domain),
        }
    }

    fn candidate(&mut self, round: u32, agent: AgentId, domain: &[Value]) -> Value {
        match self
            .candidates
            .get(agent.0)
            .and_then(|c| c.get(round as usize))
        {
            Some(v) => *v,
            None => self.fallback.candidate(round, agent, domain),
        }
    }

    fn coin(&mut self, round: u32, agent: AgentId) -> f64 {
        self.fallback.coin(round, agent)
    }
}
