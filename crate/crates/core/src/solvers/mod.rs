//! Per-agent step logic for DSA, DSAU, DBO, DBOU and the lexicographic
//! MO-DCOP baseline.
//!
//! Step functions are pure: they receive the agent's context and any
//! random draw explicitly and return a [`Decision`]. The engine owns all
//! state and applies the decisions synchronously.

mod breakout;
mod estimate;
mod eval;
mod stochastic;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::engine::AgentView;
use crate::error::Error;
use crate::model::{AgentId, Instance, PrivacyScope, Value};

pub use breakout::{
    best_candidate, dbo_resolve, dbo_send_improve, dbou_can_move, dbou_send_improve, DboState,
    ImproveMsg, Resolution,
};
pub use estimate::{estimate_cost, utility_risk, EstimateInputs};
pub use eval::{conflicts, local_eval, pair_penalty, WeightKey, WeightTable};
pub use stochastic::{
    dsa_can_move, dsa_step, dsau_admits, dsau_can_move, dsau_step, mo_lex_compare, modcop_can_move,
    modcop_dsa_step, utilitarian_gate, LexOrder,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Dsa,
    Dsau,
    Dbo,
    Dbou,
    MoLex,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Dsa,
        SolverKind::Dsau,
        SolverKind::Dbo,
        SolverKind::Dbou,
        SolverKind::MoLex,
    ];

    pub fn is_breakout(self) -> bool {
        matches!(self, SolverKind::Dbo | SolverKind::Dbou)
    }

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Dsa => "dsa",
            SolverKind::Dsau => "dsau",
            SolverKind::Dbo => "dbo",
            SolverKind::Dbou => "dbou",
            SolverKind::MoLex => "molex",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for SolverKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSolver(s.to_string()))
    }
}

/// How the unary-cost term of the privacy-aware estimate is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisorMode {
    /// Mean over the revealed values.
    #[default]
    Revealed,
    /// Weighted by the survival probability `1/|D_i|`.
    Domain,
}

impl FromStr for DivisorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "revealed" => Ok(DivisorMode::Revealed),
            "domain" => Ok(DivisorMode::Domain),
            other => Err(Error::Config(format!("unknown divisor mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// DSA activation probability.
    pub activation: f64,
    pub divisor: DivisorMode,
    /// Overrides the all-equal penalty used by local search.
    pub penalty: Option<f64>,
    /// Use the estimate-only acceptance rule for DSAU/DBOU, without the
    /// conflict guard or the repair moves.
    pub pure_alg2: bool,
    /// Rounds an agent waits in conflict before a privacy-costly repair is
    /// allowed. `None` means the agent's domain size.
    pub patience: Option<u32>,
    pub scope: PrivacyScope,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            activation: 0.6,
            divisor: DivisorMode::Revealed,
            penalty: None,
            pure_alg2: false,
            patience: None,
            scope: PrivacyScope::ConstrainedValues,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.activation > 0.0 && self.activation <= 1.0) {
            return Err(Error::Config(format!(
                "activation probability {} is outside (0, 1]",
                self.activation
            )));
        }
        if let Some(w) = self.penalty {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Config(format!(
                    "penalty {w} must be positive and finite"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Keep,
    Change(Value),
}

/// What an agent decided this round, with the estimates it compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub action: Action,
    pub candidate: Value,
    pub est_current: f64,
    pub est_next: f64,
}

/// Everything an agent may consult when stepping.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub instance: &'a Instance,
    pub agent: AgentId,
    pub view: &'a AgentView,
    /// Values this agent has already sent.
    pub revealed: &'a BTreeSet<Value>,
    pub params: &'a SolverParams,
    /// Per-pair share of the all-equal penalty.
    pub pair_penalty: f64,
}

impl StepContext<'_> {
    pub fn eval(&self, v: Value) -> f64 {
        local_eval(
            self.instance,
            self.agent,
            v,
            self.view,
            self.pair_penalty,
            None,
        )
    }

    pub fn weighted_eval(&self, v: Value, weights: &WeightTable) -> f64 {
        local_eval(
            self.instance,
            self.agent,
            v,
            self.view,
            self.pair_penalty,
            Some(weights),
        )
    }

    fn inputs<'b>(&'b self, revealed: &'b BTreeSet<Value>) -> EstimateInputs<'b> {
        EstimateInputs {
            instance: self.instance,
            agent: self.agent,
            revealed,
            scope: self.params.scope,
        }
    }

    pub fn estimate(&self) -> f64 {
        estimate_cost(&self.inputs(self.revealed), self.params.divisor)
    }

    /// Estimate of the state reached after also revealing `v`.
    pub fn estimate_with(&self, v: Value) -> f64 {
        if self.revealed.contains(&v) {
            return self.estimate();
        }
        let mut next = self.revealed.clone();
        next.insert(v);
        estimate_cost(&self.inputs(&next), self.params.divisor)
    }

    pub fn patience(&self) -> u32 {
        self.params
            .patience
            .unwrap_or(self.instance.domain(self.agent).len() as u32)
    }
}

/// Smallest value with the lowest score.
pub(crate) fn argmin_value(domain: &[Value], mut score: impl FnMut(Value) -> f64) -> (Value, f64) {
    let mut best = (domain[0], score(domain[0]));
    for &v in &domain[1..] {
        let s = score(v);
        if s < best.1 {
            best = (v, s);
        }
    }
    best
}
