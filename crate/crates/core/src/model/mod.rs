//! Problem representations for DCOP, UDCOP and UDCOPPC instances.
//!
//! Every instance has the meeting-scheduling shape: one variable per agent,
//! per-agent unary cost tables and a single all-equal constraint coupling all
//! variables. Privacy tables are keyed by value (UDCOP) or by constraint id
//! (UDCOPPC).

mod file;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::{load_instance, parse_instance, save_instance, to_json};

/// Penalty used by local search when the all-equal constraint is declared
/// with an infinite violation cost.
pub const DEFAULT_PENALTY: f64 = 10_000.0;

/// Index of an agent, in `[0, n)`. Agent `i` owns variable `x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A 1-based value identifier in `{1, ..., d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Value(pub u32);

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Dcop,
    Udcop,
    Udcoppc,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Dcop => "dcop",
            ProblemKind::Udcop => "udcop",
            ProblemKind::Udcoppc => "udcoppc",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dcop" => Ok(ProblemKind::Dcop),
            "udcop" => Ok(ProblemKind::Udcop),
            "udcoppc" => Ok(ProblemKind::Udcoppc),
            other => Err(Error::Config(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// Violation cost of the all-equal constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    Finite(f64),
    Infinite,
}

impl Penalty {
    pub fn as_f64(self) -> f64 {
        match self {
            Penalty::Finite(w) => w,
            Penalty::Infinite => f64::INFINITY,
        }
    }
}

/// The single n-ary constraint `¬(x_1 = ... = x_n) → penalty`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalConstraint {
    pub penalty: Penalty,
}

/// Identifies one of an agent's own constraints in UDCOPPC mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintId {
    /// The unary constraint `x_i = v`.
    Unary(Value),
    AllEqual,
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::Unary(v) => write!(f, "unary:{v}"),
            ConstraintId::AllEqual => f.write_str("all_equal"),
        }
    }
}

impl FromStr for ConstraintId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all_equal" {
            return Ok(ConstraintId::AllEqual);
        }
        s.strip_prefix("unary:")
            .and_then(|v| v.parse::<u32>().ok())
            .map(|v| ConstraintId::Unary(Value(v)))
            .ok_or_else(|| {
                format!("`{s}` is not a constraint id (expected `unary:<value>` or `all_equal`)")
            })
    }
}

/// Something an agent can disclose: a value (UDCOP) or the weight of one
/// of its constraints (UDCOPPC).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RevealEntry {
    Value(Value),
    Constraint(ConstraintId),
}

impl fmt::Display for RevealEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RevealEntry::Value(v) => write!(f, "{v}"),
            RevealEntry::Constraint(c) => write!(f, "{c}"),
        }
    }
}

/// Which value revelations carry a privacy charge in UDCOP mode.
///
/// With `ConstrainedValues` a value only costs privacy when the agent holds
/// a unary constraint on it, i.e. when sending it discloses a cost. This is
/// the same accounting UDCOPPC applies to constraint weights. `AllValues`
/// charges every value found in the privacy table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrivacyScope {
    #[default]
    ConstrainedValues,
    AllValues,
}

pub type CostTable = BTreeMap<Value, f64>;
pub type PrivacyTable = BTreeMap<RevealEntry, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub kind: ProblemKind,
    pub n: usize,
    pub d: u32,
    /// Sorted value sets, one per agent.
    pub domains: Vec<Vec<Value>>,
    pub unary: Vec<CostTable>,
    /// One table per agent; empty vector iff `kind` is `Dcop`.
    pub privacy: Vec<PrivacyTable>,
    pub global: GlobalConstraint,
}

/// One value per agent, indexed by agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn is_all_equal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A broken instance invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl Violation {
    fn new(field: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn bad_cost(c: f64) -> bool {
    c.is_nan() || c < 0.0 || c.is_infinite()
}

/// Checks every structural invariant and returns the list of violations.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.n < 1 {
        out.push(Violation::new("n", "n ≥ 1"));
    }
    if inst.d < 1 {
        out.push(Violation::new("d", "d ≥ 1"));
    }
    if inst.domains.len() != inst.n {
        out.push(Violation::new("domains", "one domain per agent"));
    }
    if inst.unary.len() != inst.n {
        out.push(Violation::new("unary", "one unary table per agent"));
    }
    match inst.kind {
        ProblemKind::Dcop => {
            if !inst.privacy.is_empty() {
                out.push(Violation::new(
                    "privacy",
                    "privacy table must be absent for dcop",
                ));
            }
        }
        _ => {
            if inst.privacy.is_empty() {
                out.push(Violation::new("privacy", "privacy table required"));
            } else if inst.privacy.len() != inst.n {
                out.push(Violation::new("privacy", "one privacy table per agent"));
            }
        }
    }
    match inst.global.penalty {
        Penalty::Finite(w) if w.is_nan() || w <= 0.0 || w.is_infinite() => {
            out.push(Violation::new("global.penalty", "penalty > 0"))
        }
        _ => {}
    }

    for (i, dom) in inst.domains.iter().enumerate() {
        let field = format!("domains[{i}]");
        if dom.is_empty() {
            out.push(Violation::new(&field, "domain non-empty"));
        }
        if dom.iter().any(|v| v.0 < 1 || v.0 > inst.d) {
            out.push(Violation::new(&field, "values within 1..=d"));
        }
        if dom.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::new(&field, "values sorted and distinct"));
        }
    }

    for (i, table) in inst.unary.iter().enumerate() {
        let field = format!("unary[{i}]");
        let dom = inst.domains.get(i);
        for (v, c) in table {
            if bad_cost(*c) {
                out.push(Violation::new(format!("{field}.{v}"), "costs ≥ 0"));
            }
            if dom.is_some_and(|d| d.binary_search(v).is_err()) {
                out.push(Violation::new(format!("{field}.{v}"), "keys ⊆ domain"));
            }
        }
    }

    for (i, table) in inst.privacy.iter().enumerate() {
        let field = format!("privacy[{i}]");
        for (entry, c) in table {
            if bad_cost(*c) {
                out.push(Violation::new(format!("{field}.{entry}"), "costs ≥ 0"));
            }
            let known = match (inst.kind, entry) {
                (ProblemKind::Udcop, RevealEntry::Value(v)) => inst
                    .domains
                    .get(i)
                    .is_some_and(|d| d.binary_search(v).is_ok()),
                (ProblemKind::Udcoppc, RevealEntry::Constraint(c)) => match c {
                    ConstraintId::AllEqual => true,
                    ConstraintId::Unary(v) => inst.unary.get(i).is_some_and(|t| t.contains_key(v)),
                },
                _ => false,
            };
            if !known {
                let rule = match inst.kind {
                    ProblemKind::Udcoppc => "keys are the agent's constraint ids",
                    _ => "keys ⊆ domain",
                };
                out.push(Violation::new(format!("{field}.{entry}"), rule));
            }
        }
    }
    out
}

/// Returns `Err(Error::Invalid)` when `validate_instance` reports anything.
pub fn ensure_valid(inst: &Instance) -> Result<()> {
    let v = validate_instance(inst);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(v))
    }
}

/// Total cost of a complete assignment: the sum of unary costs plus the
/// declared all-equal penalty (possibly infinite) when the values differ.
pub fn solution_cost(inst: &Instance, a: &Assignment) -> Result<f64> {
    inst.check_assignment(a)?;
    let unary: f64 =
        a.0.iter()
            .enumerate()
            .map(|(i, v)| inst.unary_cost(AgentId(i), *v))
            .sum();
    if a.is_all_equal() {
        Ok(unary)
    } else {
        Ok(unary + inst.global.penalty.as_f64())
    }
}

impl Instance {
    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.n).map(AgentId)
    }

    pub fn domain(&self, agent: AgentId) -> &[Value] {
        &self.domains[agent.0]
    }

    pub fn in_domain(&self, agent: AgentId, v: Value) -> bool {
        self.domains[agent.0].binary_search(&v).is_ok()
    }

    /// Unary cost of `x_agent = v`; absent entries cost 0.
    pub fn unary_cost(&self, agent: AgentId, v: Value) -> f64 {
        self.unary[agent.0].get(&v).copied().unwrap_or(0.0)
    }

    pub fn is_constrained(&self, agent: AgentId, v: Value) -> bool {
        self.unary[agent.0].contains_key(&v)
    }

    /// Finite all-equal penalty for local search: `override_penalty` if
    /// given, else the declared finite penalty, else [`DEFAULT_PENALTY`].
    pub fn effective_penalty(&self, override_penalty: Option<f64>) -> f64 {
        override_penalty.unwrap_or(match self.global.penalty {
            Penalty::Finite(w) => w,
            Penalty::Infinite => DEFAULT_PENALTY,
        })
    }

    /// The agent's own constraints: its unary constraints and the all-equal one.
    pub fn constraints_of(&self, agent: AgentId) -> Vec<ConstraintId> {
        let mut out: Vec<_> = self.unary[agent.0]
            .keys()
            .map(|v| ConstraintId::Unary(*v))
            .collect();
        out.push(ConstraintId::AllEqual);
        out
    }

    /// Entries disclosed when `agent` sends value `v`.
    pub fn reveal_entries(&self, agent: AgentId, v: Value) -> Vec<RevealEntry> {
        match self.kind {
            ProblemKind::Dcop | ProblemKind::Udcop => vec![RevealEntry::Value(v)],
            ProblemKind::Udcoppc => {
                let mut out = Vec::with_capacity(2);
                if self.is_constrained(agent, v) {
                    out.push(RevealEntry::Constraint(ConstraintId::Unary(v)));
                }
                out.push(RevealEntry::Constraint(ConstraintId::AllEqual));
                out
            }
        }
    }

    /// Whether `entry` is something `agent` can disclose in this instance.
    pub fn owns_entry(&self, agent: AgentId, entry: RevealEntry) -> bool {
        if agent.0 >= self.n {
            return false;
        }
        match (self.kind, entry) {
            (ProblemKind::Udcoppc, RevealEntry::Constraint(c)) => match c {
                ConstraintId::AllEqual => true,
                ConstraintId::Unary(v) => self.is_constrained(agent, v),
            },
            (ProblemKind::Udcoppc, RevealEntry::Value(_)) => false,
            (_, RevealEntry::Value(v)) => self.in_domain(agent, v),
            (_, RevealEntry::Constraint(_)) => false,
        }
    }

    /// Privacy charged when `entry` is disclosed for the first time.
    pub fn entry_cost(&self, agent: AgentId, entry: RevealEntry, scope: PrivacyScope) -> f64 {
        if self.kind == ProblemKind::Dcop {
            return 0.0;
        }
        if let (ProblemKind::Udcop, PrivacyScope::ConstrainedValues, RevealEntry::Value(v)) =
            (self.kind, scope, entry)
        {
            if !self.is_constrained(agent, v) {
                return 0.0;
            }
        }
        self.privacy[agent.0].get(&entry).copied().unwrap_or(0.0)
    }

    /// Sum of the costs of every entry disclosed by sending `v`.
    pub fn value_privacy(&self, agent: AgentId, v: Value, scope: PrivacyScope) -> f64 {
        self.reveal_entries(agent, v)
            .into_iter()
            .map(|e| self.entry_cost(agent, e, scope))
            .sum()
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.0.len() < self.n {
            return Err(Error::MissingAgent(AgentId(a.0.len())));
        }
        if a.0.len() > self.n {
            return Err(Error::AssignmentLength {
                expected: self.n,
                found: a.0.len(),
            });
        }
        for (i, v) in a.0.iter().enumerate() {
            if !self.in_domain(AgentId(i), *v) {
                return Err(Error::NotInDomain {
                    agent: AgentId(i),
                    value: *v,
                });
            }
        }
        Ok(())
    }

    /// Smallest value shared by every domain, if any.
    pub fn common_values(&self) -> Vec<Value> {
        let Some(first) = self.domains.first() else {
            return Vec::new();
        };
        first
            .iter()
            .copied()
            .filter(|v| self.domains[1..].iter().all(|d| d.binary_search(v).is_ok()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_instances_are_valid() {
        assert!(validate_instance(&fixtures::example1()).is_empty());
        assert!(validate_instance(&fixtures::example2()).is_empty());
        assert!(validate_instance(&fixtures::example3()).is_empty());
    }

    #[test]
    fn zero_agents_is_reported() {
        let mut inst = fixtures::example1();
        inst.n = 0;
        inst.domains.clear();
        inst.unary.clear();
        let v = validate_instance(&inst);
        assert!(
            v.iter().any(|x| x.field == "n" && x.rule == "n ≥ 1"),
            "{v:?}"
        );
    }

    #[test]
    fn udcop_without_privacy_is_reported() {
        let mut inst = fixtures::example2();
        inst.privacy.clear();
        let v = validate_instance(&inst);
        assert_eq!(v, vec![Violation::new("privacy", "privacy table required")]);
    }

    #[test]
    fn dcop_with_privacy_is_reported() {
        let mut inst = fixtures::example2();
        inst.kind = ProblemKind::Dcop;
        assert!(validate_instance(&inst)
            .iter()
            .any(|x| x.field == "privacy"));
    }

    #[test]
    fn negative_and_foreign_costs_are_reported() {
        let mut inst = fixtures::example2();
        inst.privacy[1].insert(RevealEntry::Value(Value(2)), -1.0);
        inst.unary[0].insert(Value(9), 1.0);
        let v = validate_instance(&inst);
        assert!(v.contains(&Violation::new("privacy[1].2", "costs ≥ 0")));
        assert!(v.contains(&Violation::new("unary[0].9", "keys ⊆ domain")));
    }

    #[test]
    fn empty_domain_and_bad_penalty() {
        let mut inst = fixtures::example1();
        inst.domains[2].clear();
        inst.global.penalty = Penalty::Finite(0.0);
        let v = validate_instance(&inst);
        assert!(v.contains(&Violation::new("domains[2]", "domain non-empty")));
        assert!(v.contains(&Violation::new("global.penalty", "penalty > 0")));
    }

    #[test]
    fn example1_costs() {
        let inst = fixtures::example1();
        let a = Assignment(vec![Value(1); 3]);
        assert_eq!(solution_cost(&inst, &a).unwrap(), 230.0);
        let b = Assignment(vec![Value(1), Value(1), Value(3)]);
        assert_eq!(solution_cost(&inst, &b).unwrap(), f64::INFINITY);
    }

    #[test]
    fn zero_cost_instance() {
        let mut inst = fixtures::example1();
        for t in &mut inst.unary {
            t.clear();
        }
        let a = Assignment(vec![Value(2); 3]);
        assert_eq!(solution_cost(&inst, &a).unwrap(), 0.0);
    }

    #[test]
    fn incomplete_assignment_names_agent() {
        let inst = fixtures::example1();
        let err = solution_cost(&inst, &Assignment(vec![Value(1), Value(1)])).unwrap_err();
        assert!(matches!(err, Error::MissingAgent(AgentId(2))));
        let err =
            solution_cost(&inst, &Assignment(vec![Value(1), Value(4), Value(1)])).unwrap_err();
        assert!(matches!(
            err,
            Error::NotInDomain {
                agent: AgentId(1),
                ..
            }
        ));
    }

    #[test]
    fn udcoppc_entries() {
        let inst = fixtures::example3();
        assert_eq!(
            inst.reveal_entries(AgentId(1), Value(3)),
            vec![
                RevealEntry::Constraint(ConstraintId::Unary(Value(3))),
                RevealEntry::Constraint(ConstraintId::AllEqual)
            ]
        );
        assert_eq!(
            inst.value_privacy(AgentId(1), Value(3), PrivacyScope::default()),
            10.0
        );
        assert!(!inst.owns_entry(AgentId(1), RevealEntry::Value(Value(3))));
    }

    #[test]
    fn privacy_scope_only_matters_for_unconstrained_values() {
        let mut inst = fixtures::example2();
        inst.unary[0].remove(&Value(2));
        let e = RevealEntry::Value(Value(2));
        assert_eq!(
            inst.entry_cost(AgentId(0), e, PrivacyScope::ConstrainedValues),
            0.0
        );
        assert_eq!(
            inst.entry_cost(AgentId(0), e, PrivacyScope::AllValues),
            20.0
        );
        let e = RevealEntry::Value(Value(1));
        assert_eq!(
            inst.entry_cost(AgentId(0), e, PrivacyScope::ConstrainedValues),
            80.0
        );
    }

    #[test]
    fn constraint_id_round_trip() {
        for c in [ConstraintId::AllEqual, ConstraintId::Unary(Value(7))] {
            assert_eq!(c.to_string().parse::<ConstraintId>().unwrap(), c);
        }
        assert!("unary:x".parse::<ConstraintId>().is_err());
    }
}
