//! Distributed breakout (DBO) and its utilitarian variant (DBOU).
//!
//! A round has two phases once values are exchanged: every agent sends an
//! [`ImproveMsg`] built by [`dbo_send_improve`] or [`dbou_send_improve`],
//! then every agent runs [`dbo_resolve`] over the messages it received.

use super::stochastic::stall_bound;
use super::{argmin_value, utilitarian_gate, Action, StepContext, WeightKey, WeightTable};
use crate::model::{AgentId, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct DboState {
    pub current: Value,
    pub weights: WeightTable,
    /// Value proposed for this round; equals `current` when not moving.
    pub new_value: Value,
    pub my_improve: f64,
    pub current_eval: f64,
    pub consistent: bool,
    pub can_move: bool,
    pub quasi_local_minimum: bool,
    pub termination_counter: u32,
}

impl DboState {
    pub fn new(current: Value) -> Self {
        Self {
            current,
            weights: WeightTable::default(),
            new_value: current,
            my_improve: 0.0,
            current_eval: 0.0,
            consistent: false,
            can_move: false,
            quasi_local_minimum: false,
            termination_counter: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImproveMsg {
    pub from: AgentId,
    pub improve: f64,
    pub eval: f64,
    pub termination_counter: u32,
}

/// Value with the lowest weighted evaluation, ties to the smallest value.
pub fn best_candidate(ctx: &StepContext<'_>, weights: &WeightTable) -> (Value, f64) {
    argmin_value(ctx.instance.domain(ctx.agent), |v| {
        ctx.weighted_eval(v, weights)
    })
}

fn propose(
    state: &mut DboState,
    ctx: &StepContext<'_>,
    gate: impl FnOnce(Value, f64, f64) -> bool,
) -> ImproveMsg {
    let current_eval = ctx.weighted_eval(state.current, &state.weights);
    let (best, best_eval) = best_candidate(ctx, &state.weights);
    let gain = (current_eval - best_eval).max(0.0);
    let admitted = gain > 0.0 && gate(best, current_eval, best_eval);

    state.current_eval = current_eval;
    state.consistent = current_eval == 0.0;
    state.my_improve = if admitted { gain } else { 0.0 };
    state.new_value = if admitted { best } else { state.current };
    state.can_move = admitted;
    state.quasi_local_minimum = state.my_improve <= 0.0;
    ImproveMsg {
        from: ctx.agent,
        improve: state.my_improve,
        eval: current_eval,
        termination_counter: state.termination_counter,
    }
}

pub fn dbo_send_improve(state: &mut DboState, ctx: &StepContext<'_>) -> ImproveMsg {
    propose(state, ctx, |_, _, _| true)
}

/// As [`dbo_send_improve`], but the best value is only proposed when
/// [`utilitarian_gate`] accepts it; otherwise the agent reports no
/// improvement and keeps its value.
pub fn dbou_send_improve(state: &mut DboState, ctx: &StepContext<'_>, stalled: u32) -> ImproveMsg {
    propose(state, ctx, |best, eval_now, eval_next| {
        utilitarian_gate(
            ctx.estimate(),
            ctx.estimate_with(best),
            eval_now,
            eval_next,
            true,
            Some(stalled),
            ctx.patience(),
            ctx.params.pure_alg2,
        )
    })
}

/// Whether DBOU could propose a move once patience runs out.
pub fn dbou_can_move(state: &DboState, ctx: &StepContext<'_>) -> bool {
    let eval_now = ctx.weighted_eval(state.current, &state.weights);
    let (best, eval_next) = best_candidate(ctx, &state.weights);
    eval_next < eval_now
        && utilitarian_gate(
            ctx.estimate(),
            ctx.estimate_with(best),
            eval_now,
            eval_next,
            true,
            stall_bound(ctx, state.current),
            ctx.patience(),
            ctx.params.pure_alg2,
        )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub action: Action,
    /// Weight keys raised this round.
    pub bumped: Vec<WeightKey>,
}

/// Decides whether the agent moves and, in a quasi-local minimum, raises
/// the weight of every pair it currently violates. Neighbours with no
/// message count as improvement 0.
pub fn dbo_resolve(state: &mut DboState, ctx: &StepContext<'_>, msgs: &[ImproveMsg]) -> Resolution {
    let me = ctx.agent;
    let wins = state.my_improve > 0.0
        && msgs.iter().filter(|m| m.from != me).all(|m| {
            state.my_improve > m.improve || (state.my_improve == m.improve && me < m.from)
        });
    let neighbourhood_stuck = state.my_improve <= 0.0 && msgs.iter().all(|m| m.improve <= 0.0);

    let all_consistent = state.consistent && msgs.iter().all(|m| m.eval == 0.0);
    state.termination_counter = if all_consistent {
        msgs.iter()
            .map(|m| m.termination_counter)
            .chain([state.termination_counter])
            .min()
            .unwrap_or(0)
            + 1
    } else {
        0
    };

    let mut bumped = Vec::new();
    if neighbourhood_stuck && !state.consistent {
        for (j, w) in ctx.view.iter() {
            if j != me && w != state.current {
                let key = (j, state.current, w);
                state.weights.bump(key);
                bumped.push(key);
            }
        }
    }

    let action = if wins {
        state.current = state.new_value;
        Action::Change(state.new_value)
    } else {
        Action::Keep
    };
    Resolution { action, bumped }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::engine::AgentView;
    use crate::fixtures;
    use crate::model::Instance;
    use crate::solvers::SolverParams;

    fn view_of(values: &[u32]) -> AgentView {
        let mut v = AgentView::new(values.len());
        for (j, x) in values.iter().enumerate() {
            v.set(AgentId(j), Value(*x));
        }
        v
    }

    fn ctx<'a>(
        inst: &'a Instance,
        agent: usize,
        view: &'a AgentView,
        revealed: &'a BTreeSet<Value>,
        params: &'a SolverParams,
    ) -> StepContext<'a> {
        StepContext {
            instance: inst,
            agent: AgentId(agent),
            view,
            revealed,
            params,
            pair_penalty: 1000.0,
        }
    }

    fn msg(from: usize, improve: f64) -> ImproveMsg {
        ImproveMsg {
            from: AgentId(from),
            improve,
            eval: 1.0,
            termination_counter: 0,
        }
    }

    #[test]
    fn consistent_agent_reports_no_improvement() {
        let mut inst = fixtures::example1();
        for t in &mut inst.unary {
            t.clear();
        }
        let params = SolverParams::default();
        let view = view_of(&[2, 2, 2]);
        let r = BTreeSet::new();
        let mut s = DboState::new(Value(2));
        let m = dbo_send_improve(&mut s, &ctx(&inst, 0, &view, &r, &params));
        assert!(s.consistent);
        assert_eq!(m.improve, 0.0);
        assert_eq!(m.eval, 0.0);
    }

    #[test]
    fn removing_one_violation_gains_a_pair_share() {
        let mut inst = fixtures::example1();
        for t in &mut inst.unary {
            t.clear();
        }
        inst.n = 2;
        inst.domains.truncate(2);
        inst.unary.truncate(2);
        let params = SolverParams::default();
        let view = view_of(&[1, 3]);
        let r = BTreeSet::new();
        let c = ctx(&inst, 1, &view, &r, &params);
        let mut s = DboState::new(Value(3));
        let m = dbo_send_improve(&mut s, &c);
        assert_eq!(m.improve, 1000.0);
        assert_eq!(s.new_value, Value(1));
        let scan = inst
            .domain(AgentId(1))
            .iter()
            .map(|v| c.eval(*v))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(m.eval - scan, m.improve);
    }

    #[test]
    fn dbou_gate_failure_keeps_value() {
        let inst = fixtures::example2();
        let params = SolverParams::default();
        // A3 holds 2 (revealed), others hold 1; moving to 1 is costly in privacy.
        let view = view_of(&[1, 1, 2]);
        let r: BTreeSet<Value> = [Value(2)].into();
        let c = ctx(&inst, 2, &view, &r, &params);
        let mut s = DboState::new(Value(2));
        let m = dbou_send_improve(&mut s, &c, 0);
        // {2}: 280 + 30 = 310 ; {2,1}: 160 + 110 = 270 -> admitted
        assert!(m.improve > 0.0);

        let mut inst = inst;
        inst.privacy[2].insert(crate::model::RevealEntry::Value(Value(1)), 500.0);
        let c = ctx(&inst, 2, &view, &r, &params);
        let mut s = DboState::new(Value(2));
        let m = dbou_send_improve(&mut s, &c, 0);
        assert_eq!(m.improve, 0.0);
        assert_eq!(s.new_value, Value(2));
        assert!(s.quasi_local_minimum);
        assert!(dbou_can_move(&s, &c));
        let m = dbou_send_improve(&mut s, &c, 3);
        assert!(m.improve > 0.0);
    }

    #[test]
    fn ties_go_to_the_smaller_id() {
        let inst = fixtures::example1();
        let params = SolverParams::default();
        let view = view_of(&[1, 1, 1, 1, 1, 1]);
        let r = BTreeSet::new();
        let run = |agent: usize| {
            let mut s = DboState::new(Value(1));
            s.my_improve = 5.0;
            s.new_value = Value(2);
            let msgs = [msg(2, 5.0), msg(5, 5.0), msg(0, 1.0)];
            dbo_resolve(&mut s, &ctx(&inst, agent, &view, &r, &params), &msgs).action
        };
        assert_eq!(run(2), Action::Change(Value(2)));
        assert_eq!(run(5), Action::Keep);
    }

    #[test]
    fn quasi_local_minimum_raises_violated_pairs() {
        let inst = fixtures::example1();
        let params = SolverParams::default();
        let view = view_of(&[1, 1, 3]);
        let r = BTreeSet::new();
        let mut s = DboState::new(Value(1));
        s.current_eval = 1070.0;
        let res = dbo_resolve(
            &mut s,
            &ctx(&inst, 0, &view, &r, &params),
            &[msg(1, 0.0), msg(2, 0.0)],
        );
        assert_eq!(res.action, Action::Keep);
        assert_eq!(res.bumped, vec![(AgentId(2), Value(1), Value(3))]);
        assert_eq!(s.weights.get((AgentId(2), Value(1), Value(3))), 2);
    }
}
