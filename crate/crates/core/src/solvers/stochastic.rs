//! DSA, DSAU and the lexicographic MO-DCOP variant of DSA.

use super::{argmin_value, conflicts, Action, Decision, StepContext};
use crate::model::Value;

/// DSA-B move: go to the best value for the current view when it strictly
/// improves, with probability `activation`. `coin` is a uniform draw in
/// `[0, 1)`.
pub fn dsa_step(ctx: &StepContext<'_>, current: Value, coin: f64) -> Decision {
    let (best, best_eval) = argmin_value(ctx.instance.domain(ctx.agent), |v| ctx.eval(v));
    let improves = best_eval < ctx.eval(current);
    let action = if improves && coin < ctx.params.activation {
        Action::Change(best)
    } else {
        Action::Keep
    };
    Decision {
        action,
        candidate: best,
        est_current: ctx.estimate(),
        est_next: ctx.estimate_with(best),
    }
}

pub fn dsa_can_move(ctx: &StepContext<'_>, current: Value) -> bool {
    let (_, best_eval) = argmin_value(ctx.instance.domain(ctx.agent), |v| ctx.eval(v));
    best_eval < ctx.eval(current)
}

/// Acceptance rule shared by DSAU and DBOU.
///
/// With `pure` set the move is taken iff the privacy-aware estimate
/// strictly decreases. Otherwise the move must not worsen the local
/// evaluation and must satisfy one of:
///
/// * the estimate strictly decreases;
/// * the evaluation strictly decreases and the estimate does not increase;
/// * the evaluation strictly decreases, the candidate is the agent's best
///   value, and the agent has been stalled in conflict for at least
///   `patience` rounds (`stalled == None` treats patience as exhausted).
#[allow(clippy::too_many_arguments)]
pub fn utilitarian_gate(
    est_now: f64,
    est_next: f64,
    eval_now: f64,
    eval_next: f64,
    is_best: bool,
    stalled: Option<u32>,
    patience: u32,
    pure: bool,
) -> bool {
    if pure {
        return est_next < est_now;
    }
    if eval_next > eval_now {
        return false;
    }
    if est_next < est_now {
        return true;
    }
    if eval_next < eval_now {
        if est_next <= est_now {
            return true;
        }
        if is_best && stalled.is_none_or(|s| s >= patience) {
            return true;
        }
    }
    false
}

pub fn dsau_admits(
    ctx: &StepContext<'_>,
    current: Value,
    candidate: Value,
    stalled: Option<u32>,
) -> bool {
    if candidate == current {
        return false;
    }
    let (best, _) = argmin_value(ctx.instance.domain(ctx.agent), |v| ctx.eval(v));
    utilitarian_gate(
        ctx.estimate(),
        ctx.estimate_with(candidate),
        ctx.eval(current),
        ctx.eval(candidate),
        candidate == best,
        stalled,
        ctx.patience(),
        ctx.params.pure_alg2,
    )
}

/// DSAU: evaluate a uniformly drawn `candidate` with the privacy-aware
/// estimate and adopt it when [`utilitarian_gate`] accepts.
pub fn dsau_step(
    ctx: &StepContext<'_>,
    current: Value,
    candidate: Value,
    stalled: u32,
) -> Decision {
    let action = if dsau_admits(ctx, current, candidate, Some(stalled)) {
        Action::Change(candidate)
    } else {
        Action::Keep
    };
    Decision {
        action,
        candidate,
        est_current: ctx.estimate(),
        est_next: ctx.estimate_with(candidate),
    }
}

/// Whether some candidate would be accepted once patience runs out.
/// Patience only runs down while the agent is in conflict.
pub fn dsau_can_move(ctx: &StepContext<'_>, current: Value) -> bool {
    let stalled = stall_bound(ctx, current);
    ctx.instance
        .domain(ctx.agent)
        .iter()
        .any(|&c| dsau_admits(ctx, current, c, stalled))
}

pub(crate) fn stall_bound(ctx: &StepContext<'_>, current: Value) -> Option<u32> {
    if conflicts(ctx.agent, current, ctx.view) > 0 {
        None
    } else {
        Some(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexOrder {
    Better,
    NotBetter,
}

/// Compares `(privacy, cost)` pairs lexicographically, privacy first.
pub fn mo_lex_compare(candidate: (f64, f64), current: (f64, f64)) -> LexOrder {
    if candidate.0 < current.0 || (candidate.0 == current.0 && candidate.1 < current.1) {
        LexOrder::Better
    } else {
        LexOrder::NotBetter
    }
}

fn lex_pair(ctx: &StepContext<'_>, v: Value) -> (f64, f64) {
    (
        ctx.instance.value_privacy(ctx.agent, v, ctx.params.scope),
        ctx.instance.unary_cost(ctx.agent, v),
    )
}

/// DSA over `(privacy, cost)` weights compared lexicographically.
pub fn modcop_dsa_step(ctx: &StepContext<'_>, current: Value, candidate: Value) -> Decision {
    let better = candidate != current
        && mo_lex_compare(lex_pair(ctx, candidate), lex_pair(ctx, current)) == LexOrder::Better;
    Decision {
        action: if better {
            Action::Change(candidate)
        } else {
            Action::Keep
        },
        candidate,
        est_current: ctx.estimate(),
        est_next: ctx.estimate_with(candidate),
    }
}

pub fn modcop_can_move(ctx: &StepContext<'_>, current: Value) -> bool {
    let here = lex_pair(ctx, current);
    ctx.instance
        .domain(ctx.agent)
        .iter()
        .any(|&c| mo_lex_compare(lex_pair(ctx, c), here) == LexOrder::Better)
}
