//! Synchronous round-based simulator.
//!
//! Every round has three phases:
//!
//! 1. each agent whose value differs from the last one it sent emits a
//!    value message to every other agent; the ledger charges any entry the
//!    value discloses for the first time (round 0 sends the initial values);
//! 2. all messages are delivered into the recipients' views;
//! 3. all agents step against their views. Breakout solvers first exchange
//!    improve messages and then resolve.
//!
//! A run stops at the round budget, or once two consecutive rounds changed
//! neither a value nor a breakout weight and no agent has an admissible
//! move left. Values adopted in the last round are sent (and charged) when
//! the run ends.

mod choice;
mod ledger;
mod trace;
mod view;

use crate::error::{Error, Result};
use crate::model::{ensure_valid, AgentId, Assignment, Instance, Value};
use crate::solvers::{
    conflicts, dbo_resolve, dbo_send_improve, dbou_can_move, dbou_send_improve, dsa_can_move,
    dsa_step, dsau_can_move, dsau_step, modcop_can_move, modcop_dsa_step, pair_penalty, Action,
    DboState, Decision, ImproveMsg, SolverKind, SolverParams, StepContext,
};

pub use choice::{Choices, ScriptedChoices, SeededChoices};
pub use ledger::RevealLedger;
pub use trace::{trace_tsv, AgentStep, RoundTrace, TRACE_HEADER};
pub use view::AgentView;

/// Rounds without any change, in a row, before a run may stop early.
pub const QUIESCENCE_WINDOW: u32 = 2;

/// Per-agent metrics of an assignment together with a ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub privacy_loss_per_agent: f64,
    /// Mean unary cost, plus `W/n` when the all-equal constraint is violated.
    pub solution_quality_per_agent: f64,
    pub unpenalized_quality_per_agent: f64,
    pub total_cost_per_agent: f64,
    pub satisfied: bool,
    pub agent_privacy: Vec<f64>,
    pub agent_unary: Vec<f64>,
}

/// `penalty` is the finite all-equal penalty `W` charged to unsatisfied
/// assignments.
pub fn metrics(
    inst: &Instance,
    ledger: &RevealLedger,
    assignment: &Assignment,
    penalty: f64,
) -> Result<Metrics> {
    inst.check_assignment(assignment)?;
    let n = inst.n as f64;
    let agent_privacy: Vec<f64> = inst.agents().map(|a| ledger.cost(a)).collect();
    let agent_unary: Vec<f64> = inst
        .agents()
        .map(|a| inst.unary_cost(a, assignment.0[a.0]))
        .collect();
    let satisfied = assignment.is_all_equal();
    let privacy = agent_privacy.iter().sum::<f64>() / n;
    let unpenalized = agent_unary.iter().sum::<f64>() / n;
    let quality = if satisfied {
        unpenalized
    } else {
        unpenalized + penalty / n
    };
    Ok(Metrics {
        privacy_loss_per_agent: privacy,
        solution_quality_per_agent: quality,
        unpenalized_quality_per_agent: unpenalized,
        total_cost_per_agent: privacy + quality,
        satisfied,
        agent_privacy,
        agent_unary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub final_assignment: Assignment,
    pub metrics: Metrics,
    pub rounds: u32,
    pub messages: u64,
}

impl Outcome {
    pub fn privacy_loss_per_agent(&self) -> f64 {
        self.metrics.privacy_loss_per_agent
    }

    pub fn solution_quality_per_agent(&self) -> f64 {
        self.metrics.solution_quality_per_agent
    }

    pub fn total_cost_per_agent(&self) -> f64 {
        self.metrics.total_cost_per_agent
    }

    pub fn satisfied(&self) -> bool {
        self.metrics.satisfied
    }

    /// Unary cost of the final value plus the privacy the agent lost.
    pub fn agent_utility(&self, agent: AgentId) -> f64 {
        self.metrics.agent_unary[agent.0] + self.metrics.agent_privacy[agent.0]
    }
}

pub fn run(
    inst: &Instance,
    solver: SolverKind,
    params: &SolverParams,
    seed: u64,
    budget: u32,
) -> Result<(Outcome, Vec<RoundTrace>)> {
    let mut choices = SeededChoices::new(seed, inst.n);
    run_with_choices(inst, solver, params, &mut choices, budget)
}

pub fn run_with_choices(
    inst: &Instance,
    solver: SolverKind,
    params: &SolverParams,
    choices: &mut dyn Choices,
    budget: u32,
) -> Result<(Outcome, Vec<RoundTrace>)> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    ensure_valid(inst)?;
    params.validate()?;

    let n = inst.n;
    let penalty = inst.effective_penalty(params.penalty);
    let unit = pair_penalty(penalty, n);

    let mut current: Vec<Value> = inst
        .agents()
        .map(|a| choices.initial(a, inst.domain(a)))
        .collect();
    let mut sent: Vec<Option<Value>> = vec![None; n];
    let mut views = vec![AgentView::new(n); n];
    let mut ledger = RevealLedger::new(n, params.scope);
    let mut dbo: Vec<DboState> = current.iter().map(|v| DboState::new(*v)).collect();
    let mut stalled = vec![0u32; n];
    let mut messages = 0u64;
    let mut quiet = 0u32;
    let mut traces = Vec::new();

    for round in 0..budget {
        let mut fresh = vec![(Vec::new(), 0.0); n];
        let mut outbox = Vec::new();
        for a in inst.agents() {
            let v = current[a.0];
            if sent[a.0] != Some(v) {
                fresh[a.0] = ledger.send_value(inst, a, v)?;
                sent[a.0] = Some(v);
                outbox.push((a, v));
                messages += (n - 1) as u64;
            }
        }
        for (from, v) in outbox {
            for (j, view) in views.iter_mut().enumerate() {
                if j != from.0 {
                    view.set(from, v);
                }
            }
        }

        let ctx = |a: AgentId| StepContext {
            instance: inst,
            agent: a,
            view: &views[a.0],
            revealed: ledger.revealed_values(a),
            params,
            pair_penalty: unit,
        };

        let mut weights_changed = false;
        let decisions: Vec<Decision> = match solver {
            SolverKind::Dsa => inst
                .agents()
                .map(|a| dsa_step(&ctx(a), current[a.0], choices.coin(round, a)))
                .collect(),
            SolverKind::Dsau => inst
                .agents()
                .map(|a| {
                    let c = choices.candidate(round, a, inst.domain(a));
                    dsau_step(&ctx(a), current[a.0], c, stalled[a.0])
                })
                .collect(),
            SolverKind::MoLex => inst
                .agents()
                .map(|a| {
                    let c = choices.candidate(round, a, inst.domain(a));
                    modcop_dsa_step(&ctx(a), current[a.0], c)
                })
                .collect(),
            SolverKind::Dbo | SolverKind::Dbou => {
                let msgs: Vec<ImproveMsg> = inst
                    .agents()
                    .map(|a| match solver {
                        SolverKind::Dbo => dbo_send_improve(&mut dbo[a.0], &ctx(a)),
                        _ => dbou_send_improve(&mut dbo[a.0], &ctx(a), stalled[a.0]),
                    })
                    .collect();
                messages += (n * (n - 1)) as u64;
                inst.agents()
                    .map(|a| {
                        let c = ctx(a);
                        let proposed = dbo[a.0].new_value;
                        let others: Vec<ImproveMsg> =
                            msgs.iter().filter(|m| m.from != a).copied().collect();
                        let res = dbo_resolve(&mut dbo[a.0], &c, &others);
                        weights_changed |= !res.bumped.is_empty();
                        Decision {
                            action: res.action,
                            candidate: proposed,
                            est_current: c.estimate(),
                            est_next: c.estimate_with(proposed),
                        }
                    })
                    .collect()
            }
        };

        let mut changed = false;
        for a in inst.agents() {
            match decisions[a.0].action {
                Action::Change(v) => {
                    current[a.0] = v;
                    stalled[a.0] = 0;
                    changed = true;
                }
                Action::Keep if conflicts(a, current[a.0], &views[a.0]) > 0 => stalled[a.0] += 1,
                Action::Keep => stalled[a.0] = 0,
            }
        }

        let assignment = Assignment(current.clone());
        let m = metrics(inst, &ledger, &assignment, penalty)?;
        traces.push(RoundTrace {
            round,
            steps: inst
                .agents()
                .map(|a| {
                    let d = &decisions[a.0];
                    let (revealed, charged) = std::mem::take(&mut fresh[a.0]);
                    AgentStep {
                        agent: a,
                        action: d.action,
                        value: current[a.0],
                        revealed,
                        charged,
                        est_current: d.est_current,
                        est_next: d.est_next,
                        cum_privacy: ledger.cost(a),
                    }
                })
                .collect(),
            privacy_loss_per_agent: m.privacy_loss_per_agent,
            solution_quality_per_agent: m.solution_quality_per_agent,
            total_cost_per_agent: m.total_cost_per_agent,
            satisfied: m.satisfied,
        });

        quiet = if changed || weights_changed {
            0
        } else {
            quiet + 1
        };
        if quiet >= QUIESCENCE_WINDOW {
            // Nothing changed, so the views still match the current values.
            let ctx = |a: AgentId| StepContext {
                instance: inst,
                agent: a,
                view: &views[a.0],
                revealed: ledger.revealed_values(a),
                params,
                pair_penalty: unit,
            };
            let movable = inst.agents().any(|a| match solver {
                SolverKind::Dsa => dsa_can_move(&ctx(a), current[a.0]),
                SolverKind::Dsau => dsau_can_move(&ctx(a), current[a.0]),
                SolverKind::MoLex => modcop_can_move(&ctx(a), current[a.0]),
                SolverKind::Dbo => false,
                SolverKind::Dbou => dbou_can_move(&dbo[a.0], &ctx(a)),
            });
            if !movable {
                break;
            }
        }
    }

    for a in inst.agents() {
        if sent[a.0] != Some(current[a.0]) {
            ledger.send_value(inst, a, current[a.0])?;
            messages += (n - 1) as u64;
        }
    }

    let final_assignment = Assignment(current);
    let metrics = metrics(inst, &ledger, &final_assignment, penalty)?;
    Ok((
        Outcome {
            final_assignment,
            metrics,
            rounds: traces.len() as u32,
            messages,
        },
        traces,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generator::{generate, GenConfig};

    fn values(v: &[u32]) -> Vec<Value> {
        v.iter().map(|x| Value(*x)).collect()
    }

    #[test]
    fn worked_example_reaches_consensus() {
        let inst = fixtures::example2();
        let mut choices = ScriptedChoices::new(
            values(&[1, 1, 3]),
            vec![values(&[2]), values(&[3]), values(&[1])],
            0,
        );
        let (out, trace) = run_with_choices(
            &inst,
            SolverKind::Dsau,
            &SolverParams::default(),
            &mut choices,
            50,
        )
        .unwrap();
        assert_eq!(out.final_assignment.to_string(), "(1,1,1)");
        let first = &trace[0].steps;
        let est: Vec<_> = first.iter().map(|s| (s.est_current, s.est_next)).collect();
        assert_eq!(est, vec![(150.0, 250.0), (220.0, 265.0), (240.0, 225.0)]);
        let utilities: Vec<_> = inst.agents().map(|a| out.agent_utility(a)).collect();
        assert_eq!(utilities, vec![150.0, 220.0, 130.0]);
        assert!(out.satisfied());
    }

    #[test]
    fn single_round_charges_initial_values() {
        let inst = fixtures::example2();
        for solver in SolverKind::ALL {
            let (out, trace) = run(&inst, solver, &SolverParams::default(), 4, 1).unwrap();
            assert_eq!(trace.len(), 1);
            assert_eq!(out.rounds, 1);
            let charged: f64 = trace[0].steps.iter().map(|s| s.charged).sum();
            assert!(charged > 0.0);
        }
    }

    #[test]
    fn zero_budget_is_rejected() {
        let inst = fixtures::example2();
        let err = run(&inst, SolverKind::Dsa, &SolverParams::default(), 0, 0).unwrap_err();
        assert!(matches!(err, Error::ZeroBudget));
    }

    #[test]
    fn identical_inputs_identical_traces() {
        let inst = generate(&GenConfig {
            seed: 8,
            ..GenConfig::default()
        })
        .unwrap();
        for solver in SolverKind::ALL {
            let a = run(&inst, solver, &SolverParams::default(), 21, 200).unwrap();
            let b = run(&inst, solver, &SolverParams::default(), 21, 200).unwrap();
            assert_eq!(trace_tsv(&a.1), trace_tsv(&b.1));
            assert_eq!(a.0, b.0);
        }
    }

    #[test]
    fn empty_ledger_zero_cost() {
        let mut inst = fixtures::example2();
        for t in &mut inst.unary {
            t.clear();
        }
        let ledger = RevealLedger::new(3, Default::default());
        let m = metrics(&inst, &ledger, &Assignment(values(&[2, 2, 2])), 10_000.0).unwrap();
        assert_eq!(
            (
                m.privacy_loss_per_agent,
                m.solution_quality_per_agent,
                m.total_cost_per_agent
            ),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn violated_outcome_reports_both_qualities() {
        let inst = fixtures::example2();
        let ledger = RevealLedger::new(3, Default::default());
        let m = metrics(&inst, &ledger, &Assignment(values(&[1, 1, 3])), 9000.0).unwrap();
        assert!(!m.satisfied);
        assert!((m.unpenalized_quality_per_agent - 140.0).abs() < 1e-9);
        assert!((m.solution_quality_per_agent - 3140.0).abs() < 1e-9);
    }

    #[test]
    fn views_follow_round_messages() {
        let inst = generate(&GenConfig {
            seed: 2,
            n: 5,
            ..GenConfig::default()
        })
        .unwrap();
        let (_, trace) = run(&inst, SolverKind::Dsa, &SolverParams::default(), 3, 30).unwrap();
        // A value adopted in round t is disclosed in round t+1's send phase.
        for w in trace.windows(2) {
            for (before, after) in w[0].steps.iter().zip(&w[1].steps) {
                if let Action::Change(v) = before.action {
                    assert_eq!(before.value, v);
                    let charged_now = after
                        .revealed
                        .contains(&crate::model::RevealEntry::Value(v));
                    let earlier = trace[..=w[0].round as usize].iter().any(|r| {
                        r.steps[before.agent.0]
                            .revealed
                            .contains(&crate::model::RevealEntry::Value(v))
                    });
                    assert!(charged_now || earlier);
                }
            }
        }
    }
}
