//! One distributed-breakout exchange by hand: improve messages, the single
//! winner, and weight raises when nobody can improve.
//!
//! cargo run --example breakout_step

use std::collections::BTreeSet;

use udcop::engine::AgentView;
use udcop::fixtures;
use udcop::model::{AgentId, Value};
use udcop::solvers::{dbo_resolve, dbo_send_improve, DboState, SolverParams, StepContext};

fn main() {
    let mut inst = fixtures::example1();
    // London is now expensive for the third student, so nobody wants to
    // give in once the pair penalty is small.
    inst.unary[2].insert(Value(1), 500.0);
    let params = SolverParams::default();
    let revealed = BTreeSet::new();
    for (label, values, penalty) in [("conflict", [1, 3, 3], 300.0), ("stuck", [1, 1, 3], 40.0)] {
        let views: Vec<AgentView> = (0..3)
            .map(|i| {
                let mut v = AgentView::new(3);
                for (j, x) in values.iter().enumerate() {
                    if j != i {
                        v.set(AgentId(j), Value(*x));
                    }
                }
                v
            })
            .collect();
        let ctx = |i: usize| StepContext {
            instance: &inst,
            agent: AgentId(i),
            view: &views[i],
            revealed: &revealed,
            params: &params,
            pair_penalty: penalty,
        };
        let mut states: Vec<DboState> = values.iter().map(|v| DboState::new(Value(*v))).collect();
        let msgs: Vec<_> = (0..3)
            .map(|i| dbo_send_improve(&mut states[i], &ctx(i)))
            .collect();
        println!(
            "{label}: improves {:?}",
            msgs.iter().map(|m| m.improve).collect::<Vec<_>>()
        );
        for (i, state) in states.iter_mut().enumerate() {
            let others: Vec<_> = msgs.iter().filter(|m| m.from.0 != i).copied().collect();
            let res = dbo_resolve(state, &ctx(i), &others);
            println!("  A{} {:?} raised {:?}", i + 1, res.action, res.bumped);
        }
    }
}
