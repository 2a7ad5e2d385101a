mod common;

use std::collections::BTreeSet;

use common::{
    iddfs_length, oracle_ground, oracle_replay, oracle_step, planner_suite, random_model,
    random_problem, reachable_states, rng, AtomSet, Model, OracleOp,
};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::Rng;
use scaleplan_core::pddl::{
    applicable, apply, enumerate_bindings, ground_instance, parse_domain, parse_problem,
    write_domain, write_problem, State,
};
use scaleplan_core::planner::{h_add, Task};
use scaleplan_core::{
    solve, validate_plan, Domain, GroundAtom, Plan, ProblemInstance, SearchConfig, SolveError,
};

const STATE_CAP: usize = 10_000;

fn gbfs() -> SearchConfig {
    SearchConfig {
        max_expansions: 200_000,
        ..SearchConfig::default()
    }
}

#[test]
fn gbfs_plans_validate_on_every_suite_instance() {
    for (i, (model, p)) in planner_suite().iter().enumerate() {
        let d = model.domain();
        let sol =
            solve(p, &d, &gbfs()).unwrap_or_else(|e| panic!("instance {i}: {e}\n{}", model.pddl()));
        let report = validate_plan(p, &sol.plan, &d);
        assert!(report.valid, "instance {i}: {:?}", report.failed_step);
        let end =
            oracle_replay(&oracle_ground(model, &p.objects), &p.init, &sol.plan.steps).unwrap();
        assert!(p.goal.is_subset(&end), "instance {i}");
        assert_eq!(sol.stats.plan_length, Some(sol.plan.len()));
    }
}

#[test]
fn bfs_matches_iterative_deepening_on_small_spaces() {
    let mut checked = 0;
    for (i, (model, p)) in planner_suite().iter().enumerate() {
        let ops = oracle_ground(model, &p.objects);
        if reachable_states(&ops, &p.init, STATE_CAP).is_none() {
            continue;
        }
        let d = model.domain();
        let sol = solve(p, &d, &SearchConfig::bfs()).unwrap();
        assert_eq!(
            Some(sol.plan.len()),
            iddfs_length(&ops, &p.init, &p.goal, 12),
            "instance {i}"
        );
        checked += 1;
    }
    assert!(
        checked >= 40,
        "only {checked} suite instances fit under the state cap"
    );
}

#[test]
fn search_is_deterministic() {
    for (model, p) in planner_suite().iter().take(20) {
        let d = model.domain();
        for config in [gbfs(), SearchConfig::bfs()] {
            let a = solve(p, &d, &config).unwrap();
            let b = solve(p, &d, &config).unwrap();
            assert_eq!(a.plan, b.plan);
            assert_eq!(a.stats.expanded, b.stats.expanded);
            assert_eq!(a.stats.generated, b.stats.generated);
        }
    }
}

#[test]
fn exhausted_is_not_unsolvable() {
    let (model, p) = planner_suite()
        .into_iter()
        .find(|(s, p)| {
            iddfs_length(&oracle_ground(s, &p.objects), &p.init, &p.goal, 12)
                .is_some_and(|n| n >= 2)
        })
        .expect("a suite instance needs two steps");
    let config = SearchConfig {
        max_expansions: 0,
        ..SearchConfig::bfs()
    };
    assert!(matches!(
        solve(&p, &model.domain(), &config),
        Err(SolveError::Exhausted { .. })
    ));
}

/// A random instance whose goal is drawn from every atom an operator
/// mentions, so some goals are unreachable.
fn arbitrary_goal_case(seed: u64) -> Option<(Model, ProblemInstance, Vec<OracleOp>)> {
    let mut r = rng(seed);
    let model = random_model(&mut r, 5, 4);
    let mut p = random_problem(&mut r, &model)?;
    let ops = oracle_ground(&model, &p.objects);
    let pool: Vec<GroundAtom> = ops
        .iter()
        .flat_map(|o| o.pre.iter().chain(&o.add))
        .chain(&p.init)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = r.random_range(1..=2.min(pool.len()));
    p.goal = pool.choose_multiple(&mut r, k).cloned().collect();
    Some((model, p, ops))
}

fn unmet(p: &ProblemInstance, state: &AtomSet) -> usize {
    p.goal.difference(state).count()
}

/// Random action sequence: mostly applicable steps, sometimes any step.
fn random_sequence(
    r: &mut impl Rng,
    ops: &[OracleOp],
    init: &AtomSet,
    len: usize,
) -> Vec<OracleOp> {
    let mut state = init.clone();
    let mut out = Vec::new();
    for _ in 0..len {
        let pick = if r.random_bool(0.8) {
            let ok: Vec<&OracleOp> = ops.iter().filter(|o| o.pre.is_subset(&state)).collect();
            ok.choose(r).copied()
        } else {
            ops.choose(r)
        };
        let Some(op) = pick else { break };
        if let Some(n) = oracle_step(&state, op) {
            state = n;
        }
        out.push(op.clone());
    }
    out
}

fn round_trip(d: &Domain, p: &ProblemInstance) -> (Domain, ProblemInstance) {
    let d2 = parse_domain(&write_domain(d)).unwrap();
    let p2 = parse_problem(&write_problem(p), &d2).unwrap();
    (d2, p2)
}

proptest! {
    #[test]
    fn h_add_zero_exactly_at_goal_states(seed in any::<u64>()) {
        if let Some((model, p, _)) = arbitrary_goal_case(seed) {
            let task = Task::new(&p, &model.domain());
            let h = h_add(&task, &task.init);
            prop_assert_eq!(h == Some(0), p.goal.is_subset(&p.init));
            if let Some(h) = h {
                prop_assert!(h as usize >= unmet(&p, &p.init));
            }
        }
    }

    #[test]
    fn infinite_h_add_means_bfs_proves_unsolvable(seed in any::<u64>()) {
        if let Some((model, p, ops)) = arbitrary_goal_case(seed) {
            let d = model.domain();
            let task = Task::new(&p, &d);
            let h = h_add(&task, &task.init);
            if reachable_states(&ops, &p.init, STATE_CAP).is_some() {
                let bfs = solve(&p, &d, &SearchConfig::bfs());
                match h {
                    None => {
                        let unsolvable = matches!(bfs, Err(SolveError::Unsolvable { .. }));
                        prop_assert!(unsolvable);
                    }
                    Some(_) => {
                        let expected = iddfs_length(&ops, &p.init, &p.goal, 12);
                        prop_assert_eq!(bfs.ok().map(|s| s.plan.len()), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn apply_matches_the_oracle(seed in any::<u64>(), walk in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 5, 4);
        if let Some(p) = random_problem(&mut r, &model) {
            let d = model.domain();
            let ops = oracle_ground(&model, &p.objects);
            let mut state = p.init.clone();
            let mut wr = rng(walk);
            for _ in 0..4 {
                let s = State::new(state.iter().cloned());
                for op in &ops {
                    let expected = oracle_step(&state, op);
                    prop_assert_eq!(applicable(&s, &op.action, &d).unwrap(), expected.is_some());
                    match (apply(&s, &op.action, &d), expected) {
                        (Ok(n), Some(e)) => prop_assert_eq!(n.atoms, e),
                        (Err(_), None) => {}
                        (got, e) => prop_assert!(false, "{}: {:?} vs {:?}", op.action, got, e),
                    }
                }
                let next: Vec<AtomSet> = ops.iter().filter_map(|o| oracle_step(&state, o)).collect();
                match next.choose(&mut wr) {
                    Some(n) => state = n.clone(),
                    None => break,
                }
            }
        }
    }

    #[test]
    fn validate_plan_agrees_with_replay(seed in any::<u64>(), seq in any::<u64>()) {
        if let Some((model, p, ops)) = arbitrary_goal_case(seed) {
            let mut r = rng(seq);
            let len = r.random_range(0..6);
            let steps = random_sequence(&mut r, &ops, &p.init, len);
            let plan = Plan::new(steps.iter().map(|o| o.action.clone()).collect());
            let report = validate_plan(&p, &plan, &model.domain());
            let mut state = p.init.clone();
            let mut failed = None;
            for (i, op) in steps.iter().enumerate() {
                match oracle_step(&state, op) {
                    Some(n) => state = n,
                    None => {
                        failed = Some(i);
                        break;
                    }
                }
            }
            prop_assert_eq!(report.failed_step, failed);
            prop_assert_eq!(report.valid, failed.is_none() && p.goal.is_subset(&state));
            if failed.is_none() {
                prop_assert_eq!(&report.final_state.atoms, &state);
            }
        }
    }

    #[test]
    fn grounding_is_bounded_by_the_bindings(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 5, 4);
        if let Some(p) = random_problem(&mut r, &model) {
            let d = model.domain();
            let all: BTreeSet<_> = enumerate_bindings(&p, &d).into_iter().collect();
            let oracle: BTreeSet<_> = oracle_ground(&model, &p.objects).into_iter().map(|o| o.action).collect();
            prop_assert_eq!(&all, &oracle);
            let pruned: BTreeSet<_> = ground_instance(&p, &d).into_iter().collect();
            prop_assert!(pruned.is_subset(&all));
            let sol = solve(&p, &d, &gbfs()).unwrap();
            prop_assert!(sol.plan.steps.iter().all(|a| pruned.contains(a)));
        }
    }

    #[test]
    fn write_then_parse_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 6, 5);
        if let Some(p) = random_problem(&mut r, &model) {
            let d = model.domain();
            let (d2, p2) = round_trip(&d, &p);
            prop_assert_eq!(&d2, &d);
            prop_assert_eq!(&p2, &p);
        }
    }
}
