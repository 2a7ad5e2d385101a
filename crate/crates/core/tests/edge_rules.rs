mod common;

use std::collections::BTreeSet;

use common::{hand_models, oracle_edges, random_model, rng, Model};
use proptest::prelude::*;
use scaleplan_core::{build_graph, ActionGraph, EdgeKind};

fn graph_edges(g: &ActionGraph) -> BTreeSet<(String, String, bool)> {
    g.edges
        .iter()
        .map(|e| (e.from.clone(), e.to.clone(), e.kind == EdgeKind::Strict))
        .collect()
}

fn check(model: &Model) {
    let g = build_graph(&model.domain()).unwrap();
    assert_eq!(graph_edges(&g), oracle_edges(model), "{}", model.pddl());
}

#[test]
fn hand_fixtures_match_the_oracle() {
    let models = hand_models();
    assert!(models.len() >= 20);
    for s in &models {
        check(s);
    }
}

#[test]
fn hand_fixture_spot_checks() {
    let by_name = |n: &str| hand_models().into_iter().find(|s| s.name == n).unwrap();
    let edges = |n: &str| oracle_edges(&by_name(n));
    let e = |a: &str, b: &str, strict| (a.to_string(), b.to_string(), strict);

    assert!(edges("pick").is_empty());
    assert_eq!(
        edges("kitchen"),
        BTreeSet::from([e("pickup", "slice", true), e("slice", "place", true)])
    );
    assert_eq!(
        edges("move-pick"),
        BTreeSet::from([e("move", "move", true), e("move", "pick", false)])
    );
    assert_eq!(
        edges("cycle"),
        BTreeSet::from([e("a", "b", true), e("b", "a", true)])
    );
    assert_eq!(edges("self-loop"), BTreeSet::from([e("a", "a", true)]));
    assert!(edges("siblings").is_empty());
    assert_eq!(edges("deep-chain"), BTreeSet::from([e("mk", "use", true)]));
    assert!(edges("mismatched-slot").is_empty());
    // Deleting `p` does not enable `b`.
    assert_eq!(edges("delete-only"), BTreeSet::from([e("b", "a", true)]));
    // `b` covers `c` only partially, but `c` already has a strict in-edge
    // from `a`, and `b` has no strict out-edge.
    assert_eq!(
        edges("strict-and-relaxed"),
        BTreeSet::from([e("a", "c", true), e("b", "c", false)])
    );
}

#[test]
fn random_domains_match_the_oracle() {
    let mut r = rng(0x5eed_ed6e);
    let (mut strict, mut relaxed) = (0, 0);
    for _ in 0..200 {
        let model = random_model(&mut r, 8, 6);
        check(&model);
        let edges = oracle_edges(&model);
        strict += edges.iter().filter(|e| e.2).count();
        relaxed += edges.iter().filter(|e| !e.2).count();
    }
    assert!(
        strict > 50 && relaxed > 50,
        "generator too sparse: {strict} strict, {relaxed} relaxed"
    );
}

fn model_strategy() -> impl Strategy<Value = Model> {
    any::<u64>().prop_map(|seed| random_model(&mut rng(seed), 8, 6))
}

/// Nodes with an edge into `terminals`, repeated to a fixpoint.
fn worklist_members(g: &ActionGraph, terminals: &BTreeSet<String>) -> BTreeSet<String> {
    let mut members = terminals.clone();
    loop {
        let before = members.len();
        for e in &g.edges {
            if members.contains(&e.to) {
                members.insert(e.from.clone());
            }
        }
        if members.len() == before {
            return members;
        }
    }
}

proptest! {
    #[test]
    fn strict_edges_are_exactly_full_coverage(model in model_strategy()) {
        let g = build_graph(&model.domain()).unwrap();
        let strict: BTreeSet<_> = graph_edges(&g).into_iter().filter(|e| e.2).collect();
        let expected: BTreeSet<_> = oracle_edges(&model).into_iter().filter(|e| e.2).collect();
        prop_assert_eq!(strict, expected);
    }

    #[test]
    fn relaxed_edges_respect_the_gate(model in model_strategy()) {
        let g = build_graph(&model.domain()).unwrap();
        for e in g.edges.iter().filter(|e| e.kind == EdgeKind::Relaxed) {
            let strict_in = g.edges.iter().any(|x| x.kind == EdgeKind::Strict && x.to == e.to);
            let strict_out = g.edges.iter().any(|x| x.kind == EdgeKind::Strict && x.from == e.from);
            prop_assert!(!strict_in || !strict_out);
            prop_assert_eq!(g.edge(&e.from, &e.to), Some(EdgeKind::Relaxed));
        }
    }

    #[test]
    fn construction_is_deterministic(model in model_strategy()) {
        let d = model.domain();
        prop_assert_eq!(build_graph(&d).unwrap(), build_graph(&d).unwrap());
    }

    #[test]
    fn reachability_is_monotone_and_matches_worklist(model in model_strategy(), mask in any::<u16>(), extra in any::<u16>()) {
        let g = build_graph(&model.domain()).unwrap();
        let pick = |m: u16| -> BTreeSet<String> {
            g.nodes.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, n)| n.clone()).collect()
        };
        let t1 = pick(mask);
        let t2: BTreeSet<String> = t1.union(&pick(extra)).cloned().collect();
        let r1 = g.backward_reachable(t1.iter().map(String::as_str)).unwrap();
        let r2 = g.backward_reachable(t2.iter().map(String::as_str)).unwrap();
        prop_assert!(r1.members.is_subset(&r2.members));
        prop_assert_eq!(&r1.members, &worklist_members(&g, &t1));
        prop_assert!(r1.terminals.is_subset(&r1.members));
    }
}
