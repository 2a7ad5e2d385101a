mod common;

use std::collections::BTreeSet;

use common::{filter_case, hand_model, oracle_ground, oracle_replay, random_seeds, rng, Model};
use proptest::prelude::*;
use scaleplan_core::filter::{filter_actions, relevance_closure};
use scaleplan_core::pddl::ground_instance;
use scaleplan_core::{
    build_filtered_instance, build_graph, solve, validate_plan, Domain, GroundAtom,
    ProblemInstance, SearchConfig, SeedAction,
};

#[test]
fn filtered_plans_validate_on_the_original() {
    let config = SearchConfig {
        max_expansions: 20_000,
        ..SearchConfig::default()
    };
    let (mut solvable, mut attempts) = (0, 0u64);
    while solvable < 500 {
        attempts += 1;
        assert!(attempts < 50_000, "only {solvable} solvable filtered cases");
        let Some((model, d, p, seeds)) = filter_case(attempts) else {
            continue;
        };
        let g = build_graph(&d).unwrap();
        let Ok(f) = build_filtered_instance(&p, &d, &g, &seeds) else {
            continue;
        };
        let Ok(sol) = solve(&f.to_problem(), &f.to_domain(&d), &config) else {
            continue;
        };
        solvable += 1;
        let report = validate_plan(&p, &sol.plan, &d);
        assert!(
            report.valid,
            "case {attempts}: {:?}\n{}",
            report.failed_step,
            model.pddl()
        );
        let end = oracle_replay(&oracle_ground(&model, &p.objects), &p.init, &sol.plan.steps)
            .expect("oracle replays the filtered plan");
        assert!(p.goal.is_subset(&end), "case {attempts}");
    }
}

fn seed_objects(seeds: &[SeedAction], p: &ProblemInstance) -> BTreeSet<String> {
    let mut objs: BTreeSet<String> = seeds
        .iter()
        .flat_map(|x| x.objects().map(str::to_string))
        .collect();
    objs.extend(p.goal.iter().flat_map(|a| a.args.iter().cloned()));
    objs
}

/// Co-occurrence fixpoint before any type-coverage repair.
fn closure_fixpoint(
    model: &Model,
    p: &ProblemInstance,
    actions: &BTreeSet<String>,
    seeds: &BTreeSet<String>,
) -> BTreeSet<String> {
    let preds: BTreeSet<&str> = model
        .actions
        .iter()
        .filter(|a| actions.contains(&a.name))
        .flat_map(|a| {
            a.pre
                .iter()
                .chain(&a.add)
                .chain(&a.del)
                .map(|l| l.pred.as_str())
        })
        .collect();
    let mut kept = seeds.clone();
    loop {
        let before = kept.len();
        for atom in p
            .init
            .iter()
            .filter(|a| preds.contains(a.predicate.as_str()))
        {
            if atom.args.iter().any(|o| kept.contains(o)) {
                kept.extend(atom.args.iter().cloned());
            }
        }
        if kept.len() == before {
            return kept;
        }
    }
}

#[test]
fn type_repair_can_drop_objects_when_seeds_grow() {
    let model = hand_model(
        "repair",
        "thing",
        "ok(thing) used(thing)",
        &["use(?x:thing) pre ok(?x) add used(?x)"],
    );
    let d = model.domain();
    let p = ProblemInstance {
        name: "p".into(),
        domain_name: model.name.clone(),
        objects: ["a", "b", "c"]
            .into_iter()
            .map(|o| (o.to_string(), "thing".to_string()))
            .collect(),
        init: ["a", "b", "c"]
            .into_iter()
            .map(|o| GroundAtom::new("ok", [o]))
            .collect(),
        goal: BTreeSet::new(),
        task_text: None,
        display: Default::default(),
    };
    let actions = BTreeSet::from(["use".to_string()]);
    let lifted = relevance_closure(&p, &d, &actions, &BTreeSet::new());
    let bound = relevance_closure(&p, &d, &actions, &BTreeSet::from(["a".to_string()]));
    assert_eq!(lifted.len(), 3);
    assert_eq!(bound, BTreeSet::from(["a".to_string()]));
}

fn case_strategy() -> impl Strategy<Value = (Model, Domain, ProblemInstance, Vec<SeedAction>)> {
    any::<u64>().prop_filter_map("walk made no progress", filter_case)
}

proptest! {
    #[test]
    fn filtered_grounding_is_a_subset((_model, d, p, seeds) in case_strategy()) {
        let g = build_graph(&d).unwrap();
        if let Ok(f) = build_filtered_instance(&p, &d, &g, &seeds) {
            let full: BTreeSet<_> = ground_instance(&p, &d).into_iter().collect();
            let reduced: BTreeSet<_> = ground_instance(&f.to_problem(), &f.to_domain(&d)).into_iter().collect();
            prop_assert!(reduced.is_subset(&full));
            prop_assert!(f.kept_init.iter().all(|a| a.args.iter().all(|o| f.kept_objects.contains(o))));
        }
    }

    #[test]
    fn seed_growth_is_monotone_up_to_type_repair(
        (model, d, p, seeds) in case_strategy(),
        extra_seed in any::<u64>(),
    ) {
        let g = build_graph(&d).unwrap();
        let mut more = seeds.clone();
        more.extend(random_seeds(&mut rng(extra_seed), &model, &p));
        let kept = |s: &[SeedAction]| {
            let actions = filter_actions(&g, s).unwrap();
            let objs = seed_objects(s, &p);
            let fixpoint = closure_fixpoint(&model, &p, &actions, &objs);
            let objects = relevance_closure(&p, &d, &actions, &objs);
            (actions, fixpoint, objects)
        };
        let (a1, fix1, o1) = kept(&seeds);
        let (a2, fix2, o2) = kept(&more);
        prop_assert!(a1.is_subset(&a2));
        prop_assert!(fix1.is_subset(&fix2));
        prop_assert!(fix1.is_subset(&o1));
        // Objects can only be lost through the type-coverage repair, which
        // stops firing once more seeds keep an object of the type.
        for lost in o1.difference(&o2) {
            prop_assert!(!fix1.contains(lost), "{lost} was in the fixpoint");
        }
    }

    #[test]
    fn filtering_twice_changes_nothing((_model, d, p, seeds) in case_strategy()) {
        let g = build_graph(&d).unwrap();
        if let Ok(f) = build_filtered_instance(&p, &d, &g, &seeds) {
            let d2 = f.to_domain(&d);
            let g2 = build_graph(&d2).unwrap();
            let f2 = build_filtered_instance(&f.to_problem(), &d2, &g2, &seeds).unwrap();
            prop_assert_eq!(&f2.kept_actions, &f.kept_actions);
            prop_assert_eq!(&f2.kept_objects, &f.kept_objects);
            prop_assert_eq!(&f2.kept_init, &f.kept_init);
        }
    }
}
