//! The shipped household domains, the two-goal kitchen scene, and the
//! distractor suite used to measure filtering.

use std::collections::BTreeSet;

use crate::bench_eval::{
    condition_goals, world_to_instance, Affordance, Category, GroundTruthCondition, OpenState,
    StateTag, TaskRecord, WorldState,
};
use crate::multiagent::{Robot, Team};
use crate::pddl::{parse_domain, Domain, ProblemInstance};

pub const DOMAIN_PDDL: &str = include_str!("../assets/household.pddl");
pub const DISTRACTOR_DOMAIN_PDDL: &str = include_str!("../assets/household_distractors.pddl");

/// Schemas of the distractor domain that no household goal needs.
pub const DISTRACTOR_SCHEMAS: [&str; 4] = ["vacuum", "water", "fold", "charge"];

pub const TWO_GOAL_TASK: &str = "Put the apple in the fridge and switch off the light.";

pub fn domain() -> Domain {
    parse_domain(DOMAIN_PDDL).expect("shipped household domain parses")
}

pub fn distractor_domain() -> Domain {
    parse_domain(DISTRACTOR_DOMAIN_PDDL).expect("shipped distractor domain parses")
}

fn object(w: &mut WorldState, name: &str, affs: &[Affordance]) {
    w.objects
        .insert(name.to_string(), affs.iter().copied().collect());
}

fn put(w: &mut WorldState, item: &str, place: &str) {
    w.containment
        .entry(place.to_string())
        .or_default()
        .insert(item.to_string());
}

/// Apple on the counter, a closed fridge, the light on, and two robots
/// standing at the empty floor.
pub fn two_goal_scene() -> WorldState {
    use Affordance::*;
    let mut w = WorldState::default();
    for r in ["r1", "r2"] {
        w.robots.push(r.to_string());
        w.held.insert(r.to_string(), None);
        w.robot_at.insert(r.to_string(), "Floor".to_string());
    }
    object(&mut w, "Floor", &[Receptacle]);
    object(&mut w, "CounterTop", &[Receptacle]);
    object(&mut w, "Apple", &[Pickupable]);
    object(&mut w, "Fridge", &[Container, Openable]);
    object(&mut w, "LightSwitch", &[Toggleable]);
    put(&mut w, "Apple", "CounterTop");
    w.open_state.insert("Fridge".into(), OpenState::Closed);
    w.object_states
        .insert("LightSwitch".into(), BTreeSet::from([StateTag::On]));
    w
}

pub fn two_goal_conditions() -> Vec<GroundTruthCondition> {
    vec![
        GroundTruthCondition {
            name: "Fridge".into(),
            contains: vec!["Apple".into()],
            state: None,
            num_contains: None,
        },
        GroundTruthCondition {
            name: "LightSwitch".into(),
            contains: vec![],
            state: Some(StateTag::Off),
            num_contains: None,
        },
    ]
}

/// A team where every robot can run every schema of `domain`.
pub fn full_team(world: &WorldState, domain: &Domain) -> Team {
    let caps: BTreeSet<String> = domain.actions.iter().map(|a| a.name.clone()).collect();
    Team {
        robots: world
            .robots
            .iter()
            .map(|r| Robot {
                id: r.clone(),
                home_object: r.to_lowercase(),
                capabilities: caps.clone(),
            })
            .collect(),
    }
}

pub fn two_goal_record() -> TaskRecord {
    TaskRecord {
        id: "two-goal".into(),
        category: Category::Simple,
        description: TWO_GOAL_TASK.into(),
        scene: two_goal_scene(),
        ground_truth: two_goal_conditions(),
        team: None,
    }
}

/// Planning instance for a record's scene and ground truth.
pub fn record_instance(record: &TaskRecord, domain: &Domain) -> ProblemInstance {
    let mut p = world_to_instance(
        &record.scene,
        domain,
        &record.id,
        condition_goals(&record.ground_truth),
    );
    p.task_text = Some(record.description.clone());
    p
}

pub fn two_goal_instance(domain: &Domain) -> ProblemInstance {
    record_instance(&two_goal_record(), domain)
}

/// Objects placed per distractor shelf.
const PER_SHELF: usize = 10;

/// The kitchen scene plus `n` distractor objects (dusty rugs, plants,
/// towels, chargers) spread over their own shelves.
pub fn distractor_scene(n: usize) -> WorldState {
    use Affordance::*;
    let mut w = two_goal_scene();
    let kinds: [(&str, &[Affordance]); 4] = [
        ("Rug", &[Dusty]),
        ("Plant", &[Plant]),
        ("Towel", &[Cloth, Pickupable]),
        ("Charger", &[Charger]),
    ];
    for i in 0..n {
        let shelf = format!("Shelf{}", i / PER_SHELF);
        if !w.objects.contains_key(&shelf) {
            object(&mut w, &shelf, &[Receptacle]);
        }
        let (stem, affs) = kinds[i % kinds.len()];
        let name = format!("{stem}{i}");
        object(&mut w, &name, affs);
        put(&mut w, &name, &shelf);
    }
    w
}

pub fn distractor_record(n: usize) -> TaskRecord {
    TaskRecord {
        id: format!("distractors-{n}"),
        scene: distractor_scene(n),
        ..two_goal_record()
    }
}

/// A handful of household tasks across the three categories.
pub fn sample_records() -> Vec<TaskRecord> {
    use Affordance::*;
    let mut kitchen = two_goal_scene();
    object(&mut kitchen, "Lettuce", &[Pickupable, Sliceable, Cleanable]);
    object(&mut kitchen, "Tomato", &[Pickupable, Sliceable]);
    object(&mut kitchen, "Potato", &[Pickupable, Cookable]);
    object(&mut kitchen, "Knife", &[Pickupable, Knife]);
    object(&mut kitchen, "Sink", &[Receptacle, Washer]);
    object(&mut kitchen, "Plate", &[Pickupable, Receptacle]);
    object(
        &mut kitchen,
        "Microwave",
        &[Container, Openable, Heater, Toggleable],
    );
    object(&mut kitchen, "CellPhone", &[Pickupable, Breakable]);
    for o in ["Lettuce", "Tomato", "Potato", "Knife", "Plate", "CellPhone"] {
        put(&mut kitchen, o, "CounterTop");
    }
    kitchen
        .open_state
        .insert("Microwave".into(), OpenState::Closed);
    kitchen
        .object_states
        .insert("Microwave".into(), BTreeSet::from([StateTag::Off]));

    let cond = |name: &str, contains: &[&str], state: Option<StateTag>, num: Option<usize>| {
        GroundTruthCondition {
            name: name.into(),
            contains: contains.iter().map(|s| s.to_string()).collect(),
            state,
            num_contains: num,
        }
    };
    let rec = |id: &str, category, description: &str, ground_truth| TaskRecord {
        id: id.into(),
        category,
        description: description.into(),
        scene: kitchen.clone(),
        ground_truth,
        team: None,
    };
    vec![
        rec(
            "simple-1",
            Category::Simple,
            TWO_GOAL_TASK,
            two_goal_conditions(),
        ),
        rec(
            "simple-2",
            Category::Simple,
            "Wash the lettuce and place lettuce on the countertop.",
            vec![
                cond("CounterTop", &["Lettuce"], None, None),
                cond("Lettuce", &[], Some(StateTag::Cleaned), None),
            ],
        ),
        rec(
            "simple-3",
            Category::Simple,
            "Put two vegetables in the fridge.",
            vec![cond(
                "Fridge",
                &["Potato", "Lettuce", "Tomato"],
                None,
                Some(2),
            )],
        ),
        rec(
            "complex-1",
            Category::Complex,
            "Put a plate of sliced lettuce into the microwave.",
            vec![
                cond("Microwave", &["Plate"], None, None),
                cond("Plate", &["Lettuce"], None, None),
                cond("Lettuce", &[], Some(StateTag::Sliced), None),
            ],
        ),
        rec(
            "complex-2",
            Category::Complex,
            "Cook the potato in the microwave and turn off the light.",
            vec![
                cond("Potato", &[], Some(StateTag::Cooked), None),
                cond("LightSwitch", &[], Some(StateTag::Off), None),
            ],
        ),
        rec(
            "vague-1",
            Category::Vague,
            "Break the high tech electronics.",
            vec![cond("CellPhone", &[], Some(StateTag::Broken), None)],
        ),
    ]
}
