//! Translation between symbolic scenes and household problem instances.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use super::world::{Affordance, OpenState, StateTag, WorldState};
use super::GroundTruthCondition;
use crate::pddl::{Domain, GroundAtom, ProblemInstance};

pub const ROBOT_TYPE: &str = "robot";
pub const THING_TYPE: &str = "thing";

/// Ground atoms describing `world`. Affordances whose predicate `domain`
/// does not declare are left out.
pub fn world_atoms(world: &WorldState, domain: &Domain) -> BTreeSet<GroundAtom> {
    let mut atoms = BTreeSet::new();
    let lc = |s: &str| s.to_lowercase();
    for (o, affs) in &world.objects {
        for a in affs {
            if domain.predicate(a.predicate()).is_some() {
                atoms.insert(GroundAtom::new(a.predicate(), [lc(o)]));
            }
        }
    }
    for (o, tags) in &world.object_states {
        for t in tags {
            atoms.insert(GroundAtom::new(t.predicate(), [lc(o)]));
        }
    }
    for (o, s) in &world.open_state {
        let tag = match s {
            OpenState::Open => StateTag::Open,
            OpenState::Closed => StateTag::Closed,
        };
        atoms.insert(GroundAtom::new(tag.predicate(), [lc(o)]));
    }
    for (c, items) in &world.containment {
        for o in items {
            atoms.insert(GroundAtom::new("in", [lc(o), lc(c)]));
        }
    }
    for r in &world.robots {
        match world.held.get(r).cloned().flatten() {
            Some(o) => atoms.insert(GroundAtom::new("holding", [lc(r), lc(&o)])),
            None => atoms.insert(GroundAtom::new("hand-free", [lc(r)])),
        };
    }
    for (r, o) in &world.robot_at {
        atoms.insert(GroundAtom::new("near", [lc(r), lc(o)]));
    }
    atoms
}

/// A problem instance whose init is the scene and whose goal is `goal`.
/// Object names are lowercased; original spellings go to `display`.
pub fn world_to_instance(
    world: &WorldState,
    domain: &Domain,
    name: &str,
    goal: BTreeSet<GroundAtom>,
) -> ProblemInstance {
    let mut objects = IndexMap::new();
    let mut display = BTreeMap::new();
    let named = world
        .robots
        .iter()
        .map(|r| (r, ROBOT_TYPE))
        .chain(world.objects.keys().map(|o| (o, THING_TYPE)));
    for (n, ty) in named {
        let lower = n.to_lowercase();
        if lower != *n {
            display.insert(lower.clone(), n.clone());
        }
        objects.insert(lower, ty.to_string());
    }
    ProblemInstance {
        name: name.to_string(),
        domain_name: domain.name.clone(),
        objects,
        init: world_atoms(world, domain),
        goal,
        task_text: None,
        display,
    }
}

/// Reads a scene back from the init of a bridged instance.
pub fn instance_to_world(instance: &ProblemInstance, domain: &Domain) -> WorldState {
    let name = |o: &str| instance.display_name(o).to_string();
    let mut w = WorldState::default();
    for (o, ty) in &instance.objects {
        if domain.is_robot_type(ty) {
            w.robots.push(name(o));
            w.held.insert(name(o), None);
        } else {
            w.objects.insert(name(o), BTreeSet::new());
        }
    }
    for atom in &instance.init {
        let args: Vec<String> = atom.args.iter().map(|a| name(a)).collect();
        match (atom.predicate.as_str(), args.as_slice()) {
            ("in", [o, c]) => {
                w.containment
                    .entry(c.clone())
                    .or_default()
                    .insert(o.clone());
            }
            ("holding", [r, o]) => {
                w.held.insert(r.clone(), Some(o.clone()));
            }
            ("near", [r, o]) => {
                w.robot_at.insert(r.clone(), o.clone());
            }
            ("opened", [o]) => {
                w.open_state.insert(o.clone(), OpenState::Open);
            }
            ("closed", [o]) => {
                w.open_state.insert(o.clone(), OpenState::Closed);
            }
            (p, [o]) => {
                if let Some(a) = Affordance::from_predicate(p) {
                    w.objects.entry(o.clone()).or_default().insert(a);
                } else if let Some(t) = StateTag::from_predicate(p) {
                    w.object_states.entry(o.clone()).or_default().insert(t);
                }
            }
            _ => {}
        }
    }
    w
}

/// Goal atoms for a set of ground-truth conditions: the first
/// `num_contains` (or all) listed containments plus the state tag.
pub fn condition_goals(conditions: &[GroundTruthCondition]) -> BTreeSet<GroundAtom> {
    let mut goal = BTreeSet::new();
    for c in conditions {
        let needed = c.num_contains.unwrap_or(c.contains.len());
        for o in c.contains.iter().take(needed) {
            goal.insert(GroundAtom::new("in", [o.as_str(), c.name.as_str()]));
        }
        if let Some(tag) = c.state {
            goal.insert(GroundAtom::new(tag.predicate(), [c.name.as_str()]));
        }
    }
    goal
}
