use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MultiAgentError, Robot, Subtask, Team};
use crate::pddl::{
    apply, ground_instance, Domain, GroundAction, GroundAtom, Plan, ProblemInstance, State,
};
use crate::planner::{search, SearchConfig, SearchStats, Task};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    /// Subtask id → robot id.
    pub assignments: BTreeMap<String, String>,
    /// Executed in order; members of one group may run concurrently.
    pub parallel_groups: Vec<Vec<String>>,
}

impl Allocation {
    pub fn group_of(&self, subtask: &str) -> Option<usize> {
        self.parallel_groups
            .iter()
            .position(|g| g.iter().any(|s| s == subtask))
    }
}

/// Solves every subtask from the instance's init with the team's pooled
/// capabilities, filling in `plan` and `required_schemas`. Returns the
/// search stats of each subtask in order.
pub fn solve_subtasks(
    subtasks: &mut [Subtask],
    instance: &ProblemInstance,
    domain: &Domain,
    team: &Team,
    config: &SearchConfig,
) -> Result<Vec<SearchStats>, MultiAgentError> {
    let caps = team.all_capabilities();
    let pooled = domain.restrict_actions(caps.iter().map(String::as_str));
    let results: Vec<_> = subtasks
        .par_iter()
        .map(|st| {
            let sub = ProblemInstance {
                goal: st.goal_atoms.clone(),
                ..instance.clone()
            };
            let task = Task::new(&sub, &pooled);
            search(&task, config)
        })
        .collect();
    let mut stats = Vec::with_capacity(subtasks.len());
    for (st, r) in subtasks.iter_mut().zip(results) {
        match r {
            Ok(sol) => {
                stats.push(sol.stats);
                st.set_plan(sol.plan);
            }
            Err(source) => {
                return Err(MultiAgentError::Planning {
                    subtask: st.id.clone(),
                    source,
                })
            }
        }
    }
    Ok(stats)
}

struct Footprint {
    pre: BTreeSet<GroundAtom>,
    add: BTreeSet<GroundAtom>,
    del: BTreeSet<GroundAtom>,
    goal: BTreeSet<GroundAtom>,
}

fn footprint(st: &Subtask, domain: &Domain) -> Footprint {
    let mut f = Footprint {
        pre: BTreeSet::new(),
        add: BTreeSet::new(),
        del: BTreeSet::new(),
        goal: st.goal_atoms.clone(),
    };
    for step in st.plan.iter().flat_map(|p| &p.steps) {
        if let Ok(op) = domain.operator(step) {
            f.pre.extend(op.pre);
            f.add.extend(op.add);
            f.del.extend(op.del);
        }
    }
    f
}

fn clobbers(a: &Footprint, b: &Footprint) -> bool {
    a.del
        .iter()
        .any(|x| b.pre.contains(x) || b.goal.contains(x) || b.add.contains(x))
}

/// True when a delete of either subtask's plan hits a precondition, goal or
/// add effect of the other.
pub fn conflicts(a: &Subtask, b: &Subtask, domain: &Domain) -> bool {
    let (fa, fb) = (footprint(a, domain), footprint(b, domain));
    clobbers(&fa, &fb) || clobbers(&fb, &fa)
}

fn capable(robot: &Robot, st: &Subtask) -> bool {
    st.required_schemas.is_subset(&robot.capabilities)
}

/// Greedy load-balanced assignment, longest plans first, then first-fit
/// parallel grouping in subtask order.
pub fn allocate(
    subtasks: &[Subtask],
    team: &Team,
    domain: &Domain,
) -> Result<Allocation, MultiAgentError> {
    if let Some(st) = subtasks.iter().find(|s| s.plan.is_none()) {
        return Err(MultiAgentError::Unsolved(st.id.clone()));
    }
    let mut order: Vec<usize> = (0..subtasks.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(subtasks[i].plan_len()));

    let mut load: BTreeMap<&str, usize> = team.robots.iter().map(|r| (r.id.as_str(), 0)).collect();
    let mut assignments = BTreeMap::new();
    for i in order {
        let st = &subtasks[i];
        let chosen = team
            .robots
            .iter()
            .filter(|r| capable(r, st))
            .min_by(|a, b| (load[a.id.as_str()], &a.id).cmp(&(load[b.id.as_str()], &b.id)));
        let Some(robot) = chosen else {
            let best = team.robots.iter().max_by_key(|r| {
                (
                    st.required_schemas.intersection(&r.capabilities).count(),
                    std::cmp::Reverse(&r.id),
                )
            });
            let uncovered = match best {
                Some(r) => st
                    .required_schemas
                    .difference(&r.capabilities)
                    .cloned()
                    .collect(),
                None => st.required_schemas.clone(),
            };
            return Err(MultiAgentError::NoCapableRobot {
                subtask: st.id.clone(),
                uncovered,
            });
        };
        *load
            .get_mut(robot.id.as_str())
            .expect("robot has a load entry") += st.plan_len();
        assignments.insert(st.id.clone(), robot.id.clone());
    }

    let prints: Vec<Footprint> = subtasks.iter().map(|s| footprint(s, domain)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..subtasks.len() {
        let robot = &assignments[&subtasks[i].id];
        let fits = |g: &Vec<usize>| {
            g.iter().all(|&j| {
                &assignments[&subtasks[j].id] != robot
                    && !clobbers(&prints[i], &prints[j])
                    && !clobbers(&prints[j], &prints[i])
            })
        };
        match groups.iter_mut().find(|g| fits(g)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    Ok(Allocation {
        assignments,
        parallel_groups: groups
            .into_iter()
            .map(|g| g.into_iter().map(|i| subtasks[i].id.clone()).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSubtask {
    pub subtask: String,
    pub robot: String,
    pub group: usize,
    pub goal_atoms: BTreeSet<GroundAtom>,
    pub plan: Plan,
}

/// Robot-bound plans in execution order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub bound: Vec<BoundSubtask>,
    /// Final subtask → robot map; differs from the allocation when a
    /// subtask had to move to another robot.
    pub assignments: BTreeMap<String, String>,
    /// Subtasks no robot could achieve from the state reached before them.
    pub failed: Vec<String>,
}

/// Whether `robot` may execute `action`: the schema is one of its
/// capabilities and every robot-typed argument is the robot itself.
pub fn robot_can_execute(robot: &Robot, action: &GroundAction, domain: &Domain) -> bool {
    if !robot.capabilities.contains(&action.schema) {
        return false;
    }
    let Some(schema) = domain.action(&action.schema) else {
        return false;
    };
    schema
        .params
        .iter()
        .zip(&action.args)
        .all(|(p, a)| !domain.is_robot_type(&p.ty) || *a == robot.home_object)
}

fn bind_one(
    robot: &Robot,
    state: &BTreeSet<GroundAtom>,
    goal: BTreeSet<GroundAtom>,
    instance: &ProblemInstance,
    domain: &Domain,
    config: &SearchConfig,
) -> Option<Plan> {
    let sub = ProblemInstance {
        init: state.clone(),
        goal,
        ..instance.clone()
    };
    let actions: Vec<GroundAction> = ground_instance(&sub, domain)
        .into_iter()
        .filter(|a| robot_can_execute(robot, a, domain))
        .collect();
    let task = Task::from_actions(&sub, domain, actions);
    search(&task, config).ok().map(|s| s.plan)
}

/// Re-solves each subtask for its assigned robot only, group by group, from
/// the state left by the subtasks before it. Goals reached earlier are kept
/// as goals so later subtasks cannot undo them. A subtask its robot cannot
/// achieve moves to another robot, capable ones first.
pub fn bind_plans(
    subtasks: &[Subtask],
    allocation: &Allocation,
    team: &Team,
    instance: &ProblemInstance,
    domain: &Domain,
    config: &SearchConfig,
) -> Binding {
    let mut state = instance.init.clone();
    let mut protected: BTreeSet<GroundAtom> = BTreeSet::new();
    let mut out = Binding::default();
    for (gi, group) in allocation.parallel_groups.iter().enumerate() {
        for id in group {
            let Some(st) = subtasks.iter().find(|s| &s.id == id) else {
                continue;
            };
            let assigned = allocation.assignments.get(id);
            let mut candidates: Vec<&Robot> = team.robots.iter().collect();
            candidates.sort_by_key(|r| (Some(&r.id) != assigned, !capable(r, st), r.id.clone()));
            let goal: BTreeSet<GroundAtom> = protected.union(&st.goal_atoms).cloned().collect();
            let found = candidates.into_iter().find_map(|r| {
                bind_one(r, &state, goal.clone(), instance, domain, config).map(|p| (r, p))
            });
            let Some((robot, plan)) = found else {
                out.failed.push(id.clone());
                continue;
            };
            let mut s = State::new(state);
            for step in &plan.steps {
                s = apply(&s, step, domain).expect("bound plans are applicable by construction");
            }
            state = s.atoms;
            protected.extend(st.goal_atoms.iter().cloned());
            out.assignments.insert(id.clone(), robot.id.clone());
            out.bound.push(BoundSubtask {
                subtask: id.clone(),
                robot: robot.id.clone(),
                group: gi,
                goal_atoms: st.goal_atoms.clone(),
                plan,
            });
        }
    }
    out
}
