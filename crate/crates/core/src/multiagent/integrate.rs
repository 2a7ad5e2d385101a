use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Binding;
use crate::pddl::{Domain, GroundAction, GroundAtom};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StepRef {
    pub robot: String,
    pub step: usize,
}

impl StepRef {
    pub fn new(robot: &str, step: usize) -> Self {
        StepRef {
            robot: robot.to_string(),
            step,
        }
    }
}

/// `before` must finish before `after` starts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderingConstraint {
    pub before: StepRef,
    pub after: StepRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratedPlan {
    pub tracks: BTreeMap<String, Vec<GroundAction>>,
    /// Cross-track constraints.
    pub orderings: Vec<OrderingConstraint>,
    /// A total order over all steps that respects the constraints; the
    /// order the sub-plans were bound in.
    pub sigma: Vec<StepRef>,
    pub makespan: usize,
    /// Set when the dependency analysis produced a cycle and the plan was
    /// sequentialized instead.
    pub fallback: bool,
}

struct Dag {
    nodes: Vec<StepRef>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl IntegratedPlan {
    pub fn step_count(&self) -> usize {
        self.tracks.values().map(Vec::len).sum()
    }

    pub fn action(&self, step: &StepRef) -> Option<&GroundAction> {
        self.tracks.get(&step.robot)?.get(step.step)
    }

    pub fn actions(&self, order: &[StepRef]) -> Vec<GroundAction> {
        order
            .iter()
            .filter_map(|s| self.action(s).cloned())
            .collect()
    }

    fn dag(&self) -> Dag {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for (robot, steps) in &self.tracks {
            for i in 0..steps.len() {
                index.insert(StepRef::new(robot, i), nodes.len());
                nodes.push(StepRef::new(robot, i));
            }
        }
        let mut preds = vec![Vec::new(); nodes.len()];
        let mut succs = vec![Vec::new(); nodes.len()];
        let mut link = |a: usize, b: usize| {
            preds[b].push(a);
            succs[a].push(b);
        };
        for (i, n) in nodes.iter().enumerate() {
            if n.step > 0 {
                link(i - 1, i);
            }
        }
        for c in &self.orderings {
            if let (Some(&a), Some(&b)) = (index.get(&c.before), index.get(&c.after)) {
                link(a, b);
            }
        }
        Dag {
            nodes,
            preds,
            succs,
        }
    }

    /// A topological order of all steps, or `None` when the constraints
    /// are cyclic.
    fn topo(&self, dag: &Dag, mut pick: impl FnMut(&[usize]) -> usize) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = dag.preds.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..dag.nodes.len()).filter(|&i| indeg[i] == 0).collect();
        let mut out = Vec::with_capacity(dag.nodes.len());
        while !ready.is_empty() {
            let n = ready.remove(pick(&ready));
            out.push(n);
            for &s in &dag.succs[n] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    ready.push(s);
                }
            }
        }
        (out.len() == dag.nodes.len()).then_some(out)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo(&self.dag(), |_| 0).is_some()
    }
}

/// Longest chain of unit-duration steps under track order and the
/// cross-track constraints; `None` if the constraints are cyclic.
pub fn makespan(plan: &IntegratedPlan) -> Option<usize> {
    let dag = plan.dag();
    let order = plan.topo(&dag, |_| 0)?;
    let mut finish = vec![0usize; dag.nodes.len()];
    for n in order {
        finish[n] = 1 + dag.preds[n].iter().map(|&p| finish[p]).max().unwrap_or(0);
    }
    Some(finish.into_iter().max().unwrap_or(0))
}

/// A uniformly chosen ready step at every point; `None` if cyclic.
pub fn linearize_random(plan: &IntegratedPlan, rng: &mut impl Rng) -> Option<Vec<StepRef>> {
    let dag = plan.dag();
    let order = plan.topo(&dag, |ready| rng.random_range(0..ready.len()))?;
    Some(order.into_iter().map(|i| dag.nodes[i].clone()).collect())
}

/// Cycles through robots in id order, taking each robot's next step when
/// all its predecessors are done.
pub fn linearize_round_robin(plan: &IntegratedPlan) -> Option<Vec<StepRef>> {
    let dag = plan.dag();
    let mut done = vec![false; dag.nodes.len()];
    let mut next: Vec<usize> = Vec::new();
    let mut starts = Vec::new();
    let mut offset = 0;
    for steps in plan.tracks.values() {
        starts.push((offset, steps.len()));
        next.push(0);
        offset += steps.len();
    }
    let mut out = Vec::with_capacity(dag.nodes.len());
    while out.len() < dag.nodes.len() {
        let mut progressed = false;
        for (t, &(start, len)) in starts.iter().enumerate() {
            if next[t] == len {
                continue;
            }
            let n = start + next[t];
            if dag.preds[n].iter().all(|&p| done[p]) {
                done[n] = true;
                next[t] += 1;
                out.push(dag.nodes[n].clone());
                progressed = true;
            }
        }
        if !progressed {
            return None;
        }
    }
    Some(out)
}

struct StepInfo {
    pre: BTreeSet<GroundAtom>,
    add: BTreeSet<GroundAtom>,
    del: BTreeSet<GroundAtom>,
    goal: usize,
}

fn touches(eff: &BTreeSet<GroundAtom>, atoms: &BTreeSet<GroundAtom>) -> bool {
    eff.iter().any(|x| atoms.contains(x))
}

fn interfere(a: &StepInfo, b: &StepInfo, goals: &[BTreeSet<GroundAtom>]) -> bool {
    let hits = |x: &StepInfo, y: &StepInfo| {
        touches(&x.add, &y.pre)
            || touches(&x.del, &y.pre)
            || touches(&x.add, &y.del)
            || touches(&x.add, &goals[y.goal])
            || touches(&x.del, &goals[y.goal])
    };
    hits(a, b) || hits(b, a)
}

/// Lays each robot's bound sub-plans end to end and orders interfering
/// steps on different tracks as they occur in the binding order. For each
/// step and each other track only the latest interfering earlier step is
/// kept; track order implies the rest.
pub fn integrate(binding: &Binding, domain: &Domain) -> IntegratedPlan {
    let mut plan = IntegratedPlan::default();
    let mut info: Vec<StepInfo> = Vec::new();
    let goals: Vec<BTreeSet<GroundAtom>> =
        binding.bound.iter().map(|b| b.goal_atoms.clone()).collect();
    for (gi, bs) in binding.bound.iter().enumerate() {
        let track = plan.tracks.entry(bs.robot.clone()).or_default();
        for step in &bs.plan.steps {
            let op = domain
                .operator(step)
                .expect("bound steps come from the domain");
            plan.sigma.push(StepRef::new(&bs.robot, track.len()));
            track.push(step.clone());
            info.push(StepInfo {
                pre: op.pre.into_iter().collect(),
                add: op.add.into_iter().collect(),
                del: op.del.into_iter().collect(),
                goal: gi,
            });
        }
    }

    for b in 0..plan.sigma.len() {
        let mut seen: BTreeSet<&str> = BTreeSet::from([plan.sigma[b].robot.as_str()]);
        for a in (0..b).rev() {
            let robot = plan.sigma[a].robot.as_str();
            if seen.contains(robot) || !interfere(&info[a], &info[b], &goals) {
                continue;
            }
            seen.insert(robot);
            plan.orderings.push(OrderingConstraint {
                before: plan.sigma[a].clone(),
                after: plan.sigma[b].clone(),
            });
        }
    }

    if !plan.is_acyclic() {
        plan.orderings = plan
            .sigma
            .windows(2)
            .filter(|w| w[0].robot != w[1].robot)
            .map(|w| OrderingConstraint {
                before: w[0].clone(),
                after: w[1].clone(),
            })
            .collect();
        plan.fallback = true;
    }
    plan.orderings.sort();
    plan.makespan = makespan(&plan).unwrap_or_else(|| plan.step_count());
    plan
}
