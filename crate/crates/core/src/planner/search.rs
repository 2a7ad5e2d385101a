use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::heuristic::Heuristic;
use super::task::{Bits, Task};
use crate::pddl::{Domain, Plan, ProblemInstance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Gbfs,
    Bfs,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    #[default]
    Fifo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub heuristic: Heuristic,
    pub max_expansions: usize,
    pub tie_break: TieBreak,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Gbfs,
            heuristic: Heuristic::Hadd,
            max_expansions: 1_000_000,
            tie_break: TieBreak::Fifo,
        }
    }
}

impl SearchConfig {
    pub fn bfs() -> Self {
        SearchConfig {
            strategy: Strategy::Bfs,
            heuristic: Heuristic::Zero,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expanded: usize,
    /// Includes the root.
    pub generated: usize,
    pub ground_actions: usize,
    /// Seconds.
    pub wall_time: f64,
    pub plan_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub plan: Plan,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("unsolvable: search space exhausted after {} expansions", stats.expanded)]
    Unsolvable { stats: SearchStats },
    #[error("expansion limit reached after {} expansions", stats.expanded)]
    Exhausted { stats: SearchStats },
}

impl SolveError {
    pub fn stats(&self) -> &SearchStats {
        match self {
            SolveError::Unsolvable { stats } | SolveError::Exhausted { stats } => stats,
        }
    }
}

struct Node {
    parent: Option<usize>,
    action: Option<u32>,
}

struct Search<'a> {
    task: &'a Task,
    nodes: Vec<Node>,
    seen: HashMap<Bits, usize>,
    stats: SearchStats,
}

impl Search<'_> {
    fn plan_to(&self, mut id: usize) -> Plan {
        let mut steps = Vec::new();
        while let Some(a) = self.nodes[id].action {
            steps.push(self.task.actions[a as usize].action.clone());
            id = self.nodes[id].parent.expect("non-root node has a parent");
        }
        steps.reverse();
        Plan::new(steps)
    }

    /// Registers a successor; `None` when the state was seen before.
    fn add(&mut self, state: &Bits, parent: usize, action: u32) -> Option<usize> {
        self.stats.generated += 1;
        if self.seen.contains_key(state) {
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: Some(parent),
            action: Some(action),
        });
        self.seen.insert(state.clone(), id);
        Some(id)
    }
}

/// Forward search over a compiled task. Goal test at generation; duplicate
/// states are discarded when generated.
pub fn search(task: &Task, config: &SearchConfig) -> Result<Solution, SolveError> {
    let start = Instant::now();
    let mut s = Search {
        task,
        nodes: vec![Node {
            parent: None,
            action: None,
        }],
        seen: HashMap::new(),
        stats: SearchStats {
            generated: 1,
            ground_actions: task.actions.len(),
            ..SearchStats::default()
        },
    };
    s.seen.insert(task.init.clone(), 0);

    let finish = |mut s: Search, id: usize| {
        let plan = s.plan_to(id);
        s.stats.plan_length = Some(plan.len());
        s.stats.wall_time = start.elapsed().as_secs_f64();
        Ok(Solution {
            plan,
            stats: s.stats,
        })
    };
    let fail = |mut s: Search, exhausted: bool| {
        s.stats.wall_time = start.elapsed().as_secs_f64();
        Err(if exhausted {
            SolveError::Exhausted { stats: s.stats }
        } else {
            SolveError::Unsolvable { stats: s.stats }
        })
    };

    if task.is_goal(&task.init) {
        return finish(s, 0);
    }

    match config.strategy {
        Strategy::Bfs => {
            let mut queue = VecDeque::from([(0usize, task.init.clone())]);
            while let Some((id, state)) = queue.pop_front() {
                if s.stats.expanded >= config.max_expansions {
                    return fail(s, true);
                }
                s.stats.expanded += 1;
                for (ai, a) in task.actions.iter().enumerate() {
                    if !state.all(&a.pre) {
                        continue;
                    }
                    let next = task.successor(&state, a);
                    if let Some(nid) = s.add(&next, id, ai as u32) {
                        if task.is_goal(&next) {
                            return finish(s, nid);
                        }
                        queue.push_back((nid, next));
                    }
                }
            }
            fail(s, false)
        }
        Strategy::Gbfs => {
            let Some(h0) = config.heuristic.eval(task, &task.init) else {
                return fail(s, false);
            };
            let mut seq = 0u64;
            let mut states: Vec<Option<Bits>> = vec![Some(task.init.clone())];
            let mut open = BinaryHeap::from([Reverse((h0, seq, 0usize))]);
            while let Some(Reverse((_, _, id))) = open.pop() {
                if s.stats.expanded >= config.max_expansions {
                    return fail(s, true);
                }
                s.stats.expanded += 1;
                let state = states[id].take().expect("each node is expanded once");
                for (ai, a) in task.actions.iter().enumerate() {
                    if !state.all(&a.pre) {
                        continue;
                    }
                    let next = task.successor(&state, a);
                    let Some(nid) = s.add(&next, id, ai as u32) else {
                        continue;
                    };
                    if task.is_goal(&next) {
                        return finish(s, nid);
                    }
                    states.push(None);
                    if let Some(h) = config.heuristic.eval(task, &next) {
                        seq += 1;
                        open.push(Reverse((h, seq, nid)));
                        states[nid] = Some(next);
                    }
                }
            }
            fail(s, false)
        }
    }
}

/// Grounds and solves `instance`. `wall_time` includes grounding.
pub fn solve(
    instance: &ProblemInstance,
    domain: &Domain,
    config: &SearchConfig,
) -> Result<Solution, SolveError> {
    let started = Instant::now();
    let task = Task::new(instance, domain);
    let mut out = search(&task, config);
    let elapsed = started.elapsed().as_secs_f64();
    match &mut out {
        Ok(sol) => sol.stats.wall_time = elapsed,
        Err(SolveError::Unsolvable { stats } | SolveError::Exhausted { stats }) => {
            stats.wall_time = elapsed
        }
    }
    out
}
