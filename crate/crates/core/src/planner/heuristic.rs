use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::task::{Bits, Task};

/// Heuristic value; `None` is infinity.
pub type HValue = Option<u64>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    #[default]
    Hadd,
    Goalcount,
    Zero,
}

impl Heuristic {
    pub fn eval(self, task: &Task, state: &Bits) -> HValue {
        match self {
            Heuristic::Hadd => h_add(task, state),
            Heuristic::Goalcount => {
                Some(task.goal.iter().filter(|&&g| !state.get(g)).count() as u64)
            }
            Heuristic::Zero => Some(0),
        }
    }
}

/// Additive delete-relaxation estimate: atoms in `state` cost 0, every
/// other atom costs the cheapest achiever's `1 + Σ pre`. Computed with a
/// Dijkstra-style sweep over atoms.
pub fn h_add(task: &Task, state: &Bits) -> HValue {
    SCRATCH.with(|s| s.borrow_mut().run(task, state))
}

thread_local! {
    static SCRATCH: RefCell<Sweep> = RefCell::new(Sweep::default());
}

/// Costs below this go to buckets; the rest to a heap.
const BUCKETS: u64 = 1024;

/// Buffers reused across calls. Costs only grow during a sweep, so a
/// bucket queue with a forward-moving cursor replaces most heap traffic.
#[derive(Default)]
struct Sweep {
    cost: Vec<u64>,
    done: Vec<bool>,
    remaining: Vec<u32>,
    acc: Vec<u64>,
    buckets: Vec<Vec<u32>>,
    overflow: BinaryHeap<Reverse<(u64, u32)>>,
}

impl Sweep {
    fn push(&mut self, c: u64, atom: u32) {
        if c < BUCKETS {
            self.buckets[c as usize].push(atom);
        } else {
            self.overflow.push(Reverse((c, atom)));
        }
    }

    fn fire(&mut self, task: &Task, ai: usize) {
        let c = self.acc[ai].saturating_add(1);
        for &p in task.adds(ai) {
            if c < self.cost[p as usize] {
                self.cost[p as usize] = c;
                self.push(c, p);
            }
        }
    }

    fn run(&mut self, task: &Task, state: &Bits) -> HValue {
        const INF: u64 = u64::MAX;
        let n = task.atoms.len();
        self.cost.clear();
        self.cost.resize(n, INF);
        self.done.clear();
        self.done.resize(n, false);
        self.remaining.clear();
        self.remaining.extend_from_slice(&task.pre_count);
        self.acc.clear();
        self.acc.resize(task.actions.len(), 0);
        self.buckets.resize_with(BUCKETS as usize, Vec::new);
        self.buckets.iter_mut().for_each(Vec::clear);
        self.overflow.clear();

        for i in 0..n as u32 {
            if state.get(i) {
                self.cost[i as usize] = 0;
                self.buckets[0].push(i);
            }
        }
        for ai in 0..task.actions.len() {
            if self.remaining[ai] == 0 {
                self.fire(task, ai);
            }
        }

        let mut goal_left = task.goal.len();
        let mut cursor = 0usize;
        'sweep: loop {
            let (c, atom) = if cursor < self.buckets.len() {
                match self.buckets[cursor].pop() {
                    Some(a) => (cursor as u64, a),
                    None => {
                        cursor += 1;
                        continue;
                    }
                }
            } else {
                match self.overflow.pop() {
                    Some(Reverse(e)) => e,
                    None => break,
                }
            };
            let a = atom as usize;
            if self.done[a] || c > self.cost[a] {
                continue;
            }
            self.done[a] = true;
            if task.goal.contains(&atom) {
                goal_left -= 1;
                if goal_left == 0 {
                    break 'sweep;
                }
            }
            for &ai in &task.consumers[a] {
                let ai = ai as usize;
                self.acc[ai] = self.acc[ai].saturating_add(c);
                self.remaining[ai] -= 1;
                if self.remaining[ai] == 0 {
                    self.fire(task, ai);
                }
            }
        }

        let mut total = 0u64;
        for &g in &task.goal {
            if self.cost[g as usize] == INF {
                return None;
            }
            total = total.saturating_add(self.cost[g as usize]);
        }
        Some(total)
    }
}
