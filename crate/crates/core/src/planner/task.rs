use std::collections::HashMap;

use crate::pddl::{ground_instance, Domain, GroundAction, GroundAtom, ProblemInstance};

/// Fixed-width bitset over atom ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits(Box<[u64]>);

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)].into_boxed_slice())
    }

    pub fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: u32) {
        self.0[(i / 64) as usize] &= !(1 << (i % 64));
    }

    pub fn all(&self, ids: &[u32]) -> bool {
        ids.iter().all(|&i| self.get(i))
    }
}

#[derive(Debug, Clone)]
pub struct CompiledAction {
    pub action: GroundAction,
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
}

/// A grounded STRIPS task with interned atoms.
#[derive(Debug, Clone)]
pub struct Task {
    pub atoms: Vec<GroundAtom>,
    pub actions: Vec<CompiledAction>,
    pub init: Bits,
    pub goal: Vec<u32>,
    /// For each atom, the actions having it as a precondition.
    pub consumers: Vec<Vec<u32>>,
    /// Precondition counts and concatenated add lists, laid out flat for
    /// the heuristic's inner loop.
    pub(crate) pre_count: Vec<u32>,
    pub(crate) add_start: Vec<u32>,
    pub(crate) add_flat: Vec<u32>,
}

impl Task {
    /// Grounds `instance` with relaxed-reachability pruning.
    pub fn new(instance: &ProblemInstance, domain: &Domain) -> Self {
        Self::from_actions(instance, domain, ground_instance(instance, domain))
    }

    /// Builds the task over an explicit list of ground actions, kept in the
    /// given order.
    pub fn from_actions(
        instance: &ProblemInstance,
        domain: &Domain,
        actions: Vec<GroundAction>,
    ) -> Self {
        let mut index: HashMap<GroundAtom, u32> = HashMap::new();
        let mut atoms = Vec::new();
        let mut intern = |a: GroundAtom| -> u32 {
            *index.entry(a).or_insert_with_key(|k| {
                atoms.push(k.clone());
                (atoms.len() - 1) as u32
            })
        };
        let init_ids: Vec<u32> = instance.init.iter().cloned().map(&mut intern).collect();
        let goal: Vec<u32> = instance.goal.iter().cloned().map(&mut intern).collect();
        let compiled: Vec<CompiledAction> = actions
            .into_iter()
            .map(|a| {
                let op = domain
                    .operator(&a)
                    .expect("ground actions come from the domain");
                let mut ids = |v: Vec<GroundAtom>| -> Vec<u32> {
                    let mut ids: Vec<u32> = v.into_iter().map(&mut intern).collect();
                    ids.sort_unstable();
                    ids.dedup();
                    ids
                };
                CompiledAction {
                    pre: ids(op.pre),
                    add: ids(op.add),
                    del: ids(op.del),
                    action: a,
                }
            })
            .collect();
        let mut init = Bits::new(atoms.len());
        for i in init_ids {
            init.set(i);
        }
        let mut consumers = vec![Vec::new(); atoms.len()];
        for (ai, a) in compiled.iter().enumerate() {
            for &p in &a.pre {
                consumers[p as usize].push(ai as u32);
            }
        }
        let pre_count = compiled.iter().map(|a| a.pre.len() as u32).collect();
        let mut add_start = Vec::with_capacity(compiled.len() + 1);
        let mut add_flat = Vec::new();
        for a in &compiled {
            add_start.push(add_flat.len() as u32);
            add_flat.extend_from_slice(&a.add);
        }
        add_start.push(add_flat.len() as u32);
        Task {
            atoms,
            actions: compiled,
            init,
            goal,
            consumers,
            pre_count,
            add_start,
            add_flat,
        }
    }

    pub(crate) fn adds(&self, ai: usize) -> &[u32] {
        &self.add_flat[self.add_start[ai] as usize..self.add_start[ai + 1] as usize]
    }

    pub fn is_goal(&self, s: &Bits) -> bool {
        s.all(&self.goal)
    }

    pub fn successor(&self, s: &Bits, a: &CompiledAction) -> Bits {
        let mut next = s.clone();
        for &d in &a.del {
            next.clear(d);
        }
        for &p in &a.add {
            next.set(p);
        }
        next
    }

    pub fn atoms_of<'a>(&'a self, s: &'a Bits) -> impl Iterator<Item = &'a GroundAtom> + 'a {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| s.get(*i as u32))
            .map(|(_, a)| a)
    }
}
