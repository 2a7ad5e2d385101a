use std::collections::{BTreeSet, HashMap};

use super::{ActionSchema, Domain, GroundAction, GroundAtom, ProblemInstance};

/// Objects admissible for each parameter of `schema`, as declaration indices.
fn candidates(
    schema: &ActionSchema,
    instance: &ProblemInstance,
    domain: &Domain,
) -> Vec<Vec<usize>> {
    schema
        .params
        .iter()
        .map(|p| {
            instance
                .objects
                .values()
                .enumerate()
                .filter(|(_, ty)| domain.types.is_subtype(ty, &p.ty))
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

fn to_action(schema: &ActionSchema, instance: &ProblemInstance, binding: &[usize]) -> GroundAction {
    GroundAction {
        schema: schema.name.clone(),
        args: binding
            .iter()
            .map(|&i| {
                instance
                    .objects
                    .get_index(i)
                    .expect("object index")
                    .0
                    .clone()
            })
            .collect(),
    }
}

/// Every type-consistent binding of every schema, without reachability
/// pruning. Schemas in domain order, bindings in object declaration order.
pub fn enumerate_bindings(instance: &ProblemInstance, domain: &Domain) -> Vec<GroundAction> {
    fn product(cands: &[Vec<usize>], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match cands.split_first() {
            None => out.push(prefix.clone()),
            Some((first, rest)) => {
                for &o in first {
                    prefix.push(o);
                    product(rest, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    for schema in &domain.actions {
        let mut bindings = Vec::new();
        product(
            &candidates(schema, instance, domain),
            &mut Vec::new(),
            &mut bindings,
        );
        out.extend(bindings.iter().map(|b| to_action(schema, instance, b)));
    }
    out
}

struct Joiner<'a> {
    schema: &'a ActionSchema,
    /// Parameter index for every argument of every precondition.
    pre_slots: &'a [Vec<usize>],
    cands: &'a [Vec<usize>],
    allowed: &'a [Vec<bool>],
    reached: &'a HashMap<&'a str, Vec<Vec<usize>>>,
}

impl Joiner<'_> {
    fn run(&self, out: &mut BTreeSet<Vec<usize>>) {
        let mut binding = vec![None; self.schema.params.len()];
        self.join_pre(0, &mut binding, out);
    }

    fn join_pre(&self, i: usize, binding: &mut Vec<Option<usize>>, out: &mut BTreeSet<Vec<usize>>) {
        if i == self.pre_slots.len() {
            self.fill_free(0, binding, out);
            return;
        }
        let pred = self.schema.preconditions[i].predicate.as_str();
        let Some(atoms) = self.reached.get(pred) else {
            return;
        };
        let slots = &self.pre_slots[i];
        'atoms: for args in atoms {
            let mut set_here = Vec::new();
            for (&slot, &obj) in slots.iter().zip(args) {
                match binding[slot] {
                    Some(b) if b == obj => {}
                    Some(_) => {
                        for s in set_here.drain(..) {
                            binding[s] = None;
                        }
                        continue 'atoms;
                    }
                    None => {
                        if !self.allowed[slot][obj] {
                            for s in set_here.drain(..) {
                                binding[s] = None;
                            }
                            continue 'atoms;
                        }
                        binding[slot] = Some(obj);
                        set_here.push(slot);
                    }
                }
            }
            self.join_pre(i + 1, binding, out);
            for s in set_here {
                binding[s] = None;
            }
        }
    }

    fn fill_free(
        &self,
        k: usize,
        binding: &mut Vec<Option<usize>>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if k == binding.len() {
            out.insert(binding.iter().map(|b| b.expect("bound")).collect());
            return;
        }
        if binding[k].is_some() {
            self.fill_free(k + 1, binding, out);
            return;
        }
        for &o in &self.cands[k] {
            binding[k] = Some(o);
            self.fill_free(k + 1, binding, out);
        }
        binding[k] = None;
    }
}

/// Per schema: candidate objects per parameter, the same as membership
/// rows, and the parameter slots of each precondition.
type Prepared = (Vec<Vec<usize>>, Vec<Vec<bool>>, Vec<Vec<usize>>);

/// Ground actions whose preconditions are reachable from the initial state
/// under the delete relaxation. Order matches [`enumerate_bindings`].
pub fn ground_instance(instance: &ProblemInstance, domain: &Domain) -> Vec<GroundAction> {
    let obj_index: HashMap<&str, usize> = instance
        .objects
        .keys()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    let n_obj = instance.objects.len();

    let prepared: Vec<Prepared> = domain
        .actions
        .iter()
        .map(|schema| {
            let cands = candidates(schema, instance, domain);
            let allowed = cands
                .iter()
                .map(|c| {
                    let mut row = vec![false; n_obj];
                    for &i in c {
                        row[i] = true;
                    }
                    row
                })
                .collect();
            let pre_slots = schema
                .preconditions
                .iter()
                .map(|l| {
                    l.args
                        .iter()
                        .map(|v| {
                            schema
                                .params
                                .iter()
                                .position(|p| p.name == v.name)
                                .expect("param")
                        })
                        .collect()
                })
                .collect();
            (cands, allowed, pre_slots)
        })
        .collect();

    let encode = |a: &GroundAtom| -> Option<Vec<usize>> {
        a.args
            .iter()
            .map(|o| obj_index.get(o.as_str()).copied())
            .collect()
    };
    let mut reached_set: BTreeSet<(String, Vec<usize>)> = instance
        .init
        .iter()
        .filter_map(|a| Some((a.predicate.clone(), encode(a)?)))
        .collect();

    loop {
        let mut by_pred: HashMap<&str, Vec<Vec<usize>>> = HashMap::new();
        for (p, args) in &reached_set {
            by_pred.entry(p.as_str()).or_default().push(args.clone());
        }
        let mut found: Vec<BTreeSet<Vec<usize>>> = Vec::with_capacity(domain.actions.len());
        for (schema, (cands, allowed, pre_slots)) in domain.actions.iter().zip(&prepared) {
            let mut out = BTreeSet::new();
            if !cands.iter().any(Vec::is_empty) {
                Joiner {
                    schema,
                    pre_slots,
                    cands,
                    allowed,
                    reached: &by_pred,
                }
                .run(&mut out);
            }
            found.push(out);
        }
        drop(by_pred);

        let mut grew = false;
        for (schema, bindings) in domain.actions.iter().zip(&found) {
            for b in bindings {
                for lit in &schema.add_effects {
                    let args = lit
                        .args
                        .iter()
                        .map(|v| {
                            b[schema
                                .params
                                .iter()
                                .position(|p| p.name == v.name)
                                .expect("param")]
                        })
                        .collect();
                    grew |= reached_set.insert((lit.predicate.clone(), args));
                }
            }
        }
        if !grew {
            return domain
                .actions
                .iter()
                .zip(&found)
                .flat_map(|(schema, bindings)| {
                    bindings.iter().map(|b| to_action(schema, instance, b))
                })
                .collect();
        }
    }
}
