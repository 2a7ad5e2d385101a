//! Shared generators and brute-force oracles for the integration tests.
//! Everything here works on its own small domain model so the oracles do not
//! lean on the library code they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use indexmap::IndexMap;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use scaleplan_core::pddl::{parse_domain, Domain, GroundAction, GroundAtom, ProblemInstance};
use scaleplan_core::SeedAction;

pub const OBJECT: &str = "object";

/// A literal over schema parameters, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lit {
    pub pred: String,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ActionModel {
    pub name: String,
    /// `(variable, type)`.
    pub params: Vec<(String, String)>,
    pub pre: Vec<Lit>,
    pub add: Vec<Lit>,
    pub del: Vec<Lit>,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    /// `(type, parent)`, parents declared first.
    pub types: Vec<(String, String)>,
    pub preds: Vec<(String, Vec<String>)>,
    pub actions: Vec<ActionModel>,
}

impl Model {
    pub fn parent(&self, t: &str) -> Option<&str> {
        self.types
            .iter()
            .find(|(n, _)| n == t)
            .map(|(_, p)| p.as_str())
    }

    pub fn sub(&self, a: &str, b: &str) -> bool {
        if a == b || b == OBJECT {
            return true;
        }
        let mut cur = a;
        while let Some(p) = self.parent(cur) {
            if p == b {
                return true;
            }
            cur = p;
        }
        false
    }

    pub fn compatible(&self, a: &str, b: &str) -> bool {
        self.sub(a, b) || self.sub(b, a)
    }

    pub fn all_types(&self) -> Vec<String> {
        std::iter::once(OBJECT.to_string())
            .chain(self.types.iter().map(|(t, _)| t.clone()))
            .collect()
    }

    fn slot_types(&self, pred: &str) -> &[String] {
        &self
            .preds
            .iter()
            .find(|(p, _)| p == pred)
            .expect("declared predicate")
            .1
    }

    pub fn pddl(&self) -> String {
        let mut s = format!(
            "(define (domain {})\n  (:requirements :strips :typing)\n",
            self.name
        );
        if !self.types.is_empty() {
            let ts: Vec<String> = self
                .types
                .iter()
                .map(|(t, p)| format!("{t} - {p}"))
                .collect();
            s += &format!("  (:types {})\n", ts.join(" "));
        }
        s += "  (:predicates";
        for (p, slots) in &self.preds {
            let args: Vec<String> = slots
                .iter()
                .enumerate()
                .map(|(i, t)| format!("?x{i} - {t}"))
                .collect();
            s += &format!(
                " ({p}{}{})",
                if args.is_empty() { "" } else { " " },
                args.join(" ")
            );
        }
        s += ")\n";
        for a in &self.actions {
            let lit = |l: &Lit| {
                let args: Vec<String> = l
                    .args
                    .iter()
                    .map(|&i| format!("?{}", a.params[i].0))
                    .collect();
                format!(
                    "({}{}{})",
                    l.pred,
                    if args.is_empty() { "" } else { " " },
                    args.join(" ")
                )
            };
            let params: Vec<String> = a
                .params
                .iter()
                .map(|(v, t)| format!("?{v} - {t}"))
                .collect();
            s += &format!(
                "  (:action {}\n    :parameters ({})\n",
                a.name,
                params.join(" ")
            );
            let pre: Vec<String> = a.pre.iter().map(lit).collect();
            s += &format!("    :precondition (and {})\n", pre.join(" "));
            let eff: Vec<String> = a
                .add
                .iter()
                .map(lit)
                .chain(a.del.iter().map(|l| format!("(not {})", lit(l))))
                .collect();
            s += &format!("    :effect (and {}))\n", eff.join(" "));
        }
        s + ")\n"
    }

    pub fn domain(&self) -> Domain {
        let text = self.pddl();
        parse_domain(&text)
            .unwrap_or_else(|e| panic!("generated domain fails to parse: {e}\n{text}"))
    }
}

/// A fixture from a compact notation:
/// types `"truck:vehicle vehicle"` (parent defaults to `object`),
/// predicates `"at(vehicle loc) free()"`, actions
/// `"move(?t:truck ?a:loc ?b:loc) pre at(?t ?a) add at(?t ?b) del at(?t ?a)"`.
pub fn hand_model(name: &str, types: &str, preds: &str, actions: &[&str]) -> Model {
    let types = types
        .split_whitespace()
        .map(|t| match t.split_once(':') {
            Some((n, p)) => (n.to_string(), p.to_string()),
            None => (t.to_string(), OBJECT.to_string()),
        })
        .collect();
    let preds = split_calls(preds)
        .into_iter()
        .map(|(p, args)| (p, args.split_whitespace().map(str::to_string).collect()))
        .collect();
    let actions = actions
        .iter()
        .map(|text| {
            let (head, body) = text.split_once(')').expect("action head");
            let (name, params) = head.split_once('(').expect("action params");
            let params: Vec<(String, String)> = params
                .split_whitespace()
                .map(|p| {
                    let (v, t) = p
                        .trim_start_matches('?')
                        .split_once(':')
                        .expect("typed parameter");
                    (v.to_string(), t.to_string())
                })
                .collect();
            let mut a = ActionModel {
                name: name.trim().to_string(),
                params,
                pre: vec![],
                add: vec![],
                del: vec![],
            };
            let mut section = "";
            for tok in body.split_inclusive(')') {
                let tok = tok.trim();
                for kw in ["pre", "add", "del"] {
                    if let Some(rest) = tok.strip_prefix(kw).filter(|r| r.starts_with(' ')) {
                        section = kw;
                        push_lit(&mut a, section, rest.trim());
                        break;
                    }
                }
                if !tok.starts_with("pre ")
                    && !tok.starts_with("add ")
                    && !tok.starts_with("del ")
                    && !tok.is_empty()
                {
                    push_lit(&mut a, section, tok);
                }
            }
            a
        })
        .collect();
    Model {
        name: name.to_string(),
        types,
        preds,
        actions,
    }
}

fn split_calls(text: &str) -> Vec<(String, String)> {
    text.split_inclusive(')')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (n, rest) = t.split_once('(').expect("call syntax");
            (n.trim().to_string(), rest.trim_end_matches(')').to_string())
        })
        .collect()
}

fn push_lit(a: &mut ActionModel, section: &str, call: &str) {
    let (pred, args) = split_calls(call).pop().expect("literal");
    let args = args
        .split_whitespace()
        .map(|v| {
            let v = v.trim_start_matches('?');
            a.params
                .iter()
                .position(|(p, _)| p == v)
                .expect("literal variable is a parameter")
        })
        .collect();
    let l = Lit { pred, args };
    match section {
        "pre" => a.pre.push(l),
        "add" => a.add.push(l),
        "del" => a.del.push(l),
        _ => panic!("literal outside a section"),
    }
}

/// `(from, to, strict)` for every edge the two rules produce, evaluated
/// literally over all ordered pairs. A schema without preconditions gets no
/// strict in-edge, since the "all preconditions covered" test would hold
/// vacuously.
pub fn oracle_edges(model: &Model) -> BTreeSet<(String, String, bool)> {
    let lit_types = |a: &ActionModel, l: &Lit| -> Vec<String> {
        l.args.iter().map(|&i| a.params[i].1.clone()).collect()
    };
    let covers = |a1: &ActionModel, e: &Lit, a2: &ActionModel, p: &Lit| {
        e.pred == p.pred
            && lit_types(a1, e)
                .iter()
                .zip(lit_types(a2, p))
                .all(|(x, y)| model.compatible(x, &y))
    };
    let acts = &model.actions;
    let strict = |i: usize, j: usize| {
        !acts[j].pre.is_empty()
            && acts[j]
                .pre
                .iter()
                .all(|p| acts[i].add.iter().any(|e| covers(&acts[i], e, &acts[j], p)))
    };
    let overlap = |i: usize, j: usize| {
        acts[j]
            .pre
            .iter()
            .any(|p| acts[i].add.iter().any(|e| covers(&acts[i], e, &acts[j], p)))
    };
    let n = acts.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if strict(i, j) {
                out.insert((acts[i].name.clone(), acts[j].name.clone(), true));
            }
        }
    }
    let has_out = |i: usize| (0..n).any(|j| strict(i, j));
    let has_in = |j: usize| (0..n).any(|i| strict(i, j));
    for i in 0..n {
        for j in 0..n {
            if !strict(i, j) && overlap(i, j) && (!has_in(j) || !has_out(i)) {
                out.insert((acts[i].name.clone(), acts[j].name.clone(), false));
            }
        }
    }
    out
}

/// At most `max_schemas` schemas over at most `max_preds` predicates of
/// arity ≤ 2, schemas with at most 3 parameters.
pub fn random_model(rng: &mut StdRng, max_schemas: usize, max_preds: usize) -> Model {
    let mut model = Model {
        name: format!("rand{}", rng.random::<u32>()),
        types: vec![],
        preds: vec![],
        actions: vec![],
    };
    for i in 0..rng.random_range(0..=3) {
        let all = model.all_types();
        let parent = all.choose(rng).expect("object is always there").clone();
        model.types.push((format!("t{i}"), parent));
    }
    let all = model.all_types();
    for i in 0..rng.random_range(1..=max_preds) {
        let arity = rng.random_range(0..=2);
        let slots = (0..arity)
            .map(|_| all.choose(rng).unwrap().clone())
            .collect();
        model.preds.push((format!("p{i}"), slots));
    }
    for i in 0..rng.random_range(1..=max_schemas) {
        let mut a = ActionModel {
            name: format!("a{i}"),
            params: vec![],
            pre: vec![],
            add: vec![],
            del: vec![],
        };
        let (np, na, nd) = (
            rng.random_range(0..=3),
            rng.random_range(0..=2),
            rng.random_range(0..=2),
        );
        for (count, section) in [(np, 0), (na, 1), (nd, 2)] {
            for _ in 0..count {
                let Some(l) = random_lit(rng, &model, &mut a) else {
                    continue;
                };
                let list = match section {
                    0 => &mut a.pre,
                    1 => &mut a.add,
                    _ => &mut a.del,
                };
                if !list.contains(&l) {
                    list.push(l);
                }
            }
        }
        let add = a.add.clone();
        a.del.retain(|l| !add.contains(l));
        model.actions.push(a);
    }
    model
}

fn random_lit(rng: &mut StdRng, model: &Model, a: &mut ActionModel) -> Option<Lit> {
    let (pred, slots) = model.preds.choose(rng)?.clone();
    let mut args = Vec::with_capacity(slots.len());
    for slot in &slots {
        let fitting: Vec<usize> = (0..a.params.len())
            .filter(|&i| model.sub(&a.params[i].1, slot))
            .collect();
        let reuse = !fitting.is_empty() && (a.params.len() >= 3 || rng.random_bool(0.6));
        if reuse {
            args.push(*fitting.choose(rng).unwrap());
        } else if a.params.len() < 3 {
            let candidates: Vec<String> = model
                .all_types()
                .into_iter()
                .filter(|t| model.sub(t, slot))
                .collect();
            let ty = candidates.choose(rng).unwrap().clone();
            a.params.push((format!("v{}", a.params.len()), ty));
            args.push(a.params.len() - 1);
        } else {
            return None;
        }
    }
    Some(Lit { pred, args })
}

/// A ground operator computed by the oracle itself.
#[derive(Debug, Clone)]
pub struct OracleOp {
    pub action: GroundAction,
    pub pre: BTreeSet<GroundAtom>,
    pub add: BTreeSet<GroundAtom>,
    pub del: BTreeSet<GroundAtom>,
}

pub type AtomSet = BTreeSet<GroundAtom>;

/// Every type-consistent grounding of every schema.
pub fn oracle_ground(model: &Model, objects: &IndexMap<String, String>) -> Vec<OracleOp> {
    let mut out = Vec::new();
    for a in &model.actions {
        let cands: Vec<Vec<&String>> = a
            .params
            .iter()
            .map(|(_, t)| {
                objects
                    .iter()
                    .filter(|(_, ot)| model.sub(ot, t))
                    .map(|(o, _)| o)
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; cands.len()];
        if cands.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let binding: Vec<String> = idx.iter().zip(&cands).map(|(&i, c)| c[i].clone()).collect();
            let ground = |ls: &[Lit]| -> AtomSet {
                ls.iter()
                    .map(|l| GroundAtom::new(&l.pred, l.args.iter().map(|&i| binding[i].clone())))
                    .collect()
            };
            out.push(OracleOp {
                action: GroundAction::new(&a.name, binding.clone()),
                pre: ground(&a.pre),
                add: ground(&a.add),
                del: ground(&a.del),
            });
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < cands[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

pub fn oracle_step(state: &AtomSet, op: &OracleOp) -> Option<AtomSet> {
    if !op.pre.is_subset(state) {
        return None;
    }
    let mut next: AtomSet = state.difference(&op.del).cloned().collect();
    next.extend(op.add.iter().cloned());
    Some(next)
}

/// Replays `steps` from `init`; `None` if a step is unknown or inapplicable.
pub fn oracle_replay(ops: &[OracleOp], init: &AtomSet, steps: &[GroundAction]) -> Option<AtomSet> {
    let by_action: HashMap<&GroundAction, &OracleOp> = ops.iter().map(|o| (&o.action, o)).collect();
    steps
        .iter()
        .try_fold(init.clone(), |s, a| oracle_step(&s, by_action.get(a)?))
}

/// Number of states reachable from `init`, or `None` past `cap`.
pub fn reachable_states(ops: &[OracleOp], init: &AtomSet, cap: usize) -> Option<usize> {
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init.clone()]);
    while let Some(s) = queue.pop_front() {
        for op in ops {
            if let Some(n) = oracle_step(&s, op) {
                if seen.insert(n.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(n);
                }
            }
        }
    }
    Some(seen.len())
}

/// Shortest plan length by iterative deepening, with a table of the depth
/// budget each state was already searched with.
pub fn iddfs_length(
    ops: &[OracleOp],
    init: &AtomSet,
    goal: &AtomSet,
    max_depth: usize,
) -> Option<usize> {
    fn dfs(
        ops: &[OracleOp],
        s: &AtomSet,
        goal: &AtomSet,
        budget: usize,
        table: &mut HashMap<AtomSet, usize>,
    ) -> bool {
        if goal.is_subset(s) {
            return true;
        }
        if budget == 0 || table.get(s).is_some_and(|&b| b >= budget) {
            return false;
        }
        table.insert(s.clone(), budget);
        ops.iter()
            .filter_map(|op| oracle_step(s, op))
            .any(|n| dfs(ops, &n, goal, budget - 1, table))
    }
    (0..=max_depth).find(|&d| dfs(ops, init, goal, d, &mut HashMap::new()))
}

/// A random instance of `model` whose goal was reached by a random walk, so
/// it is solvable. `None` when the walk could not change anything.
pub fn random_problem(rng: &mut StdRng, model: &Model) -> Option<ProblemInstance> {
    let mut objects = IndexMap::new();
    for t in model.all_types() {
        for i in 0..rng.random_range(0..=2) {
            objects.insert(format!("{t}_{i}"), t.clone());
        }
    }
    if objects.is_empty() {
        objects.insert("object_0".to_string(), OBJECT.to_string());
    }
    let mut init = AtomSet::new();
    for (p, slots) in &model.preds {
        let mut tuples: Vec<Vec<String>> = vec![vec![]];
        for slot in slots {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    objects
                        .iter()
                        .filter(|(_, ty)| model.sub(ty, slot))
                        .map(move |(o, _)| {
                            let mut t = t.clone();
                            t.push(o.clone());
                            t
                        })
                })
                .collect();
        }
        for t in tuples {
            if rng.random_bool(0.35) {
                init.insert(GroundAtom::new(p, t));
            }
        }
    }
    let ops = oracle_ground(model, &objects);
    let mut state = init.clone();
    for _ in 0..rng.random_range(1..=5) {
        let next: Vec<AtomSet> = ops
            .iter()
            .filter_map(|op| oracle_step(&state, op))
            .collect();
        match next.choose(rng) {
            Some(n) => state = n.clone(),
            None => break,
        }
    }
    let fresh: Vec<&GroundAtom> = state.difference(&init).collect();
    if fresh.is_empty() {
        return None;
    }
    let k = rng.random_range(1..=fresh.len().min(2));
    let goal: AtomSet = fresh
        .choose_multiple(rng, k)
        .map(|a| (*a).clone())
        .collect();
    Some(ProblemInstance {
        name: "rand".into(),
        domain_name: model.name.clone(),
        objects,
        init,
        goal,
        task_text: None,
        display: BTreeMap::new(),
    })
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// The 24 hand-built edge-rule fixtures.
pub fn hand_models() -> Vec<Model> {
    vec![
        hand_model("empty", "", "p()", &[]),
        hand_model("single", "", "p() q()", &["a() pre p() add q()"]),
        hand_model(
            "pick",
            "robot obj loc",
            "at(robot loc) at-obj(obj loc) holding(robot obj)",
            &["pick(?r:robot ?o:obj ?l:loc) pre at(?r ?l) at-obj(?o ?l) add holding(?r ?o) del at-obj(?o ?l)"],
        ),
        hand_model(
            "kitchen",
            "robot thing",
            "holding(robot thing) sliced(thing) knife(thing) placed(thing)",
            &[
                "pickup(?r:robot ?k:thing) pre knife(?k) add holding(?r ?k)",
                "slice(?r:robot ?k:thing) pre holding(?r ?k) add sliced(?k)",
                "place(?r:robot ?o:thing) pre sliced(?o) add placed(?o)",
            ],
        ),
        hand_model(
            "move-pick",
            "robot obj loc",
            "at(robot loc) at-obj(obj loc) holding(robot obj)",
            &[
                "move(?r:robot ?a:loc ?b:loc) pre at(?r ?a) add at(?r ?b) del at(?r ?a)",
                "pick(?r:robot ?o:obj ?l:loc) pre at(?r ?l) at-obj(?o ?l) add holding(?r ?o) del at-obj(?o ?l)",
            ],
        ),
        hand_model(
            "cycle",
            "",
            "p() q()",
            &["a() pre q() add p() del q()", "b() pre p() add q() del p()"],
        ),
        hand_model("self-loop", "", "p()", &["a() pre p() add p()"]),
        hand_model(
            "subtype",
            "vehicle truck:vehicle",
            "ready(vehicle) moved(vehicle)",
            &["prep(?v:vehicle) pre moved(?v) add ready(?v)", "drive(?t:truck) pre ready(?t) add moved(?t)"],
        ),
        hand_model(
            "siblings",
            "vehicle truck:vehicle car:vehicle",
            "ready(vehicle) done(vehicle)",
            &["prep(?t:truck) add ready(?t)", "go(?c:car) pre ready(?c) add done(?c)"],
        ),
        hand_model(
            "deep-chain",
            "a b:a c:b d:c",
            "p(a) q(a)",
            &["mk(?x:d) add p(?x)", "use(?y:b) pre p(?y) add q(?y)"],
        ),
        hand_model(
            "partial-cover",
            "",
            "p() q() r()",
            &["a() add p()", "b() add q()", "c() pre p() q() add r()"],
        ),
        hand_model(
            "strict-and-relaxed",
            "",
            "p() q() r()",
            &["a() add p() q()", "b() add p()", "c() pre p() q() add r()"],
        ),
        hand_model(
            "gated",
            "",
            "p() q() r() s()",
            &["a() add p() q() s()", "b() add p()", "c() pre p() q() add r()", "d() pre s() add p()"],
        ),
        hand_model(
            "delete-only",
            "",
            "p() q()",
            &["a() pre q() del p()", "b() pre p() add q()"],
        ),
        hand_model(
            "binary-order",
            "x y",
            "rel(x y) done(x)",
            &["link(?a:x ?b:y) add rel(?a ?b)", "fin(?a:x ?b:y) pre rel(?a ?b) add done(?a)"],
        ),
        hand_model(
            "mismatched-slot",
            "x y:x z:x",
            "rel(x x) ok(x)",
            &["mk(?a:y ?b:y) add rel(?a ?b)", "use(?a:z ?b:y) pre rel(?a ?b) add ok(?a)"],
        ),
        hand_model(
            "no-preconditions",
            "",
            "p() q()",
            &["a() add p()", "b() add q()"],
        ),
        hand_model(
            "fan-in",
            "",
            "p() q() r() g()",
            &["a() add p()", "b() add q()", "c() add r()", "d() pre p() q() r() add g()"],
        ),
        hand_model(
            "fan-out",
            "",
            "p() x() y() z()",
            &["a() add p()", "b() pre p() add x()", "c() pre p() add y()", "d() pre p() add z()"],
        ),
        hand_model(
            "diamond",
            "",
            "s() l() r() g()",
            &["a() pre s() add l() r()", "b() pre l() add g()", "c() pre r() add g()", "d() pre g() add s()"],
        ),
        hand_model(
            "household-mini",
            "robot thing",
            "near(robot thing) holding(robot thing) in(thing thing) opened(thing) closed(thing) hand-free(robot)",
            &[
                "goto(?r:robot ?a:thing ?b:thing) pre near(?r ?a) add near(?r ?b) del near(?r ?a)",
                "open(?r:robot ?o:thing) pre near(?r ?o) closed(?o) add opened(?o) del closed(?o)",
                "pickup(?r:robot ?o:thing ?c:thing) pre near(?r ?o) hand-free(?r) in(?o ?c) add holding(?r ?o) del hand-free(?r) in(?o ?c)",
                "putin(?r:robot ?o:thing ?c:thing) pre holding(?r ?o) near(?r ?c) opened(?c) add in(?o ?c) hand-free(?r) del holding(?r ?o)",
            ],
        ),
        hand_model(
            "object-slot",
            "robot",
            "at(object) seen(robot)",
            &["look(?r:robot) pre at(?r) add seen(?r)", "place(?o:object) add at(?o)"],
        ),
        hand_model(
            "two-strict-preds",
            "",
            "p() q() r()",
            &["a() add p()", "b() add p()", "c() pre p() add q()", "d() pre q() p() add r()"],
        ),
        hand_model(
            "relaxed-both-ways",
            "",
            "p() q() r() s()",
            &["a() pre q() r() add p()", "b() pre p() s() add q()"],
        ),
    ]
}

/// The fixed 50-instance planning suite: random domains, each with one
/// walk-generated (hence solvable) problem.
pub fn planner_suite() -> Vec<(Model, ProblemInstance)> {
    let mut r = rng(0x9_1a22);
    let mut out = Vec::new();
    while out.len() < 50 {
        let model = random_model(&mut r, 6, 5);
        if let Some(p) = random_problem(&mut r, &model) {
            out.push((model, p));
        }
    }
    out
}

/// One or two seeds over random schemas, binding each argument to a fitting
/// object 30% of the time.
pub fn random_seeds(r: &mut StdRng, model: &Model, p: &ProblemInstance) -> Vec<SeedAction> {
    let n = r.random_range(1..=2);
    (0..n)
        .map(|_| {
            let a = model.actions.choose(r).unwrap();
            let args: Vec<String> = a
                .params
                .iter()
                .map(|(_, ty)| {
                    let fitting: Vec<&String> = p
                        .objects
                        .iter()
                        .filter(|(_, ot)| model.sub(ot, ty))
                        .map(|(o, _)| o)
                        .collect();
                    match fitting.choose(r) {
                        Some(o) if r.random_bool(0.3) => (*o).clone(),
                        _ => "*".to_string(),
                    }
                })
                .collect();
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            SeedAction::new(&a.name, &args)
        })
        .collect()
}

/// A random solvable instance plus random seeds; `None` when the walk made
/// no progress.
pub fn filter_case(seed: u64) -> Option<(Model, Domain, ProblemInstance, Vec<SeedAction>)> {
    let mut r = rng(seed);
    let model = random_model(&mut r, 5, 5);
    let p = random_problem(&mut r, &model)?;
    let seeds = random_seeds(&mut r, &model, &p);
    let d = model.domain();
    Some((model, d, p, seeds))
}
