//! Canonical PDDL output: two-space indentation, one literal per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Domain, GroundAtom, Literal, ProblemInstance, TypedVar};

fn typed_vars(vars: &[TypedVar]) -> String {
    vars.iter()
        .map(|v| format!("?{} - {}", v.name, v.ty))
        .collect::<Vec<_>>()
        .join(" ")
}

fn conjunction(out: &mut String, indent: &str, lits: impl Iterator<Item = String>) {
    let lits: Vec<String> = lits.collect();
    if lits.is_empty() {
        out.push_str("(and)");
        return;
    }
    out.push_str("(and");
    for l in lits {
        let _ = write!(out, "\n{indent}{l}");
    }
    out.push(')');
}

pub fn write_domain(domain: &Domain) -> String {
    let mut out = String::new();
    let _ = write!(out, "(define (domain {})", domain.name);
    if !domain.requirements.is_empty() {
        let _ = write!(out, "\n  (:requirements {})", domain.requirements.join(" "));
    }
    if !domain.types.is_empty() {
        // Subtypes grouped by parent first; parentless types must come last
        // since a trailing untyped name has no parent.
        let mut by_parent: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut roots = Vec::new();
        for t in domain.types.names() {
            match domain.types.parent(t) {
                Some(p) => by_parent.entry(p).or_default().push(t),
                None => roots.push(t),
            }
        }
        out.push_str("\n  (:types");
        for (parent, children) in &by_parent {
            let _ = write!(out, "\n    {} - {parent}", children.join(" "));
        }
        if !roots.is_empty() {
            let _ = write!(out, "\n    {}", roots.join(" "));
        }
        out.push(')');
    }
    if !domain.predicates.is_empty() {
        out.push_str("\n  (:predicates");
        for p in &domain.predicates {
            if p.params.is_empty() {
                let _ = write!(out, "\n    ({})", p.name);
            } else {
                let _ = write!(out, "\n    ({} {})", p.name, typed_vars(&p.params));
            }
        }
        out.push(')');
    }
    for a in &domain.actions {
        let _ = write!(out, "\n  (:action {}", a.name);
        let _ = write!(out, "\n    :parameters ({})", typed_vars(&a.params));
        out.push_str("\n    :precondition ");
        conjunction(
            &mut out,
            "      ",
            a.preconditions.iter().map(Literal::to_string),
        );
        out.push_str("\n    :effect ");
        conjunction(
            &mut out,
            "      ",
            a.add_effects
                .iter()
                .map(Literal::to_string)
                .chain(a.del_effects.iter().map(|l| format!("(not {l})"))),
        );
        out.push(')');
    }
    out.push_str(")\n");
    out
}

fn display_atom(problem: &ProblemInstance, a: &GroundAtom) -> String {
    let mut s = format!("({}", a.predicate);
    for arg in &a.args {
        s.push(' ');
        s.push_str(problem.display_name(arg));
    }
    s.push(')');
    s
}

/// Object names keep their original spelling.
pub fn write_problem(problem: &ProblemInstance) -> String {
    let mut out = String::new();
    let _ = write!(out, "(define (problem {})", problem.name);
    let _ = write!(out, "\n  (:domain {})", problem.domain_name);
    out.push_str("\n  (:objects");
    for (o, ty) in &problem.objects {
        let _ = write!(out, "\n    {} - {ty}", problem.display_name(o));
    }
    out.push(')');
    out.push_str("\n  (:init");
    for a in &problem.init {
        let _ = write!(out, "\n    {}", display_atom(problem, a));
    }
    out.push(')');
    out.push_str("\n  (:goal ");
    conjunction(
        &mut out,
        "    ",
        problem.goal.iter().map(|a| display_atom(problem, a)),
    );
    out.push_str("))\n");
    out
}
