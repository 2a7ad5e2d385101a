//! Domain-level action graph over lifted schemas, with strict and relaxed
//! enablement edges and backward reachability from terminal actions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{ActionSchema, Domain, Literal, TypeHierarchy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("predicate `{predicate}` used with arity {left} and {right}")]
    ArityMismatch {
        predicate: String,
        left: usize,
        right: usize,
    },
    #[error("unknown terminal action `{0}`")]
    UnknownTerminal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionGraph {
    /// Schema names in domain order.
    pub nodes: Vec<String>,
    /// Sorted by `(from, to)`; at most one edge per ordered pair.
    pub edges: Vec<Edge>,
}

/// Does add-effect `eff` (of one schema) satisfy precondition `pre` (of
/// another)? Lifted: predicate names match and argument types unify.
pub fn covers(eff: &Literal, pre: &Literal, types: &TypeHierarchy) -> Result<bool, GraphError> {
    if eff.predicate != pre.predicate {
        return Ok(false);
    }
    if eff.args.len() != pre.args.len() {
        return Err(GraphError::ArityMismatch {
            predicate: eff.predicate.clone(),
            left: eff.args.len(),
            right: pre.args.len(),
        });
    }
    Ok(eff
        .args
        .iter()
        .zip(&pre.args)
        .all(|(e, p)| types.unifiable(&e.ty, &p.ty)))
}

fn strict_rule(
    a1: &ActionSchema,
    a2: &ActionSchema,
    types: &TypeHierarchy,
) -> Result<bool, GraphError> {
    if a2.preconditions.is_empty() {
        return Ok(false);
    }
    for pre in &a2.preconditions {
        let mut covered = false;
        for eff in &a1.add_effects {
            covered |= covers(eff, pre, types)?;
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

fn overlaps(
    a1: &ActionSchema,
    a2: &ActionSchema,
    types: &TypeHierarchy,
) -> Result<bool, GraphError> {
    let mut any = false;
    for pre in &a2.preconditions {
        for eff in &a1.add_effects {
            any |= covers(eff, pre, types)?;
        }
    }
    Ok(any)
}

/// Strict edges first over every ordered pair, then relaxed edges gated on
/// the finished strict edge set.
pub fn build_graph(domain: &Domain) -> Result<ActionGraph, GraphError> {
    let types = &domain.types;
    let acts = &domain.actions;
    let n = acts.len();
    let mut strict = vec![vec![false; n]; n];
    for (i, a1) in acts.iter().enumerate() {
        for (j, a2) in acts.iter().enumerate() {
            strict[i][j] = strict_rule(a1, a2, types)?;
        }
    }
    let has_out: Vec<bool> = (0..n).map(|i| strict[i].iter().any(|&b| b)).collect();
    let has_in: Vec<bool> = (0..n).map(|j| (0..n).any(|i| strict[i][j])).collect();

    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let kind = if strict[i][j] {
                EdgeKind::Strict
            } else if (!has_in[j] || !has_out[i]) && overlaps(&acts[i], &acts[j], types)? {
                EdgeKind::Relaxed
            } else {
                continue;
            };
            edges.insert((acts[i].name.clone(), acts[j].name.clone()), kind);
        }
    }
    Ok(ActionGraph {
        nodes: acts.iter().map(|a| a.name.clone()).collect(),
        edges: edges
            .into_iter()
            .map(|((from, to), kind)| Edge { from, to, kind })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachableSet {
    pub terminals: BTreeSet<String>,
    pub members: BTreeSet<String>,
    /// Edges followed backwards while discovering members.
    pub witness_edges: Vec<Edge>,
}

impl ActionGraph {
    pub fn contains(&self, node: &str) -> bool {
        self.nodes.iter().any(|n| n == node)
    }

    pub fn edge(&self, from: &str, to: &str) -> Option<EdgeKind> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.kind)
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// Backward DFS from `terminals` over both edge kinds.
    pub fn backward_reachable<'a>(
        &self,
        terminals: impl IntoIterator<Item = &'a str>,
    ) -> Result<ReachableSet, GraphError> {
        let mut incoming: BTreeMap<&str, Vec<&Edge>> = BTreeMap::new();
        for e in &self.edges {
            incoming.entry(e.to.as_str()).or_default().push(e);
        }
        let mut terms = BTreeSet::new();
        for t in terminals {
            if !self.contains(t) {
                return Err(GraphError::UnknownTerminal(t.to_string()));
            }
            terms.insert(t.to_string());
        }
        let mut members: BTreeSet<String> = BTreeSet::new();
        let mut witness_edges = Vec::new();
        let mut stack: Vec<&str> = terms.iter().rev().map(String::as_str).collect();
        while let Some(node) = stack.pop() {
            if !members.insert(node.to_string()) {
                continue;
            }
            for e in incoming.get(node).into_iter().flatten().rev() {
                if !members.contains(&e.from) {
                    witness_edges.push((*e).clone());
                    stack.push(&e.from);
                }
            }
        }
        witness_edges.sort();
        witness_edges.dedup();
        Ok(ReachableSet {
            terminals: terms,
            members,
            witness_edges,
        })
    }

    /// DOT rendering with lexicographically ordered nodes and edges.
    pub fn to_dot(&self) -> String {
        if self.nodes.is_empty() {
            return "digraph actions { }".to_string();
        }
        let mut nodes: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        nodes.sort_unstable();
        let mut out = String::from("digraph actions {\n");
        for n in nodes {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Strict => "solid",
                EdgeKind::Relaxed => "dashed",
            };
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [style={style}];", e.from, e.to);
        }
        out.push('}');
        out
    }
}

pub fn backward_reachable<'a>(
    graph: &ActionGraph,
    terminals: impl IntoIterator<Item = &'a str>,
) -> Result<ReachableSet, GraphError> {
    graph.backward_reachable(terminals)
}
