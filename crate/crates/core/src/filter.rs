//! Task-relevance filtering: keep the schemas backward-reachable from the
//! seed actions and the objects connected to the seeds through the initial
//! state.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action_graph::{ActionGraph, GraphError};
use crate::pddl::{write_domain, write_problem, Domain, GroundAtom, ProblemInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("no seed actions given")]
    EmptySeeds,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("seed names unknown object `{0}`")]
    UnknownObject(String),
    #[error("filter too aggressive: goal {atom} {reason}")]
    FilterTooAggressive { atom: GroundAtom, reason: String },
}

/// One argument of a seed: a concrete object or the `*` wildcard.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum SeedArg {
    Any,
    Object(String),
}

impl From<String> for SeedArg {
    fn from(s: String) -> Self {
        if s == "*" {
            SeedArg::Any
        } else {
            SeedArg::Object(s.to_lowercase())
        }
    }
}

impl From<SeedArg> for String {
    fn from(a: SeedArg) -> Self {
        match a {
            SeedArg::Any => "*".to_string(),
            SeedArg::Object(o) => o,
        }
    }
}

impl SeedArg {
    pub fn object(&self) -> Option<&str> {
        match self {
            SeedArg::Any => None,
            SeedArg::Object(o) => Some(o),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SeedAction {
    #[serde(rename = "action")]
    pub schema: String,
    pub args: Vec<SeedArg>,
}

impl SeedAction {
    pub fn new(schema: &str, args: &[&str]) -> Self {
        SeedAction {
            schema: schema.to_lowercase(),
            args: args.iter().map(|a| SeedArg::from(a.to_string())).collect(),
        }
    }

    pub fn objects(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(SeedArg::object)
    }
}

impl fmt::Display for SeedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().cloned().map(String::from).collect();
        write!(f, "{}({})", self.schema, args.join(", "))
    }
}

/// The reduced instance. `kept_init` holds exactly the initial atoms over
/// kept objects; the goal and task text are carried over unchanged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilteredInstance {
    #[serde(skip)]
    pub base: ProblemInstance,
    pub kept_actions: BTreeSet<String>,
    pub kept_objects: BTreeSet<String>,
    pub kept_init: BTreeSet<GroundAtom>,
    pub goal: BTreeSet<GroundAtom>,
    pub task_text: Option<String>,
}

impl FilteredInstance {
    /// Standalone problem over the kept objects.
    pub fn to_problem(&self) -> ProblemInstance {
        let mut p = self.base.restrict_objects(&self.kept_objects);
        p.init = self.kept_init.clone();
        p.goal = self.goal.clone();
        p
    }

    /// Domain pruned to the kept schemas.
    pub fn to_domain(&self, domain: &Domain) -> Domain {
        domain.restrict_actions(self.kept_actions.iter().map(String::as_str))
    }

    /// `(domain, problem)` PDDL texts for an external planner.
    pub fn to_pddl(&self, domain: &Domain) -> (String, String) {
        (
            write_domain(&self.to_domain(domain)),
            write_problem(&self.to_problem()),
        )
    }
}

pub fn filter_actions(
    graph: &ActionGraph,
    seeds: &[SeedAction],
) -> Result<BTreeSet<String>, FilterError> {
    if seeds.is_empty() {
        return Err(FilterError::EmptySeeds);
    }
    Ok(graph
        .backward_reachable(seeds.iter().map(|s| s.schema.as_str()))?
        .members)
}

/// Least fixpoint over initial-state co-occurrence: an object joins when an
/// initial atom whose predicate some kept schema mentions links it to an
/// object already kept. Robots are always kept. Afterwards every parameter
/// type of a kept schema that has no kept object admits all its objects.
pub fn relevance_closure(
    instance: &ProblemInstance,
    domain: &Domain,
    kept_actions: &BTreeSet<String>,
    seed_objects: &BTreeSet<String>,
) -> BTreeSet<String> {
    let schemas: Vec<_> = domain
        .actions
        .iter()
        .filter(|a| kept_actions.contains(&a.name))
        .collect();
    let predicates: BTreeSet<&str> = schemas.iter().flat_map(|a| a.predicates()).collect();
    let linking: Vec<&GroundAtom> = instance
        .init
        .iter()
        .filter(|a| predicates.contains(a.predicate.as_str()) && a.args.len() > 1)
        .collect();

    let mut kept: BTreeSet<String> = seed_objects
        .iter()
        .filter(|o| instance.objects.contains_key(*o))
        .cloned()
        .collect();
    kept.extend(instance.robots(domain).map(str::to_string));
    loop {
        let mut grew = false;
        for atom in &linking {
            if atom.args.iter().any(|o| kept.contains(o)) {
                for o in &atom.args {
                    grew |= kept.insert(o.clone());
                }
            }
        }
        if !grew {
            break;
        }
    }

    let param_types: BTreeSet<&str> = schemas
        .iter()
        .flat_map(|a| a.params.iter().map(|p| p.ty.as_str()))
        .collect();
    let mut repair = Vec::new();
    for ty in param_types {
        let covered = kept.iter().any(|o| {
            instance
                .object_type(o)
                .is_some_and(|t| domain.types.is_subtype(t, ty))
        });
        if !covered {
            repair.extend(
                instance
                    .objects_of_type(ty, &domain.types)
                    .map(str::to_string),
            );
        }
    }
    kept.extend(repair);
    kept
}

pub fn build_filtered_instance(
    instance: &ProblemInstance,
    domain: &Domain,
    graph: &ActionGraph,
    seeds: &[SeedAction],
) -> Result<FilteredInstance, FilterError> {
    let kept_actions = filter_actions(graph, seeds)?;
    let mut seed_objects = BTreeSet::new();
    for o in seeds.iter().flat_map(SeedAction::objects) {
        if !instance.objects.contains_key(o) {
            return Err(FilterError::UnknownObject(o.to_string()));
        }
        seed_objects.insert(o.to_string());
    }
    seed_objects.extend(instance.goal.iter().flat_map(|g| g.args.iter().cloned()));

    let kept_objects = relevance_closure(instance, domain, &kept_actions, &seed_objects);
    let kept_init: BTreeSet<GroundAtom> = instance
        .init
        .iter()
        .filter(|a| a.args.iter().all(|o| kept_objects.contains(o)))
        .cloned()
        .collect();

    let achievable: BTreeSet<&str> = domain
        .actions
        .iter()
        .filter(|a| kept_actions.contains(&a.name))
        .flat_map(|a| a.add_effects.iter().map(|l| l.predicate.as_str()))
        .collect();
    for g in &instance.goal {
        if let Some(o) = g.args.iter().find(|o| !kept_objects.contains(*o)) {
            return Err(FilterError::FilterTooAggressive {
                atom: g.clone(),
                reason: format!("mentions excluded object `{o}`"),
            });
        }
        if !kept_init.contains(g) && !achievable.contains(g.predicate.as_str()) {
            return Err(FilterError::FilterTooAggressive {
                atom: g.clone(),
                reason: "has no achiever among the kept actions".to_string(),
            });
        }
    }

    Ok(FilteredInstance {
        base: instance.clone(),
        kept_actions,
        kept_objects,
        kept_init,
        goal: instance.goal.clone(),
        task_text: instance.task_text.clone(),
    })
}
