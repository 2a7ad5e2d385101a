//! Forward-search STRIPS planning over grounded tasks, and the
//! filtered-versus-original comparison harness.

mod heuristic;
mod search;
mod task;

use serde::Serialize;

pub use heuristic::{h_add, HValue, Heuristic};
pub use search::{
    search, solve, SearchConfig, SearchStats, Solution, SolveError, Strategy, TieBreak,
};
pub use task::{Bits, CompiledAction, Task};

use crate::filter::{FilterError, FilteredInstance};
use crate::pddl::{validate_plan, Domain, Plan, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Solved,
    Unsolvable,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub outcome: Outcome,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<Plan>,
}

impl From<Result<Solution, SolveError>> for RunSummary {
    fn from(r: Result<Solution, SolveError>) -> Self {
        match r {
            Ok(sol) => RunSummary {
                outcome: Outcome::Solved,
                stats: sol.stats,
                plan: Some(sol.plan),
            },
            Err(SolveError::Unsolvable { stats }) => RunSummary {
                outcome: Outcome::Unsolvable,
                stats,
                plan: None,
            },
            Err(SolveError::Exhausted { stats }) => RunSummary {
                outcome: Outcome::Exhausted,
                stats,
                plan: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub original: RunSummary,
    pub filtered: RunSummary,
    /// Set when filtering failed and the filtered side re-ran the original
    /// instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fell_back: Option<String>,
    /// Whether the filtered plan validates on the original instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtered_plan_valid: Option<bool>,
}

impl ComparisonReport {
    pub fn goal_satisfaction_matches(&self) -> bool {
        (self.original.outcome == Outcome::Solved)
            == (self.filtered.outcome == Outcome::Solved && self.filtered_plan_valid != Some(false))
    }
}

/// Solves the original and the filtered instance side by side. A filtering
/// error makes the filtered side fall back to the original instance.
pub fn compare_runs(
    instance: &ProblemInstance,
    filtered: Result<&FilteredInstance, &FilterError>,
    domain: &Domain,
    config: &SearchConfig,
) -> ComparisonReport {
    let (fil_problem, fil_domain, fell_back) = match filtered {
        Ok(f) => (f.to_problem(), f.to_domain(domain), None),
        Err(e) => (instance.clone(), domain.clone(), Some(e.to_string())),
    };
    let (original, filtered_run) = rayon::join(
        || solve(instance, domain, config),
        || solve(&fil_problem, &fil_domain, config),
    );
    let filtered_plan_valid = filtered_run
        .as_ref()
        .ok()
        .map(|sol| validate_plan(instance, &sol.plan, domain).valid);
    ComparisonReport {
        original: original.into(),
        filtered: filtered_run.into(),
        fell_back,
        filtered_plan_valid,
    }
}
