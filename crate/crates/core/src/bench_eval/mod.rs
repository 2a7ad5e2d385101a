//! Benchmark records, a symbolic household executor, and task-level
//! metrics (TCR, GCR, ER).

pub mod bridge;
mod exec;
mod world;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

pub use bridge::{condition_goals, instance_to_world, world_atoms, world_to_instance};
pub use exec::{
    apply_step, execute_actions, execute_plan, ActionKind, ActionSemantics, ExecFailure,
    ExecutionTrace, StepRecord,
};
pub use world::{Affordance, OpenState, StateTag, WorldState};

use crate::multiagent::Team;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("no records")]
    NoRecords,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("no world semantics for action `{0}`")]
    UnknownActionKind(String),
    #[error("{records} records but {traces} traces")]
    LengthMismatch { records: usize, traces: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Simple,
    Complex,
    Vague,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Simple, Category::Complex, Category::Vague];

    pub fn label(self) -> &'static str {
        match self {
            Category::Simple => "Simple",
            Category::Complex => "Complex",
            Category::Vague => "Vague",
        }
    }
}

/// Accepts `null`, `"None"` or a tag name in any case.
fn state_or_none<'de, D: Deserializer<'de>>(d: D) -> Result<Option<StateTag>, D::Error> {
    let raw: Option<String> = Option::deserialize(d)?;
    match raw {
        None => Ok(None),
        Some(s) if s.eq_ignore_ascii_case("none") => Ok(None),
        Some(s) => serde_json::from_value(serde_json::Value::String(s.to_uppercase()))
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("unknown state tag `{s}`"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthCondition {
    pub name: String,
    #[serde(default)]
    pub contains: Vec<String>,
    #[serde(default, deserialize_with = "state_or_none")]
    pub state: Option<StateTag>,
    /// At least this many of `contains` must hold; all of them when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_contains: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRecord {
    pub id: String,
    pub category: Category,
    pub description: String,
    pub scene: WorldState,
    pub ground_truth: Vec<GroundTruthCondition>,
    /// Team for this task; callers supply a default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub team: Option<Team>,
}

fn schema(path: String, message: impl Into<String>) -> BenchError {
    BenchError::Schema {
        path,
        message: message.into(),
    }
}

/// Parses and validates a benchmark: a JSON array of task records.
pub fn parse_benchmark(text: &str) -> Result<Vec<TaskRecord>, BenchError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let records: Vec<TaskRecord> = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            schema(path, inner.to_string())
        } else {
            BenchError::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        }
    })?;
    let mut ids = BTreeSet::new();
    for (i, r) in records.iter().enumerate() {
        if !ids.insert(&r.id) {
            return Err(schema(
                format!("[{i}].id"),
                format!("duplicate id `{}`", r.id),
            ));
        }
        if r.ground_truth.is_empty() {
            return Err(schema(format!("[{i}].ground_truth"), "must not be empty"));
        }
        for (j, c) in r.ground_truth.iter().enumerate() {
            if let Some(n) = c.num_contains {
                if n == 0 || n > c.contains.len() {
                    return Err(schema(
                        format!("[{i}].ground_truth[{j}].num_contains"),
                        format!("must be between 1 and {} (got {n})", c.contains.len()),
                    ));
                }
            }
        }
        r.scene
            .check()
            .map_err(|m| schema(format!("[{i}].scene"), m))?;
    }
    Ok(records)
}

pub fn load_benchmark(path: &Path) -> Result<Vec<TaskRecord>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_benchmark(&text)
}

/// Whether `world` satisfies the condition: the state tag holds (if any)
/// and enough of the listed objects are contained in `cond.name`.
pub fn check_condition(
    world: &WorldState,
    cond: &GroundTruthCondition,
) -> Result<bool, BenchError> {
    let name = world
        .resolve(&cond.name)
        .ok_or_else(|| BenchError::UnknownObject(cond.name.clone()))?;
    let state_ok = cond.state.is_none_or(|t| world.has_state(name, t));
    let inside = world.containment.get(name);
    let present = cond
        .contains
        .iter()
        .filter(|o| {
            world
                .resolve(o)
                .is_some_and(|o| inside.is_some_and(|s| s.contains(o)))
        })
        .count();
    let needed = cond.num_contains.unwrap_or(cond.contains.len());
    Ok(state_ok && present >= needed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskMetrics {
    pub id: String,
    pub category: Category,
    pub satisfied: usize,
    pub conditions: usize,
    pub complete: bool,
    pub gcr: f64,
    pub steps: usize,
    pub succeeded: usize,
    /// `None` when no step was executed.
    pub er: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub tasks: usize,
    pub tcr: f64,
    pub gcr: f64,
    /// Pooled over all executed steps; 0 when there were none.
    pub er: f64,
}

impl Summary {
    fn of<'a>(tasks: impl IntoIterator<Item = &'a TaskMetrics>) -> Summary {
        let tasks: Vec<&TaskMetrics> = tasks.into_iter().collect();
        if tasks.is_empty() {
            return Summary::default();
        }
        let n = tasks.len() as f64;
        let steps: usize = tasks.iter().map(|t| t.steps).sum();
        let ok: usize = tasks.iter().map(|t| t.succeeded).sum();
        Summary {
            tasks: tasks.len(),
            tcr: tasks.iter().filter(|t| t.complete).count() as f64 / n,
            gcr: tasks.iter().map(|t| t.gcr).sum::<f64>() / n,
            er: if steps == 0 {
                0.0
            } else {
                ok as f64 / steps as f64
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub tcr: f64,
    pub gcr: f64,
    pub er: f64,
    /// Mean of per-task ER over tasks that executed at least one step.
    pub er_task_mean: f64,
    pub per_category: BTreeMap<Category, Summary>,
    pub per_task: Vec<TaskMetrics>,
}

impl Metrics {
    /// Per-category and overall rates in percent, one row per category.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>8} {:>8} {:>8}",
            "Category", "No. Tasks", "TCR (%)", "GCR (%)", "ER (%)"
        );
        let row = |out: &mut String, label: &str, s: &Summary| {
            let _ = writeln!(
                out,
                "{:<10} {:>9} {:>8.1} {:>8.1} {:>8.1}",
                label,
                s.tasks,
                100.0 * s.tcr,
                100.0 * s.gcr,
                100.0 * s.er
            );
        };
        for c in Category::ALL {
            if let Some(s) = self.per_category.get(&c) {
                row(&mut out, c.label(), s);
            }
        }
        row(
            &mut out,
            "Overall",
            &Summary {
                tasks: self.per_task.len(),
                tcr: self.tcr,
                gcr: self.gcr,
                er: self.er,
            },
        );
        out
    }
}

/// Scores each record against the final world of its trace. A condition
/// naming an object missing from the scene counts as unsatisfied.
pub fn compute_metrics(
    records: &[TaskRecord],
    traces: &[ExecutionTrace],
) -> Result<Metrics, BenchError> {
    if records.len() != traces.len() {
        return Err(BenchError::LengthMismatch {
            records: records.len(),
            traces: traces.len(),
        });
    }
    let per_task: Vec<TaskMetrics> = records
        .iter()
        .zip(traces)
        .map(|(r, t)| {
            let satisfied = r
                .ground_truth
                .iter()
                .filter(|c| check_condition(&t.final_world, c).unwrap_or(false))
                .count();
            let conditions = r.ground_truth.len();
            let (steps, succeeded) = (t.steps.len(), t.successes());
            TaskMetrics {
                id: r.id.clone(),
                category: r.category,
                satisfied,
                conditions,
                complete: satisfied == conditions,
                gcr: if conditions == 0 {
                    0.0
                } else {
                    satisfied as f64 / conditions as f64
                },
                steps,
                succeeded,
                er: (steps > 0).then(|| succeeded as f64 / steps as f64),
            }
        })
        .collect();
    let overall = Summary::of(&per_task);
    let ers: Vec<f64> = per_task.iter().filter_map(|t| t.er).collect();
    let per_category = Category::ALL
        .into_iter()
        .filter(|c| per_task.iter().any(|t| t.category == *c))
        .map(|c| (c, Summary::of(per_task.iter().filter(|t| t.category == c))))
        .collect();
    Ok(Metrics {
        tcr: overall.tcr,
        gcr: overall.gcr,
        er: overall.er,
        er_task_mean: if ers.is_empty() {
            0.0
        } else {
            ers.iter().sum::<f64>() / ers.len() as f64
        },
        per_category,
        per_task,
    })
}
