//! End-to-end runs: seed, filter, decompose, solve, allocate, bind and
//! integrate, plus the benchmark sweep that executes and scores each record.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action_graph::build_graph;
use crate::bench_eval::{
    compute_metrics, execute_plan, ActionSemantics, BenchError, Category, ExecutionTrace, Metrics,
    TaskRecord,
};
use crate::filter::build_filtered_instance;
use crate::household::{full_team, record_instance};
use crate::multiagent::{
    allocate, bind_plans, decompose, integrate, solve_subtasks, Allocation, Binding, Decomposer,
    IntegratedPlan, MultiAgentError, Subtask, Team,
};
use crate::pddl::{Domain, ProblemInstance};
use crate::planner::{compare_runs, ComparisonReport, SearchConfig};
use crate::seeder::{lexical_seed, llm_seed, ChatClient, SeedProposal, SeederConfig, SeederError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeederKind {
    #[default]
    Lexical,
    Llm,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecomposerKind {
    #[default]
    Rule,
    Llm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub seeder: SeederKind,
    pub decomposer: DecomposerKind,
    pub llm: SeederConfig,
    /// Use lexical seeds when the LLM seeder fails.
    pub fallback: bool,
    /// `false` plans on the full instance.
    pub filter: bool,
    pub search: SearchConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seeder: SeederKind::Lexical,
            decomposer: DecomposerKind::Rule,
            llm: SeederConfig::default(),
            fallback: false,
            filter: true,
            search: SearchConfig {
                max_expansions: 200_000,
                ..SearchConfig::default()
            },
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("seeder: {0}")]
    Seeder(SeederError),
    #[error("team: {0}")]
    Team(MultiAgentError),
    #[error("decompose: {0}")]
    Decompose(MultiAgentError),
    #[error("solve: {0}")]
    Solve(MultiAgentError),
    #[error("allocate: {0}")]
    Allocate(MultiAgentError),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::Seeder(_) => "seeder",
            PipelineError::Team(_) => "team",
            PipelineError::Decompose(_) => "decompose",
            PipelineError::Solve(_) => "solve",
            PipelineError::Allocate(_) => "allocate",
        }
    }

    /// Whether the failure came from the remote model rather than the input.
    pub fn is_external(&self) -> bool {
        let seeder = match self {
            PipelineError::Seeder(e) => e,
            PipelineError::Decompose(MultiAgentError::Seeder(e)) => e,
            _ => return false,
        };
        !matches!(seeder, SeederError::Config(_) | SeederError::NoSeedsFound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterSummary {
    pub kept_actions: Vec<String>,
    pub kept_objects: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    /// Ground actions of the planning instance (the largest subtask grounding).
    pub ground_actions: usize,
    pub expanded: usize,
    /// Total steps over all robots.
    pub sequential_length: usize,
    pub makespan: usize,
    /// Seconds spent from decomposition to integration.
    pub planning_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedProposal>,
    /// `None` when planning ran on the full instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSummary>,
    /// Fallbacks taken along the way.
    pub notes: Vec<String>,
    pub subtasks: Vec<Subtask>,
    pub allocation: Allocation,
    pub binding: Binding,
    pub plan: IntegratedPlan,
    pub stats: RunStats,
}

fn seed(
    instance: &ProblemInstance,
    domain: &Domain,
    config: &PipelineConfig,
    client: Option<&dyn ChatClient>,
    notes: &mut Vec<String>,
) -> Result<Option<SeedProposal>, PipelineError> {
    let text = instance.task_text.as_deref().unwrap_or_default();
    if config.seeder == SeederKind::Llm {
        let r = match client {
            Some(c) => llm_seed(text, domain, instance, c, &config.llm),
            None => Err(SeederError::Config("no model client available".into())),
        };
        match r {
            Ok(p) => return Ok(Some(p)),
            Err(e) if config.fallback => {
                notes.push(format!("llm seeder failed ({e}); using lexical seeds"))
            }
            Err(e) => return Err(PipelineError::Seeder(e)),
        }
    }
    match lexical_seed(text, domain, instance) {
        Ok(p) => Ok(Some(p)),
        Err(e) => {
            notes.push(format!(
                "lexical seeder: {e}; planning on the full instance"
            ));
            Ok(None)
        }
    }
}

/// Runs the pipeline on one instance. Filtering problems fall back to the
/// full instance and are noted in the report; subtasks that cannot be bound
/// to a robot are left in `binding.failed`.
pub fn run_pipeline(
    instance: &ProblemInstance,
    domain: &Domain,
    team: &Team,
    config: &PipelineConfig,
    client: Option<&dyn ChatClient>,
) -> Result<RunReport, PipelineError> {
    team.validate(instance, domain)
        .map_err(PipelineError::Team)?;
    let mut notes = Vec::new();

    let mut seeds = None;
    let mut filter = None;
    let mut work = (instance.clone(), domain.clone());
    if config.filter {
        seeds = seed(instance, domain, config, client, &mut notes)?;
        if let Some(proposal) = &seeds {
            let filtered = build_graph(domain)
                .map_err(Into::into)
                .and_then(|g| build_filtered_instance(instance, domain, &g, &proposal.seeds));
            match filtered {
                Ok(f) => {
                    filter = Some(FilterSummary {
                        kept_actions: f.kept_actions.iter().cloned().collect(),
                        kept_objects: f.kept_objects.iter().cloned().collect(),
                    });
                    work = (f.to_problem(), f.to_domain(domain));
                }
                Err(e) => notes.push(format!("filter: {e}; planning on the full instance")),
            }
        }
    }
    let (problem, dom) = &work;

    let start = Instant::now();
    let decomposer = match (config.decomposer, client) {
        (DecomposerKind::Llm, Some(client)) => Decomposer::Llm {
            client,
            config: &config.llm,
        },
        (DecomposerKind::Llm, None) => {
            return Err(PipelineError::Decompose(MultiAgentError::Seeder(
                SeederError::Config("no model client available".into()),
            )))
        }
        (DecomposerKind::Rule, _) => Decomposer::Rule,
    };
    let mut subtasks = decompose(problem, dom, decomposer).map_err(PipelineError::Decompose)?;
    let stats = solve_subtasks(&mut subtasks, problem, dom, team, &config.search)
        .map_err(PipelineError::Solve)?;
    let allocation = allocate(&subtasks, team, dom).map_err(PipelineError::Allocate)?;
    let binding = bind_plans(&subtasks, &allocation, team, problem, dom, &config.search);
    let plan = integrate(&binding, dom);
    let planning_time = start.elapsed().as_secs_f64();

    if !binding.failed.is_empty() {
        notes.push(format!(
            "no robot could achieve {}",
            binding.failed.join(", ")
        ));
    }
    if plan.fallback {
        notes.push("ordering constraints were cyclic; plan sequentialized".into());
    }
    let run_stats = RunStats {
        ground_actions: stats.iter().map(|s| s.ground_actions).max().unwrap_or(0),
        expanded: stats.iter().map(|s| s.expanded).sum(),
        sequential_length: plan.step_count(),
        makespan: plan.makespan,
        planning_time,
    };
    Ok(RunReport {
        seeds,
        filter,
        notes,
        subtasks,
        allocation,
        binding,
        plan,
        stats: run_stats,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordOutcome {
    pub id: String,
    pub category: Category,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<RunReport>,
    /// Stage error that made the record fail outright.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub trace: ExecutionTrace,
    /// Filtered versus unfiltered single-agent search, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub metrics: Metrics,
    /// Mean planning seconds per category.
    pub planning_time: BTreeMap<Category, f64>,
    pub outcomes: Vec<RecordOutcome>,
}

impl BenchReport {
    /// Metric table with a planning-time column.
    pub fn table(&self) -> String {
        let mut lines: Vec<String> = self.metrics.table().lines().map(str::to_string).collect();
        if let Some(h) = lines.first_mut() {
            h.push_str(&format!(" {:>10}", "Plan (s)"));
        }
        for (line, c) in lines
            .iter_mut()
            .skip(1)
            .zip(self.metrics.per_category.keys())
        {
            let t = self.planning_time.get(c).copied().unwrap_or(0.0);
            line.push_str(&format!(" {t:>10.3}"));
        }
        let n = self.outcomes.len().max(1) as f64;
        let total: f64 = self
            .outcomes
            .iter()
            .filter_map(|o| o.report.as_ref())
            .map(|r| r.stats.planning_time)
            .sum();
        if let Some(last) = lines.last_mut() {
            last.push_str(&format!(" {:>10.3}", total / n));
        }
        lines.join("\n") + "\n"
    }
}

/// Plans, executes and scores one record. Any stage error leaves the scene
/// untouched and is recorded on the outcome.
pub fn evaluate_record(
    record: &TaskRecord,
    domain: &Domain,
    config: &PipelineConfig,
    semantics: &ActionSemantics,
    client: Option<&dyn ChatClient>,
    compare: bool,
) -> RecordOutcome {
    let instance = record_instance(record, domain);
    let team = record
        .team
        .clone()
        .unwrap_or_else(|| full_team(&record.scene, domain));
    let mut outcome = RecordOutcome {
        id: record.id.clone(),
        category: record.category,
        report: None,
        error: None,
        trace: ExecutionTrace::idle(&record.scene),
        comparison: None,
    };
    match run_pipeline(&instance, domain, &team, config, client) {
        Ok(report) => {
            match execute_plan(&record.scene, &report.plan, semantics) {
                Ok(trace) => outcome.trace = trace,
                Err(e) => outcome.error = Some(format!("execute: {e}")),
            }
            outcome.report = Some(report);
        }
        Err(e) => outcome.error = Some(e.to_string()),
    }
    if compare {
        outcome.comparison = Some(compare_record(&instance, domain, config));
    }
    outcome
}

fn compare_record(
    instance: &ProblemInstance,
    domain: &Domain,
    config: &PipelineConfig,
) -> ComparisonReport {
    let seeds = lexical_seed(
        instance.task_text.as_deref().unwrap_or_default(),
        domain,
        instance,
    );
    let filtered = match seeds {
        Ok(p) => build_graph(domain)
            .map_err(Into::into)
            .and_then(|g| build_filtered_instance(instance, domain, &g, &p.seeds)),
        Err(_) => Err(crate::filter::FilterError::EmptySeeds),
    };
    compare_runs(instance, filtered.as_ref(), domain, &config.search)
}

/// Evaluates every record in parallel and scores the results. Outcomes are
/// ordered by record id.
pub fn run_benchmark(
    records: &[TaskRecord],
    domain: &Domain,
    config: &PipelineConfig,
    semantics: &ActionSemantics,
    client: Option<&dyn ChatClient>,
    compare: bool,
) -> Result<BenchReport, BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    let mut sorted: Vec<&TaskRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let outcomes: Vec<RecordOutcome> = sorted
        .par_iter()
        .map(|r| evaluate_record(r, domain, config, semantics, client, compare))
        .collect();
    let owned: Vec<TaskRecord> = sorted.into_iter().cloned().collect();
    let traces: Vec<ExecutionTrace> = outcomes.iter().map(|o| o.trace.clone()).collect();
    let metrics = compute_metrics(&owned, &traces)?;

    let mut times: BTreeMap<Category, (f64, usize)> = BTreeMap::new();
    for o in &outcomes {
        let t = o.report.as_ref().map_or(0.0, |r| r.stats.planning_time);
        let e = times.entry(o.category).or_default();
        e.0 += t;
        e.1 += 1;
    }
    Ok(BenchReport {
        metrics,
        planning_time: times
            .into_iter()
            .map(|(c, (t, n))| (c, t / n as f64))
            .collect(),
        outcomes,
    })
}
