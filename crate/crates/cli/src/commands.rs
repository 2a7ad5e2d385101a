use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use scaleplan_core::action_graph::EdgeKind;
use scaleplan_core::bench_eval::{load_benchmark, ActionSemantics, BenchError, TaskRecord};
use scaleplan_core::household::{self, full_team, record_instance};
use scaleplan_core::multiagent::linearize_round_robin;
use scaleplan_core::pddl::{write_domain, write_problem};
use scaleplan_core::pipeline::{DecomposerKind, SeederKind};
use scaleplan_core::planner::{Heuristic, Strategy, Task};
use scaleplan_core::seeder::{ChatClient, HttpChatClient};
use scaleplan_core::{
    build_filtered_instance, build_graph, compute_metrics, execute_plan, lexical_seed,
    parse_domain, parse_problem, run_benchmark, run_pipeline, validate_plan, Domain, PddlError,
    PipelineConfig, Plan, ProblemInstance, SearchConfig, SeederError, Team,
};

use crate::{BenchArgs, HeuristicArg, PipelineArgs, RunArgs, SearchArgs, SeederArg, StrategyArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    External(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Io(_) => 2,
            CliError::External(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(CliError::Io(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

macro_rules! outln {
    () => { emit("\n") };
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    write(&dir.join(name), &(text + "\n"))
}

fn out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn pddl_error(path: &Path, e: PddlError) -> CliError {
    match e.position() {
        Some(_) => CliError::Input(format!("{}:{e}", path.display())),
        None => CliError::Input(format!("{}: {e}", path.display())),
    }
}

fn load_domain(path: &Path) -> Result<Domain, CliError> {
    parse_domain(&read(path)?).map_err(|e| pddl_error(path, e))
}

fn load_problem(path: &Path, domain: &Domain) -> Result<ProblemInstance, CliError> {
    parse_problem(&read(path)?, domain).map_err(|e| pddl_error(path, e))
}

fn bench_error(path: &Path, e: BenchError) -> CliError {
    match e {
        BenchError::Io { .. } => CliError::Io(e.to_string()),
        BenchError::Parse { .. } => CliError::Input(format!("{}:{e}", path.display())),
        e => CliError::Input(format!("{}: {e}", path.display())),
    }
}

fn search_config(base: SearchConfig, args: &SearchArgs) -> SearchConfig {
    let mut c = base;
    match args.strategy {
        Some(StrategyArg::Bfs) => {
            c = SearchConfig {
                max_expansions: c.max_expansions,
                ..SearchConfig::bfs()
            }
        }
        Some(StrategyArg::Gbfs) => c.strategy = Strategy::Gbfs,
        None => {}
    }
    if let Some(h) = args.heuristic {
        c.heuristic = match h {
            HeuristicArg::Hadd => Heuristic::Hadd,
            HeuristicArg::Goalcount => Heuristic::Goalcount,
            HeuristicArg::Zero => Heuristic::Zero,
        };
    }
    if let Some(n) = args.max_expansions {
        c.max_expansions = n;
    }
    c
}

pub fn parse(domain: &Path, problem: Option<&Path>) -> Result<(), CliError> {
    let d = load_domain(domain)?;
    emit(&write_domain(&d))?;
    if let Some(p) = problem {
        let p = load_problem(p, &d)?;
        outln!()?;
        emit(&write_problem(&p))?;
    }
    Ok(())
}

pub fn graph(domain: &Path, dot: Option<&Path>, json_out: Option<&Path>) -> Result<(), CliError> {
    let d = load_domain(domain)?;
    let g = build_graph(&d).map_err(|e| CliError::Input(format!("{}: {e}", domain.display())))?;
    if let Some(path) = dot {
        write(path, &(g.to_dot() + "\n"))?;
    }
    if let Some(path) = json_out {
        let text =
            serde_json::to_string_pretty(&g).map_err(|e| CliError::Internal(e.to_string()))?;
        write(path, &(text + "\n"))?;
    }
    let count = |k: EdgeKind| g.edges.iter().filter(|e| e.kind == k).count();
    outln!(
        "nodes {} strict {} relaxed {}",
        g.nodes.len(),
        count(EdgeKind::Strict),
        count(EdgeKind::Relaxed)
    )?;
    Ok(())
}

pub fn filter(
    domain: &Path,
    problem: &Path,
    task: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let d = load_domain(domain)?;
    let p = load_problem(problem, &d)?;
    let text = task.or(p.task_text.as_deref()).unwrap_or_default();
    let proposal = lexical_seed(text, &d, &p).map_err(|e| CliError::Input(e.to_string()))?;
    let g = build_graph(&d).map_err(|e| CliError::Input(e.to_string()))?;
    let f = build_filtered_instance(&p, &d, &g, &proposal.seeds)
        .map_err(|e| CliError::Input(e.to_string()))?;

    let seeds: Vec<String> = proposal.seeds.iter().map(|s| s.to_string()).collect();
    outln!("seeds: {}", seeds.join(" "))?;
    outln!(
        "kept actions ({}): {}",
        f.kept_actions.len(),
        join(&f.kept_actions)
    )?;
    outln!(
        "kept objects ({}): {}",
        f.kept_objects.len(),
        join(&f.kept_objects)
    )?;
    let before = Task::new(&p, &d).actions.len();
    let after = Task::new(&f.to_problem(), &f.to_domain(&d)).actions.len();
    outln!("ground actions: {before} -> {after}")?;
    if let Some(dir) = out {
        out_dir(dir)?;
        let (dt, pt) = f.to_pddl(&d);
        write(&dir.join("domain.pddl"), &dt)?;
        write(&dir.join("problem.pddl"), &pt)?;
    }
    Ok(())
}

fn join<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    items
        .into_iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn solve(
    domain: &Path,
    problem: &Path,
    args: &SearchArgs,
    as_json: bool,
) -> Result<(), CliError> {
    let d = load_domain(domain)?;
    let p = load_problem(problem, &d)?;
    let config = search_config(SearchConfig::default(), args);
    let sol = scaleplan_core::solve(&p, &d, &config).map_err(|e| CliError::Input(e.to_string()))?;
    if !validate_plan(&p, &sol.plan, &d).valid {
        return Err(CliError::Internal(
            "search returned a plan that does not validate".into(),
        ));
    }
    if as_json {
        outln!("{}", json!({"plan": sol.plan, "stats": sol.stats}))?;
    } else {
        for a in &sol.plan.steps {
            outln!("{a}")?;
        }
        eprintln!(
            "length {} expanded {} generated {} ground actions {} in {:.3}s",
            sol.plan.len(),
            sol.stats.expanded,
            sol.stats.generated,
            sol.stats.ground_actions,
            sol.stats.wall_time
        );
    }
    Ok(())
}

fn pipeline_config(args: &PipelineArgs) -> Result<PipelineConfig, CliError> {
    let mut c = match &args.config {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| {
            CliError::Input(format!(
                "{}:{}:{}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?,
        None => PipelineConfig::default(),
    };
    match args.seeder {
        Some(SeederArg::Lexical) => c.seeder = SeederKind::Lexical,
        Some(SeederArg::Llm) => c.seeder = SeederKind::Llm,
        None => {}
    }
    if args.llm_decompose {
        c.decomposer = DecomposerKind::Llm;
    }
    c.fallback |= args.fallback;
    if args.no_filter {
        c.filter = false;
    }
    if let Some(e) = &args.endpoint {
        c.llm.endpoint_url = Some(e.clone());
    }
    if let Some(m) = &args.model {
        c.llm.model_name = m.clone();
    }
    c.search = search_config(c.search, &args.search);
    Ok(c)
}

fn domain_of(args: &PipelineArgs) -> Result<Domain, CliError> {
    match &args.domain {
        Some(path) => load_domain(path),
        None => Ok(household::domain()),
    }
}

/// A model client when the configuration needs one.
fn client(
    config: &PipelineConfig,
    args: &PipelineArgs,
) -> Result<Option<HttpChatClient>, CliError> {
    if config.seeder != SeederKind::Llm && config.decomposer != DecomposerKind::Llm {
        return Ok(None);
    }
    let c = match HttpChatClient::new(config.llm.clone()) {
        Ok(c) => c,
        Err(e) if config.fallback && config.decomposer != DecomposerKind::Llm => {
            eprintln!("note: llm seeder unavailable ({e}); using lexical seeds");
            return Ok(None);
        }
        Err(e @ SeederError::Config(_)) => return Err(CliError::Input(format!("seeder: {e}"))),
        Err(e) => return Err(CliError::External(format!("seeder: {e}"))),
    };
    match (&args.out_dir, args.trace) {
        (Some(dir), true) => {
            let path = dir.join("trace.jsonl");
            c.with_trace(&path)
                .map(Some)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        _ => Ok(Some(c)),
    }
}

fn find_record(path: &Path, id: &str) -> Result<TaskRecord, CliError> {
    let records = load_benchmark(path).map_err(|e| bench_error(path, e))?;
    records
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| CliError::Input(format!("{}: no record with id `{id}`", path.display())))
}

fn load_team(path: &Path) -> Result<Team, CliError> {
    Team::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let pa = &args.pipeline;
    let d = domain_of(pa)?;
    let config = pipeline_config(pa)?;
    if let Some(dir) = &pa.out_dir {
        out_dir(dir)?;
    }

    let (instance, record) = match (&args.problem, &args.benchmark, &args.record) {
        (Some(problem), _, _) => {
            let mut p = load_problem(problem, &d)?;
            if let Some(t) = &args.task {
                p.task_text = Some(t.clone());
            }
            (p, None)
        }
        (None, Some(bench), Some(id)) => {
            let r = find_record(bench, id)?;
            (record_instance(&r, &d), Some(r))
        }
        _ => {
            return Err(CliError::Input(
                "either --problem or --benchmark with --record is required".into(),
            ))
        }
    };
    let team = match (&args.team, &record) {
        (Some(path), _) => load_team(path)?,
        (None, Some(r)) => r.team.clone().unwrap_or_else(|| full_team(&r.scene, &d)),
        (None, None) => Team::uniform(&instance, &d),
    };

    let http = client(&config, pa)?;
    let report = run_pipeline(
        &instance,
        &d,
        &team,
        &config,
        http.as_ref().map(|c| c as &dyn ChatClient),
    )
    .map_err(|e| {
        if e.is_external() {
            CliError::External(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    })?;
    for n in &report.notes {
        eprintln!("note: {n}");
    }

    let order = linearize_round_robin(&report.plan)
        .ok_or_else(|| CliError::Internal("integrated plan has cyclic orderings".into()))?;
    let linear = Plan::new(report.plan.actions(&order));
    let check = validate_plan(&instance, &linear, &d);
    if let Some(i) = check.failed_step {
        return Err(CliError::Internal(format!(
            "step {i} of the integrated plan is not executable"
        )));
    }

    let metrics = match &record {
        Some(r) => {
            let trace = execute_plan(&r.scene, &report.plan, &ActionSemantics::household())
                .map_err(|e| CliError::Input(format!("execute: {e}")))?;
            Some(
                compute_metrics(std::slice::from_ref(r), &[trace])
                    .map_err(|e| CliError::Internal(e.to_string()))?,
            )
        }
        None => None,
    };

    if let Some(dir) = &pa.out_dir {
        write_json(dir, "plan.json", &linear)?;
        write_json(dir, "integrated.json", &report.plan)?;
        write_json(dir, "stats.json", &report.stats)?;
        write_json(dir, "report.json", &report)?;
        if let Some(m) = &metrics {
            write_json(dir, "metrics.json", m)?;
        }
    }

    if pa.json {
        outln!(
            "{}",
            json!({"report": report, "goal_satisfied": check.goal_satisfied, "metrics": metrics})
        )?;
        return Ok(());
    }
    let mut out = String::new();
    for (robot, steps) in &report.plan.tracks {
        for (i, a) in steps.iter().enumerate() {
            let _ = writeln!(out, "{robot} {i:>3}  {a}");
        }
    }
    let s = &report.stats;
    let _ = writeln!(
        out,
        "subtasks {} steps {} makespan {} ground actions {} expanded {} in {:.3}s",
        report.subtasks.len(),
        s.sequential_length,
        s.makespan,
        s.ground_actions,
        s.expanded,
        s.planning_time
    );
    let _ = writeln!(out, "goal satisfied: {}", check.goal_satisfied);
    if let Some(m) = &metrics {
        out.push_str(&m.table());
    }
    emit(&out)?;
    Ok(())
}

pub fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let pa = &args.pipeline;
    let d = domain_of(pa)?;
    let config = pipeline_config(pa)?;
    if let Some(dir) = &pa.out_dir {
        out_dir(dir)?;
    }
    let records = load_benchmark(&args.benchmark).map_err(|e| bench_error(&args.benchmark, e))?;
    let http = client(&config, pa)?;
    let report = run_benchmark(
        &records,
        &d,
        &config,
        &ActionSemantics::household(),
        http.as_ref().map(|c| c as &dyn ChatClient),
        args.filter_compare,
    )
    .map_err(|e| CliError::Input(e.to_string()))?;

    for o in &report.outcomes {
        if let Some(e) = &o.error {
            eprintln!("note: {}: {e}", o.id);
        }
    }
    if let Some(dir) = &pa.out_dir {
        write_json(dir, "metrics.json", &report.metrics)?;
        write_json(dir, "bench.json", &report)?;
    }
    if pa.json {
        outln!(
            "{}",
            serde_json::to_string(&report).map_err(|e| CliError::Internal(e.to_string()))?
        )?;
        return Ok(());
    }
    emit(&report.table())?;
    if args.filter_compare {
        outln!()?;
        outln!(
            "{:<16} {:>11} {:>11} {:>9} {:>9} {:>10} {:>10}",
            "Record",
            "Original",
            "Filtered",
            "Ground",
            "Ground'",
            "Expanded",
            "Expanded'"
        )?;
        for o in &report.outcomes {
            let Some(c) = &o.comparison else { continue };
            outln!(
                "{:<16} {:>11} {:>11} {:>9} {:>9} {:>10} {:>10}",
                o.id,
                format!("{:?}", c.original.outcome),
                format!("{:?}", c.filtered.outcome),
                c.original.stats.ground_actions,
                c.filtered.stats.ground_actions,
                c.original.stats.expanded,
                c.filtered.stats.expanded
            )?;
        }
    }
    Ok(())
}
