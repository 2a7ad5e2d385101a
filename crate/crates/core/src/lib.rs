//! Task-relevant filtering of household planning problems, STRIPS
//! planning, and multi-robot plan integration.

pub mod action_graph;
pub mod bench_eval;
pub mod filter;
pub mod household;
pub mod multiagent;
pub mod pddl;
pub mod pipeline;
pub mod planner;
pub mod seeder;

pub use action_graph::{build_graph, ActionGraph, Edge, EdgeKind, GraphError};
pub use bench_eval::{
    check_condition, compute_metrics, execute_plan, load_benchmark, ActionSemantics, BenchError,
    ExecutionTrace, GroundTruthCondition, Metrics, TaskRecord, WorldState,
};
pub use filter::{build_filtered_instance, FilterError, FilteredInstance, SeedAction, SeedArg};
pub use multiagent::{
    allocate, decompose, integrate, makespan, Allocation, IntegratedPlan, MultiAgentError, Robot,
    Subtask, Team,
};
pub use pddl::{
    parse_domain, parse_problem, validate_plan, Domain, GroundAction, GroundAtom, PddlError, Plan,
    ProblemInstance,
};
pub use pipeline::{
    run_benchmark, run_pipeline, BenchReport, PipelineConfig, PipelineError, RunReport,
};
pub use planner::{solve, SearchConfig, SearchStats, Solution, SolveError};
pub use seeder::{lexical_seed, llm_seed, SeedProposal, SeederConfig, SeederError};
