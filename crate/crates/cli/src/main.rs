use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "scaleplan",
    version,
    about = "Filter, plan and evaluate household tasks for robot teams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a domain (and optionally a problem) and print it back canonically.
    Parse {
        domain: PathBuf,
        problem: Option<PathBuf>,
    },
    /// Build the action graph of a domain and print edge counts.
    Graph {
        domain: PathBuf,
        /// Write the graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write nodes and edges as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Seed lexically and show what the relevance filter keeps.
    Filter {
        domain: PathBuf,
        problem: PathBuf,
        /// Natural-language task used for seeding.
        #[arg(long)]
        task: Option<String>,
        /// Write the filtered domain and problem PDDL here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Single-agent search on a problem.
    Solve {
        domain: PathBuf,
        problem: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Print plan and stats as one JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Run the full pipeline on a problem or a benchmark record.
    Run(RunArgs),
    /// Run the pipeline over every record of a benchmark and score it.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Gbfs,
    Bfs,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HeuristicArg {
    Hadd,
    Goalcount,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SeederArg {
    Lexical,
    Llm,
}

#[derive(Args, Clone, Default)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, value_enum)]
    pub heuristic: Option<HeuristicArg>,
    #[arg(long)]
    pub max_expansions: Option<usize>,
}

#[derive(Args, Clone, Default)]
pub struct PipelineArgs {
    /// Domain PDDL; defaults to the shipped household domain.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Pipeline configuration JSON. Flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub seeder: Option<SeederArg>,
    /// Decompose goals with the model instead of one subtask per goal atom.
    #[arg(long)]
    pub llm_decompose: bool,
    /// Fall back to lexical seeds when the model fails.
    #[arg(long)]
    pub fallback: bool,
    /// Plan on the full instance.
    #[arg(long)]
    pub no_filter: bool,
    /// Model endpoint base URL; overrides SCALEPLAN_API_BASE.
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Log model transcripts to `trace.jsonl` in the output directory.
    #[arg(long, requires = "out_dir")]
    pub trace: bool,
    /// Directory for all written artifacts.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct RunArgs {
    /// Problem PDDL to plan for.
    #[arg(
        long,
        conflicts_with = "benchmark",
        required_unless_present = "benchmark"
    )]
    pub problem: Option<PathBuf>,
    /// Task description used for seeding a PDDL problem.
    #[arg(long, requires = "problem")]
    pub task: Option<String>,
    /// Team JSON; defaults to every robot able to run every action.
    #[arg(long)]
    pub team: Option<PathBuf>,
    /// Benchmark JSON holding the record to run.
    #[arg(long, requires = "record")]
    pub benchmark: Option<PathBuf>,
    /// Id of the record to run; its scene is executed and scored.
    #[arg(long, requires = "benchmark")]
    pub record: Option<String>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Args)]
pub struct BenchArgs {
    pub benchmark: PathBuf,
    /// Also solve each record with and without filtering and report both.
    #[arg(long)]
    pub filter_compare: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Parse { domain, problem } => commands::parse(&domain, problem.as_deref()),
        Command::Graph { domain, dot, json } => {
            commands::graph(&domain, dot.as_deref(), json.as_deref())
        }
        Command::Filter {
            domain,
            problem,
            task,
            out_dir,
        } => commands::filter(&domain, &problem, task.as_deref(), out_dir.as_deref()),
        Command::Solve {
            domain,
            problem,
            search,
            json,
        } => commands::solve(&domain, &problem, &search, json),
        Command::Run(args) => commands::run(&args),
        Command::Bench(args) => commands::bench(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Bad arguments are input errors; help and version are not errors.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(cli.command)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(CliError::Internal(String::new()).code()),
    }
}
