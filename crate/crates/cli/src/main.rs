//! Scenario-driven front end: simulate trajectories, classify operators,
//! enumerate subgroups and invariant subgroups, measure convergence rates
//! and Cesàro averages. Reports are machine-readable (JSON/CSV) and
//! byte-deterministic for a fixed scenario and seed.
//!
//! Exit codes: 0 success, 2 validation, 3 capacity, 4 non-convergence.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gqso::ErrorCategory;

mod commands;
mod output;
mod scenario;

use output::Sink;
use scenario::Scenario;

#[derive(Debug)]
pub enum Failure {
    Core(gqso::Error),
    Usage(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e.category() {
                ErrorCategory::Validation => 2,
                ErrorCategory::Capacity => 3,
                ErrorCategory::NonConvergence => 4,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "gqso",
    version,
    about = "Quadratic stochastic operators over finite Abelian groups: \
             simulation, classification, and convergence measurement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON); flags below override its fields
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Cyclic orders as inline JSON (e.g. "[2,3]") or a file path
    #[arg(long)]
    group: Option<String>,
    /// Heredity measure as inline JSON object or a file path
    #[arg(long)]
    mu: Option<String>,
    /// Numeric backend: rational (exact) or float
    #[arg(long)]
    backend: Option<String>,
    /// Number of initial points to sample (with --seed), or inline
    /// JSON/file with explicit points
    #[arg(long)]
    points: Option<String>,
    /// RNG seed; required whenever points are sampled
    #[arg(long)]
    seed: Option<u64>,
    /// Steps to simulate / iterations to measure
    #[arg(long)]
    n: Option<usize>,
    /// Convergence tolerance; for simulate it enables limit classification
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration budget for convergence checks
    #[arg(long)]
    budget: Option<usize>,
    /// Directory for output files (defaults to stdout)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output format for series and trajectories
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl RunArgs {
    fn resolve(&self) -> Result<Scenario, Failure> {
        Scenario::resolve(
            self.scenario.as_deref(),
            self.group.as_deref(),
            self.mu.as_deref(),
            self.backend.as_deref(),
            self.points.as_deref(),
            self.seed,
            self.n,
            self.tol,
            self.budget,
        )
    }
}

#[derive(Args)]
struct SubgroupsArgs {
    /// Cyclic orders as inline JSON (e.g. "[12]") or a file path
    #[arg(long)]
    group: String,
    /// Exhaustive-search bound on the group order
    #[arg(long, default_value_t = gqso::DEFAULT_ENUMERATION_BOUND)]
    bound: u64,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct InvarianceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// The set A as a JSON array of elements (defaults to the support of --mu)
    #[arg(long)]
    set: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the operator from each initial point and export trajectories
    Simulate(RunArgs),
    /// Report regularity, invariant subgroups, periodic orbits, fixed points
    Classify(RunArgs),
    /// List all subgroups of a group
    Subgroups(SubgroupsArgs),
    /// List the subgroups invariant for a set (or a measure's support)
    Invariance(InvarianceArgs),
    /// Per-step distance and order-of-convergence series (float backend)
    Rate(RunArgs),
    /// Cesàro averages of each trajectory
    Ergodic(RunArgs),
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate(args) => {
            let sc = args.resolve()?;
            let sink = Sink::new(args.out_dir.clone());
            commands::simulate(&sc, args.format.unwrap_or(Format::Csv), &sink)
        }
        Command::Classify(args) => {
            let sc = args.resolve()?;
            let sink = Sink::new(args.out_dir.clone());
            commands::classify(&sc, &sink)
        }
        Command::Subgroups(args) => {
            let value = scenario::json_arg(&args.group)?;
            let group = gqso::codec::group_from_json(&value).map_err(Failure::Core)?;
            let sink = Sink::new(args.out_dir.clone());
            commands::subgroups(&group, args.bound, &sink)
        }
        Command::Invariance(args) => {
            let sc = args.run.resolve()?;
            let sink = Sink::new(args.run.out_dir.clone());
            commands::invariance(&sc, args.set.as_deref(), &sink)
        }
        Command::Rate(args) => {
            let sc = args.resolve()?;
            let sink = Sink::new(args.out_dir.clone());
            commands::rate(&sc, args.format.unwrap_or(Format::Csv), &sink)
        }
        Command::Ergodic(args) => {
            let sc = args.resolve()?;
            let sink = Sink::new(args.out_dir.clone());
            commands::ergodic(&sc, args.format.unwrap_or(Format::Json), &sink)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
