//! `walklab` command-line entry point.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "walklab",
    version,
    about = "Random walks, cores and conductance on sparse random graphs"
)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph and write it as an edge list.
    Gen(GenArgs),
    /// Components, 2-core, decorations and degree-2 paths as JSON.
    Decompose(InputArgs),
    /// Mixing times of the largest component as JSON.
    Walk(WalkArgs),
    /// Conductance profile and mixing-time bounds as JSON.
    Conductance(ConductanceArgs),
    /// Seeded experiment grids, written as CSV plus plot data.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Long induced path between two cubic blobs.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Density {
    /// Edge probability.
    #[arg(long, conflicts_with = "d")]
    pub p: Option<f64>,
    /// Average degree; converted with p = d / n.
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub density: Density,
    /// Degree sequence for the configuration model: a file, or a
    /// comma-separated list.
    #[arg(long, conflicts_with_all = ["n", "p", "d"])]
    pub degrees: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge-list path; the config goes to `<out>.config.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Edge-list file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Holding probability of the walk, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub laziness: f64,
    /// Total-variation threshold, in (0, 1). Default 1/e.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `all`, `sample:K`, or a comma-separated vertex list.
    #[arg(long, default_value = "all")]
    pub starts: String,
    /// Step budget per start.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Seed for sampled starts.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ConductanceArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Maximum number of sets the exact enumeration may visit before the
    /// heuristic takes over.
    #[arg(long, default_value_t = 20_000_000)]
    pub budget: u64,
    /// Constant of the upper bounds.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Comma-separated graph sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub density: Density,
    #[arg(long, default_value_t = 10)]
    pub replicates: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; CSV goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeArg {
    ConstantD,
    Threshold,
    Dense,
}

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Longest degree-2 path interior in the giant.
    Census(GridArgs),
    /// Edge expansion of sampled connected sets.
    Expansion {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Mixing times against the predictors across an n grid.
    Scaling {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "constant-d")]
        regime: RegimeArg,
        /// Step budget per start.
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Skip the conductance profile and bounds.
        #[arg(long)]
        no_conductance: bool,
    },
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// Half-length: the path has 2l + 1 interior vertices.
    #[arg(long, default_value_t = 50)]
    pub l: usize,
    /// Vertices per cubic blob (even).
    #[arg(long, default_value_t = 200)]
    pub expander_n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub walks: u64,
    /// Step budget per start.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flag values: exit 2.
    Usage(String),
    /// Anything else: exit 1.
    Run(String),
}

impl From<walklab::Error> for Failure {
    fn from(e: walklab::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

/// Outcome of a successful run.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Some measurement hit its step budget.
    Censored,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers: must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: --workers: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::dispatch(&cli) {
        Ok(Status::Complete) => ExitCode::SUCCESS,
        Ok(Status::Censored) => {
            eprintln!("warning: some measurements were censored by the step budget");
            ExitCode::from(3)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
