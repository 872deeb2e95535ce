use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oil_core::bench::Mode;

#[derive(Debug, Parser)]
#[command(name = "oil", version, about = "Optimal information laundering for finite-alphabet models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize the laundering kernels and write the solution as JSON.
    Optimize(OptimizeArgs),
    /// Solve over a list of weights and write the tradeoff curve as CSV.
    Sweep(SweepArgs),
    /// Random Dirichlet output kernels as a non-optimized baseline.
    Benchmark(BenchmarkArgs),
    /// Exact and sampled metrics of a stored solution.
    Evaluate(EvaluateArgs),
    /// Map real values to the indices of a mu +- 3 sigma grid.
    Quantize(QuantizeArgs),
    /// Answer a single query through the laundered model.
    Apply(ApplyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Joint,
    OutputOnly,
    InputOnly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Joint => Mode::Joint,
            ModeArg::OutputOnly => Mode::OutputOnly,
            ModeArg::InputOnly => Mode::InputOnly,
        }
    }
}

/// Model and query distribution shared by most subcommands.
#[derive(Debug, Args)]
pub struct Problem {
    /// Kernel or deterministic-model JSON file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Query distribution JSON file.
    #[arg(long = "input-dist")]
    pub input_dist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub problem: Problem,
    /// Output frequencies of a deterministic model; replaces --model and
    /// --input-dist for output-only laundering.
    #[arg(long, conflicts_with_all = ["model", "input_dist"])]
    pub r: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta2: Option<f64>,
    #[arg(long, value_enum, default_value = "joint")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: Problem,
    /// Comma-separated, strictly increasing weights.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub betas: Vec<f64>,
    #[arg(long, value_enum, default_value = "joint")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Monte Carlo queries for the agreement column.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long = "out-csv")]
    pub out_csv: PathBuf,
    #[arg(long = "out-svg")]
    pub out_svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub problem: Problem,
    /// Comma-separated `a:b` concentration pairs.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dirichlet: Vec<String>,
    #[arg(long, default_value_t = 50)]
    pub replications: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long = "out-csv")]
    pub out_csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Solution JSON written by `optimize`.
    #[arg(long)]
    pub kernels: PathBuf,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    /// A file of numbers, or an inline comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub kernels: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Input symbol label.
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Answer the same query this many times, one label per line.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
}
