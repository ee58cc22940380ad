use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use glasd::benchmarks::{BenchmarkName, Variant};
use glasd::losses::{LossKind, Threshold};
use glasd::optimizer::OptimizerOverrides;

#[derive(Debug, Parser)]
#[command(
    name = "glasd",
    version,
    about = "Gradient-free global optimization and robust correlation estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize a benchmark function on a box or over correlation matrices.
    Optimize(OptimizeArgs),
    /// Estimate a correlation matrix from a CSV file.
    Estimate(EstimateArgs),
    /// Run a grid of benchmark functions and sizes and tabulate the minima.
    Benchmark(BenchmarkArgs),
    /// Run a simulation scenario described by a TOML file.
    Simulate(SimulateArgs),
    /// Count per-column outliers (1.5 IQR fences) in a CSV file.
    OutlierReport(OutlierArgs),
    /// Re-run a command from its run.json record.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory (created if absent).
    #[arg(long, default_value = "glasd-out")]
    pub out: PathBuf,
    /// Overwrite an existing run record in the output directory.
    #[arg(long)]
    pub force: bool,
}

/// Flags shared by every command that runs the optimizer. Unset values fall
/// back to the config file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long = "max-iters")]
    pub max_iters: Option<u64>,
    #[arg(long = "stagnation-window")]
    pub stagnation_window: Option<u64>,
    /// Stagnation tolerance.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "initial-step")]
    pub initial_step: Option<f64>,
    /// Greedy moves only (no exploration).
    #[arg(long)]
    pub asd: bool,
    /// TOML file with `seed`, `starts` and an `[optimizer]` section.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl SearchArgs {
    pub fn overrides(&self) -> OptimizerOverrides {
        OptimizerOverrides {
            max_iterations: self.max_iters,
            stagnation_window: self.stagnation_window,
            tolerance: self.epsilon,
            initial_step: self.initial_step,
            explore: self.asd.then_some(false),
            ..OptimizerOverrides::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// ackley, griewank, rastrigin, rosenbrock or sumsquares.
    #[arg(long = "fn", value_name = "NAME")]
    pub function: BenchmarkName,
    /// box or corr.
    #[arg(long, default_value = "corr")]
    pub variant: Variant,
    /// Matrix size for the corr variant.
    #[arg(long = "M", alias = "m")]
    pub m: Option<usize>,
    /// Dimension for the box variant.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// CSV data, one observation per row; an optional header row is detected.
    pub input: PathBuf,
    #[arg(long)]
    pub loss: Option<LossKind>,
    /// `iqr` or a positive number.
    #[arg(long)]
    pub threshold: Option<Threshold>,
    /// Do not start the first run at the shrunk sample correlation.
    #[arg(long = "no-warm-start")]
    pub no_warm_start: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    /// Functions to run; all five when omitted.
    #[arg(long = "fn", value_name = "NAME", value_delimiter = ',')]
    pub functions: Vec<BenchmarkName>,
    #[arg(long, default_value = "corr")]
    pub variant: Variant,
    /// Matrix sizes (corr) or dimensions (box).
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub sizes: Vec<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Scenario TOML file.
    pub scenario: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long = "max-iters")]
    pub max_iters: Option<u64>,
    #[arg(long = "stagnation-window")]
    pub stagnation_window: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutlierArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// A run.json written by an earlier command.
    pub record: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}
