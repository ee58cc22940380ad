//! The `glasd` command-line tool.
//!
//! Every command resolves its flags and config file into a [`RunSpec`],
//! executes it, and writes the spec to `run.json` next to its artifacts so
//! that `glasd replay` can reproduce the run. Apart from `timing.*`, all
//! artifacts depend only on the spec.

pub mod args;
mod commands;
mod config;
mod error;
mod output;
mod spec;

use clap::Parser;

pub use args::Cli;
pub use error::CliError;
pub use spec::{BenchmarkSuiteSpec, EstimateSpec, OptimizeSpec, OutlierSpec, RunSpec};

use args::Command;
use output::OutDir;

/// Parses `std::env::args`, runs the command, and returns the exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (spec, output) = match cli.command {
        Command::Optimize(a) => (spec::resolve_optimize(&a)?, a.output),
        Command::Estimate(a) => (spec::resolve_estimate(&a)?, a.output),
        Command::Benchmark(a) => (spec::resolve_benchmark(&a)?, a.output),
        Command::Simulate(a) => (spec::resolve_simulate(&a)?, a.output),
        Command::OutlierReport(a) => (
            RunSpec::OutlierReport(OutlierSpec { input: a.input }),
            a.output,
        ),
        Command::Replay(a) => (spec::read_record(&a.record)?, a.output),
    };
    let out = OutDir::prepare(&output.out, output.force)?;
    execute(&spec, &out)
}

/// Runs a resolved spec, writing artifacts into `out`.
pub fn execute(spec: &RunSpec, out: &OutDir) -> Result<(), CliError> {
    spec.validate()?;
    match spec {
        RunSpec::Optimize(s) => commands::optimize(s, out),
        RunSpec::Estimate(s) => commands::estimate(s, out),
        RunSpec::Benchmark(s) => commands::benchmark(s, out),
        RunSpec::Simulate(s) => commands::simulate(s, out),
        RunSpec::OutlierReport(s) => commands::outlier_report(s, out),
    }
}
