use std::fs;
use std::path::{Path, PathBuf};

use glasd::benchmarks::{BenchmarkName, Variant};
use glasd::losses::{LossKind, LossSpec, Threshold};
use glasd::optimizer::OptimizerOverrides;
use glasd::sim::ScenarioSpec;
use serde::{Deserialize, Serialize};

use crate::args::{BenchmarkArgs, EstimateArgs, OptimizeArgs, SearchArgs, SimulateArgs};
use crate::config;
use crate::error::CliError;

const DEFAULT_STARTS: usize = 10;

/// A fully resolved command: everything needed to reproduce its artifacts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "spec", rename_all = "kebab-case")]
pub enum RunSpec {
    Optimize(OptimizeSpec),
    Estimate(EstimateSpec),
    Benchmark(BenchmarkSuiteSpec),
    Simulate(ScenarioSpec),
    OutlierReport(OutlierSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    pub function: BenchmarkName,
    pub variant: Variant,
    /// Box dimension, or matrix size for the corr variant.
    pub dim: usize,
    pub starts: usize,
    pub seed: u64,
    pub optimizer: OptimizerOverrides,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSpec {
    pub input: PathBuf,
    pub loss: LossSpec,
    pub starts: usize,
    pub seed: u64,
    pub warm_start: bool,
    pub optimizer: OptimizerOverrides,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSuiteSpec {
    pub functions: Vec<BenchmarkName>,
    pub variant: Variant,
    pub sizes: Vec<usize>,
    pub starts: usize,
    pub seed: u64,
    pub optimizer: OptimizerOverrides,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutlierSpec {
    pub input: PathBuf,
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |starts: usize| {
            if starts == 0 {
                Err(CliError::Usage("--starts must be at least 1".into()))
            } else {
                Ok(())
            }
        };
        match self {
            RunSpec::Optimize(s) => {
                positive(s.starts)?;
                let min = if s.variant == Variant::Corr { 2 } else { 1 };
                if s.dim < min {
                    return Err(CliError::Usage(format!("dimension must be at least {min}")));
                }
                Ok(())
            }
            RunSpec::Estimate(s) => {
                positive(s.starts)?;
                if s.loss.kind != LossKind::Gaussian {
                    if let Threshold::Fixed(_) = s.loss.threshold {
                        s.loss.fixed_threshold()?;
                    }
                }
                Ok(())
            }
            RunSpec::Benchmark(s) => {
                positive(s.starts)?;
                let min = if s.variant == Variant::Corr { 2 } else { 1 };
                if s.functions.is_empty() || s.sizes.is_empty() || s.sizes.iter().any(|&d| d < min)
                {
                    return Err(CliError::Usage(format!(
                        "need at least one function and sizes of at least {min}"
                    )));
                }
                Ok(())
            }
            RunSpec::Simulate(s) => Ok(s.validate()?),
            RunSpec::OutlierReport(_) => Ok(()),
        }
    }
}

/// Flags win over the config file, which wins over the defaults.
struct Common {
    seed: u64,
    starts: usize,
    optimizer: OptimizerOverrides,
    file: config::FileConfig,
}

fn common(search: &SearchArgs) -> Result<Common, CliError> {
    let file = config::load(search.config.as_deref())?;
    Ok(Common {
        seed: search.seed.or(file.seed).unwrap_or(0),
        starts: search.starts.or(file.starts).unwrap_or(DEFAULT_STARTS),
        optimizer: file.optimizer.merged_with(&search.overrides()),
        file,
    })
}

pub fn resolve_optimize(a: &OptimizeArgs) -> Result<RunSpec, CliError> {
    let c = common(&a.search)?;
    let dim = match a.variant {
        Variant::Corr => a.m.or(a.dim),
        Variant::Box => a.dim.or(a.m),
    }
    .ok_or_else(|| CliError::Usage("give the size with --M (corr) or --dim (box)".into()))?;
    Ok(RunSpec::Optimize(OptimizeSpec {
        function: a.function,
        variant: a.variant,
        dim,
        starts: c.starts,
        seed: c.seed,
        optimizer: c.optimizer,
    }))
}

pub fn resolve_estimate(a: &EstimateArgs) -> Result<RunSpec, CliError> {
    let c = common(&a.search)?;
    let kind = a.loss.or(c.file.loss).unwrap_or(LossKind::Gaussian);
    let threshold = a
        .threshold
        .or(c.file.threshold)
        .unwrap_or(Threshold::IqrAuto);
    Ok(RunSpec::Estimate(EstimateSpec {
        input: a.input.clone(),
        loss: LossSpec::new(kind, threshold),
        starts: c.starts,
        seed: c.seed,
        warm_start: !a.no_warm_start,
        optimizer: c.optimizer,
    }))
}

pub fn resolve_benchmark(a: &BenchmarkArgs) -> Result<RunSpec, CliError> {
    let c = common(&a.search)?;
    let functions = if a.functions.is_empty() {
        BenchmarkName::ALL.to_vec()
    } else {
        a.functions.clone()
    };
    Ok(RunSpec::Benchmark(BenchmarkSuiteSpec {
        functions,
        variant: a.variant,
        sizes: a.sizes.clone(),
        starts: c.starts,
        seed: c.seed,
        optimizer: c.optimizer,
    }))
}

pub fn resolve_simulate(a: &SimulateArgs) -> Result<RunSpec, CliError> {
    let mut spec = config::load_scenario(&a.scenario)?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    if let Some(starts) = a.starts {
        spec.starts = starts;
    }
    if let Some(r) = a.replicates {
        spec.replicates = r;
    }
    let flags = OptimizerOverrides {
        max_iterations: a.max_iters,
        stagnation_window: a.stagnation_window,
        tolerance: a.epsilon,
        ..OptimizerOverrides::default()
    };
    spec.optimizer = spec.optimizer.merged_with(&flags);
    Ok(RunSpec::Simulate(spec))
}

/// The `run` member of a `run.json` record.
#[derive(Deserialize)]
struct Record {
    run: RunSpec,
}

pub fn read_record(path: &Path) -> Result<RunSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let record: Record = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not a run record: {e}", path.display())))?;
    Ok(record.run)
}
