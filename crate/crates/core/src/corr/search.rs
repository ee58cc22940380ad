use std::fmt::Display;
use std::time::Instant;

use rayon::prelude::*;

use super::{corr_from_angles, default_angle_box, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::optimizer::{minimize, Fallible, OptimizerConfig, RunRecord};
use crate::seed::derive_seed;

/// Multi-start search settings over `dim x dim` correlation matrices.
#[derive(Clone, Debug)]
pub struct CorrSearch {
    pub dim: usize,
    /// Base configuration; its `seed` is the master seed from which the
    /// per-start seeds are derived.
    pub config: OptimizerConfig,
    pub starts: usize,
    /// Replaces the random start of run 0 when present.
    pub warm_start: Option<Vec<f64>>,
}

impl CorrSearch {
    /// Default tuning for the angle box of `dim x dim` matrices.
    pub fn new(dim: usize, starts: usize, seed: u64) -> Result<Self> {
        let n = super::angle_dim(dim)?;
        Ok(Self {
            dim,
            config: OptimizerConfig::for_dimension(n).with_seed(seed),
            starts,
            warm_start: None,
        })
    }

    pub fn start_seeds(&self) -> Vec<u64> {
        (0..self.starts)
            .map(|k| derive_seed(self.config.seed, k as u64))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CorrSearchResult {
    pub best: CorrelationMatrix,
    pub best_angles: Vec<f64>,
    pub best_run: usize,
    pub runs: Vec<RunRecord>,
    /// Wall-clock seconds per run, in run order.
    pub runtimes: Vec<f64>,
}

/// Runs GLASD `starts` times on `loss ∘ angles_to_corr` over the default
/// angle box and keeps the run with the lowest objective. Runs execute in
/// parallel; results are ordered by run index and do not depend on
/// scheduling.
pub fn minimize_over_corr<F, E>(loss: F, search: &CorrSearch) -> Result<CorrSearchResult>
where
    F: Fn(&CorrelationMatrix) -> std::result::Result<f64, E> + Sync,
    E: Display,
{
    if search.starts == 0 {
        return Err(Error::InvalidConfig(
            "at least one start is required".into(),
        ));
    }
    let domain = default_angle_box(search.dim)?;
    if let Some(w) = &search.warm_start {
        if w.len() != domain.dim() {
            return Err(Error::DomainMismatch {
                point: w.len(),
                domain: domain.dim(),
            });
        }
    }
    let m = search.dim;
    let seeds = search.start_seeds();
    let outcomes: Vec<Result<(RunRecord, f64)>> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &seed)| {
            let config = search.config.clone().with_seed(seed);
            let x0 = if k == 0 {
                search.warm_start.as_deref()
            } else {
                None
            };
            let objective = Fallible(|x: &[f64]| -> std::result::Result<f64, String> {
                let c = corr_from_angles(m, x).map_err(|e| e.to_string())?;
                loss(&c).map_err(|e| e.to_string())
            });
            let started = Instant::now();
            let record = minimize(objective, &domain, x0, &config)?;
            Ok((record, started.elapsed().as_secs_f64()))
        })
        .collect();

    let mut runs = Vec::with_capacity(outcomes.len());
    let mut runtimes = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let (record, secs) = outcome?;
        runs.push(record);
        runtimes.push(secs);
    }
    let best_run = runs.iter().enumerate().fold(0, |best, (k, r)| {
        if r.f_best < runs[best].f_best {
            k
        } else {
            best
        }
    });
    let best_angles = runs[best_run].x_best.clone();
    let best = corr_from_angles(m, &best_angles)?;
    Ok(CorrSearchResult {
        best,
        best_angles,
        best_run,
        runs,
        runtimes,
    })
}
