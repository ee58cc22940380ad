use serde::{Deserialize, Serialize};

use super::{
    contaminate, gen_structure, rmse, sample_data, Contamination, Distribution, StructureKind,
    StructureSpec,
};
use crate::corr::{angle_dim, corr_to_angles, minimize_over_corr, CorrSearch, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::losses::{pilot_correlation, LossKind, LossSpec, RobustObjective, Threshold};
use crate::optimizer::OptimizerOverrides;
use crate::seed::{derive_seed, rng_from_seed};

/// One simulation cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub structure: StructureKind,
    #[serde(default = "default_distribution")]
    pub distribution: Distribution,
    #[serde(default = "default_contamination")]
    pub contamination: Contamination,
    pub p: usize,
    pub n: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_losses")]
    pub losses: Vec<LossSpec>,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub standardize: Standardization,
    /// Start run 0 of every search at the shrunk sample correlation.
    #[serde(default = "default_warm_start")]
    pub warm_start: bool,
    #[serde(default)]
    pub optimizer: OptimizerOverrides,
}

/// When columns are standardized relative to contamination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Standardization {
    /// Contaminate the raw draws, then standardize.
    #[default]
    AfterContamination,
    BeforeContamination,
    /// Use the contaminated draws as they are.
    None,
}

fn default_distribution() -> Distribution {
    Distribution::Gaussian
}
fn default_contamination() -> Contamination {
    Contamination::None
}
fn default_replicates() -> usize {
    10
}
fn default_starts() -> usize {
    10
}
fn default_warm_start() -> bool {
    true
}
fn default_losses() -> Vec<LossSpec> {
    LossKind::ALL
        .into_iter()
        .map(|k| LossSpec::new(k, Threshold::IqrAuto))
        .collect()
}

impl ScenarioSpec {
    /// A cell with the default replicate, start and loss settings.
    pub fn new(structure: StructureKind, p: usize, n: usize) -> Self {
        Self {
            structure,
            distribution: default_distribution(),
            contamination: default_contamination(),
            p,
            n,
            replicates: default_replicates(),
            losses: default_losses(),
            starts: default_starts(),
            seed: 0,
            standardize: Standardization::default(),
            warm_start: default_warm_start(),
            optimizer: OptimizerOverrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.structure.validate()?;
        self.distribution.validate()?;
        self.contamination.validate()?;
        if self.p < 2 || self.n < 2 {
            return Err(Error::InvalidScenario(format!(
                "need p >= 2 and n >= 2, got p = {}, n = {}",
                self.p, self.n
            )));
        }
        if self.replicates == 0 || self.starts == 0 {
            return Err(Error::InvalidScenario(
                "replicates and starts must be positive".into(),
            ));
        }
        if self.losses.is_empty() {
            return Err(Error::InvalidScenario("no losses given".into()));
        }
        for loss in &self.losses {
            if let Threshold::Fixed(_) = loss.threshold {
                if loss.kind != LossKind::Gaussian {
                    loss.fixed_threshold()?;
                }
            }
        }
        let config = self.optimizer.config_for(angle_dim(self.p)?, self.seed);
        config.validate(angle_dim(self.p)?)
    }

    /// Seed of replicate `r`.
    pub fn replicate_seed(&self, r: usize) -> u64 {
        derive_seed(self.seed, r as u64)
    }
}

/// Outcome of one loss on one replicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossOutcome {
    pub loss: String,
    /// Threshold in use after resolution; absent for the Gaussian loss.
    pub threshold: Option<f64>,
    pub rmse: f64,
    pub f_best: f64,
    pub best_run: usize,
    pub evaluations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub seed: u64,
    pub search_seed: u64,
    pub losses: Vec<LossOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossSummary {
    pub loss: String,
    pub mean_rmse: f64,
    /// Sample standard deviation over replicates divided by `sqrt(R)`;
    /// zero for a single replicate.
    pub se: f64,
}

/// Everything in this struct is a function of the spec alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub spec: ScenarioSpec,
    pub replicates: Vec<ReplicateResult>,
    pub summary: Vec<LossSummary>,
}

/// Wall-clock seconds, kept apart from [`ScenarioResult`] so that results
/// stay reproducible.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTiming {
    /// `[replicate][loss]`: total seconds over all starts.
    pub runtimes: Vec<Vec<f64>>,
}

impl ScenarioTiming {
    pub fn mean_runtime(&self, loss: usize) -> f64 {
        let n = self.runtimes.len().max(1) as f64;
        self.runtimes.iter().map(|r| r[loss]).sum::<f64>() / n
    }
}

impl ScenarioResult {
    pub fn summary_for(&self, loss: &str) -> Option<&LossSummary> {
        self.summary.iter().find(|s| s.loss == loss)
    }
}

/// Human-readable name of a loss: the kind, plus a fixed threshold if any.
pub fn loss_label(spec: &LossSpec) -> String {
    match (spec.kind, spec.threshold) {
        (LossKind::Gaussian, _) | (_, Threshold::IqrAuto) => spec.kind.name().to_string(),
        (kind, Threshold::Fixed(t)) => format!("{}({t})", kind.name()),
    }
}

pub fn run_scenario(spec: &ScenarioSpec) -> Result<(ScenarioResult, ScenarioTiming)> {
    spec.validate()?;
    let mut replicates = Vec::with_capacity(spec.replicates);
    let mut timing = ScenarioTiming::default();
    for r in 0..spec.replicates {
        let (result, secs) = run_replicate(spec, r).map_err(|e| Error::Replicate {
            index: r,
            source: Box::new(e),
        })?;
        replicates.push(result);
        timing.runtimes.push(secs);
    }
    let summary = spec
        .losses
        .iter()
        .enumerate()
        .map(|(k, loss)| {
            let values: Vec<f64> = replicates.iter().map(|r| r.losses[k].rmse).collect();
            let (mean, se) = mean_and_se(&values);
            LossSummary {
                loss: loss_label(loss),
                mean_rmse: mean,
                se,
            }
        })
        .collect();
    Ok((
        ScenarioResult {
            spec: spec.clone(),
            replicates,
            summary,
        },
        timing,
    ))
}

fn run_replicate(spec: &ScenarioSpec, r: usize) -> Result<(ReplicateResult, Vec<f64>)> {
    let seed = spec.replicate_seed(r);
    let mut rng = rng_from_seed(derive_seed(seed, 0));
    let truth = gen_structure(
        &StructureSpec {
            kind: spec.structure.clone(),
            p: spec.p,
        },
        &mut rng,
    )?;
    let clean = sample_data(&truth, spec.n, spec.distribution, &mut rng)?;
    let x = match spec.standardize {
        Standardization::AfterContamination => {
            contaminate(&clean, &spec.contamination, &mut rng)?.standardized()?
        }
        Standardization::BeforeContamination => {
            contaminate(&clean.standardized()?, &spec.contamination, &mut rng)?
        }
        Standardization::None => contaminate(&clean, &spec.contamination, &mut rng)?,
    };

    // every loss searches from the same starts
    let search_seed = derive_seed(seed, 1);
    let mut search = CorrSearch::new(spec.p, spec.starts, search_seed)?;
    search.config = spec.optimizer.config_for(angle_dim(spec.p)?, search_seed);
    if spec.warm_start {
        let floor = spec.losses[0].pilot_shrinkage_floor;
        search.warm_start = Some(corr_to_angles(&pilot_correlation(&x, floor)?).into_vec());
    }

    let mut outcomes = Vec::with_capacity(spec.losses.len());
    let mut runtimes = Vec::with_capacity(spec.losses.len());
    for loss in &spec.losses {
        let objective = RobustObjective::new(&x, loss)?;
        let found = minimize_over_corr(|c: &CorrelationMatrix| objective.evaluate(c), &search)?;
        outcomes.push(LossOutcome {
            loss: loss_label(loss),
            threshold: objective.threshold(),
            rmse: rmse(&found.best, &truth)?,
            f_best: found.runs[found.best_run].f_best,
            best_run: found.best_run,
            evaluations: found.runs.iter().map(|run| run.evaluations).sum(),
        });
        runtimes.push(found.runtimes.iter().sum());
    }
    Ok((
        ReplicateResult {
            replicate: r,
            seed,
            search_seed,
            losses: outcomes,
        },
        runtimes,
    ))
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
