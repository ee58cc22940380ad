use std::fmt::Display;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{acceptance_prob, clip_offset, BoxDomain, ExplorationRadius, OptimizerConfig, Sign};
use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};

const MIN_PROBABILITY: f64 = 1e-12;
const MIN_STEP: f64 = 1e-12;

/// Something the search can evaluate. Implemented for every
/// `FnMut(&[f64]) -> f64`; wrap fallible closures in [`Fallible`].
pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> std::result::Result<f64, String>;
}

impl<F> Objective for F
where
    F: FnMut(&[f64]) -> f64,
{
    fn evaluate(&mut self, x: &[f64]) -> std::result::Result<f64, String> {
        Ok(self(x))
    }
}

/// Adapter for objectives that can fail.
pub struct Fallible<F>(pub F);

impl<F, E> Objective for Fallible<F>
where
    F: FnMut(&[f64]) -> std::result::Result<f64, E>,
    E: Display,
{
    fn evaluate(&mut self, x: &[f64]) -> std::result::Result<f64, String> {
        (self.0)(x).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    MaxIterations,
    Stagnation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Greedy,
    Explore,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub evaluations: u64,
    pub f_best: f64,
}

/// Outcome of a finished run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub x_best: Vec<f64>,
    pub f_best: f64,
    pub evaluations: u64,
    pub iterations: u64,
    pub termination: Termination,
    pub seed: u64,
    /// One entry per iteration, starting with iteration 0 (the start point).
    pub trace: Vec<TracePoint>,
}

/// What a single iteration did.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    pub mode: Mode,
    pub coordinate: usize,
    pub proposal_value: f64,
    pub accepted: bool,
}

/// Mutable state of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub x: Vec<f64>,
    /// Step size per direction; direction `2i` moves coordinate `i` up,
    /// `2i + 1` moves it down.
    pub steps: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub iteration: u64,
    pub f_current: f64,
    pub f_best: f64,
    pub x_best: Vec<f64>,
    /// `f_best` after every iteration, index 0 being the start point.
    pub best_history: Vec<f64>,
    pub evaluations: u64,
}

/// An in-progress GLASD run that can be advanced one iteration at a time.
pub struct Search<'d, O> {
    objective: O,
    domain: &'d BoxDomain,
    config: OptimizerConfig,
    rng: Rng,
    state: OptimizerState,
    trace: Vec<TracePoint>,
    termination: Option<Termination>,
}

impl<'d, O: Objective> Search<'d, O> {
    /// Validates the inputs and evaluates the starting point. Without `x0`
    /// the start is drawn uniformly from the domain using the run seed.
    pub fn new(
        mut objective: O,
        domain: &'d BoxDomain,
        x0: Option<&[f64]>,
        config: &OptimizerConfig,
    ) -> Result<Self> {
        let n = domain.dim();
        config.validate(n)?;
        let mut rng = rng_from_seed(config.seed);
        let x = match x0 {
            Some(x0) => {
                if x0.len() != n {
                    return Err(Error::DomainMismatch {
                        point: x0.len(),
                        domain: n,
                    });
                }
                if !domain.contains(x0) {
                    return Err(Error::InvalidDomain(format!(
                        "start point {x0:?} lies outside the domain"
                    )));
                }
                x0.to_vec()
            }
            None => domain.sample_uniform(&mut rng),
        };
        let f0 = evaluate(&mut objective, &x)?;

        let steps = (0..2 * n)
            .map(|j| config.initial_step.clamp(MIN_STEP, domain.width(j / 2)))
            .collect();
        let mut probabilities = config
            .initial_probabilities
            .clone()
            .unwrap_or_else(|| vec![1.0 / (2 * n) as f64; 2 * n]);
        normalize(&mut probabilities);

        let state = OptimizerState {
            x_best: x.clone(),
            x,
            steps,
            probabilities,
            iteration: 0,
            f_current: f0,
            f_best: f0,
            best_history: vec![f0],
            evaluations: 1,
        };
        let trace = vec![TracePoint {
            iteration: 0,
            evaluations: 1,
            f_best: f0,
        }];
        Ok(Self {
            objective,
            domain,
            config: config.clone(),
            rng,
            state,
            trace,
            termination: None,
        })
    }

    pub fn state(&self) -> &OptimizerState {
        &self.state
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    /// Runs one iteration. Returns `Ok(None)` once the run has terminated.
    pub fn step(&mut self) -> Result<Option<StepReport>> {
        if self.termination.is_some() {
            return Ok(None);
        }
        let n = self.domain.dim();
        let k = self.state.iteration + 1;
        let m = self.config.exploration_period;
        let q = acceptance_prob(k as f64, m, self.config.temperature);

        let mode = if !self.config.explore {
            Mode::Greedy
        } else {
            let u: f64 = self.rng.random();
            if u < 1.0 - 1.0 / f64::from(m) {
                Mode::Greedy
            } else {
                Mode::Explore
            }
        };

        let (direction, coordinate, offset) = match mode {
            Mode::Greedy => {
                let j = sample_index(&self.state.probabilities, &mut self.rng);
                let i = j / 2;
                let sign = if j.is_multiple_of(2) {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                let offset = clip_offset(&self.state.x, self.domain, i, sign, self.state.steps[j]);
                (Some(j), i, offset)
            }
            Mode::Explore => {
                let i = self.rng.random_range(0..n);
                let sign = if self.rng.random::<bool>() {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                let r = match self.config.radius {
                    ExplorationRadius::DynamicToBound => match sign {
                        Sign::Positive => self.domain.upper()[i] - self.state.x[i],
                        Sign::Negative => self.state.x[i] - self.domain.lower()[i],
                    },
                    ExplorationRadius::Fixed(r) => r,
                };
                let magnitude = r * self.rng.random::<f64>();
                (
                    None,
                    i,
                    clip_offset(&self.state.x, self.domain, i, sign, magnitude),
                )
            }
        };

        let mut proposal = self.state.x.clone();
        proposal[coordinate] += offset;
        let f_new = evaluate(&mut self.objective, &proposal)?;
        self.state.evaluations += 1;

        let accepted = if f_new < self.state.f_current {
            if let Some(j) = direction {
                self.grow(j);
            }
            true
        } else if mode == Mode::Explore {
            self.rng.random::<f64>() < q
        } else {
            if let Some(j) = direction {
                self.shrink(j);
            }
            false
        };
        if accepted {
            self.state.x = proposal;
            self.state.f_current = f_new;
        }

        if self.state.f_current < self.state.f_best {
            self.state.f_best = self.state.f_current;
            self.state.x_best.clone_from(&self.state.x);
        }
        self.state.iteration = k;
        self.state.best_history.push(self.state.f_best);
        self.trace.push(TracePoint {
            iteration: k,
            evaluations: self.state.evaluations,
            f_best: self.state.f_best,
        });

        let window = self.config.stagnation_window;
        if k >= window {
            let b = &self.state.best_history;
            if b[(k - window) as usize] - b[k as usize] < self.config.tolerance {
                self.termination = Some(Termination::Stagnation);
            }
        }
        if self.termination.is_none() && k >= self.config.max_iterations {
            self.termination = Some(Termination::MaxIterations);
        }

        Ok(Some(StepReport {
            mode,
            coordinate,
            proposal_value: f_new,
            accepted,
        }))
    }

    pub fn run(mut self) -> Result<RunRecord> {
        while self.step()?.is_some() {}
        Ok(self.finish())
    }

    /// Packages the current state as a record. A run stopped before
    /// termination reports `MaxIterations`.
    pub fn finish(self) -> RunRecord {
        RunRecord {
            x_best: self.state.x_best,
            f_best: self.state.f_best,
            evaluations: self.state.evaluations,
            iterations: self.state.iteration,
            termination: self.termination.unwrap_or(Termination::MaxIterations),
            seed: self.config.seed,
            trace: self.trace,
        }
    }

    fn grow(&mut self, j: usize) {
        let width = self.domain.width(j / 2);
        self.state.steps[j] =
            (self.state.steps[j] * self.config.step_increase).clamp(MIN_STEP, width);
        self.state.probabilities[j] *= self.config.prob_increase;
        normalize(&mut self.state.probabilities);
    }

    fn shrink(&mut self, j: usize) {
        let width = self.domain.width(j / 2);
        self.state.steps[j] =
            (self.state.steps[j] / self.config.step_decrease).clamp(MIN_STEP, width);
        self.state.probabilities[j] /= self.config.prob_decrease;
        normalize(&mut self.state.probabilities);
    }
}

fn evaluate<O: Objective>(objective: &mut O, x: &[f64]) -> Result<f64> {
    match objective.evaluate(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(Error::Objective {
            point: x.to_vec(),
            message: format!("objective returned {v}"),
        }),
        Err(message) => Err(Error::Objective {
            point: x.to_vec(),
            message,
        }),
    }
}

fn normalize(p: &mut [f64]) {
    for v in p.iter_mut() {
        *v = v.max(MIN_PROBABILITY);
    }
    let total: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= total;
    }
}

fn sample_index(p: &[f64], rng: &mut Rng) -> usize {
    let u: f64 = rng.random::<f64>() * p.iter().sum::<f64>();
    let mut acc = 0.0;
    for (j, &w) in p.iter().enumerate() {
        acc += w;
        if u < acc {
            return j;
        }
    }
    p.len() - 1
}

/// Minimizes `f` over `domain` following `config` (GLASD when
/// `config.explore` is set, ASD otherwise).
pub fn minimize<O: Objective>(
    f: O,
    domain: &BoxDomain,
    x0: Option<&[f64]>,
    config: &OptimizerConfig,
) -> Result<RunRecord> {
    Search::new(f, domain, x0, config)?.run()
}

/// GLASD: greedy adaptive coordinate moves mixed with annealed exploration.
pub fn glasd_minimize<O: Objective>(
    f: O,
    domain: &BoxDomain,
    x0: Option<&[f64]>,
    config: &OptimizerConfig,
) -> Result<RunRecord> {
    let config = OptimizerConfig {
        explore: true,
        ..config.clone()
    };
    minimize(f, domain, x0, &config)
}

/// ASD: the greedy half of GLASD only; accepts strict improvements only.
pub fn asd_minimize<O: Objective>(
    f: O,
    domain: &BoxDomain,
    x0: Option<&[f64]>,
    config: &OptimizerConfig,
) -> Result<RunRecord> {
    let config = OptimizerConfig {
        explore: false,
        ..config.clone()
    };
    minimize(f, domain, x0, &config)
}
