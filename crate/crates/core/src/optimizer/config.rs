use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound `r` of the exploration step magnitude `s ~ U(0, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplorationRadius {
    /// `r` is the distance from the current coordinate to the bound the
    /// sampled sign points at.
    DynamicToBound,
    Fixed(f64),
}

/// Tuning parameters of one GLASD / ASD run.
///
/// [`OptimizerConfig::for_dimension`] gives the standard defaults for an
/// `n`-dimensional box: unit-free initial steps of 0.1, uniform direction
/// probabilities, doubling/halving factors of 2, an exploration step every
/// `m = 5` iterations on average, temperature `c = 0.001 ln n`, at most
/// `round(3000 ln n)` iterations and a stagnation window of `4n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub initial_step: f64,
    /// Initial direction probabilities, length `2n`; uniform when absent.
    /// Normalized before use.
    pub initial_probabilities: Option<Vec<f64>>,
    pub step_increase: f64,
    pub step_decrease: f64,
    pub prob_increase: f64,
    pub prob_decrease: f64,
    /// `m`: exploration happens with probability `1/m`.
    pub exploration_period: u32,
    /// `c`: exploration temperature.
    pub temperature: f64,
    pub radius: ExplorationRadius,
    pub max_iterations: u64,
    pub stagnation_window: u64,
    pub tolerance: f64,
    /// `false` turns the search into plain ASD (greedy moves only).
    pub explore: bool,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn for_dimension(n: usize) -> Self {
        // ln(1) = 0 would zero out both c and T for one-dimensional boxes.
        let log_n = (n.max(2) as f64).ln();
        Self {
            initial_step: 0.1,
            initial_probabilities: None,
            step_increase: 2.0,
            step_decrease: 2.0,
            prob_increase: 2.0,
            prob_decrease: 2.0,
            exploration_period: 5,
            temperature: 0.001 * log_n,
            radius: ExplorationRadius::DynamicToBound,
            max_iterations: (3000.0 * log_n).round() as u64,
            stagnation_window: 4 * n.max(1) as u64,
            tolerance: 1e-20,
            explore: true,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return bad(format!(
                "initial step must be positive, got {}",
                self.initial_step
            ));
        }
        for (name, v) in [
            ("step_increase", self.step_increase),
            ("step_decrease", self.step_decrease),
            ("prob_increase", self.prob_increase),
            ("prob_decrease", self.prob_decrease),
        ] {
            if !(v > 1.0 && v.is_finite()) {
                return bad(format!("{name} must be greater than 1, got {v}"));
            }
        }
        if self.exploration_period < 1 {
            return bad("exploration period m must be at least 1".into());
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return bad(format!(
                "temperature c must be positive, got {}",
                self.temperature
            ));
        }
        if let ExplorationRadius::Fixed(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad(format!("exploration radius must be positive, got {r}"));
            }
        }
        if self.max_iterations < 1 {
            return bad("max_iterations must be at least 1".into());
        }
        if self.stagnation_window < 1 {
            return bad("stagnation window must be at least 1".into());
        }
        if !(self.tolerance >= 0.0) {
            return bad(format!(
                "tolerance must be nonnegative, got {}",
                self.tolerance
            ));
        }
        if let Some(p) = &self.initial_probabilities {
            if p.len() != 2 * n {
                return bad(format!(
                    "expected {} initial probabilities, got {}",
                    2 * n,
                    p.len()
                ));
            }
            if p.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                return bad("initial probabilities must be positive".into());
            }
        }
        Ok(())
    }
}

/// Partial configuration; set fields replace the dimension defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerOverrides {
    pub initial_step: Option<f64>,
    pub step_increase: Option<f64>,
    pub step_decrease: Option<f64>,
    pub prob_increase: Option<f64>,
    pub prob_decrease: Option<f64>,
    pub exploration_period: Option<u32>,
    pub temperature: Option<f64>,
    pub radius: Option<f64>,
    pub max_iterations: Option<u64>,
    pub stagnation_window: Option<u64>,
    pub tolerance: Option<f64>,
    pub explore: Option<bool>,
}

impl OptimizerOverrides {
    pub fn apply(&self, config: &mut OptimizerConfig) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    config.$field = v;
                }
            )*};
        }
        set!(
            initial_step,
            step_increase,
            step_decrease,
            prob_increase,
            prob_decrease,
            exploration_period,
            temperature,
            max_iterations,
            stagnation_window,
            tolerance,
            explore
        );
        if let Some(r) = self.radius {
            config.radius = ExplorationRadius::Fixed(r);
        }
    }

    /// Fields of `other` that are set win.
    pub fn merged_with(&self, other: &Self) -> Self {
        macro_rules! pick {
            ($($field:ident),*) => { Self { $($field: other.$field.or(self.$field)),* } };
        }
        pick!(
            initial_step,
            step_increase,
            step_decrease,
            prob_increase,
            prob_decrease,
            exploration_period,
            temperature,
            radius,
            max_iterations,
            stagnation_window,
            tolerance,
            explore
        )
    }

    /// Defaults for dimension `n` with these overrides applied.
    pub fn config_for(&self, n: usize, seed: u64) -> OptimizerConfig {
        let mut config = OptimizerConfig::for_dimension(n).with_seed(seed);
        self.apply(&mut config);
        config
    }
}
