use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Contamination {
    None,
    /// `round(fraction * n)` rows; in each, a share drawn from
    /// `U[share_low, share_high]` of the entries is shifted by `shift`.
    Rows {
        #[serde(default = "default_fraction")]
        fraction: f64,
        #[serde(default = "default_share_low")]
        share_low: f64,
        #[serde(default = "default_share_high")]
        share_high: f64,
        #[serde(default = "default_shift")]
        shift: f64,
    },
    /// The same pattern applied to `round(fraction * p)` columns.
    Columns {
        #[serde(default = "default_fraction")]
        fraction: f64,
        #[serde(default = "default_share_low")]
        share_low: f64,
        #[serde(default = "default_share_high")]
        share_high: f64,
        #[serde(default = "default_shift")]
        shift: f64,
    },
    /// `round(fraction * n * p)` individual entries shifted by `shift`.
    Random {
        #[serde(default = "default_random_fraction")]
        fraction: f64,
        #[serde(default = "default_random_shift")]
        shift: f64,
    },
}

fn default_fraction() -> f64 {
    0.1
}
fn default_share_low() -> f64 {
    0.3
}
fn default_share_high() -> f64 {
    0.7
}
fn default_shift() -> f64 {
    10.0
}
fn default_random_fraction() -> f64 {
    0.05
}
fn default_random_shift() -> f64 {
    100.0
}

impl Contamination {
    pub fn rows() -> Self {
        Contamination::Rows {
            fraction: default_fraction(),
            share_low: default_share_low(),
            share_high: default_share_high(),
            shift: default_shift(),
        }
    }

    pub fn columns() -> Self {
        Contamination::Columns {
            fraction: default_fraction(),
            share_low: default_share_low(),
            share_high: default_share_high(),
            shift: default_shift(),
        }
    }

    pub fn random() -> Self {
        Contamination::Random {
            fraction: default_random_fraction(),
            shift: default_random_shift(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Contamination::None => "none",
            Contamination::Rows { .. } => "rows",
            Contamination::Columns { .. } => "columns",
            Contamination::Random { .. } => "random",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidScenario(format!(
                    "{name} {v} is outside [0, 1]"
                )))
            }
        };
        let finite = |v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidScenario(format!("shift {v} is not finite")))
            }
        };
        match *self {
            Contamination::None => Ok(()),
            Contamination::Rows {
                fraction,
                share_low,
                share_high,
                shift,
            }
            | Contamination::Columns {
                fraction,
                share_low,
                share_high,
                shift,
            } => {
                unit("fraction", fraction)?;
                unit("share_low", share_low)?;
                unit("share_high", share_high)?;
                if share_low > share_high {
                    return Err(Error::InvalidScenario(format!(
                        "share range [{share_low}, {share_high}] is empty"
                    )));
                }
                finite(shift)
            }
            Contamination::Random { fraction, shift } => {
                unit("fraction", fraction)?;
                finite(shift)
            }
        }
    }
}

/// Returns a contaminated copy of `x`.
pub fn contaminate<R: Rng + ?Sized>(
    x: &DataMatrix,
    kind: &Contamination,
    rng: &mut R,
) -> Result<DataMatrix> {
    kind.validate()?;
    let mut out = x.clone();
    let (n, p) = (x.n(), x.p());
    let v = out.values_mut();
    let count =
        |fraction: f64, total: usize| ((fraction * total as f64).round() as usize).min(total);
    match *kind {
        Contamination::None => {}
        Contamination::Rows {
            fraction,
            share_low,
            share_high,
            shift,
        } => {
            for i in sample(rng, n, count(fraction, n)).into_vec() {
                let share = share_low + (share_high - share_low) * rng.random::<f64>();
                for j in sample(rng, p, count(share, p)).into_vec() {
                    v[(i, j)] += shift;
                }
            }
        }
        Contamination::Columns {
            fraction,
            share_low,
            share_high,
            shift,
        } => {
            for j in sample(rng, p, count(fraction, p)).into_vec() {
                let share = share_low + (share_high - share_low) * rng.random::<f64>();
                for i in sample(rng, n, count(share, n)).into_vec() {
                    v[(i, j)] += shift;
                }
            }
        }
        Contamination::Random { fraction, shift } => {
            for k in sample(rng, n * p, count(fraction, n * p)).into_vec() {
                v[(k / p, k % p)] += shift;
            }
        }
    }
    Ok(out)
}
