use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A compact hyperrectangle `[lower_0, upper_0] x ... x [lower_{n-1}, upper_{n-1}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidDomain(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidDomain("domain has no coordinates".into()));
        }
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "bounds of coordinate {i} are not finite"
                )));
            }
            if a >= b {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: lower bound {a} is not below upper bound {b}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lower, upper]^dim`.
    pub fn cube(lower: f64, upper: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&a, &b))| a <= v && v <= b)
    }

    pub fn contains_strictly(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&a, &b))| a < v && v < b)
    }

    pub fn sample_uniform<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| {
                let u: f64 = rng.random();
                (a + u * (b - a)).clamp(a, b)
            })
            .collect()
    }
}
