//! Classical test functions, on boxes and on correlation matrices.
//!
//! The correlation-matrix variant feeds the scaled off-diagonal entries of
//! `C` (both triangles, row-major, length `M(M - 1)`) to the box function.
//! Ackley and Rastrigin use scale 10, Griewank and Rosenbrock 100.

use std::f64::consts::{E, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::optimizer::BoxDomain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkName {
    Ackley,
    Griewank,
    Rastrigin,
    Rosenbrock,
    Sumsquares,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 5] = [
        BenchmarkName::Ackley,
        BenchmarkName::Griewank,
        BenchmarkName::Rastrigin,
        BenchmarkName::Rosenbrock,
        BenchmarkName::Sumsquares,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkName::Ackley => "ackley",
            BenchmarkName::Griewank => "griewank",
            BenchmarkName::Rastrigin => "rastrigin",
            BenchmarkName::Rosenbrock => "rosenbrock",
            BenchmarkName::Sumsquares => "sumsquares",
        }
    }

    /// Scale applied to correlations before evaluation.
    pub fn corr_scale(self) -> f64 {
        match self {
            BenchmarkName::Ackley | BenchmarkName::Rastrigin => 10.0,
            BenchmarkName::Griewank | BenchmarkName::Rosenbrock => 100.0,
            // not part of the correlation suite; shares the small scale
            BenchmarkName::Sumsquares => 10.0,
        }
    }

    /// Conventional search box per coordinate.
    pub fn box_bounds(self) -> (f64, f64) {
        match self {
            BenchmarkName::Ackley => (-32.768, 32.768),
            BenchmarkName::Griewank => (-600.0, 600.0),
            BenchmarkName::Rastrigin => (-5.12, 5.12),
            BenchmarkName::Rosenbrock => (-5.0, 10.0),
            BenchmarkName::Sumsquares => (-10.0, 10.0),
        }
    }

    pub fn box_domain(self, dim: usize) -> Result<BoxDomain> {
        let (a, b) = self.box_bounds();
        BoxDomain::cube(a, b, dim)
    }

    /// Evaluates the plain function at `x`.
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkName::Ackley => ackley(x),
            BenchmarkName::Griewank => griewank(x),
            BenchmarkName::Rastrigin => rastrigin(x),
            BenchmarkName::Rosenbrock => rosenbrock(x),
            BenchmarkName::Sumsquares => sumsquares(x),
        }
    }

    /// Evaluates the correlation-matrix variant at `c`.
    pub fn eval_corr(self, c: &CorrelationMatrix) -> f64 {
        self.eval(&vec_offdiag(c, self.corr_scale()))
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkName::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown benchmark `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Box,
    Corr,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "box" => Ok(Variant::Box),
            "corr" | "corr-manifold" => Ok(Variant::Corr),
            other => Err(Error::InvalidConfig(format!("unknown variant `{other}`"))),
        }
    }
}

/// A benchmark function with its variant and dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub name: BenchmarkName,
    pub variant: Variant,
    /// Box dimension, or the matrix size `M` for the correlation variant.
    pub dim: usize,
}

/// A point at which to evaluate a benchmark.
pub enum BenchmarkPoint<'a> {
    Vector(&'a [f64]),
    Matrix(&'a CorrelationMatrix),
}

pub fn eval_benchmark(spec: &BenchmarkSpec, point: BenchmarkPoint<'_>) -> Result<f64> {
    match (spec.variant, point) {
        (Variant::Box, BenchmarkPoint::Vector(x)) => {
            if x.len() != spec.dim {
                return Err(Error::DimensionMismatch {
                    expected: spec.dim,
                    actual: x.len(),
                });
            }
            Ok(spec.name.eval(x))
        }
        (Variant::Corr, BenchmarkPoint::Matrix(c)) => {
            if c.dim() != spec.dim {
                return Err(Error::DimensionMismatch {
                    expected: spec.dim,
                    actual: c.dim(),
                });
            }
            Ok(spec.name.eval_corr(c))
        }
        (Variant::Box, BenchmarkPoint::Matrix(_)) => Err(Error::InvalidConfig(
            "box benchmarks take a vector, not a matrix".into(),
        )),
        (Variant::Corr, BenchmarkPoint::Vector(_)) => Err(Error::InvalidConfig(
            "correlation benchmarks take a matrix, not a vector".into(),
        )),
    }
}

/// Off-diagonal entries over all ordered pairs `(p, q)`, `p != q`, in
/// row-major order, multiplied by `scale`.
pub fn vec_offdiag(c: &CorrelationMatrix, scale: f64) -> Vec<f64> {
    let m = c.dim();
    let mut out = Vec::with_capacity(m * (m - 1));
    for p in 0..m {
        for q in 0..m {
            if p != q {
                out.push(scale * c.get(p, q));
            }
        }
    }
    out
}

pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (TAU * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn sumsquares(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v * v)
        .sum()
}
