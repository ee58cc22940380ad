//! Negative log-likelihood objectives for correlation matrices.
//!
//! All four losses share the form
//!
//! ```text
//! (n / 2) ln det C + (1 / 2) Σ ρ(d_i²),    d_i² = x_iᵀ C⁻¹ x_i
//! ```
//!
//! with `ρ` the identity (Gaussian), Huber's function, truncation at a
//! threshold, or Tukey's biweight. `ln det C` and the distances come from
//! the Cholesky factor of `C`; no inverse is formed.

mod threshold;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corr::CorrelationMatrix;
use crate::data::DataMatrix;
use crate::error::{Error, Result};

pub use threshold::{
    iqr_threshold, outlier_report, pilot_correlation, quantile, resolve_threshold, IqrFences,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    Gaussian,
    Huber,
    Truncated,
    Tukey,
}

impl LossKind {
    pub const ALL: [LossKind; 4] = [
        LossKind::Gaussian,
        LossKind::Huber,
        LossKind::Truncated,
        LossKind::Tukey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Gaussian => "gaussian",
            LossKind::Huber => "huber",
            LossKind::Truncated => "truncated",
            LossKind::Tukey => "tukey",
        }
    }
}

impl std::str::FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(LossKind::Gaussian),
            "huber" => Ok(LossKind::Huber),
            "truncated" => Ok(LossKind::Truncated),
            "tukey" => Ok(LossKind::Tukey),
            other => Err(Error::InvalidConfig(format!("unknown loss `{other}`"))),
        }
    }
}

/// Threshold on the `d²` scale: Huber's `δ`, the truncation level `τ`, or
/// Tukey's `τ²`.
///
/// Serialized as a number or the string `"iqr"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThresholdRepr", into = "ThresholdRepr")]
pub enum Threshold {
    Fixed(f64),
    /// Q3 + 3 IQR of the distances under a shrunk sample-correlation pilot.
    IqrAuto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ThresholdRepr {
    Value(f64),
    Name(String),
}

impl TryFrom<ThresholdRepr> for Threshold {
    type Error = String;

    fn try_from(repr: ThresholdRepr) -> std::result::Result<Self, String> {
        match repr {
            ThresholdRepr::Value(v) => Ok(Threshold::Fixed(v)),
            ThresholdRepr::Name(s) => s.parse().map_err(|e: Error| e.to_string()),
        }
    }
}

impl From<Threshold> for ThresholdRepr {
    fn from(t: Threshold) -> Self {
        match t {
            Threshold::Fixed(v) => ThresholdRepr::Value(v),
            Threshold::IqrAuto => ThresholdRepr::Name("iqr".into()),
        }
    }
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("iqr") || s.eq_ignore_ascii_case("auto") {
            return Ok(Threshold::IqrAuto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Threshold::Fixed(v)),
            _ => Err(Error::InvalidConfig(format!(
                "threshold must be `iqr` or a positive number, got `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossSpec {
    pub kind: LossKind,
    #[serde(default = "default_threshold")]
    pub threshold: Threshold,
    /// Minimum eigenvalue enforced on the pilot correlation.
    #[serde(default = "default_floor")]
    pub pilot_shrinkage_floor: f64,
}

fn default_threshold() -> Threshold {
    Threshold::IqrAuto
}

fn default_floor() -> f64 {
    1e-3
}

impl LossSpec {
    pub fn new(kind: LossKind, threshold: Threshold) -> Self {
        Self {
            kind,
            threshold,
            pilot_shrinkage_floor: default_floor(),
        }
    }

    pub fn gaussian() -> Self {
        Self::new(LossKind::Gaussian, Threshold::IqrAuto)
    }

    /// The threshold as a number, if it has been resolved.
    pub fn fixed_threshold(&self) -> Result<f64> {
        match self.threshold {
            Threshold::Fixed(t) if t > 0.0 && t.is_finite() => Ok(t),
            Threshold::Fixed(t) => Err(Error::InvalidConfig(format!(
                "threshold must be positive, got {t}"
            ))),
            Threshold::IqrAuto => Err(Error::UnresolvedThreshold),
        }
    }

    /// Replaces an `IqrAuto` threshold by its value on `x`. Gaussian specs
    /// are returned unchanged.
    pub fn resolved(&self, x: &DataMatrix) -> Result<Self> {
        if self.kind == LossKind::Gaussian || matches!(self.threshold, Threshold::Fixed(_)) {
            return Ok(*self);
        }
        Ok(Self {
            threshold: Threshold::Fixed(resolve_threshold(x, self)?),
            ..*self
        })
    }
}

/// Huber's function on the squared scale: `d²` up to `delta`, then
/// `2 √delta d − delta`.
pub fn rho_huber(d2: f64, delta: f64) -> f64 {
    if d2 <= delta {
        d2
    } else {
        2.0 * delta.sqrt() * d2.sqrt() - delta
    }
}

/// Tukey's biweight with `d²` compared against `tau²`.
pub fn rho_tukey(d2: f64, tau: f64) -> f64 {
    rho_tukey_sq(d2, tau * tau)
}

fn rho_tukey_sq(d2: f64, tau2: f64) -> f64 {
    if d2 <= tau2 {
        tau2 / 6.0 * (1.0 - (1.0 - d2 / tau2).powi(3))
    } else {
        tau2 / 6.0
    }
}

pub fn rho_truncated(d2: f64, tau: f64) -> f64 {
    d2.min(tau)
}

/// Squared Mahalanobis distance of every row of `x` under `c`.
pub fn mahalanobis_sq_all(x: &DataMatrix, c: &CorrelationMatrix) -> Result<Vec<f64>> {
    MahalanobisData::new(x).distances(c)
}

pub fn loss_gaussian(x: &DataMatrix, c: &CorrelationMatrix) -> Result<f64> {
    let d2 = mahalanobis_sq_all(x, c)?;
    Ok(assemble(x.n(), c.log_det(), d2.iter().sum()))
}

/// Loss of `spec.kind`; the threshold must already be a number.
pub fn loss_robust(x: &DataMatrix, c: &CorrelationMatrix, spec: &LossSpec) -> Result<f64> {
    let d2 = mahalanobis_sq_all(x, c)?;
    let rho_sum = rho_sum(spec, &d2)?;
    Ok(assemble(x.n(), c.log_det(), rho_sum))
}

fn assemble(n: usize, log_det: f64, rho_sum: f64) -> f64 {
    0.5 * n as f64 * log_det + 0.5 * rho_sum
}

fn rho_sum(spec: &LossSpec, d2: &[f64]) -> Result<f64> {
    Ok(match spec.kind {
        LossKind::Gaussian => d2.iter().sum(),
        LossKind::Huber => {
            let t = spec.fixed_threshold()?;
            d2.iter().map(|&v| rho_huber(v, t)).sum()
        }
        LossKind::Truncated => {
            let t = spec.fixed_threshold()?;
            d2.iter().map(|&v| rho_truncated(v, t)).sum()
        }
        LossKind::Tukey => {
            let t = spec.fixed_threshold()?;
            d2.iter().map(|&v| rho_tukey_sq(v, t)).sum()
        }
    })
}

/// Observations laid out one per contiguous chunk for repeated distance
/// evaluations against different correlation matrices.
#[derive(Clone, Debug)]
struct MahalanobisData {
    n: usize,
    p: usize,
    rows: Vec<f64>,
}

impl MahalanobisData {
    fn new(x: &DataMatrix) -> Self {
        let (n, p) = (x.n(), x.p());
        let v = x.values();
        let mut rows = Vec::with_capacity(n * p);
        for i in 0..n {
            rows.extend((0..p).map(|j| v[(i, j)]));
        }
        Self { n, p, rows }
    }

    fn distances(&self, c: &CorrelationMatrix) -> Result<Vec<f64>> {
        if c.dim() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                actual: c.dim(),
            });
        }
        let l = factor_rows(c.factor());
        let p = self.p;
        let mut y = vec![0.0; p];
        let mut out = Vec::with_capacity(self.n);
        for row in self.rows.chunks_exact(p) {
            let mut total = 0.0;
            for k in 0..p {
                let lk = &l[k * p..k * p + k];
                let mut acc = row[k];
                for (a, b) in lk.iter().zip(&y[..k]) {
                    acc -= a * b;
                }
                let yk = acc / l[k * p + k];
                y[k] = yk;
                total += yk * yk;
            }
            out.push(total);
        }
        Ok(out)
    }
}

fn factor_rows(l: &DMatrix<f64>) -> Vec<f64> {
    let p = l.nrows();
    let mut out = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            out[i * p + j] = l[(i, j)];
        }
    }
    out
}

/// A loss bound to a data set, with its threshold frozen. Evaluating it
/// repeatedly does not re-read the data matrix layout.
#[derive(Clone, Debug)]
pub struct RobustObjective {
    data: MahalanobisData,
    spec: LossSpec,
}

impl RobustObjective {
    /// Resolves an `IqrAuto` threshold on `x` first.
    pub fn new(x: &DataMatrix, spec: &LossSpec) -> Result<Self> {
        let spec = spec.resolved(x)?;
        if spec.kind != LossKind::Gaussian {
            spec.fixed_threshold()?;
        }
        Ok(Self {
            data: MahalanobisData::new(x),
            spec,
        })
    }

    pub fn spec(&self) -> &LossSpec {
        &self.spec
    }

    /// The numeric threshold in use, `None` for the Gaussian loss.
    pub fn threshold(&self) -> Option<f64> {
        match (self.spec.kind, self.spec.threshold) {
            (LossKind::Gaussian, _) => None,
            (_, Threshold::Fixed(t)) => Some(t),
            (_, Threshold::IqrAuto) => None,
        }
    }

    pub fn evaluate(&self, c: &CorrelationMatrix) -> Result<f64> {
        let d2 = self.data.distances(c)?;
        Ok(assemble(
            self.data.n,
            c.log_det(),
            rho_sum(&self.spec, &d2)?,
        ))
    }
}
