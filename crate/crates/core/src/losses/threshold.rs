use super::{mahalanobis_sq_all, LossSpec};
use crate::corr::CorrelationMatrix;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::shrink_to_floor;

/// Quantile by linear interpolation between order statistics at the
/// 1-based position `1 + (len - 1) q`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Quartiles and fences `Q1 - k IQR`, `Q3 + k IQR` of a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IqrFences {
    pub q1: f64,
    pub q3: f64,
    pub lower: f64,
    pub upper: f64,
}

impl IqrFences {
    pub fn new(values: &[f64], multiplier: f64) -> Result<Self> {
        if values.len() < 4 {
            return Err(Error::TooFewValues {
                needed: 4,
                actual: values.len(),
            });
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q1 = quantile(&sorted, 0.25);
        let q3 = quantile(&sorted, 0.75);
        let iqr = q3 - q1;
        Ok(Self {
            q1,
            q3,
            lower: q1 - multiplier * iqr,
            upper: q3 + multiplier * iqr,
        })
    }

    pub fn is_outside(&self, v: f64) -> bool {
        v < self.lower || v > self.upper
    }
}

/// `Q3 + multiplier (Q3 - Q1)`.
pub fn iqr_threshold(values: &[f64], multiplier: f64) -> Result<f64> {
    Ok(IqrFences::new(values, multiplier)?.upper)
}

/// Sample correlation shrunk towards the identity just enough that its
/// smallest eigenvalue reaches `floor`.
pub fn pilot_correlation(x: &DataMatrix, floor: f64) -> Result<CorrelationMatrix> {
    let s = x.sample_correlation()?;
    let (shrunk, _) = shrink_to_floor(&s, floor);
    CorrelationMatrix::new(shrunk)
}

/// Threshold for `spec` on data `x`: Q3 + 3 IQR of the squared distances
/// under the pilot correlation. For Tukey the value plays the role of `τ²`.
pub fn resolve_threshold(x: &DataMatrix, spec: &LossSpec) -> Result<f64> {
    let pilot = pilot_correlation(x, spec.pilot_shrinkage_floor)?;
    let d2 = mahalanobis_sq_all(x, &pilot)?;
    let t = iqr_threshold(&d2, 3.0)?;
    if !(t > 0.0) {
        return Err(Error::InvalidData(format!(
            "{} threshold resolved to {t}; distances are degenerate",
            spec.kind.name()
        )));
    }
    Ok(t)
}

/// Per-column count of values outside the 1.5 IQR fences.
pub fn outlier_report(x: &DataMatrix) -> Vec<usize> {
    (0..x.p())
        .map(|j| {
            let col = x.column(j);
            match IqrFences::new(&col, 1.5) {
                Ok(f) => col.iter().filter(|&&v| f.is_outside(v)).count(),
                Err(_) => 0,
            }
        })
        .collect()
}
