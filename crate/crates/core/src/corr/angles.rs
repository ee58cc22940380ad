use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::optimizer::BoxDomain;

/// Margin keeping every angle away from the open ends of its interval.
pub const ANGLE_MARGIN: f64 = 1e-6;

/// Number of angles parameterizing an `m x m` correlation matrix.
pub fn angle_dim(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidDimension(format!(
            "correlation matrices need M >= 2, got {m}"
        )));
    }
    Ok(m * (m - 1) / 2)
}

/// Angles of an `m x m` correlation matrix in canonical order: the single
/// angle of row 2, then the `r` angles of each row `r + 1` for `r = 2..m`.
///
/// Within a row, the first angle sets the diagonal entry (`l_rr = cos w_0`),
/// the middle angles peel off one trailing entry each, and the last angle
/// splits the remaining mass between the first two columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleVector {
    dim: usize,
    angles: Vec<f64>,
}

impl AngleVector {
    pub fn new(dim: usize, angles: Vec<f64>) -> Result<Self> {
        let expected = angle_dim(dim)?;
        if angles.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: angles.len(),
            });
        }
        Ok(Self { dim, angles })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.angles
    }

    pub fn in_box(&self) -> bool {
        default_angle_box(self.dim)
            .map(|b| b.contains(&self.angles))
            .unwrap_or(false)
    }
}

/// Bounds of angle `t` (0-based) of Cholesky row `r` (0-based, `r >= 1`).
fn angle_bounds(r: usize, t: usize) -> (f64, f64) {
    if r == 1 {
        (-FRAC_PI_2 + ANGLE_MARGIN, FRAC_PI_2 - ANGLE_MARGIN)
    } else if t == 0 {
        (0.0, FRAC_PI_2 - ANGLE_MARGIN)
    } else if t + 1 == r {
        (0.0, TAU - ANGLE_MARGIN)
    } else {
        (ANGLE_MARGIN, PI - ANGLE_MARGIN)
    }
}

/// The compact box of valid angle vectors for `m x m` matrices.
pub fn default_angle_box(m: usize) -> Result<BoxDomain> {
    let n = angle_dim(m)?;
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for r in 1..m {
        for t in 0..r {
            let (a, b) = angle_bounds(r, t);
            lower.push(a);
            upper.push(b);
        }
    }
    BoxDomain::new(lower, upper)
}

/// Lower-triangular factor with unit-norm rows encoded by `angles`.
pub fn angles_to_factor(m: usize, angles: &[f64]) -> Result<DMatrix<f64>> {
    let expected = angle_dim(m)?;
    if angles.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: angles.len(),
        });
    }
    let mut l = DMatrix::<f64>::zeros(m, m);
    l[(0, 0)] = 1.0;
    let mut offset = 0;
    for r in 1..m {
        let w = &angles[offset..offset + r];
        offset += r;
        // column r - t takes sin(w_0)...sin(w_{t-1}) cos(w_t)
        let mut sines = 1.0;
        for (t, &wt) in w.iter().enumerate() {
            l[(r, r - t)] = sines * wt.cos();
            sines *= wt.sin();
        }
        l[(r, 0)] = sines;
    }
    Ok(l)
}

/// Maps angles to the correlation matrix `L Lᵀ` of their factor.
pub fn angles_to_corr(a: &AngleVector) -> CorrelationMatrix {
    corr_from_angles(a.dim, &a.angles).expect("AngleVector length is checked at construction")
}

/// Slice form of [`angles_to_corr`], used inside objectives.
pub fn corr_from_angles(m: usize, angles: &[f64]) -> Result<CorrelationMatrix> {
    let l = angles_to_factor(m, angles)?;
    if (0..m).any(|i| !(l[(i, i)] > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(CorrelationMatrix::from_factor(l))
}

/// Euclidean norm without underflow for tiny entries.
fn scaled_norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Inverse of [`angles_to_corr`]. Angles that the matrix does not determine
/// (rows whose leading entries vanish) are set to their interval midpoints;
/// all angles are clamped into the default box.
pub fn corr_to_angles(c: &CorrelationMatrix) -> AngleVector {
    let m = c.dim();
    let l = c.factor();
    let mut angles = Vec::with_capacity(m * (m - 1) / 2);
    for r in 1..m {
        let raw: Vec<f64> = (0..=r).map(|k| l[(r, k)]).collect();
        let norm = scaled_norm(&raw);
        let row: Vec<f64> = (0..=r).map(|k| l[(r, k)] / norm).collect();
        let mut w = vec![0.0; r];
        // atan2 of (remaining mass, entry) keeps full relative precision even
        // when the trailing sine products are tiny
        let mut degenerate_from = None;
        for t in 0..r.saturating_sub(1) {
            let rest = scaled_norm(&row[..r - t]);
            w[t] = rest.atan2(row[r - t]);
            if rest == 0.0 {
                degenerate_from = Some(t + 1);
                break;
            }
        }
        if degenerate_from.is_none() {
            let t = r - 1;
            if row[0] == 0.0 && row[1] == 0.0 {
                degenerate_from = Some(t);
            } else {
                let phi = row[0].atan2(row[1]);
                w[t] = if r == 1 || phi >= 0.0 { phi } else { phi + TAU };
            }
        }
        if let Some(start) = degenerate_from {
            for (t, wt) in w.iter_mut().enumerate().skip(start) {
                let (a, b) = angle_bounds(r, t);
                *wt = 0.5 * (a + b);
            }
        }
        for (t, wt) in w.iter_mut().enumerate() {
            let (a, b) = angle_bounds(r, t);
            *wt = wt.clamp(a, b);
        }
        angles.extend(w);
    }
    AngleVector { dim: m, angles }
}
