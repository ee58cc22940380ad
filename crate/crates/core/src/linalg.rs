//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Lower Cholesky factor with positive diagonal.
pub fn cholesky_lower(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.unpack();
    if l.diagonal().iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(l)
}

pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `lambda >= 0` such that `(a + lambda I) / (1 + lambda)` has
/// minimum eigenvalue at least `floor`, together with that matrix. The
/// shrinkage keeps a unit diagonal and moves every eigenvalue `mu` to
/// `(mu + lambda) / (1 + lambda)`, so `lambda` has a closed form.
pub fn shrink_to_floor(a: &DMatrix<f64>, floor: f64) -> (DMatrix<f64>, f64) {
    assert!(
        floor > 0.0 && floor < 1.0,
        "eigenvalue floor must lie in (0, 1)"
    );
    let mu = min_eigenvalue(a);
    if mu >= floor {
        return (a.clone(), 0.0);
    }
    // nudge up so that the floor survives rounding in the eigen-solver
    let lambda = (floor - mu) / (1.0 - floor) * (1.0 + 1e-9) + 1e-15;
    let n = a.nrows();
    let mut shrunk = (a + DMatrix::<f64>::identity(n, n) * lambda) / (1.0 + lambda);
    for i in 0..n {
        shrunk[(i, i)] = a[(i, i)];
    }
    (shrunk, lambda)
}

/// Solves `L y = b` in place for lower-triangular `l`.
pub fn forward_substitute(l: &DMatrix<f64>, b: &mut [f64]) {
    let n = l.nrows();
    for k in 0..n {
        let mut acc = b[k];
        for j in 0..k {
            acc -= l[(k, j)] * b[j];
        }
        b[k] = acc / l[(k, k)];
    }
}
