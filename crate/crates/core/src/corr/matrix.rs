use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::cholesky_lower;

const SYMMETRY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-10;

/// A full-rank correlation matrix together with its Cholesky factor.
///
/// Every value of this type is symmetric (stored exactly symmetric), has a
/// unit diagonal and is positive definite: construction fails otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    c: DMatrix<f64>,
    factor: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Validates `c`. Off-diagonal asymmetry up to 1e-12 is averaged away.
    pub fn new(mut c: DMatrix<f64>) -> Result<Self> {
        let m = c.nrows();
        if m != c.ncols() {
            return Err(Error::InvalidDimension(format!(
                "matrix is {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if m < 2 {
            return Err(Error::InvalidDimension(format!(
                "correlation matrices need M >= 2, got {m}"
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("matrix has non-finite entries".into()));
        }
        for i in 0..m {
            if (c[(i, i)] - 1.0).abs() > DIAGONAL_TOL {
                return Err(Error::InvalidData(format!(
                    "diagonal entry {i} is {}, not 1",
                    c[(i, i)]
                )));
            }
            for j in 0..i {
                if (c[(i, j)] - c[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidData(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                let v = 0.5 * (c[(i, j)] + c[(j, i)]);
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
        }
        let factor = cholesky_lower(&c)?;
        Ok(Self { c, factor })
    }

    /// Builds `L Lᵀ` from a lower-triangular factor with unit-norm rows and
    /// positive diagonal. The caller guarantees those properties.
    pub(crate) fn from_factor(factor: DMatrix<f64>) -> Self {
        let m = factor.nrows();
        let mut c = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let mut acc = 0.0;
                for k in 0..=j {
                    acc += factor[(i, k)] * factor[(j, k)];
                }
                c[(i, j)] = acc;
                c[(j, i)] = acc;
            }
        }
        Self { c, factor }
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(DMatrix::identity(m, m))
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.c[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.c
    }

    /// Lower Cholesky factor `L` with `C = L Lᵀ`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// `ln det C` from the factor diagonal.
    pub fn log_det(&self) -> f64 {
        2.0 * self.factor.diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    /// Smallest eigenvalue, as the squared smallest singular value of the
    /// factor. Working on `L` resolves eigenvalues far below the rounding
    /// level of `C` itself, which matters for large matrices drawn from
    /// uniform angles.
    pub fn min_eigenvalue(&self) -> f64 {
        let s = self.factor.clone().svd(false, false).singular_values;
        s.min().powi(2)
    }

    /// Unique off-diagonal entries `C[i][j]`, `i > j`, row by row.
    pub fn lower_off_diagonal(&self) -> Vec<f64> {
        let m = self.dim();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for i in 1..m {
            for j in 0..i {
                out.push(self.c[(i, j)]);
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.c - &other.c).amax()
    }
}
