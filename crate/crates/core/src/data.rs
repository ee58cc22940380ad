use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `n` observations of `p` variables, one row per observation.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    column_names: Option<Vec<String>>,
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() < 2 || values.ncols() < 2 {
            return Err(Error::InvalidData(format!(
                "need at least 2 rows and 2 columns, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let (n, _) = values.shape();
            return Err(Error::InvalidData(format!(
                "non-finite value at row {}, column {}",
                pos % n,
                pos / n
            )));
        }
        Ok(Self {
            values,
            column_names: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::InvalidData(format!(
                "row {i} has {} values, expected {p}",
                rows[i].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                actual: names.len(),
            });
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.values
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    /// Column names, falling back to `V1..Vp`.
    pub fn names_or_default(&self) -> Vec<String> {
        self.column_names
            .clone()
            .unwrap_or_else(|| (1..=self.p()).map(|j| format!("V{j}")).collect())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.column(j).iter().copied().collect()
    }

    /// Column-wise `(x - mean) / sd` with the `n - 1` standard deviation.
    pub fn standardized(&self) -> Result<Self> {
        let n = self.n() as f64;
        let mut values = self.values.clone();
        for (j, mut col) in values.column_iter_mut().enumerate() {
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let sd = var.sqrt();
            if !(sd > 0.0) || sd < 1e-12 * mean.abs().max(1.0) {
                return Err(Error::DegenerateColumn { index: j });
            }
            for v in col.iter_mut() {
                *v = (*v - mean) / sd;
            }
        }
        Ok(Self {
            values,
            column_names: self.column_names.clone(),
        })
    }

    /// Pearson correlation matrix of the columns.
    pub fn sample_correlation(&self) -> Result<DMatrix<f64>> {
        let z = self.standardized()?;
        let zv = z.values();
        let mut s = zv.transpose() * zv / (self.n() as f64 - 1.0);
        let p = self.p();
        for i in 0..p {
            s[(i, i)] = 1.0;
            for j in 0..i {
                let v = s[(i, j)].clamp(-1.0, 1.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        Ok(s)
    }
}
