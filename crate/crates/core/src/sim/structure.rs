use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corr::{corr_from_angles, default_angle_box, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::linalg::shrink_to_floor;

/// Eigenvalue floor used when repairing sparse matrices.
pub const REPAIR_FLOOR: f64 = 1e-3;

/// Shape of the true correlation matrix in a simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StructureKind {
    /// Uniform random angles mapped to a matrix; all entries generically nonzero.
    RandomDense,
    /// A `1 - sparsity` share of the off-diagonal pairs drawn from
    /// `U[low, high]`, the rest zero, then shrunk towards the identity
    /// until positive definite.
    SparseUniform {
        #[serde(default = "default_sparsity")]
        sparsity: f64,
        #[serde(default = "default_low")]
        low: f64,
        #[serde(default = "default_high")]
        high: f64,
    },
    /// Three diagonal blocks with entries `decay^|i - j|` inside each block.
    BlockToeplitz {
        #[serde(default = "default_fractions")]
        fractions: [f64; 3],
        #[serde(default = "default_decays")]
        decays: [f64; 3],
    },
}

fn default_sparsity() -> f64 {
    0.9
}
fn default_low() -> f64 {
    0.1
}
fn default_high() -> f64 {
    0.3
}
fn default_fractions() -> [f64; 3] {
    [0.25, 0.5, 0.25]
}
fn default_decays() -> [f64; 3] {
    [0.6, 0.3, 0.4]
}

impl StructureKind {
    pub fn sparse_uniform() -> Self {
        StructureKind::SparseUniform {
            sparsity: default_sparsity(),
            low: default_low(),
            high: default_high(),
        }
    }

    pub fn block_toeplitz() -> Self {
        StructureKind::BlockToeplitz {
            fractions: default_fractions(),
            decays: default_decays(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::RandomDense => "random-dense",
            StructureKind::SparseUniform { .. } => "sparse-uniform",
            StructureKind::BlockToeplitz { .. } => "block-toeplitz",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StructureKind::RandomDense => Ok(()),
            StructureKind::SparseUniform {
                sparsity,
                low,
                high,
            } => {
                if !(0.0..=1.0).contains(&sparsity) {
                    return Err(Error::InvalidScenario(format!(
                        "sparsity {sparsity} is outside [0, 1]"
                    )));
                }
                if !(0.0 < low && low <= high && high < 1.0) {
                    return Err(Error::InvalidScenario(format!(
                        "value range [{low}, {high}] must lie in (0, 1)"
                    )));
                }
                Ok(())
            }
            StructureKind::BlockToeplitz { fractions, decays } => {
                if fractions.iter().any(|&f| !(f > 0.0))
                    || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9
                {
                    return Err(Error::InvalidScenario(format!(
                        "block fractions {fractions:?} must be positive and sum to 1"
                    )));
                }
                if decays.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
                    return Err(Error::InvalidScenario(format!(
                        "decays {decays:?} must lie in (0, 1)"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureSpec {
    pub kind: StructureKind,
    pub p: usize,
}

const MAX_REDRAWS: usize = 1000;

pub fn gen_structure<R: Rng + ?Sized>(
    spec: &StructureSpec,
    rng: &mut R,
) -> Result<CorrelationMatrix> {
    spec.kind.validate()?;
    let p = spec.p;
    if p < 2 {
        return Err(Error::InvalidDimension(format!(
            "structure dimension must be at least 2, got {p}"
        )));
    }
    match spec.kind {
        StructureKind::RandomDense => {
            // Uniform angles give matrices whose smallest eigenvalue shrinks
            // fast with p; redraw the rare ones that are singular in floating
            // point.
            let domain = default_angle_box(p)?;
            for _ in 0..MAX_REDRAWS {
                let c = corr_from_angles(p, &domain.sample_uniform(rng))?;
                if c.min_eigenvalue() > 0.0 {
                    return Ok(c);
                }
            }
            Err(Error::InvalidDimension(format!(
                "no numerically positive-definite dense draw at p = {p}"
            )))
        }
        StructureKind::SparseUniform {
            sparsity,
            low,
            high,
        } => {
            let pairs: Vec<(usize, usize)> =
                (1..p).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
            let keep = ((1.0 - sparsity) * pairs.len() as f64).round() as usize;
            let mut c = DMatrix::<f64>::identity(p, p);
            for idx in sample(rng, pairs.len(), keep).into_vec() {
                let (i, j) = pairs[idx];
                let v = low + (high - low) * rng.random::<f64>();
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
            let (repaired, _) = shrink_to_floor(&c, REPAIR_FLOOR);
            CorrelationMatrix::new(repaired)
        }
        StructureKind::BlockToeplitz { fractions, decays } => {
            if p < 4 {
                return Err(Error::InvalidDimension(format!(
                    "block-Toeplitz needs p >= 4, got {p}"
                )));
            }
            let first = (p as f64 * fractions[0]).round() as usize;
            let second = (p as f64 * fractions[1]).round() as usize;
            let sizes = [first, second, p.saturating_sub(first + second)];
            if sizes.contains(&0) || first + second >= p {
                return Err(Error::InvalidDimension(format!(
                    "p = {p} leaves an empty block: {sizes:?}"
                )));
            }
            let mut c = DMatrix::<f64>::zeros(p, p);
            let mut start = 0;
            for (size, decay) in sizes.into_iter().zip(decays) {
                for i in 0..size {
                    for j in 0..size {
                        c[(start + i, start + j)] = decay.powi(i.abs_diff(j) as i32);
                    }
                }
                start += size;
            }
            CorrelationMatrix::new(c)
        }
    }
}
