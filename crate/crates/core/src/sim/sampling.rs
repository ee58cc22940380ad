use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::corr::CorrelationMatrix;
use crate::data::DataMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Distribution {
    Gaussian,
    /// Multivariate t with scale matrix `C`.
    T {
        df: f64,
    },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Distribution::T { df } if !(df >= 1.0 && df.is_finite()) => Err(
                Error::InvalidScenario(format!("t degrees of freedom must be >= 1, got {df}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Draws `n` rows `L z` (Gaussian) or `L z / sqrt(chi2_df / df)` (t), with
/// `L` the Cholesky factor of `c`.
pub fn sample_data<R: Rng + ?Sized>(
    c: &CorrelationMatrix,
    n: usize,
    distribution: Distribution,
    rng: &mut R,
) -> Result<DataMatrix> {
    distribution.validate()?;
    let p = c.dim();
    let l = c.factor();
    let chi2 = match distribution {
        Distribution::T { df } => Some((ChiSquared::new(df).expect("df validated"), df)),
        Distribution::Gaussian => None,
    };
    let mut values = DMatrix::<f64>::zeros(n, p);
    let mut z = vec![0.0; p];
    for i in 0..n {
        for zk in z.iter_mut() {
            *zk = rng.sample(StandardNormal);
        }
        let scale = match &chi2 {
            Some((dist, df)) => (dist.sample(rng) / df).sqrt().recip(),
            None => 1.0,
        };
        for a in 0..p {
            let mut acc = 0.0;
            for b in 0..=a {
                acc += l[(a, b)] * z[b];
            }
            values[(i, a)] = acc * scale;
        }
    }
    DataMatrix::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn deterministic_for_a_seed() {
        let c = CorrelationMatrix::identity(3).unwrap();
        let a = sample_data(&c, 50, Distribution::T { df: 3.0 }, &mut rng_from_seed(8)).unwrap();
        let b = sample_data(&c, 50, Distribution::T { df: 3.0 }, &mut rng_from_seed(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_df() {
        let c = CorrelationMatrix::identity(2).unwrap();
        assert!(sample_data(&c, 10, Distribution::T { df: 0.5 }, &mut rng_from_seed(0)).is_err());
    }
}
