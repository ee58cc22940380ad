//! Gradient-free minimization over a box.
//!
//! Each iteration either takes a greedy coordinate step whose direction is
//! drawn from an adaptive probability vector (with an adaptive step size per
//! direction), or, with probability `1/m`, a random exploratory step that is
//! accepted uphill with probability `min(1, m c / ln(1 + t))`. All steps are
//! clipped to half the distance to the facing bound, so iterates stay
//! feasible (and interior if they start interior).

mod baseline;
mod config;
mod domain;
mod search;

pub use baseline::random_search;
pub use config::{ExplorationRadius, OptimizerConfig, OptimizerOverrides};
pub use domain::BoxDomain;
pub use search::{
    asd_minimize, glasd_minimize, minimize, Fallible, Mode, Objective, OptimizerState, RunRecord,
    Search, StepReport, Termination, TracePoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Probability of accepting a non-improving exploration move at iteration `t`.
pub fn acceptance_prob(t: f64, m: u32, c: f64) -> f64 {
    (f64::from(m) * c / (1.0 + t).ln()).min(1.0)
}

/// Displacement along coordinate `i`: `magnitude` in direction `sign`,
/// capped at half the remaining distance to the facing bound.
pub fn clip_step(x: &[f64], domain: &BoxDomain, i: usize, sign: Sign, magnitude: f64) -> Vec<f64> {
    let mut delta = vec![0.0; x.len()];
    delta[i] = clip_offset(x, domain, i, sign, magnitude);
    delta
}

pub(crate) fn clip_offset(
    x: &[f64],
    domain: &BoxDomain,
    i: usize,
    sign: Sign,
    magnitude: f64,
) -> f64 {
    let xi = x[i];
    match sign {
        Sign::Positive => {
            let b = domain.upper()[i];
            let offset = magnitude.min((b - xi) / 2.0).max(0.0);
            // below floating resolution the half-gap can round onto the bound
            if xi < b && xi + offset >= b {
                0.0
            } else {
                offset
            }
        }
        Sign::Negative => {
            let a = domain.lower()[i];
            let offset = magnitude.min((xi - a) / 2.0).max(0.0);
            if xi > a && xi - offset <= a {
                0.0
            } else {
                -offset
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acceptance_prob_values() {
        assert_eq!(acceptance_prob(1.0, 5, 1.0), 1.0);
        let t = std::f64::consts::E.powi(2) - 1.0;
        assert!((acceptance_prob(t, 5, 0.01) - 0.025).abs() < 1e-15);
        // 5 * 0.001 ln 10 / ln(1 + 1e6), evaluated independently
        let expected = 5.0 * 0.001 * 10f64.ln() / 1_000_001f64.ln();
        assert!((expected - 8.333e-4).abs() < 1e-6);
        assert!((acceptance_prob(1e6, 5, 0.001 * 10f64.ln()) - expected).abs() < 1e-18);
    }

    #[test]
    fn acceptance_prob_is_capped_and_nonincreasing() {
        let mut prev = 1.0;
        for t in 1..10_000 {
            let q = acceptance_prob(t as f64, 5, 0.01);
            assert!(q <= prev && q <= 1.0 && q > 0.0);
            if 5.0 * 0.01 >= (1.0 + t as f64).ln() {
                assert_eq!(q, 1.0);
            }
            prev = q;
        }
    }

    #[test]
    fn clip_examples() {
        let d = BoxDomain::cube(0.0, 1.0, 1).unwrap();
        assert_eq!(clip_step(&[0.5], &d, 0, Sign::Positive, 0.1), vec![0.1]);
        let delta = clip_step(&[0.9], &d, 0, Sign::Positive, 0.3);
        assert!((delta[0] - 0.05).abs() < 1e-15);
        assert_eq!(clip_step(&[0.0], &d, 0, Sign::Negative, 0.3), vec![0.0]);
    }

    #[test]
    fn clip_never_reaches_the_bound_from_inside() {
        let d = BoxDomain::cube(0.0, 1.0, 1).unwrap();
        let x = 1.0 - f64::EPSILON / 2.0;
        let delta = clip_step(&[x], &d, 0, Sign::Positive, 1.0);
        assert!(x + delta[0] < 1.0);
        let x = 1e-320;
        let delta = clip_step(&[x], &d, 0, Sign::Negative, 1.0);
        assert!(x + delta[0] > 0.0);
    }
}
