//! Global adaptive stochastic descent (GLASD) for box-constrained black-box
//! minimization, and its use for robust estimation of correlation matrices.
//!
//! The pieces:
//!
//! * [`optimizer`]: GLASD / ASD over a hyperrectangle.
//! * [`corr`]: the angle parameterization of full-rank correlation matrices
//!   through the rows of their Cholesky factor, and multi-start search over it.
//! * [`losses`]: Gaussian, Huber, truncated and Tukey objectives built on
//!   Mahalanobis distances, plus IQR threshold rules.
//! * [`benchmarks`]: classical test functions and their correlation-matrix
//!   versions.
//! * [`sim`]: structured correlation generators, sampling, contamination and
//!   RMSE scoring.
//! * [`io`]: CSV readers and writers for data and matrices.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod corr;
pub mod data;
pub mod error;
pub mod io;
pub mod linalg;
pub mod losses;
pub mod optimizer;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};
