//! Full-rank correlation matrices and their angle coordinates.
//!
//! Row `r` of the Cholesky factor of a correlation matrix is a unit vector
//! with positive last entry, so it is described by `r` hyperspherical
//! angles. Stacking the angles of all rows gives a bijection between a box
//! and the set of full-rank correlation matrices, which lets the box
//! optimizer search over correlation matrices without projections.

mod angles;
mod matrix;
mod search;

pub use angles::{
    angle_dim, angles_to_corr, angles_to_factor, corr_from_angles, corr_to_angles,
    default_angle_box, AngleVector, ANGLE_MARGIN,
};
pub use matrix::CorrelationMatrix;
pub use search::{minimize_over_corr, CorrSearch, CorrSearchResult};
