//! Simulation harness: true structures, data generation, contamination and
//! RMSE scoring of multi-start estimates.

mod contamination;
mod sampling;
mod scenario;
mod structure;

pub use contamination::{contaminate, Contamination};
pub use sampling::{sample_data, Distribution};
pub use scenario::{
    loss_label, run_scenario, LossOutcome, LossSummary, ReplicateResult, ScenarioResult,
    ScenarioSpec, ScenarioTiming, Standardization,
};
pub use structure::{gen_structure, StructureKind, StructureSpec, REPAIR_FLOOR};

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};

/// Root mean squared difference over the unique off-diagonal entries.
pub fn rmse(estimate: &CorrelationMatrix, truth: &CorrelationMatrix) -> Result<f64> {
    if estimate.dim() != truth.dim() {
        return Err(Error::DimensionMismatch {
            expected: truth.dim(),
            actual: estimate.dim(),
        });
    }
    let a = estimate.lower_off_diagonal();
    let b = truth.lower_off_diagonal();
    let sq = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
    Ok((sq / a.len() as f64).sqrt())
}
