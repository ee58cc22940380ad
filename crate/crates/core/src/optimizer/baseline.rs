use super::{BoxDomain, Objective, RunRecord, Termination, TracePoint};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Pure random search: `evaluations` uniform draws from the domain. Used
/// only as a reference curve next to GLASD traces.
pub fn random_search<O: Objective>(
    mut f: O,
    domain: &BoxDomain,
    evaluations: u64,
    seed: u64,
) -> Result<RunRecord> {
    if evaluations == 0 {
        return Err(Error::InvalidConfig(
            "random search needs at least one evaluation".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut best = f64::INFINITY;
    let mut x_best = Vec::new();
    let mut trace = Vec::with_capacity(evaluations as usize);
    for k in 0..evaluations {
        let x = domain.sample_uniform(&mut rng);
        let v = f.evaluate(&x).map_err(|message| Error::Objective {
            point: x.clone(),
            message,
        })?;
        if !v.is_finite() {
            return Err(Error::Objective {
                point: x,
                message: format!("objective returned {v}"),
            });
        }
        if v < best {
            best = v;
            x_best = x;
        }
        trace.push(TracePoint {
            iteration: k,
            evaluations: k + 1,
            f_best: best,
        });
    }
    Ok(RunRecord {
        x_best,
        f_best: best,
        evaluations,
        iterations: evaluations - 1,
        termination: Termination::MaxIterations,
        seed,
        trace,
    })
}
