use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::spde::noise::{NoiseKey, NoisePath};
use crate::spde::problem::SpdeProblem;
use crate::spde::stepper::simulate_path_summary;
use crate::{MeanEstimate, Scalar};

pub const MIN_MOMENT_PATHS: usize = 100;

/// Monte Carlo estimate of `E sup_t ‖u‖²` and the constant it implies in
/// `E sup_t ‖u‖² ≤ C (1 + E‖u₀‖²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    pub sup_norm_sq: MeanEstimate<T>,
    pub initial_norm_sq: MeanEstimate<T>,
    pub implied_constant: T,
    /// Per-path `max_k ‖u_k‖²`, ordered by path index.
    pub per_path: Vec<T>,
}

/// Runs paths `0..paths` in parallel; results are reduced in path order, so
/// the report does not depend on the worker count. Any blow-up fails the
/// check with the lowest offending path index.
pub fn moment_bound_check<T: Scalar>(
    problem: &SpdeProblem<T>,
    paths: usize,
    master_seed: u64,
) -> Result<MomentReport<T>> {
    if paths < MIN_MOMENT_PATHS {
        return Err(invalid(
            "paths",
            format!("need at least {MIN_MOMENT_PATHS}, got {paths}"),
        ));
    }
    let outcomes: Vec<Result<(T, T)>> = (0..paths as u64)
        .into_par_iter()
        .map(|p| {
            let noise = NoisePath::generate(
                NoiseKey::wiener(master_seed, p),
                problem.horizon(),
                problem.steps(),
            )?;
            let out = simulate_path_summary(problem, &noise)?;
            Ok((out.sup_norm_sq, out.initial_norm_sq))
        })
        .collect();
    let mut sups = Vec::with_capacity(paths);
    let mut inits = Vec::with_capacity(paths);
    for o in outcomes {
        let (s, i) = o?;
        sups.push(s);
        inits.push(i);
    }
    let sup_norm_sq = MeanEstimate::from_samples(&sups);
    let initial_norm_sq = MeanEstimate::from_samples(&inits);
    Ok(MomentReport {
        implied_constant: sup_norm_sq.mean / (T::one() + initial_norm_sq.mean),
        sup_norm_sq,
        initial_norm_sq,
        per_path: sups,
    })
}
