//! Exponential Euler for the mild formulation:
//! `u_{k+1} = e^{-AΔt}(u_k + f(u_k)Δt + g(u_k)Δw_k)`.
//!
//! Unrolled, `u_k = e^{-At_k}u₀ + Σ_j e^{-A(t_k−t_j)} f(u_j)Δt +
//! Σ_j e^{-A(t_k−t_j)} g(u_j)Δw_j`; [`DuhamelParts`] carries the three sums
//! separately so that their contributions can be compared across problems.

use crate::error::{Error, Result};
use crate::operators::DiagonalPropagator;
use crate::spde::noise::NoisePath;
use crate::spde::problem::SpdeProblem;
use crate::spectral::SpectralVec;
use crate::Scalar;

/// Paths whose norm exceeds this are aborted.
pub const BLOW_UP_NORM: f64 = 1e6;

/// One-step map with preallocated buffers.
#[derive(Debug, Clone)]
pub struct ExpEulerStepper<'a, T> {
    problem: &'a SpdeProblem<T>,
    propagator: DiagonalPropagator<T>,
    dt: T,
    drift: Vec<T>,
    diffusion: Vec<T>,
}

impl<'a, T: Scalar> ExpEulerStepper<'a, T> {
    pub fn new(problem: &'a SpdeProblem<T>, dt: T) -> Result<Self> {
        let n = problem.domain().n_modes();
        Ok(Self {
            problem,
            propagator: DiagonalPropagator::from_eigenvalues(problem.eigenvalues(), dt)?,
            dt,
            drift: vec![T::zero(); n],
            diffusion: vec![T::zero(); n],
        })
    }

    pub fn problem(&self) -> &SpdeProblem<T> {
        self.problem
    }

    pub fn propagator(&self) -> &DiagonalPropagator<T> {
        &self.propagator
    }

    /// Advances `u` in place; the drift and diffusion evaluated at the old
    /// state stay available through [`Self::last_drift`] and
    /// [`Self::last_diffusion`].
    pub fn step_in_place(&mut self, u: &mut [T], dw: T) {
        self.problem.drift().apply_slice(u, &mut self.drift);
        self.problem.diffusion().apply_slice(u, &mut self.diffusion);
        for ((x, &f), &g) in u.iter_mut().zip(&self.drift).zip(&self.diffusion) {
            *x = *x + f * self.dt + g * dw;
        }
        self.propagator.apply_in_place(u);
    }

    pub fn last_drift(&self) -> &[T] {
        &self.drift
    }

    pub fn last_diffusion(&self) -> &[T] {
        &self.diffusion
    }

    pub fn dt(&self) -> T {
        self.dt
    }
}

pub(crate) fn guard<T: Scalar>(u: &[T], path: u64, step: usize) -> Result<T> {
    let norm_sq = u.iter().map(|&x| x * x).sum::<T>();
    let norm = norm_sq.sqrt();
    if !norm.is_finite() || norm > T::lit(BLOW_UP_NORM) {
        return Err(Error::BlowUp {
            path,
            step,
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(norm_sq)
}

/// A single exponential Euler step from `u_k`.
pub fn exp_euler_step<T: Scalar>(
    problem: &SpdeProblem<T>,
    u: &SpectralVec<T>,
    dt: T,
    dw: T,
) -> Result<SpectralVec<T>> {
    if *u.domain() != *problem.domain() {
        return Err(Error::DomainMismatch("state does not live on the problem's domain".into()));
    }
    if !(dt > T::zero()) {
        return Err(Error::NegativeTime(dt.to_f64_lossy()));
    }
    let mut stepper = ExpEulerStepper::new(problem, dt)?;
    let mut next = u.clone();
    stepper.step_in_place(next.coeffs_mut(), dw);
    guard(next.coeffs(), 0, 1)?;
    Ok(next)
}

/// The three Duhamel sums of the scheme, each advanced with the same
/// propagator as the full state.
#[derive(Debug, Clone, PartialEq)]
pub struct DuhamelParts<T> {
    pub linear: Vec<T>,
    pub drift: Vec<T>,
    pub diffusion: Vec<T>,
}

impl<T: Scalar> DuhamelParts<T> {
    pub fn new(u0: &[T]) -> Self {
        Self {
            linear: u0.to_vec(),
            drift: vec![T::zero(); u0.len()],
            diffusion: vec![T::zero(); u0.len()],
        }
    }

    /// Accumulates `f Δt` and `g Δw` and propagates all three sums.
    pub fn advance(&mut self, propagator: &DiagonalPropagator<T>, f: &[T], g: &[T], dt: T, dw: T) {
        for (d, &fi) in self.drift.iter_mut().zip(f) {
            *d = *d + fi * dt;
        }
        for (d, &gi) in self.diffusion.iter_mut().zip(g) {
            *d = *d + gi * dw;
        }
        propagator.apply_in_place(&mut self.linear);
        propagator.apply_in_place(&mut self.drift);
        propagator.apply_in_place(&mut self.diffusion);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome<T> {
    /// States at `t_0, …, t_K`; empty when the trajectory was not kept.
    pub trajectory: Vec<SpectralVec<T>>,
    pub terminal: SpectralVec<T>,
    /// `max_k ‖u_k‖²` over the time grid, `k = 0` included.
    pub sup_norm_sq: T,
    pub initial_norm_sq: T,
}

fn run<T: Scalar>(problem: &SpdeProblem<T>, noise: &NoisePath<T>, keep: bool) -> Result<PathOutcome<T>> {
    if noise.steps() != problem.steps() || noise.horizon() != problem.horizon() {
        return Err(Error::DomainMismatch(format!(
            "noise grid ({} steps on [0, {}]) differs from problem grid ({} steps on [0, {}])",
            noise.steps(),
            noise.horizon(),
            problem.steps(),
            problem.horizon()
        )));
    }
    let key = noise.key();
    let u0 = problem.initial().sample(key.master_seed, key.path_index);
    let mut stepper = ExpEulerStepper::new(problem, problem.dt())?;
    let mut u = u0.coeffs().to_vec();
    let initial_norm_sq = guard(&u, key.path_index, 0)?;
    let mut sup = initial_norm_sq;
    let mut trajectory = Vec::new();
    if keep {
        trajectory.reserve(problem.steps() + 1);
        trajectory.push(u0.clone());
    }
    for (k, &dw) in noise.increments().iter().enumerate() {
        stepper.step_in_place(&mut u, dw);
        let n2 = guard(&u, key.path_index, k + 1)?;
        sup = sup.max(n2);
        if keep {
            trajectory.push(SpectralVec::from_coeffs(*problem.domain(), u.clone())?);
        }
    }
    Ok(PathOutcome {
        trajectory,
        terminal: SpectralVec::from_coeffs(*problem.domain(), u)?,
        sup_norm_sq: sup,
        initial_norm_sq,
    })
}

/// Full trajectory and grid supremum of `‖u_k‖²` for one noise path.
pub fn simulate_path<T: Scalar>(problem: &SpdeProblem<T>, noise: &NoisePath<T>) -> Result<PathOutcome<T>> {
    run(problem, noise, true)
}

/// Same as [`simulate_path`] without storing the trajectory.
pub fn simulate_path_summary<T: Scalar>(
    problem: &SpdeProblem<T>,
    noise: &NoisePath<T>,
) -> Result<PathOutcome<T>> {
    run(problem, noise, false)
}
