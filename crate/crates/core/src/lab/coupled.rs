use std::sync::Arc;

use crate::error::Result;
use crate::lab::quantifiers::native_perturbed_nonlinearity;
use crate::lab::scenario::{Coupling, InitialMode, NonlinearityMode, PerturbationScenario};
use crate::operators::EmbeddingPair;
use crate::spde::{
    guard, induced_perturbed_nonlinearity, DuhamelParts, ExpEulerStepper, InitialCondition, NoiseKey, NoisePath,
    SpdeProblem,
};
use crate::spectral::SpectralVec;
use crate::Scalar;

/// Everything on the perturbed side that does not depend on the path.
#[derive(Debug, Clone)]
pub struct PerturbedSetup<T> {
    pub epsilon: T,
    pub pair: Arc<EmbeddingPair<T>>,
    /// Problem on `(0, 1+ε)`; its initial datum is `P E[u₀]` plus the offset.
    pub problem: SpdeProblem<T>,
    /// `u₀^ε − P u₀`.
    pub offset: SpectralVec<T>,
}

impl<T: Scalar> PerturbedSetup<T> {
    pub fn new(scenario: &PerturbationScenario<T>, eps: T) -> Result<Self> {
        let base = &scenario.base;
        let pair = Arc::new(EmbeddingPair::with_policy(
            eps,
            base.domain().n_modes(),
            scenario.truncation,
        )?);
        let (drift, diffusion) = match scenario.nonlinearity_mode {
            NonlinearityMode::Induced => (
                induced_perturbed_nonlinearity(pair.clone(), base.drift())?,
                induced_perturbed_nonlinearity(pair.clone(), base.diffusion())?,
            ),
            NonlinearityMode::Native => (
                native_perturbed_nonlinearity(&pair, base.drift())?,
                native_perturbed_nonlinearity(&pair, base.diffusion())?,
            ),
        };
        let offset = Self::initial_offset(&pair, scenario.initial_mode);
        let mut mean = pair.embed(base.initial().mean())?;
        mean.axpy(T::one(), &offset)?;
        let mut problem = SpdeProblem::new(
            drift,
            diffusion,
            InitialCondition::deterministic(mean),
            base.horizon(),
            base.steps(),
        )?;
        if pair.perturbed() == pair.base() {
            problem = problem.with_eigenvalues(base.eigenvalues().to_vec())?;
        }
        Ok(Self {
            epsilon: eps,
            pair,
            problem,
            offset,
        })
    }

    /// Zero, or `ε ψ₁` for perturbed-sample initial data.
    pub(crate) fn initial_offset(pair: &EmbeddingPair<T>, mode: InitialMode) -> SpectralVec<T> {
        let mut offset = SpectralVec::zeros(*pair.perturbed());
        if mode == InitialMode::PerturbedSample {
            offset.coeffs_mut()[0] = pair.epsilon();
        }
        offset
    }

    /// Runs the perturbed path against a stored base path.
    pub fn run(&self, base: &BaseTrace<T>, noise: &NoisePath<T>) -> Result<PathError<T>> {
        let n_eps = self.pair.perturbed().n_modes();
        let path = noise.key().path_index;
        let dt = self.problem.dt();
        let mut u = vec![T::zero(); n_eps];
        self.pair.embed_slice(&base.u0, &mut u);
        for (x, &o) in u.iter_mut().zip(self.offset.coeffs()) {
            *x = *x + o;
        }
        guard(&u, path, 0)?;
        let mut parts = DuhamelParts::new(&u);
        let mut stepper = ExpEulerStepper::new(&self.problem, dt)?;
        let mut buf = vec![T::zero(); n_eps];
        let mut err = PathError::zero();
        self.measure(&mut err, &u, &parts, base, 0, &mut buf);
        for (k, &dw) in noise.increments().iter().enumerate() {
            stepper.step_in_place(&mut u, dw);
            parts.advance(stepper.propagator(), stepper.last_drift(), stepper.last_diffusion(), dt, dw);
            guard(&u, path, k + 1)?;
            self.measure(&mut err, &u, &parts, base, k + 1, &mut buf);
        }
        Ok(err)
    }

    fn measure(&self, err: &mut PathError<T>, u: &[T], parts: &DuhamelParts<T>, base: &BaseTrace<T>, k: usize, buf: &mut [T]) {
        let mut gap = |mine: &[T], theirs: &[T]| {
            self.pair.embed_slice(theirs, buf);
            mine.iter().zip(buf.iter()).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>()
        };
        let (lin, drift, diff) = base.parts(k);
        err.total = err.total.max(gap(u, base.state(k)));
        err.i1 = err.i1.max(gap(&parts.linear, lin));
        err.i2 = err.i2.max(gap(&parts.drift, drift));
        err.i3 = err.i3.max(gap(&parts.diffusion, diff));
    }

    /// Increments driving the perturbed path given the base path's.
    pub fn perturbed_noise(coupling: Coupling, base: &NoisePath<T>) -> Result<NoisePath<T>> {
        match coupling {
            Coupling::Shared => Ok(base.clone()),
            Coupling::Independent => NoisePath::generate(
                base.key().with_lane(NoiseKey::DECOUPLED),
                base.horizon(),
                base.steps(),
            ),
        }
    }
}

/// Grid suprema of `‖u^ε_k − P u_k‖²` and of the same gap for each of the
/// three Duhamel sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathError<T> {
    pub total: T,
    pub i1: T,
    pub i2: T,
    pub i3: T,
}

impl<T: Scalar> PathError<T> {
    fn zero() -> Self {
        Self {
            total: T::zero(),
            i1: T::zero(),
            i2: T::zero(),
            i3: T::zero(),
        }
    }
}

/// A base path with its states and Duhamel sums at every grid time.
#[derive(Debug, Clone)]
pub struct BaseTrace<T> {
    n: usize,
    u0: Vec<T>,
    states: Vec<T>,
    linear: Vec<T>,
    drift: Vec<T>,
    diffusion: Vec<T>,
}

impl<T: Scalar> BaseTrace<T> {
    pub fn simulate(problem: &SpdeProblem<T>, noise: &NoisePath<T>) -> Result<Self> {
        let key = noise.key();
        let n = problem.domain().n_modes();
        let u0 = problem.initial().sample(key.master_seed, key.path_index).into_coeffs();
        let cap = (noise.steps() + 1) * n;
        let mut trace = Self {
            n,
            u0: u0.clone(),
            states: Vec::with_capacity(cap),
            linear: Vec::with_capacity(cap),
            drift: Vec::with_capacity(cap),
            diffusion: Vec::with_capacity(cap),
        };
        let dt = problem.dt();
        let mut u = u0;
        guard(&u, key.path_index, 0)?;
        let mut parts = DuhamelParts::new(&u);
        let mut stepper = ExpEulerStepper::new(problem, dt)?;
        trace.push(&u, &parts);
        for (k, &dw) in noise.increments().iter().enumerate() {
            stepper.step_in_place(&mut u, dw);
            parts.advance(stepper.propagator(), stepper.last_drift(), stepper.last_diffusion(), dt, dw);
            guard(&u, key.path_index, k + 1)?;
            trace.push(&u, &parts);
        }
        Ok(trace)
    }

    fn push(&mut self, u: &[T], parts: &DuhamelParts<T>) {
        self.states.extend_from_slice(u);
        self.linear.extend_from_slice(&parts.linear);
        self.drift.extend_from_slice(&parts.drift);
        self.diffusion.extend_from_slice(&parts.diffusion);
    }

    pub fn initial(&self) -> &[T] {
        &self.u0
    }

    pub fn steps(&self) -> usize {
        self.states.len() / self.n - 1
    }

    pub fn state(&self, k: usize) -> &[T] {
        &self.states[k * self.n..(k + 1) * self.n]
    }

    /// `(linear, drift, diffusion)` sums at step `k`.
    pub fn parts(&self, k: usize) -> (&[T], &[T], &[T]) {
        let r = k * self.n..(k + 1) * self.n;
        (&self.linear[r.clone()], &self.drift[r.clone()], &self.diffusion[r])
    }
}

/// One coupled path at one `ε`: the base path is driven by the Wiener
/// increments of `(master_seed, path_index)` and the perturbed path by the
/// same increments (or independent ones, per the scenario's coupling).
pub fn coupled_error_run<T: Scalar>(
    scenario: &PerturbationScenario<T>,
    eps: T,
    path_index: u64,
) -> Result<PathError<T>> {
    scenario.validate()?;
    let setup = PerturbedSetup::new(scenario, eps)?;
    let base = &scenario.base;
    let noise = NoisePath::generate(
        NoiseKey::wiener(scenario.master_seed, path_index),
        base.horizon(),
        base.steps(),
    )?;
    let trace = BaseTrace::simulate(base, &noise)?;
    setup.run(&trace, &PerturbedSetup::perturbed_noise(scenario.coupling, &noise)?)
}
