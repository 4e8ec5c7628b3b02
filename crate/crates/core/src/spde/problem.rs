use crate::error::{invalid, Error, Result};
use crate::spde::noise::NoiseKey;
use crate::spde::nonlinearity::Nonlinearity;
use crate::spectral::{DirichletDomain, SpectralVec};
use crate::Scalar;

/// `u₀ = mean + jitter Σ_n ξ_n/n φ_n` with i.i.d. standard normal `ξ_n`
/// drawn per path; `jitter = 0` is a deterministic datum.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition<T> {
    mean: SpectralVec<T>,
    jitter: T,
}

impl<T: Scalar> InitialCondition<T> {
    pub fn deterministic(mean: SpectralVec<T>) -> Self {
        Self {
            mean,
            jitter: T::zero(),
        }
    }

    pub fn with_jitter(mean: SpectralVec<T>, jitter: T) -> Result<Self> {
        if !(jitter >= T::zero()) {
            return Err(invalid("jitter", format!("must be non-negative, got {jitter}")));
        }
        Ok(Self { mean, jitter })
    }

    pub fn mean(&self) -> &SpectralVec<T> {
        &self.mean
    }

    pub fn jitter(&self) -> T {
        self.jitter
    }

    pub fn is_deterministic(&self) -> bool {
        self.jitter == T::zero()
    }

    pub fn sample(&self, master_seed: u64, path_index: u64) -> SpectralVec<T> {
        if self.is_deterministic() {
            return self.mean.clone();
        }
        let key = NoiseKey::wiener(master_seed, path_index).with_lane(NoiseKey::INITIAL);
        let mut u = self.mean.clone();
        for (n, (c, z)) in u
            .coeffs_mut()
            .iter_mut()
            .zip(key.normals(self.mean.len()))
            .enumerate()
        {
            *c = *c + self.jitter * T::lit(z) / T::from_usize_lossy(n + 1);
        }
        u
    }

    /// `E‖u₀‖²`.
    pub fn second_moment(&self) -> T {
        let tail: T = (1..=self.mean.len())
            .map(|n| T::one() / T::from_usize_lossy(n * n))
            .sum();
        self.mean.norm_sq() + self.jitter * self.jitter * tail
    }
}

/// `du + Au dt = f(u) dt + g(u) dw`, `u(0) = u₀`, on `[0, T]` with `K` steps.
#[derive(Debug, Clone)]
pub struct SpdeProblem<T> {
    domain: DirichletDomain<T>,
    drift: Nonlinearity<T>,
    diffusion: Nonlinearity<T>,
    initial: InitialCondition<T>,
    horizon: T,
    steps: usize,
    eigenvalues: Vec<T>,
}

impl<T: Scalar> SpdeProblem<T> {
    pub fn new(
        drift: Nonlinearity<T>,
        diffusion: Nonlinearity<T>,
        initial: InitialCondition<T>,
        horizon: T,
        steps: usize,
    ) -> Result<Self> {
        let domain = *initial.mean().domain();
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(invalid("horizon", format!("must be positive, got {horizon}")));
        }
        if steps == 0 {
            return Err(invalid("time_steps", "must be at least 1"));
        }
        for (name, f) in [("drift", &drift), ("diffusion", &diffusion)] {
            if *f.domain() != domain {
                return Err(Error::DomainMismatch(format!(
                    "{name} does not live on the initial datum's domain"
                )));
            }
        }
        Ok(Self {
            domain,
            drift,
            diffusion,
            initial,
            horizon,
            steps,
            eigenvalues: domain.eigenvalues(),
        })
    }

    /// Replaces the generator's spectrum, e.g. with zeros to switch `A` off.
    pub fn with_eigenvalues(mut self, eigenvalues: Vec<T>) -> Result<Self> {
        if eigenvalues.len() != self.domain.n_modes() {
            return Err(invalid(
                "eigenvalues",
                format!("need {} values, got {}", self.domain.n_modes(), eigenvalues.len()),
            ));
        }
        self.eigenvalues = eigenvalues;
        Ok(self)
    }

    pub fn domain(&self) -> &DirichletDomain<T> {
        &self.domain
    }

    pub fn drift(&self) -> &Nonlinearity<T> {
        &self.drift
    }

    pub fn diffusion(&self) -> &Nonlinearity<T> {
        &self.diffusion
    }

    pub fn initial(&self) -> &InitialCondition<T> {
        &self.initial
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> T {
        self.horizon / T::from_usize_lossy(self.steps)
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `k₂ = L_f² + L_g²`.
    pub fn k2(&self) -> T {
        let (a, b) = (self.drift.lipschitz(), self.diffusion.lipschitz());
        a * a + b * b
    }

    /// `k₁` with `‖f(u)‖² + ‖g(u)‖² ≤ k₁(1 + ‖u‖²)`.
    pub fn k1(&self) -> T {
        self.drift.growth() + self.diffusion.growth()
    }

    pub fn with_steps(&self, steps: usize) -> Result<Self> {
        let mut p = Self::new(
            self.drift.clone(),
            self.diffusion.clone(),
            self.initial.clone(),
            self.horizon,
            steps,
        )?;
        p.eigenvalues = self.eigenvalues.clone();
        Ok(p)
    }
}
