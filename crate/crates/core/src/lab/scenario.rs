use crate::error::{invalid, Result};
use crate::operators::TruncationPolicy;
use crate::spde::SpdeProblem;
use crate::Scalar;

/// How `f^ε`, `g^ε` are obtained from `f`, `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityMode {
    /// `F^ε = P ∘ F ∘ Q`.
    Induced,
    /// The same recipe rebuilt directly on `(0, 1+ε)`.
    Native,
}

/// How `u₀^ε` is obtained from `u₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialMode {
    /// `u₀^ε = P u₀`.
    Pushforward,
    /// `u₀^ε = P u₀ + ε ψ₁`.
    PerturbedSample,
}

/// Whether the perturbed problem sees the base problem's Wiener increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Shared,
    /// Independent increments; only meaningful as a comparison.
    Independent,
}

#[derive(Debug, Clone)]
pub struct PerturbationScenario<T> {
    /// Problem on `(0, 1)`.
    pub base: SpdeProblem<T>,
    /// Strictly decreasing, non-negative.
    pub epsilon_grid: Vec<T>,
    /// Time-split parameters entering only the bound-shape fit.
    pub r_grid: Vec<T>,
    pub nonlinearity_mode: NonlinearityMode,
    pub initial_mode: InitialMode,
    pub coupling: Coupling,
    pub truncation: TruncationPolicy,
    pub paths: usize,
    pub master_seed: u64,
}

impl<T: Scalar> PerturbationScenario<T> {
    pub fn new(base: SpdeProblem<T>, epsilon_grid: Vec<T>, r_grid: Vec<T>) -> Result<Self> {
        let s = Self {
            base,
            epsilon_grid,
            r_grid,
            nonlinearity_mode: NonlinearityMode::Induced,
            initial_mode: InitialMode::Pushforward,
            coupling: Coupling::Shared,
            truncation: TruncationPolicy::default(),
            paths: 1000,
            master_seed: 0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base.domain().length() != T::one() {
            return Err(invalid("base", "base problem must live on (0, 1)"));
        }
        if self.epsilon_grid.is_empty() {
            return Err(invalid("epsilon_grid", "must not be empty"));
        }
        if self.epsilon_grid.iter().any(|&e| !(e >= T::zero()) || !e.is_finite()) {
            return Err(invalid("epsilon_grid", "entries must be finite and non-negative"));
        }
        if self.epsilon_grid.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(invalid("epsilon_grid", "must be strictly decreasing"));
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|&r| !(r > T::zero())) {
            return Err(invalid("r_grid", "must be non-empty with positive entries"));
        }
        if self.paths == 0 {
            return Err(invalid("paths", "must be at least 1"));
        }
        Ok(())
    }

    pub fn with_paths(mut self, paths: usize) -> Self {
        self.paths = paths;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_modes(mut self, nonlinearity: NonlinearityMode, initial: InitialMode) -> Self {
        self.nonlinearity_mode = nonlinearity;
        self.initial_mode = initial;
        self
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_truncation(mut self, truncation: TruncationPolicy) -> Self {
        self.truncation = truncation;
        self
    }

    /// `2T(T+4)k₂`, the Lipschitz factor of the fixed-point map in the
    /// `E sup‖·‖²` norm; below 1 it is a contraction.
    pub fn contraction_factor(&self) -> T {
        let t = self.base.horizon();
        T::lit(2.0) * t * (t + T::lit(4.0)) * self.base.k2()
    }

    /// Radius of the probe ball for the compatibility defects: `2R` for a
    /// drift supported in `D_R`, otherwise twice the initial datum's scale.
    pub fn probe_radius(&self) -> T {
        match self.base.drift().support_radius() {
            Some(r) if r > T::zero() => T::lit(2.0) * r,
            _ => T::lit(2.0) * (T::one() + self.base.initial().second_moment().sqrt()),
        }
    }
}
