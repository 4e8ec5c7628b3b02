//! Spectral Galerkin laboratory for semilinear stochastic heat equations on an
//! interval `(0, 1)` and its dilations `(0, 1+ε)`.
//!
//! The layers, bottom up:
//!
//! - [`spectral`]: Dirichlet sine bases, coefficient vectors, grid transforms.
//! - [`operators`]: semigroups, resolvents, the zero-extension/restriction
//!   pair, operator norms and the resolvent defect `τ(ε)`.
//! - [`spde`]: Lipschitz nonlinearities, counter-based scalar Wiener noise and
//!   the exponential Euler scheme for the mild formulation.
//! - [`lab`]: the coupled base/perturbed Monte Carlo experiment.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the double-precision instantiation used by the CLI.

// Negated comparisons are the NaN-rejecting form throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lab;
pub mod operators;
mod scalar;
pub mod spde;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{CompensatedSum, MeanEstimate, Scalar};

pub type DirichletDomain64 = spectral::DirichletDomain<f64>;
pub type SpectralVec64 = spectral::SpectralVec<f64>;
pub type GridVec64 = spectral::GridVec<f64>;
pub type EmbeddingPair64 = operators::EmbeddingPair<f64>;
pub type ContourQuadrature64 = operators::ContourQuadrature<f64>;
pub type Nonlinearity64 = spde::Nonlinearity<f64>;
pub type SpdeProblem64 = spde::SpdeProblem<f64>;
pub type PerturbationScenario64 = lab::PerturbationScenario<f64>;
pub type ConvergenceRecord64 = lab::ConvergenceRecord<f64>;

pub type DirichletDomain32 = spectral::DirichletDomain<f32>;
pub type SpectralVec32 = spectral::SpectralVec<f32>;
