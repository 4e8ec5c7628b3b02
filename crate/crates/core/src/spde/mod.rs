//! Mild-solution simulation of `du + Au dt = f(u) dt + g(u) dw(t)` driven by a
//! single real Wiener process, discretized by exponential Euler.

mod cutoff;
mod moments;
mod noise;
mod nonlinearity;
mod problem;
mod stepper;

pub use cutoff::{cutoff, cutoff_lipschitz};
pub use moments::{moment_bound_check, MomentReport, MIN_MOMENT_PATHS};
pub use noise::{NoiseKey, NoisePath};
pub use nonlinearity::{induced_perturbed_nonlinearity, Nonlinearity, NonlinearityKind, Pointwise};
pub use problem::{InitialCondition, SpdeProblem};
pub(crate) use stepper::guard;
pub use stepper::{exp_euler_step, simulate_path, simulate_path_summary, DuhamelParts, ExpEulerStepper, PathOutcome, BLOW_UP_NORM};
