//! Coupled base/perturbed experiments: both problems are driven by the same
//! Wiener increments, the base solution is carried to the dilated interval by
//! zero extension, and `E sup_t ‖u^ε − P u‖²` is tracked along a decreasing
//! grid of dilations together with the quantities that bound it.

mod coupled;
mod quantifiers;
mod scenario;
mod study;

pub use coupled::{coupled_error_run, BaseTrace, PathError, PerturbedSetup};
pub use quantifiers::{
    estimate_tau0, estimate_tau12, native_perturbed_nonlinearity, probe_defects, ProbeSettings, Tau12Report,
};
pub use scenario::{Coupling, InitialMode, NonlinearityMode, PerturbationScenario};
pub use study::{bound_shape, convergence_study, judge, ConvergenceRecord, ConvergenceStudy, Verdict, VerdictCriteria};
