use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("mode index {index} out of range 1..={n_modes}")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("grid of {grid} points cannot resolve {modes} modes")]
    GridTooCoarse { grid: usize, modes: usize },

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("resolvent evaluated at {re}{im:+}i, within tolerance of spectrum point -{eigenvalue}")]
    InSpectrum { re: f64, im: f64, eigenvalue: f64 },

    #[error("contour quadrature disagrees with spectral semigroup: relative error {rel_err:e} > {tol:e}")]
    QuadratureMismatch { rel_err: f64, tol: f64 },

    #[error("power iteration did not converge after {iterations} iterations (relative change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("truncation check failed: value {value:e} vs doubled truncation {doubled:e}")]
    Truncation { value: f64, doubled: f64 },

    #[error("path {path} blew up at step {step} (norm {norm:e})")]
    BlowUp { path: u64, step: usize, norm: f64 },

    #[error("compact set intersects the spectrum: distance {0:e}")]
    SpectrumIntersection(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
