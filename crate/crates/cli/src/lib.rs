//! Command-line driver for the `spde-perturb` laboratory: strict JSON
//! configuration, deterministic CSV output, markdown reports and a run
//! manifest with per-record checksums.
//!
//! Exit codes are stable: 0 ok, 1 other failure, 2 configuration,
//! 3 operator truncation, 4 blow-up, 5 convergence verdict FAIL.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;

use thiserror::Error;

pub use commands::{run, Command, Options, Outcome};
pub use config::RunConfig;
pub use manifest::RunManifest;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("operator truncation: {0}")]
    Truncation(String),
    #[error("blow-up on path {path}: {message}")]
    BlowUp { path: u64, message: String },
    #[error("convergence verdict FAIL: {0}")]
    ConvergenceFail(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::BlowUp { .. } => 4,
            CliError::ConvergenceFail(_) => 5,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<spde_perturb::Error> for CliError {
    fn from(e: spde_perturb::Error) -> Self {
        use spde_perturb::Error as E;
        let message = e.to_string();
        match e {
            E::InvalidParameter { .. }
            | E::ModeOutOfRange { .. }
            | E::DomainMismatch(_)
            | E::GridTooCoarse { .. }
            | E::NegativeTime(_)
            | E::SpectrumIntersection(_) => CliError::Config(message),
            E::Truncation { .. } => CliError::Truncation(message),
            E::BlowUp { path, .. } => CliError::BlowUp { path, message },
            E::InSpectrum { .. } | E::QuadratureMismatch { .. } | E::NoConvergence { .. } => CliError::Other(message),
        }
    }
}
