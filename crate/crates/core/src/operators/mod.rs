//! Semigroups, resolvents, the zero-extension/restriction pair between a base
//! interval and its dilation, and the operator-norm quantities measured on
//! them.

mod contour;
mod embedding;
mod hypotheses;
mod norm;
mod semigroup;

pub use contour::{semigroup_via_contour, ContourQuadrature, ContourSemigroup};
pub use embedding::{cross_entry, EmbeddingPair, TruncationPolicy};
pub use hypotheses::{
    h1_difference_matrix, resolvent_diff_matrix, resolvent_diff_norm, semigroup_diff_matrix,
    semigroup_diff_norm, spectrum_gap_check, tau_h1, ComplexRect, SpectrumReport, TauReport,
    TRUNCATION_TOLERANCE,
};
pub use norm::{operator_norm, operator_norm_complex, operator_norm_with, NormCertificate, PowerIteration};
pub use semigroup::{resolvent_apply, semigroup_apply, ComplexSpectralVec, DiagonalPropagator};
