//! Dirichlet-Laplacian eigenbases on intervals and the coefficient/grid
//! representations built on them.
//!
//! On `(0, L)` the operator `A = -d²/dx²` with homogeneous Dirichlet
//! conditions has eigenpairs `λ_n = (nπ/L)²`, `φ_n(x) = sqrt(2/L) sin(nπx/L)`.
//! A [`SpectralVec`] stores the first `N` coefficients of a function in this
//! orthonormal basis, so norms and inner products are plain Euclidean ones.

mod domain;
mod transform;
mod vector;

pub use domain::{DirichletDomain, Eigenfunction};
pub use transform::{from_grid, to_grid, GridVec, SineTransform};
pub use vector::SpectralVec;
