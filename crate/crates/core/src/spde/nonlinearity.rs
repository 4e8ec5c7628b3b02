//! Drift and diffusion coefficients `H → H`.
//!
//! Each coefficient carries a declared Lipschitz constant `L` (contributing
//! `L²` to `k₂`) and a growth constant `k` with `‖F(u)‖² ≤ k(1 + ‖u‖²)`.
//! The cutoff Nemytskii family evaluates a pointwise map on the interior grid
//! and is switched off smoothly outside the ball `‖u‖ ≤ R`.

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::operators::EmbeddingPair;
use crate::spde::cutoff::cutoff_unchecked;
use crate::spectral::{DirichletDomain, SineTransform, SpectralVec};
use crate::Scalar;

/// Pointwise maps with `φ(0) = 0`, `|φ(x)| ≤ |x|` and Lipschitz constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pointwise {
    Sin,
    Tanh,
}

impl Pointwise {
    pub fn eval<T: Scalar>(self, x: T) -> T {
        match self {
            Pointwise::Sin => x.sin(),
            Pointwise::Tanh => x.tanh(),
        }
    }

    pub fn lipschitz(self) -> f64 {
        1.0
    }

    /// Sharp constant in `|φ(x)| ≤ c|x|`.
    pub fn linear_bound(self) -> f64 {
        1.0
    }

    pub fn tag(self) -> &'static str {
        match self {
            Pointwise::Sin => "sin",
            Pointwise::Tanh => "tanh",
        }
    }
}

impl FromStr for Pointwise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin" => Ok(Pointwise::Sin),
            "tanh" => Ok(Pointwise::Tanh),
            other => Err(invalid("pointwise", format!("unknown tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum NonlinearityKind<T> {
    Zero,
    /// `u ↦ slope·u + offset`.
    Affine { slope: T, offset: SpectralVec<T> },
    /// `u ↦ θ_R(‖u‖) Π_N[φ ∘ u]` evaluated on the interior grid.
    CutoffNemytskii {
        pointwise: Pointwise,
        radius: T,
        transform: Arc<SineTransform<T>>,
    },
    /// `v ↦ P F(Q v)` on the perturbed space.
    Induced {
        pair: Arc<EmbeddingPair<T>>,
        inner: Box<Nonlinearity<T>>,
    },
}

#[derive(Debug, Clone)]
pub struct Nonlinearity<T> {
    domain: DirichletDomain<T>,
    kind: NonlinearityKind<T>,
    lipschitz: T,
    growth: T,
}

impl<T: Scalar> Nonlinearity<T> {
    pub fn zero(domain: DirichletDomain<T>) -> Self {
        Self {
            domain,
            kind: NonlinearityKind::Zero,
            lipschitz: T::zero(),
            growth: T::zero(),
        }
    }

    pub fn constant(offset: SpectralVec<T>) -> Self {
        Self::affine(T::zero(), offset)
    }

    pub fn affine(slope: T, offset: SpectralVec<T>) -> Self {
        let domain = *offset.domain();
        let growth = T::lit(2.0) * (slope * slope).max(offset.norm_sq());
        Self {
            domain,
            kind: NonlinearityKind::Affine { slope, offset },
            lipschitz: slope.abs(),
            growth,
        }
    }

    /// Cutoff Nemytskii operator on a grid of `grid ≥ N` interior points.
    pub fn cutoff_nemytskii(
        domain: DirichletDomain<T>,
        pointwise: Pointwise,
        radius: T,
        grid: usize,
    ) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(invalid("radius", format!("must be positive, got {radius}")));
        }
        let transform = Arc::new(SineTransform::new(domain, grid)?);
        let lip = T::lit(pointwise.lipschitz());
        let lin = T::lit(pointwise.linear_bound());
        Ok(Self {
            domain,
            kind: NonlinearityKind::CutoffNemytskii {
                pointwise,
                radius,
                transform,
            },
            lipschitz: lip + T::lit(3.0) * lin,
            growth: lin * lin,
        })
    }

    pub fn domain(&self) -> &DirichletDomain<T> {
        &self.domain
    }

    pub fn kind(&self) -> &NonlinearityKind<T> {
        &self.kind
    }

    /// Declared Lipschitz constant `L`, so that `‖F(u) − F(v)‖ ≤ L‖u − v‖`.
    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    /// `k` in `‖F(u)‖² ≤ k(1 + ‖u‖²)`.
    pub fn growth(&self) -> T {
        self.growth
    }

    /// `Some(R)` when `F` vanishes outside `‖u‖ ≤ R`.
    pub fn support_radius(&self) -> Option<T> {
        match &self.kind {
            NonlinearityKind::Zero => Some(T::zero()),
            NonlinearityKind::Affine { .. } => None,
            NonlinearityKind::CutoffNemytskii { radius, .. } => Some(*radius),
            NonlinearityKind::Induced { inner, .. } => inner.support_radius(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, NonlinearityKind::Zero)
    }

    pub fn apply(&self, u: &SpectralVec<T>) -> Result<SpectralVec<T>> {
        if *u.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "nonlinearity on (L={}, N={}) applied to (L={}, N={})",
                self.domain.length(),
                self.domain.n_modes(),
                u.domain().length(),
                u.domain().n_modes()
            )));
        }
        let mut out = SpectralVec::zeros(self.domain);
        self.apply_slice(u.coeffs(), out.coeffs_mut());
        Ok(out)
    }

    /// Coefficient-level evaluation without domain checks.
    pub fn apply_slice(&self, u: &[T], out: &mut [T]) {
        match &self.kind {
            NonlinearityKind::Zero => out.iter_mut().for_each(|o| *o = T::zero()),
            NonlinearityKind::Affine { slope, offset } => {
                for ((o, &x), &b) in out.iter_mut().zip(u).zip(offset.coeffs()) {
                    *o = *slope * x + b;
                }
            }
            NonlinearityKind::CutoffNemytskii {
                pointwise,
                radius,
                transform,
            } => {
                let norm = u.iter().map(|&x| x * x).sum::<T>().sqrt();
                let theta = cutoff_unchecked(norm, *radius);
                if theta == T::zero() {
                    out.iter_mut().for_each(|o| *o = T::zero());
                    return;
                }
                let mut grid = vec![T::zero(); transform.grid()];
                transform.to_grid_slice(u, &mut grid);
                grid.iter_mut().for_each(|g| *g = pointwise.eval(*g));
                transform.from_grid_slice(&grid, out);
                out.iter_mut().for_each(|o| *o = *o * theta);
            }
            NonlinearityKind::Induced { pair, inner } => {
                let n = pair.base().n_modes();
                let mut restricted = vec![T::zero(); n];
                pair.restrict_slice(u, &mut restricted);
                let mut image = vec![T::zero(); n];
                inner.apply_slice(&restricted, &mut image);
                pair.embed_slice(&image, out);
            }
        }
    }
}

/// `F^ε = P ∘ F ∘ Q`, which satisfies `F^ε(Pu) = P F(QPu)`, i.e. `P F(u)` up
/// to truncation of the extension.
pub fn induced_perturbed_nonlinearity<T: Scalar>(
    pair: Arc<EmbeddingPair<T>>,
    f: &Nonlinearity<T>,
) -> Result<Nonlinearity<T>> {
    if f.domain != *pair.base() {
        return Err(Error::DomainMismatch(
            "nonlinearity must live on the pair's base domain".into(),
        ));
    }
    if pair.epsilon() == T::zero() && pair.perturbed() == pair.base() {
        return Ok(f.clone());
    }
    if f.is_zero() {
        return Ok(Nonlinearity::zero(*pair.perturbed()));
    }
    Ok(Nonlinearity {
        domain: *pair.perturbed(),
        lipschitz: f.lipschitz,
        growth: f.growth,
        kind: NonlinearityKind::Induced {
            pair,
            inner: Box::new(f.clone()),
        },
    })
}
