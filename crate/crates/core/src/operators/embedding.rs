//! Zero extension `P: H → H^ε` and restriction `Q: H^ε → H` between
//! `L²(0, 1)` and `L²(0, 1+ε)`, expanded in the two sine bases.
//!
//! Both maps share the cross matrix `c_mn = ⟨P φ_n, ψ_m⟩_{(0,1+ε)}`:
//! `P` acts as `C` and `Q` as `Cᵀ`. At the function level `QP = I`,
//! `‖P‖ = ‖Q‖ = 1` and `‖Pu‖ = ‖u‖`; on truncated coefficients `P` can
//! only lose the tail of the extension.

use ndarray::Array2;

use crate::error::{invalid, Error, Result};
use crate::spectral::{DirichletDomain, SpectralVec};
use crate::Scalar;

/// Rule for the perturbed truncation `N_ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub margin: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { margin: 16 }
    }
}

impl TruncationPolicy {
    /// `ceil((1+ε)N) + margin`, and exactly `N` for the unperturbed domain.
    pub fn perturbed_modes<T: Scalar>(&self, eps: T, n: usize) -> usize {
        if eps == T::zero() {
            return n;
        }
        let scaled = ((T::one() + eps) * T::from_usize_lossy(n)).ceil();
        scaled.to_usize().unwrap_or(n) + self.margin
    }
}

/// `sin(d) / (2d)`, continuous at zero.
fn half_sinc<T: Scalar>(d: T) -> T {
    if d.abs() < T::lit(1e-4) {
        let d2 = d * d;
        (T::one() - d2 / T::lit(6.0) + d2 * d2 / T::lit(120.0)) / T::lit(2.0)
    } else {
        d.sin() / (d + d)
    }
}

/// `⟨P φ_n, ψ_m⟩ = (2/√(1+ε)) ∫₀¹ sin(nπx) sin(mπx/(1+ε)) dx`, 1-based.
///
/// With `a = nπ`, `b = mπ/(1+ε)` the integral is
/// `sin(a−b)/(2(a−b)) − sin(a+b)/(2(a+b))`.
pub fn cross_entry<T: Scalar>(n: usize, m: usize, eps: T) -> T {
    let stretch = T::one() + eps;
    if eps == T::zero() {
        return if n == m { T::one() } else { T::zero() };
    }
    let nf = T::from_usize_lossy(n);
    let mf = T::from_usize_lossy(m);
    let diff = T::PI() * (nf * stretch - mf) / stretch;
    let sum = T::PI() * (nf * stretch + mf) / stretch;
    T::lit(2.0) / stretch.sqrt() * (half_sinc(diff) - half_sinc(sum))
}

/// The pair `(P, Q)` for a dilation `(0, 1) ⊂ (0, 1+ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPair<T> {
    epsilon: T,
    base: DirichletDomain<T>,
    perturbed: DirichletDomain<T>,
    cross: Array2<T>,
}

impl<T: Scalar> EmbeddingPair<T> {
    pub fn new(eps: T, n: usize, n_eps: usize) -> Result<Self> {
        if !(eps >= T::zero()) || !eps.is_finite() {
            return Err(invalid("epsilon", format!("must be non-negative, got {eps}")));
        }
        let base = DirichletDomain::unit(n)?;
        let perturbed = DirichletDomain::dilated(eps, n_eps)?;
        let cross = Array2::from_shape_fn((n_eps, n), |(m, k)| cross_entry(k + 1, m + 1, eps));
        Ok(Self {
            epsilon: eps,
            base,
            perturbed,
            cross,
        })
    }

    pub fn with_policy(eps: T, n: usize, policy: TruncationPolicy) -> Result<Self> {
        Self::new(eps, n, policy.perturbed_modes(eps, n))
    }

    /// Same dilation with a different perturbed truncation.
    pub fn with_perturbed_modes(&self, n_eps: usize) -> Result<Self> {
        Self::new(self.epsilon, self.base.n_modes(), n_eps)
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn base(&self) -> &DirichletDomain<T> {
        &self.base
    }

    pub fn perturbed(&self) -> &DirichletDomain<T> {
        &self.perturbed
    }

    /// `N_ε × N` matrix of `P` in the two bases.
    pub fn cross(&self) -> &Array2<T> {
        &self.cross
    }

    /// `out = C u`, no domain checks.
    pub fn embed_slice(&self, u: &[T], out: &mut [T]) {
        let n = self.base.n_modes();
        debug_assert_eq!(u.len(), n);
        debug_assert_eq!(out.len(), self.perturbed.n_modes());
        let data = self.cross.as_slice().expect("standard layout");
        for (row, o) in data.chunks_exact(n).zip(out.iter_mut()) {
            *o = row.iter().zip(u).map(|(&c, &x)| c * x).sum();
        }
    }

    /// `out = Cᵀ v`, no domain checks.
    pub fn restrict_slice(&self, v: &[T], out: &mut [T]) {
        let n = self.base.n_modes();
        debug_assert_eq!(v.len(), self.perturbed.n_modes());
        debug_assert_eq!(out.len(), n);
        out.iter_mut().for_each(|o| *o = T::zero());
        let data = self.cross.as_slice().expect("standard layout");
        for (row, &x) in data.chunks_exact(n).zip(v) {
            for (o, &c) in out.iter_mut().zip(row) {
                *o = *o + c * x;
            }
        }
    }

    /// Zero extension `P u`.
    pub fn embed(&self, u: &SpectralVec<T>) -> Result<SpectralVec<T>> {
        if *u.domain() != self.base {
            return Err(Error::DomainMismatch("P expects a vector on the base domain".into()));
        }
        let mut out = SpectralVec::zeros(self.perturbed);
        self.embed_slice(u.coeffs(), out.coeffs_mut());
        Ok(out)
    }

    /// Restriction `Q v` to `(0, 1)`.
    pub fn restrict(&self, v: &SpectralVec<T>) -> Result<SpectralVec<T>> {
        if *v.domain() != self.perturbed {
            return Err(Error::DomainMismatch(
                "Q expects a vector on the perturbed domain".into(),
            ));
        }
        let mut out = SpectralVec::zeros(self.base);
        self.restrict_slice(v.coeffs(), out.coeffs_mut());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_pair_is_identity() {
        let pair = EmbeddingPair::<f64>::with_policy(0.0, 8, TruncationPolicy::default()).unwrap();
        assert_eq!(pair.perturbed().n_modes(), 8);
        assert_eq!(pair.cross(), &Array2::<f64>::eye(8));
        let u = SpectralVec::from_coeffs(*pair.base(), (1..=8).map(f64::from).collect()).unwrap();
        let pu = pair.embed(&u).unwrap();
        assert_eq!(pu.coeffs(), u.coeffs());
        assert_eq!(pair.restrict(&pu).unwrap(), u);
    }

    #[test]
    fn policy_sizes() {
        let p = TruncationPolicy::default();
        assert_eq!(p.perturbed_modes(0.0_f64, 64), 64);
        assert_eq!(p.perturbed_modes(0.1_f64, 64), 71 + 16);
        assert_eq!(p.perturbed_modes(0.025_f64, 64), 66 + 16);
    }

    #[test]
    fn half_sinc_is_continuous() {
        let below: f64 = half_sinc(0.999e-4);
        let above: f64 = half_sinc(1.001e-4);
        // slope of the function over the 2e-7 gap is ~3e-12
        assert!((below - above).abs() < 1e-11);
        let d = 1.0001e-4_f64;
        let taylor = (1.0 - d * d / 6.0 + d.powi(4) / 120.0) / 2.0;
        assert!((half_sinc(d) - taylor).abs() < 1e-16);
        assert_eq!(half_sinc(0.0_f64), 0.5);
    }

    #[test]
    fn domain_checks() {
        let pair = EmbeddingPair::<f64>::new(0.1, 4, 8).unwrap();
        let wrong = SpectralVec::zeros(DirichletDomain::unit(5).unwrap());
        assert!(pair.embed(&wrong).is_err());
        assert!(pair.restrict(&SpectralVec::zeros(*pair.base())).is_err());
        assert!(EmbeddingPair::<f64>::new(-0.1, 4, 8).is_err());
    }
}
