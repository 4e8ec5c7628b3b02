//! `e^{-At} = (1/2πi) ∫_γ (λ + A)^{-1} e^{λt} dλ` on the two rays
//! `γ = {r e^{-i3π/4}} ∪ {r e^{i3π/4}}`, the boundary of the sector
//! `|arg λ| ≤ 3π/4`, which lies in the resolvent set of `-A`.
//!
//! Nodes are geometric, `r_k = r_max ρ^k` down to `r_min`, i.e. uniform in
//! `s = ln r` with step `h = -ln ρ`. The trapezoidal rule in `s` carries the
//! weight `h r_k` at node `r_k` and converges geometrically because the
//! integrand is analytic in the strip `|Im s| < π/4`. `r_max` is set from the
//! decay `|e^{λt}| = e^{-(√2/2) r t}` along both rays.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::operators::semigroup::{resolvent_apply, semigroup_apply};
use crate::spectral::SpectralVec;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourQuadrature<T> {
    r_max: T,
    ratio: T,
    r_min: T,
    /// `(radius, weight)` pairs, shared by both rays.
    nodes: Vec<(T, T)>,
}

impl<T: Scalar> ContourQuadrature<T> {
    pub const DEFAULT_RATIO: f64 = 0.85;
    pub const DEFAULT_R_MIN: f64 = 1e-12;
    pub const DEFAULT_DECAY_TOL: f64 = 1e-12;

    pub fn new(r_max: T, ratio: T, r_min: T) -> Result<Self> {
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(invalid("ratio", format!("must lie in (0, 1), got {ratio}")));
        }
        if !(r_min > T::zero() && r_max > r_min) {
            return Err(invalid(
                "r_max",
                format!("need 0 < r_min < r_max, got r_min={r_min}, r_max={r_max}"),
            ));
        }
        let h = -ratio.ln();
        let mut nodes = Vec::new();
        let mut r = r_max;
        while r >= r_min {
            nodes.push((r, h * r));
            r = r * ratio;
        }
        if let Some(first) = nodes.first_mut() {
            first.1 = first.1 / T::lit(2.0);
        }
        if let Some(last) = nodes.last_mut() {
            last.1 = last.1 / T::lit(2.0);
        }
        Ok(Self {
            r_max,
            ratio,
            r_min,
            nodes,
        })
    }

    /// Default rule valid for every `t ≥ t_min`.
    pub fn for_time(t_min: T) -> Result<Self> {
        Self::with_settings(
            t_min,
            T::lit(Self::DEFAULT_RATIO),
            T::lit(Self::DEFAULT_R_MIN),
            T::lit(Self::DEFAULT_DECAY_TOL),
        )
    }

    /// `r_max` chosen so that `e^{-(√2/2) r_max t_min} ≤ decay_tol`.
    pub fn with_settings(t_min: T, ratio: T, r_min: T, decay_tol: T) -> Result<Self> {
        if !(t_min > T::zero()) {
            return Err(invalid("t_min", format!("must be positive, got {t_min}")));
        }
        if !(decay_tol > T::zero() && decay_tol < T::one()) {
            return Err(invalid("decay_tol", format!("must lie in (0, 1), got {decay_tol}")));
        }
        let r_max = -decay_tol.ln() * T::SQRT_2() / t_min;
        Self::new(r_max, ratio, r_min)
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn r_min(&self) -> T {
        self.r_min
    }

    pub fn ratio(&self) -> T {
        self.ratio
    }

    pub fn nodes(&self) -> &[(T, T)] {
        &self.nodes
    }

    /// Ray direction `e^{i3π/4}`; the lower ray is its conjugate.
    pub fn direction() -> Complex<T> {
        let theta = T::lit(3.0) * T::FRAC_PI_4();
        Complex::new(theta.cos(), theta.sin())
    }

    /// Every node `λ = r e^{±i3π/4}` as a complex number, upper ray first.
    pub fn points(&self) -> Vec<Complex<T>> {
        let dir = Self::direction();
        let upper = self.nodes.iter().map(|&(r, _)| dir * r);
        let lower = self.nodes.iter().map(|&(r, _)| dir.conj() * r);
        upper.chain(lower).collect()
    }
}

/// Output of the contour evaluation: the real part is the semigroup, the
/// imaginary part is a conjugate-symmetry residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSemigroup<T> {
    pub value: SpectralVec<T>,
    pub max_abs_imag: T,
}

impl<T: Scalar> ContourSemigroup<T> {
    /// Relative disagreement with the spectral formula `e^{-λ_n t}`.
    pub fn relative_error(&self, t: T, u: &SpectralVec<T>) -> Result<T> {
        let exact = semigroup_apply(t, u)?;
        let diff = self.value.sub(&exact)?.norm();
        let scale = exact.norm();
        Ok(if scale > T::zero() { diff / scale } else { diff })
    }

    /// Surfaces a quadrature failure as an error instead of a silent result.
    pub fn validate(&self, t: T, u: &SpectralVec<T>, tol: T) -> Result<T> {
        let rel_err = self.relative_error(t, u)?;
        if !(rel_err <= tol) {
            return Err(Error::QuadratureMismatch {
                rel_err: rel_err.to_f64_lossy(),
                tol: tol.to_f64_lossy(),
            });
        }
        Ok(rel_err)
    }
}

/// Quadrature of the resolvent integral applied to `u`.
pub fn semigroup_via_contour<T: Scalar>(
    t: T,
    u: &SpectralVec<T>,
    quad: &ContourQuadrature<T>,
) -> Result<ContourSemigroup<T>> {
    if !(t > T::zero()) {
        return Err(invalid(
            "t",
            format!("contour representation needs t > 0, got {t}"),
        ));
    }
    let dir = ContourQuadrature::<T>::direction();
    let n = u.len();
    let mut acc = vec![Complex::new(T::zero(), T::zero()); n];
    for &(r, w) in quad.nodes() {
        // upper ray traversed outward, lower ray inward
        for (d, sign) in [(dir, T::one()), (dir.conj(), -T::one())] {
            let lambda = d * r;
            let res = resolvent_apply(lambda, u)?;
            let factor = (lambda * t).exp() * d * (w * sign);
            for (a, c) in acc.iter_mut().zip(&res.coeffs) {
                *a = *a + factor * c;
            }
        }
    }
    // divide by 2πi
    let two_pi_i = Complex::new(T::zero(), T::lit(2.0) * T::PI());
    let mut coeffs = Vec::with_capacity(n);
    let mut max_abs_imag = T::zero();
    for a in acc {
        let z = a / two_pi_i;
        max_abs_imag = max_abs_imag.max(z.im.abs());
        coeffs.push(z.re);
    }
    Ok(ContourSemigroup {
        value: SpectralVec::from_coeffs(*u.domain(), coeffs)?,
        max_abs_imag,
    })
}
