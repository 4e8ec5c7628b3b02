use num_complex::Complex;

use crate::error::{Error, Result};
use crate::spectral::{DirichletDomain, SpectralVec};
use crate::Scalar;

/// `e^{-At}u = Σ e^{-λ_n t}(u, φ_n) φ_n`.
pub fn semigroup_apply<T: Scalar>(t: T, u: &SpectralVec<T>) -> Result<SpectralVec<T>> {
    if t < T::zero() || t.is_nan() {
        return Err(Error::NegativeTime(t.to_f64_lossy()));
    }
    let mut out = u.clone();
    for (c, lambda) in out.coeffs_mut().iter_mut().zip(u.domain().eigenvalues()) {
        *c = *c * (-lambda * t).exp();
    }
    Ok(out)
}

/// Complex-valued coefficient vector, produced by resolvents off the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectralVec<T> {
    pub domain: DirichletDomain<T>,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexSpectralVec<T> {
    pub fn re(&self) -> SpectralVec<T> {
        SpectralVec::from_prefix(
            self.domain,
            &self.coeffs.iter().map(|c| c.re).collect::<Vec<_>>(),
        )
    }

    pub fn max_abs_imag(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.im.abs()))
    }
}

/// `(λ + A)^{-1}u`, diagonal in the eigenbasis.
pub fn resolvent_apply<T: Scalar>(
    lambda: Complex<T>,
    u: &SpectralVec<T>,
) -> Result<ComplexSpectralVec<T>> {
    let domain = *u.domain();
    let tol = T::lit(1e-12);
    let mut coeffs = Vec::with_capacity(u.len());
    for (&c, mu) in u.coeffs().iter().zip(domain.eigenvalues()) {
        let shifted = lambda + mu;
        if shifted.norm() <= tol * mu.max(T::one()) {
            return Err(Error::InSpectrum {
                re: lambda.re.to_f64_lossy(),
                im: lambda.im.to_f64_lossy(),
                eigenvalue: mu.to_f64_lossy(),
            });
        }
        coeffs.push(Complex::new(c, T::zero()) / shifted);
    }
    Ok(ComplexSpectralVec { domain, coeffs })
}

/// Diagonal propagator `e^{-Λ dt}` for a fixed step, applied in place.
///
/// Built from a domain's spectrum, or from an explicit eigenvalue list when a
/// test needs to switch the generator off.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPropagator<T> {
    factors: Vec<T>,
}

impl<T: Scalar> DiagonalPropagator<T> {
    pub fn new(domain: &DirichletDomain<T>, dt: T) -> Result<Self> {
        Self::from_eigenvalues(&domain.eigenvalues(), dt)
    }

    pub fn from_eigenvalues(eigenvalues: &[T], dt: T) -> Result<Self> {
        if dt < T::zero() || dt.is_nan() {
            return Err(Error::NegativeTime(dt.to_f64_lossy()));
        }
        Ok(Self {
            factors: eigenvalues.iter().map(|&l| (-l * dt).exp()).collect(),
        })
    }

    pub fn factors(&self) -> &[T] {
        &self.factors
    }

    pub fn apply_in_place(&self, coeffs: &mut [T]) {
        debug_assert_eq!(coeffs.len(), self.factors.len());
        for (c, &f) in coeffs.iter_mut().zip(&self.factors) {
            *c = *c * f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> DirichletDomain<f64> {
        DirichletDomain::unit(n).unwrap()
    }

    #[test]
    fn identity_at_time_zero() {
        let u = SpectralVec::from_coeffs(unit(3), vec![1.0, -2.0, 0.5]).unwrap();
        assert_eq!(semigroup_apply(0.0, &u).unwrap(), u);
    }

    #[test]
    fn single_mode_decay() {
        let e1 = SpectralVec::basis(unit(4), 1).unwrap();
        let out = semigroup_apply(0.1, &e1).unwrap();
        assert!((out.coeffs()[0] - 0.372_708).abs() < 1e-6);
        assert!((out.coeffs()[0] - (-std::f64::consts::PI.powi(2) * 0.1).exp()).abs() < 1e-15);
        assert!(out.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn negative_time_rejected() {
        let e1 = SpectralVec::basis(unit(2), 1).unwrap();
        assert!(matches!(semigroup_apply(-1e-3, &e1), Err(Error::NegativeTime(_))));
        assert!(DiagonalPropagator::new(&unit(2), -1.0).is_err());
    }

    #[test]
    fn resolvent_at_zero_is_inverse() {
        let e1 = SpectralVec::basis(unit(3), 1).unwrap();
        let r = resolvent_apply(Complex::new(0.0, 0.0), &e1).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((r.coeffs[0].re - 1.0 / pi2).abs() < 1e-15);
        assert_eq!(r.max_abs_imag(), 0.0);
    }

    #[test]
    fn resolvent_on_spectrum_rejected() {
        let d = unit(3);
        let e1 = SpectralVec::basis(d, 1).unwrap();
        let lambda1 = d.eigenvalue(1).unwrap();
        assert!(matches!(
            resolvent_apply(Complex::new(-lambda1, 0.0), &e1),
            Err(Error::InSpectrum { .. })
        ));
    }

    #[test]
    fn propagator_matches_semigroup() {
        let d = unit(5);
        let u = SpectralVec::from_coeffs(d, vec![1.0, 0.3, -0.2, 0.1, 0.05]).unwrap();
        let p = DiagonalPropagator::new(&d, 0.01).unwrap();
        let mut c = u.coeffs().to_vec();
        p.apply_in_place(&mut c);
        assert_eq!(c, semigroup_apply(0.01, &u).unwrap().coeffs());
    }
}
