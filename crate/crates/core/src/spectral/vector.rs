use crate::error::{Error, Result};
use crate::spectral::DirichletDomain;
use crate::Scalar;

/// Truncated coefficient vector in a domain's orthonormal sine basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVec<T> {
    domain: DirichletDomain<T>,
    coeffs: Vec<T>,
}

impl<T: Scalar> SpectralVec<T> {
    pub fn zeros(domain: DirichletDomain<T>) -> Self {
        Self {
            domain,
            coeffs: vec![T::zero(); domain.n_modes()],
        }
    }

    /// The `n`-th basis vector `e_n` (1-based).
    pub fn basis(domain: DirichletDomain<T>, n: usize) -> Result<Self> {
        if n == 0 || n > domain.n_modes() {
            return Err(Error::ModeOutOfRange {
                index: n,
                n_modes: domain.n_modes(),
            });
        }
        let mut v = Self::zeros(domain);
        v.coeffs[n - 1] = T::one();
        Ok(v)
    }

    pub fn from_coeffs(domain: DirichletDomain<T>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != domain.n_modes() {
            return Err(Error::DomainMismatch(format!(
                "{} coefficients for a domain with {} modes",
                coeffs.len(),
                domain.n_modes()
            )));
        }
        Ok(Self { domain, coeffs })
    }

    /// Zero-pads or truncates `coeffs` to the domain's mode count.
    pub fn from_prefix(domain: DirichletDomain<T>, coeffs: &[T]) -> Self {
        let mut v = Self::zeros(domain);
        for (dst, &src) in v.coeffs.iter_mut().zip(coeffs) {
            *dst = src;
        }
        v
    }

    pub fn domain(&self) -> &DirichletDomain<T> {
        &self.domain
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "(L={}, N={}) vs (L={}, N={})",
                self.domain.length(),
                self.domain.n_modes(),
                other.domain.length(),
                other.domain.n_modes()
            )));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_same(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * b)
            .sum())
    }

    pub fn norm_sq(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: T, x: &Self) -> Result<()> {
        self.check_same(x)?;
        for (s, &xi) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *s = *s + a * xi;
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(T::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-T::one(), other)?;
        Ok(out)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            domain: self.domain,
            coeffs: self.coeffs.iter().map(|&c| a * c).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Evaluates the truncated expansion at `x` by direct summation.
    pub fn eval(&self, x: T) -> T {
        let l = self.domain.length();
        let scale = (T::lit(2.0) / l).sqrt();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (T::from_usize_lossy(i + 1) * T::PI() * x / l).sin())
            .sum::<T>()
            * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> DirichletDomain<f64> {
        DirichletDomain::unit(n).unwrap()
    }

    #[test]
    fn basis_inner_products() {
        let d = unit(4);
        let e1 = SpectralVec::basis(d, 1).unwrap();
        let e2 = SpectralVec::basis(d, 2).unwrap();
        assert_eq!(e1.inner(&e1).unwrap(), 1.0);
        assert_eq!(e1.inner(&e2).unwrap(), 0.0);
        assert_eq!(e2.norm(), 1.0);
        assert!(SpectralVec::basis(d, 5).is_err());
    }

    #[test]
    fn mismatched_domains_are_errors() {
        let a = SpectralVec::basis(unit(4), 1).unwrap();
        let b = SpectralVec::basis(unit(5), 1).unwrap();
        let c = SpectralVec::basis(DirichletDomain::new(1.1, 4).unwrap(), 1).unwrap();
        assert!(matches!(a.inner(&b), Err(Error::DomainMismatch(_))));
        assert!(matches!(a.sub(&c), Err(Error::DomainMismatch(_))));
        assert!(SpectralVec::from_coeffs(unit(4), vec![0.0; 3]).is_err());
    }

    #[test]
    fn arithmetic() {
        let d = unit(3);
        let u = SpectralVec::from_coeffs(d, vec![1.0, 2.0, 3.0]).unwrap();
        let v = SpectralVec::from_coeffs(d, vec![0.5, -1.0, 0.0]).unwrap();
        assert_eq!(u.add(&v).unwrap().coeffs(), &[1.5, 1.0, 3.0]);
        assert_eq!(u.sub(&v).unwrap().coeffs(), &[0.5, 3.0, 3.0]);
        assert_eq!(u.scaled(2.0).coeffs(), &[2.0, 4.0, 6.0]);
        assert_eq!(u.inner(&v).unwrap(), -1.5);
        assert_eq!(u.norm_sq(), 14.0);
        let p = SpectralVec::from_prefix(unit(5), u.coeffs());
        assert_eq!(p.coeffs(), &[1.0, 2.0, 3.0, 0.0, 0.0]);
    }
}
