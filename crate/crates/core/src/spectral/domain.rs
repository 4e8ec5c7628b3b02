use crate::error::{invalid, Error, Result};
use crate::Scalar;

/// Interval `(0, length)` together with the Galerkin truncation `n_modes`.
///
/// Two domains are the same domain tag iff both fields compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletDomain<T> {
    length: T,
    n_modes: usize,
}

/// `x ↦ sqrt(2/L) sin(nπx/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenfunction<T> {
    pub index: usize,
    pub length: T,
}

impl<T: Scalar> Eigenfunction<T> {
    pub fn eval(&self, x: T) -> T {
        let l = self.length;
        (T::lit(2.0) / l).sqrt() * (T::from_usize_lossy(self.index) * T::PI() * x / l).sin()
    }
}

impl<T: Scalar> DirichletDomain<T> {
    pub fn new(length: T, n_modes: usize) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(invalid("length", format!("must be positive, got {length}")));
        }
        if n_modes == 0 {
            return Err(invalid("n_modes", "must be at least 1"));
        }
        Ok(Self { length, n_modes })
    }

    /// The unit interval with `n_modes` modes.
    pub fn unit(n_modes: usize) -> Result<Self> {
        Self::new(T::one(), n_modes)
    }

    /// The dilated interval `(0, 1 + eps)`.
    pub fn dilated(eps: T, n_modes: usize) -> Result<Self> {
        if eps < T::zero() {
            return Err(invalid("epsilon", format!("must be non-negative, got {eps}")));
        }
        Self::new(T::one() + eps, n_modes)
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Same interval, different truncation.
    pub fn with_modes(&self, n_modes: usize) -> Result<Self> {
        Self::new(self.length, n_modes)
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_modes {
            return Err(Error::ModeOutOfRange {
                index: n,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    /// `λ_n = (nπ/L)²`, 1-based.
    pub fn eigenvalue(&self, n: usize) -> Result<T> {
        self.check_index(n)?;
        Ok(self.eigenvalue_unchecked(n))
    }

    pub(crate) fn eigenvalue_unchecked(&self, n: usize) -> T {
        let k = T::from_usize_lossy(n) * T::PI() / self.length;
        k * k
    }

    pub fn eigenfunction(&self, n: usize) -> Result<Eigenfunction<T>> {
        self.check_index(n)?;
        Ok(Eigenfunction {
            index: n,
            length: self.length,
        })
    }

    pub fn eigenpair(&self, n: usize) -> Result<(T, Eigenfunction<T>)> {
        Ok((self.eigenvalue(n)?, self.eigenfunction(n)?))
    }

    /// All `N` eigenvalues, index 0 holding `λ_1`.
    pub fn eigenvalues(&self) -> Vec<T> {
        (1..=self.n_modes)
            .map(|n| self.eigenvalue_unchecked(n))
            .collect()
    }
}
