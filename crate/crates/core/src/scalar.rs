//! Scalar abstraction shared by every numerical layer.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the laboratory is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("index representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Scalar> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sample mean and standard error of the mean, accumulated in slice order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate<T> {
    pub mean: T,
    pub stderr: T,
    pub samples: usize,
}

impl<T: Scalar> MeanEstimate<T> {
    pub fn from_samples(xs: &[T]) -> Self {
        let m = xs.len();
        if m == 0 {
            return Self {
                mean: T::nan(),
                stderr: T::nan(),
                samples: 0,
            };
        }
        let n = T::from_usize_lossy(m);
        let mean = xs.iter().copied().collect::<CompensatedSum<T>>().value() / n;
        let stderr = if m > 1 {
            let ss = xs
                .iter()
                .map(|&x| (x - mean) * (x - mean))
                .collect::<CompensatedSum<T>>()
                .value();
            (ss / (n - T::one()) / n).sqrt()
        } else {
            T::zero()
        };
        Self {
            mean,
            stderr,
            samples: m,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> T {
        self.stderr * self.stderr * T::from_usize_lossy(self.samples)
    }
}
