use crate::error::{invalid, Result};
use crate::Scalar;

/// Smooth ramp `θ_R`: 1 on `[0, R/2]`, 0 on `[R, ∞)`, cubic Hermite between.
///
/// Globally Lipschitz with constant `3/R` (the Hermite slope peaks at the
/// midpoint `3R/4`).
pub fn cutoff<T: Scalar>(s: T, radius: T) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(invalid("radius", format!("must be positive, got {radius}")));
    }
    Ok(cutoff_unchecked(s, radius))
}

pub(crate) fn cutoff_unchecked<T: Scalar>(s: T, radius: T) -> T {
    let half = radius / T::lit(2.0);
    if s <= half {
        T::one()
    } else if s >= radius {
        T::zero()
    } else {
        let x = (s - half) / half;
        T::one() - x * x * (T::lit(3.0) - T::lit(2.0) * x)
    }
}

pub fn cutoff_lipschitz<T: Scalar>(radius: T) -> T {
    T::lit(3.0) / radius
}
