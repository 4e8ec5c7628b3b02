//! Operator differences between the base and dilated problems, measured
//! through the embedding pair: the resolvent defect `τ(ε)`, the semigroup
//! defect at a fixed time, and the spectral gap on a compact set.

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::operators::embedding::EmbeddingPair;
use crate::operators::norm::{operator_norm, operator_norm_complex, NormCertificate};
use crate::Scalar;

/// Relative agreement required between `N_ε` and `2N_ε`.
pub const TRUNCATION_TOLERANCE: f64 = 0.01;

/// `A_ε^{-1} P − P A^{-1}` as the matrix `Λ_ε^{-1} C − C Λ^{-1}`.
pub fn h1_difference_matrix<T: Scalar>(pair: &EmbeddingPair<T>) -> Array2<T> {
    let base = pair.base().eigenvalues();
    let pert = pair.perturbed().eigenvalues();
    let mut d = pair.cross().clone();
    for ((m, n), x) in d.indexed_iter_mut() {
        *x = *x * (T::one() / pert[m] - T::one() / base[n]);
    }
    d
}

/// `e^{-A_ε t} P − P e^{-At}`.
pub fn semigroup_diff_matrix<T: Scalar>(pair: &EmbeddingPair<T>, t: T) -> Array2<T> {
    let base: Vec<T> = pair.base().eigenvalues().iter().map(|&l| (-l * t).exp()).collect();
    let pert: Vec<T> = pair
        .perturbed()
        .eigenvalues()
        .iter()
        .map(|&l| (-l * t).exp())
        .collect();
    let mut d = pair.cross().clone();
    for ((m, n), x) in d.indexed_iter_mut() {
        *x = *x * (pert[m] - base[n]);
    }
    d
}

/// Real and imaginary parts of `(λ + A_ε)^{-1} P − P (λ + A)^{-1}`.
pub fn resolvent_diff_matrix<T: Scalar>(
    pair: &EmbeddingPair<T>,
    lambda: Complex<T>,
) -> (Array2<T>, Array2<T>) {
    let base: Vec<Complex<T>> = pair
        .base()
        .eigenvalues()
        .iter()
        .map(|&l| (lambda + l).inv())
        .collect();
    let pert: Vec<Complex<T>> = pair
        .perturbed()
        .eigenvalues()
        .iter()
        .map(|&l| (lambda + l).inv())
        .collect();
    let shape = pair.cross().dim();
    let mut re = Array2::zeros(shape);
    let mut im = Array2::zeros(shape);
    for ((m, n), &c) in pair.cross().indexed_iter() {
        let z = (pert[m] - base[n]) * c;
        re[(m, n)] = z.re;
        im[(m, n)] = z.im;
    }
    (re, im)
}

/// `τ(ε)` at the pair's truncation and at twice the perturbed truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauReport<T> {
    pub value: T,
    pub doubled: T,
    pub certificate: NormCertificate<T>,
}

impl<T: Scalar> TauReport<T> {
    pub fn relative_gap(&self) -> T {
        let scale = self.value.abs().max(self.doubled.abs());
        if scale == T::zero() {
            T::zero()
        } else {
            (self.value - self.doubled).abs() / scale
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.relative_gap() <= T::lit(TRUNCATION_TOLERANCE)
    }
}

/// `τ(ε) = ‖A_ε^{-1}P − PA^{-1}‖_{L(H, H^ε)}`, checked against the doubled
/// perturbed truncation; a gap above 1% is a [`Error::Truncation`].
pub fn tau_h1<T: Scalar>(pair: &EmbeddingPair<T>) -> Result<TauReport<T>> {
    let certificate = operator_norm(&h1_difference_matrix(pair))?;
    let wide = pair.with_perturbed_modes(2 * pair.perturbed().n_modes())?;
    let doubled = operator_norm(&h1_difference_matrix(&wide))?.value;
    let report = TauReport {
        value: certificate.value,
        doubled,
        certificate,
    };
    if !report.is_consistent() {
        return Err(Error::Truncation {
            value: report.value.to_f64_lossy(),
            doubled: doubled.to_f64_lossy(),
        });
    }
    Ok(report)
}

/// `‖e^{-A_ε t}P − Pe^{-At}‖_{L(H, H^ε)}` for `t > 0`.
pub fn semigroup_diff_norm<T: Scalar>(pair: &EmbeddingPair<T>, t: T) -> Result<NormCertificate<T>> {
    if !(t > T::zero()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    operator_norm(&semigroup_diff_matrix(pair, t))
}

pub fn resolvent_diff_norm<T: Scalar>(
    pair: &EmbeddingPair<T>,
    lambda: Complex<T>,
) -> Result<NormCertificate<T>> {
    let (re, im) = resolvent_diff_matrix(pair, lambda);
    operator_norm_complex(&re, &im)
}

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in ℂ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRect<T> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Scalar> ComplexRect<T> {
    pub fn new(re: (T, T), im: (T, T)) -> Result<Self> {
        if !(re.0 <= re.1 && im.0 <= im.1) {
            return Err(invalid("rect", "bounds must be ordered"));
        }
        Ok(Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
        })
    }

    /// Euclidean distance from the real point `x` to the rectangle.
    pub fn distance_to_real(&self, x: T) -> T {
        let dx = (self.re_min - x).max(x - self.re_max).max(T::zero());
        let dy = self.im_min.max(-self.im_max).max(T::zero());
        dx.hypot(dy)
    }

    fn contains_real_axis(&self) -> bool {
        self.im_min <= T::zero() && self.im_max >= T::zero()
    }

    /// `samples × samples` tensor grid including the corners.
    pub fn sample(&self, samples: usize) -> Vec<Complex<T>> {
        let k = samples.max(2);
        let step = |lo: T, hi: T, i: usize| lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(k - 1);
        let mut pts = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                pts.push(Complex::new(
                    step(self.re_min, self.re_max, i),
                    step(self.im_min, self.im_max, j),
                ));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumReport<T> {
    /// `dist(K₀, −σ(A))`.
    pub base_distance: T,
    /// `dist(K₀, −σ(A_ε))`.
    pub perturbed_distance: T,
    /// First dilation at which some `−λ_m^ε` reaches `K₀`; `None` if never.
    pub epsilon0: Option<T>,
    /// Largest sampled `‖(λ + A_ε)^{-1}‖` over `K₀`.
    pub sup_resolvent_norm: T,
    /// `1 / dist(K₀, −σ(A_ε))`.
    pub resolvent_bound: T,
}

impl<T: Scalar> SpectrumReport<T> {
    /// `K₀ ⊂ ρ(−A_ε)` with the pair's ε below the reported threshold.
    pub fn gap_holds(&self, eps: T) -> bool {
        self.perturbed_distance > T::zero() && self.epsilon0.is_none_or(|e0| eps < e0)
    }
}

/// Upper semicontinuity of the spectrum on a compact rectangle.
///
/// `λ_m^ε = (mπ/(1+ε))²` decreases in ε, so `−λ_m^ε` can only enter `K₀`
/// from the left; the first entry happens for the smallest `m` with
/// `λ_m > −re_min`, at `1 + ε = mπ / sqrt(−re_min)`.
pub fn spectrum_gap_check<T: Scalar>(
    pair: &EmbeddingPair<T>,
    rect: &ComplexRect<T>,
    samples: usize,
) -> Result<SpectrumReport<T>> {
    let dist = |eigs: &[T]| {
        eigs.iter()
            .map(|&l| rect.distance_to_real(-l))
            .fold(T::infinity(), T::min)
    };
    let base_distance = dist(&pair.base().eigenvalues());
    if !(base_distance > T::zero()) {
        return Err(Error::SpectrumIntersection(base_distance.to_f64_lossy()));
    }
    let pert = pair.perturbed().eigenvalues();
    let perturbed_distance = dist(&pert);

    let epsilon0 = if rect.contains_real_axis() && rect.re_min < T::zero() {
        let upper = -rect.re_min;
        let m = (upper.sqrt() / T::PI()).floor() + T::one();
        Some(m * T::PI() / upper.sqrt() - T::one())
    } else {
        None
    };

    let sup_resolvent_norm = rect
        .sample(samples)
        .into_iter()
        .map(|z| {
            pert.iter()
                .map(|&l| T::one() / (z + l).norm())
                .fold(T::zero(), T::max)
        })
        .fold(T::zero(), T::max);

    Ok(SpectrumReport {
        base_distance,
        perturbed_distance,
        epsilon0,
        sup_resolvent_norm,
        resolvent_bound: T::one() / perturbed_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dilation_has_no_defect() {
        let pair = EmbeddingPair::<f64>::new(0.0, 8, 8).unwrap();
        let report = tau_h1(&pair).unwrap();
        assert_eq!(report.value, 0.0);
        assert_eq!(report.doubled, 0.0);
        assert_eq!(semigroup_diff_norm(&pair, 0.1).unwrap().value, 0.0);
        assert!(semigroup_diff_norm(&pair, 0.0).is_err());
    }

    #[test]
    fn rect_distance() {
        let rect = ComplexRect::new((-5.0_f64, -1.0), (-1.0, 1.0)).unwrap();
        assert_eq!(rect.distance_to_real(-3.0), 0.0);
        assert_eq!(rect.distance_to_real(-8.0), 3.0);
        assert_eq!(rect.distance_to_real(0.5), 1.5);
        assert!(ComplexRect::new((1.0_f64, 0.0), (0.0, 1.0)).is_err());
    }

    #[test]
    fn spectrum_gap_for_left_rectangle() {
        let pair = EmbeddingPair::<f64>::new(0.1, 16, 32).unwrap();
        let rect = ComplexRect::new((-5.0, -1.0), (-1.0, 1.0)).unwrap();
        let report = spectrum_gap_check(&pair, &rect, 9).unwrap();
        let l1 = (std::f64::consts::PI / 1.1).powi(2);
        assert!((report.perturbed_distance - (l1 - 5.0)).abs() < 1e-12);
        // π/√5 − 1
        let e0 = report.epsilon0.unwrap();
        assert!((e0 - (std::f64::consts::PI / 5f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!(report.gap_holds(0.1));
        assert!(!report.gap_holds(0.5));
    }

    #[test]
    fn rectangle_on_spectrum_is_rejected() {
        let pair = EmbeddingPair::<f64>::new(0.1, 4, 8).unwrap();
        let rect = ComplexRect::new((-12.0, -8.0), (-1.0, 1.0)).unwrap();
        assert!(matches!(
            spectrum_gap_check(&pair, &rect, 4),
            Err(Error::SpectrumIntersection(_))
        ));
    }
}
