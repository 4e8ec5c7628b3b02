//! Largest singular value by power iteration on `MᵀM`.

use ndarray::{s, Array2};

use crate::error::{Error, Result};
use crate::Scalar;

/// Stopping rule for [`operator_norm_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration<T> {
    /// Relative tolerance on the singular value.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for PowerIteration<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-8).max(T::epsilon() * T::lit(100.0)),
            max_iter: 50_000,
        }
    }
}

/// Operator norm together with the evidence that the iteration settled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCertificate<T> {
    pub value: T,
    pub iterations: usize,
    /// `‖MᵀMv − σ²v‖ / σ²` at the returned unit vector `v`.
    pub residual: T,
}

fn start_vector<T: Scalar>(n: usize) -> Vec<T> {
    // fixed splitmix64 stream: deterministic and generic
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut v: Vec<T> = (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            T::lit(0.5 + (z >> 11) as f64 / (1u64 << 53) as f64)
        })
        .collect();
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    v.iter_mut().for_each(|x| *x = *x / norm);
    v
}

fn matvec<T: Scalar>(m: &Array2<T>, v: &[T], out: &mut [T]) {
    for (o, row) in out.iter_mut().zip(m.rows()) {
        *o = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
    }
}

fn matvec_t<T: Scalar>(m: &Array2<T>, w: &[T], out: &mut [T]) {
    out.iter_mut().for_each(|o| *o = T::zero());
    for (row, &wi) in m.rows().into_iter().zip(w) {
        for (o, &a) in out.iter_mut().zip(row.iter()) {
            *o = *o + a * wi;
        }
    }
}

pub fn operator_norm<T: Scalar>(m: &Array2<T>) -> Result<NormCertificate<T>> {
    operator_norm_with(m, PowerIteration::default())
}

pub fn operator_norm_with<T: Scalar>(
    m: &Array2<T>,
    opts: PowerIteration<T>,
) -> Result<NormCertificate<T>> {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        return Ok(NormCertificate {
            value: T::zero(),
            iterations: 0,
            residual: T::zero(),
        });
    }
    let mut v = start_vector::<T>(cols);
    let mut w = vec![T::zero(); rows];
    let mut z = vec![T::zero(); cols];
    let mut sigma_prev = T::zero();
    let mut last_change = T::infinity();
    for it in 1..=opts.max_iter {
        matvec(m, &v, &mut w);
        matvec_t(m, &w, &mut z);
        let rho = w.iter().map(|&x| x * x).sum::<T>();
        if rho == T::zero() {
            return Ok(NormCertificate {
                value: T::zero(),
                iterations: it,
                residual: T::zero(),
            });
        }
        let sigma = rho.sqrt();
        let residual = v
            .iter()
            .zip(&z)
            .map(|(&vi, &zi)| (zi - rho * vi) * (zi - rho * vi))
            .sum::<T>()
            .sqrt()
            / rho;
        let change = (sigma - sigma_prev).abs() / sigma;
        if it > 1 && (residual <= opts.tol || change <= opts.tol * T::lit(0.1)) {
            return Ok(NormCertificate {
                value: sigma,
                iterations: it,
                residual,
            });
        }
        last_change = change;
        sigma_prev = sigma;
        let zn = z.iter().map(|&x| x * x).sum::<T>().sqrt();
        for (vi, &zi) in v.iter_mut().zip(&z) {
            *vi = zi / zn;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: last_change.to_f64_lossy(),
    })
}

/// Norm of `X + iY` through the real embedding `[[X, -Y], [Y, X]]`, which has
/// the same singular values.
pub fn operator_norm_complex<T: Scalar>(
    re: &Array2<T>,
    im: &Array2<T>,
) -> Result<NormCertificate<T>> {
    if re.dim() != im.dim() {
        return Err(Error::DomainMismatch("real and imaginary parts differ in shape".into()));
    }
    let (r, c) = re.dim();
    let mut big = Array2::zeros((2 * r, 2 * c));
    big.slice_mut(s![..r, ..c]).assign(re);
    big.slice_mut(s![..r, c..]).assign(&im.mapv(|x| -x));
    big.slice_mut(s![r.., ..c]).assign(im);
    big.slice_mut(s![r.., c..]).assign(re);
    operator_norm(&big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identity_and_diagonal() {
        let id = Array2::<f64>::eye(6);
        assert!((operator_norm(&id).unwrap().value - 1.0).abs() < 1e-12);
        let d = Array2::from_diag(&array![3.0_f64, 1.0, 0.5]);
        let cert = operator_norm(&d).unwrap();
        assert!((cert.value - 3.0).abs() < 1e-8 * 3.0);
        assert!(cert.iterations > 0);
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(operator_norm(&Array2::<f64>::zeros((3, 4))).unwrap().value, 0.0);
        assert_eq!(operator_norm(&Array2::<f64>::zeros((0, 4))).unwrap().value, 0.0);
    }

    #[test]
    fn complex_diagonal() {
        let re = Array2::from_diag(&array![3.0_f64, 0.0]);
        let im = Array2::from_diag(&array![4.0_f64, 1.0]);
        assert!((operator_norm_complex(&re, &im).unwrap().value - 5.0).abs() < 1e-7);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let m = Array2::from_diag(&array![1.0_f64, 0.999_999]);
        let opts = PowerIteration { tol: 1e-15, max_iter: 3 };
        assert!(matches!(
            operator_norm_with(&m, opts),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
    }
}
