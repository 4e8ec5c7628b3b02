//! Independent reference implementations used only by the test suite.
#![allow(dead_code)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn unit_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v = uniform_vec(rng, n);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Adaptive Simpson with Richardson correction, started on 64 panels so
/// that oscillatory integrands are not mistaken for zero.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| simpson_panel(f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / PANELS as f64))
        .sum()
}

fn simpson_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Composite Simpson on `2k` panels.
pub fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, k: usize) -> f64 {
    let n = 2 * k;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Singular values by one-sided Jacobi rotations, descending.
pub fn jacobi_singular_values(m: &Array2<f64>) -> Vec<f64> {
    let (rows, cols) = m.dim();
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect();
    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|x| x * x).sum();
                let beta: f64 = a[q].iter().map(|x| x * x).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                #[allow(clippy::needless_range_loop)]
                for i in 0..rows {
                    let (x, y) = (a[p][i], a[q][i]);
                    a[p][i] = c * x - s * y;
                    a[q][i] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|col| norm(col)).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Eigenvalue of `−u″` with Dirichlet conditions on `(0, length)` nearest to
/// `shift`, from second-order finite differences on `points` interior nodes
/// and shifted inverse iteration.
pub fn fd_dirichlet_eigenvalue(length: f64, points: usize, shift: f64) -> f64 {
    let h = length / (points + 1) as f64;
    let diag = 2.0 / (h * h) - shift;
    let off = -1.0 / (h * h);
    let mut v: Vec<f64> = (0..points).map(|i| 1.0 + 0.1 * ((i * 7 % 13) as f64)).collect();
    let solve = |rhs: &[f64]| {
        // Thomas algorithm for the constant tridiagonal system.
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = off / diag;
        d[0] = rhs[0] / diag;
        for i in 1..n {
            let den = diag - off * c[i - 1];
            c[i] = off / den;
            d[i] = (rhs[i] - off * d[i - 1]) / den;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    };
    for _ in 0..50 {
        let w = solve(&v);
        let nw = norm(&w);
        v = w.into_iter().map(|x| x / nw).collect();
    }
    // Rayleigh quotient of the unshifted operator.
    let mut num = 0.0;
    for i in 0..points {
        let left = if i > 0 { v[i - 1] } else { 0.0 };
        let right = if i + 1 < points { v[i + 1] } else { 0.0 };
        num += v[i] * (2.0 * v[i] - left - right) / (h * h);
    }
    num / v.iter().map(|x| x * x).sum::<f64>()
}
