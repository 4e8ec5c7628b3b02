//! Type-I discrete sine transform between spectral coefficients and values at
//! the uniform interior nodes `x_j = jL/(M+1)`, `j = 1..=M`.
//!
//! With `w = L/(M+1)` the sampled basis satisfies
//! `w Σ_j φ_n(x_j) φ_m(x_j) = δ_nm` for `n, m ≤ M`, so `from_grid` is the
//! exact inverse of `to_grid` whenever `M ≥ N`. Mode `M+1` vanishes at every
//! node and mode `2(M+1) - m` aliases onto `-e_m`.

use crate::error::{Error, Result};
use crate::spectral::{DirichletDomain, SpectralVec};
use crate::Scalar;

/// Point values at the interior nodes of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GridVec<T> {
    domain: DirichletDomain<T>,
    values: Vec<T>,
}

impl<T: Scalar> GridVec<T> {
    pub fn new(domain: DirichletDomain<T>, values: Vec<T>) -> Self {
        Self { domain, values }
    }

    /// Samples `f` at the `m` interior nodes.
    pub fn sample(domain: DirichletDomain<T>, m: usize, f: impl Fn(T) -> T) -> Self {
        let values = Self::nodes_for(&domain, m).into_iter().map(f).collect();
        Self { domain, values }
    }

    fn nodes_for(domain: &DirichletDomain<T>, m: usize) -> Vec<T> {
        let h = domain.length() / T::from_usize_lossy(m + 1);
        (1..=m).map(|j| T::from_usize_lossy(j) * h).collect()
    }

    pub fn nodes(&self) -> Vec<T> {
        Self::nodes_for(&self.domain, self.values.len())
    }

    pub fn domain(&self) -> &DirichletDomain<T> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Precomputed `M × N` table of `φ_n(x_j)` for repeated transforms.
#[derive(Debug, Clone)]
pub struct SineTransform<T> {
    domain: DirichletDomain<T>,
    grid: usize,
    // row-major: table[j * n_modes + n] = φ_{n+1}(x_{j+1})
    table: Vec<T>,
    weight: T,
}

impl<T: Scalar> SineTransform<T> {
    pub fn new(domain: DirichletDomain<T>, grid: usize) -> Result<Self> {
        let n_modes = domain.n_modes();
        if grid < n_modes {
            return Err(Error::GridTooCoarse {
                grid,
                modes: n_modes,
            });
        }
        let period = 2 * (grid + 1);
        let scale = (T::lit(2.0) / domain.length()).sqrt();
        let step = T::PI() / T::from_usize_lossy(grid + 1);
        let mut table = Vec::with_capacity(grid * n_modes);
        for j in 1..=grid {
            for n in 1..=n_modes {
                // reduce the phase so that equal angles give bit-equal sines
                let k = (n * j) % period;
                table.push(scale * (T::from_usize_lossy(k) * step).sin());
            }
        }
        Ok(Self {
            domain,
            grid,
            table,
            weight: domain.length() / T::from_usize_lossy(grid + 1),
        })
    }

    pub fn domain(&self) -> &DirichletDomain<T> {
        &self.domain
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn n_modes(&self) -> usize {
        self.domain.n_modes()
    }

    /// `out[j] = Σ_n coeffs[n] φ_n(x_j)`.
    pub fn to_grid_slice(&self, coeffs: &[T], out: &mut [T]) {
        let n = self.n_modes();
        debug_assert_eq!(coeffs.len(), n);
        debug_assert_eq!(out.len(), self.grid);
        for (row, o) in self.table.chunks_exact(n).zip(out.iter_mut()) {
            *o = row.iter().zip(coeffs).map(|(&p, &c)| p * c).sum();
        }
    }

    /// `out[n] = w Σ_j values[j] φ_n(x_j)` with `w = L/(M+1)`.
    pub fn from_grid_slice(&self, values: &[T], out: &mut [T]) {
        let n = self.n_modes();
        debug_assert_eq!(values.len(), self.grid);
        debug_assert_eq!(out.len(), n);
        out.iter_mut().for_each(|o| *o = T::zero());
        for (row, &v) in self.table.chunks_exact(n).zip(values) {
            for (o, &p) in out.iter_mut().zip(row) {
                *o = *o + v * p;
            }
        }
        out.iter_mut().for_each(|o| *o = *o * self.weight);
    }

    pub fn to_grid(&self, v: &SpectralVec<T>) -> Result<GridVec<T>> {
        if *v.domain() != self.domain {
            return Err(Error::DomainMismatch(
                "vector does not live on the transform's domain".into(),
            ));
        }
        let mut values = vec![T::zero(); self.grid];
        self.to_grid_slice(v.coeffs(), &mut values);
        Ok(GridVec::new(self.domain, values))
    }

    pub fn from_grid(&self, g: &GridVec<T>) -> Result<SpectralVec<T>> {
        if g.domain().length() != self.domain.length() || g.len() != self.grid {
            return Err(Error::DomainMismatch(
                "grid does not match the transform's nodes".into(),
            ));
        }
        let mut coeffs = vec![T::zero(); self.n_modes()];
        self.from_grid_slice(g.values(), &mut coeffs);
        SpectralVec::from_coeffs(self.domain, coeffs)
    }
}

/// Evaluates `v` at `m ≥ N` interior nodes.
pub fn to_grid<T: Scalar>(v: &SpectralVec<T>, m: usize) -> Result<GridVec<T>> {
    SineTransform::new(*v.domain(), m)?.to_grid(v)
}

/// Projects grid values onto the first `n ≤ M` sine modes.
pub fn from_grid<T: Scalar>(g: &GridVec<T>, n: usize) -> Result<SpectralVec<T>> {
    if g.len() < n {
        return Err(Error::GridTooCoarse {
            grid: g.len(),
            modes: n,
        });
    }
    let domain = g.domain().with_modes(n)?;
    SineTransform::new(domain, g.len())?.from_grid(&GridVec::new(domain, g.values().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> DirichletDomain<f64> {
        DirichletDomain::unit(n).unwrap()
    }

    #[test]
    fn single_mode_evaluation() {
        let e1 = SpectralVec::basis(unit(3), 1).unwrap();
        let g = to_grid(&e1, 3).unwrap();
        for (x, v) in g.nodes().iter().zip(g.values()) {
            let expected = 2f64.sqrt() * (std::f64::consts::PI * x).sin();
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let z = SpectralVec::zeros(unit(5));
        assert!(to_grid(&z, 9).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sampled_mode_two_maps_to_e2() {
        let d = unit(6);
        let phi2 = d.eigenfunction(2).unwrap();
        let g = GridVec::sample(d, 6, |x| phi2.eval(x));
        let c = from_grid(&g, 6).unwrap();
        for (i, &ci) in c.coeffs().iter().enumerate() {
            let expected = if i == 1 { 1.0 } else { 0.0 };
            assert!((ci - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_too_coarse() {
        let v = SpectralVec::zeros(unit(8));
        assert_eq!(
            to_grid(&v, 7).unwrap_err(),
            Error::GridTooCoarse { grid: 7, modes: 8 }
        );
        let g = GridVec::new(unit(4), vec![0.0; 4]);
        assert!(from_grid(&g, 5).is_err());
    }
}
