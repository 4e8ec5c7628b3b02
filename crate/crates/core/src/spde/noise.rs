//! Scalar Wiener increments from a counter-based generator.
//!
//! Increment `k` of path `p` is a pure function of `(master_seed, lane, p, k)`:
//! ChaCha8 is keyed by `(master_seed, lane)`, selects stream `p`, and reads
//! the four 32-bit words at position `4k`, turned into one standard normal by
//! Box–Muller. Paths can therefore be generated in any order or in parallel.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseKey {
    pub master_seed: u64,
    pub path_index: u64,
    /// Independent families under one seed (Wiener noise, initial data, ...).
    pub lane: u64,
}

impl NoiseKey {
    pub const WIENER: u64 = 0;
    pub const INITIAL: u64 = 1;
    pub const DECOUPLED: u64 = 2;
    pub const PROBE: u64 = 3;

    pub fn wiener(master_seed: u64, path_index: u64) -> Self {
        Self {
            master_seed,
            path_index,
            lane: Self::WIENER,
        }
    }

    pub fn with_lane(self, lane: u64) -> Self {
        Self { lane, ..self }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.lane.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.path_index);
        rng
    }

    /// Standard normals `0..count` of this key.
    pub fn normals(&self, count: usize) -> Vec<f64> {
        let mut rng = self.rng();
        (0..count).map(|_| box_muller(&mut rng)).collect()
    }

    /// The `k`-th standard normal, by random access.
    pub fn normal_at(&self, k: u64) -> f64 {
        let mut rng = self.rng();
        rng.set_word_pos(4 * k as u128);
        box_muller(&mut rng)
    }
}

fn box_muller(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    // u1 in (0, 1], u2 in [0, 1)
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Wiener increments `Δw_k ~ N(0, Δt)` on a uniform grid of `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath<T> {
    key: NoiseKey,
    horizon: T,
    increments: Vec<T>,
}

impl<T: Scalar> NoisePath<T> {
    pub fn generate(key: NoiseKey, horizon: T, steps: usize) -> Result<Self> {
        if !(horizon > T::zero()) {
            return Err(invalid("horizon", format!("must be positive, got {horizon}")));
        }
        if steps == 0 {
            return Err(invalid("steps", "must be at least 1"));
        }
        let sd = (horizon / T::from_usize_lossy(steps)).sqrt();
        let increments = key
            .normals(steps)
            .into_iter()
            .map(|z| T::lit(z) * sd)
            .collect();
        Ok(Self {
            key,
            horizon,
            increments,
        })
    }

    pub fn key(&self) -> NoiseKey {
        self.key
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn dt(&self) -> T {
        self.horizon / T::from_usize_lossy(self.steps())
    }

    pub fn increments(&self) -> &[T] {
        &self.increments
    }

    /// `t_k = kT/K` for `k = 0..=K`.
    pub fn time_grid(&self) -> Vec<T> {
        let dt = self.dt();
        (0..=self.steps()).map(|k| T::from_usize_lossy(k) * dt).collect()
    }

    /// `w(t_k)` with `w(0) = 0`.
    pub fn brownian_path(&self) -> Vec<T> {
        let mut w = Vec::with_capacity(self.steps() + 1);
        w.push(T::zero());
        let mut acc = T::zero();
        for &dw in &self.increments {
            acc = acc + dw;
            w.push(acc);
        }
        w
    }

    /// Same Brownian path on a grid `factor` times coarser.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.steps().is_multiple_of(factor) {
            return Err(invalid(
                "factor",
                format!("{factor} does not divide {} steps", self.steps()),
            ));
        }
        Ok(Self {
            key: self.key,
            horizon: self.horizon,
            increments: self
                .increments
                .chunks_exact(factor)
                .map(|c| c.iter().copied().sum())
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regeneration_is_bit_exact() {
        let key = NoiseKey::wiener(42, 7);
        let a = NoisePath::<f64>::generate(key, 1.0, 64).unwrap();
        let b = NoisePath::<f64>::generate(key, 1.0, 64).unwrap();
        assert_eq!(a, b);
        let other = NoisePath::<f64>::generate(NoiseKey::wiener(42, 8), 1.0, 64).unwrap();
        assert_ne!(a.increments(), other.increments());
        let lane = NoisePath::<f64>::generate(key.with_lane(NoiseKey::DECOUPLED), 1.0, 64).unwrap();
        assert_ne!(a.increments(), lane.increments());
    }

    #[test]
    fn random_access_matches_sequential() {
        let key = NoiseKey::wiener(3, 11);
        let seq = key.normals(20);
        for k in [0u64, 1, 5, 19] {
            assert_eq!(key.normal_at(k), seq[k as usize]);
        }
    }

    #[test]
    fn coarsening_preserves_endpoints() {
        let fine = NoisePath::<f64>::generate(NoiseKey::wiener(1, 0), 0.5, 64).unwrap();
        let coarse = fine.coarsen(8).unwrap();
        assert_eq!(coarse.steps(), 8);
        let wf = fine.brownian_path();
        let wc = coarse.brownian_path();
        for k in 0..=8 {
            assert!((wf[8 * k] - wc[k]).abs() < 1e-14);
        }
        assert!(fine.coarsen(3).is_err());
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(NoisePath::<f64>::generate(NoiseKey::wiener(1, 0), 0.0, 4).is_err());
        assert!(NoisePath::<f64>::generate(NoiseKey::wiener(1, 0), 1.0, 0).is_err());
    }
}
