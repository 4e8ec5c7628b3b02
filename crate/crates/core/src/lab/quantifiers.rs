use crate::error::{Error, Result};
use crate::lab::scenario::{InitialMode, PerturbationScenario};
use crate::lab::coupled::PerturbedSetup;
use crate::operators::EmbeddingPair;
use crate::spde::{NoiseKey, Nonlinearity, NonlinearityKind};
use crate::spectral::SpectralVec;
use crate::{MeanEstimate, Scalar};

/// The same recipe as `f`, rebuilt on the pair's perturbed domain: a cutoff
/// Nemytskii operator keeps its pointwise map and radius and gets a grid
/// scaled with the mode count; an affine map keeps its slope and carries its
/// offset over by `P`.
pub fn native_perturbed_nonlinearity<T: Scalar>(
    pair: &EmbeddingPair<T>,
    f: &Nonlinearity<T>,
) -> Result<Nonlinearity<T>> {
    if f.domain() != pair.base() {
        return Err(Error::DomainMismatch(
            "nonlinearity must live on the pair's base domain".into(),
        ));
    }
    if pair.epsilon() == T::zero() && pair.perturbed() == pair.base() {
        return Ok(f.clone());
    }
    let domain = *pair.perturbed();
    match f.kind() {
        NonlinearityKind::Zero => Ok(Nonlinearity::zero(domain)),
        NonlinearityKind::Affine { slope, offset } => Ok(Nonlinearity::affine(*slope, pair.embed(offset)?)),
        NonlinearityKind::CutoffNemytskii {
            pointwise,
            radius,
            transform,
            ..
        } => {
            let n = pair.base().n_modes();
            let n_eps = domain.n_modes();
            let grid = (transform.grid() * n_eps).div_ceil(n).max(n_eps);
            Nonlinearity::cutoff_nemytskii(domain, *pointwise, *radius, grid)
        }
        NonlinearityKind::Induced { .. } => Err(Error::DomainMismatch(
            "an induced nonlinearity already lives on a perturbed domain".into(),
        )),
    }
}

/// `τ₀(ε) = E‖u₀^ε − P u₀‖²` over the scenario's paths.
pub fn estimate_tau0<T: Scalar>(scenario: &PerturbationScenario<T>, eps: T) -> Result<MeanEstimate<T>> {
    scenario.validate()?;
    let pair = EmbeddingPair::with_policy(eps, scenario.base.domain().n_modes(), scenario.truncation)?;
    if scenario.initial_mode == InitialMode::Pushforward {
        return Ok(MeanEstimate {
            mean: T::zero(),
            stderr: T::zero(),
            samples: scenario.paths,
        });
    }
    let offset = PerturbedSetup::initial_offset(&pair, scenario.initial_mode);
    let samples: Vec<T> = (0..scenario.paths as u64)
        .map(|p| {
            let u0 = scenario.base.initial().sample(scenario.master_seed, p);
            let pu0 = pair.embed(&u0)?;
            let mut u0_eps = pu0.clone();
            u0_eps.axpy(T::one(), &offset)?;
            Ok(u0_eps.sub(&pu0)?.norm_sq())
        })
        .collect::<Result<_>>()?;
    Ok(MeanEstimate::from_samples(&samples))
}

/// Size of the probe search for `τ₁`, `τ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeSettings {
    /// Random probes at stratified radii in the probe ball.
    pub random: usize,
    /// Finite-difference ascent steps from the best probe.
    pub ascent_iters: usize,
    pub seed: u64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            random: 200,
            ascent_iters: 50,
            seed: 0,
        }
    }
}

impl ProbeSettings {
    pub fn scaled(self, factor: usize) -> Self {
        Self {
            random: self.random * factor,
            ascent_iters: self.ascent_iters * factor,
            ..self
        }
    }
}

/// Lower bounds for `τ₁ = sup ‖f^ε(Pu) − P f(u)‖²` and the analogous `τ₂`
/// for `g`, over the ball of radius `probe_radius`, with the maximizers found.
#[derive(Debug, Clone, PartialEq)]
pub struct Tau12Report<T> {
    pub tau1: T,
    pub tau2: T,
    pub argmax_f: SpectralVec<T>,
    pub argmax_g: SpectralVec<T>,
    pub probe_radius: T,
    pub evaluations: usize,
}

struct Defect<'a, T> {
    pair: &'a EmbeddingPair<T>,
    f: &'a Nonlinearity<T>,
    f_eps: &'a Nonlinearity<T>,
    pu: Vec<T>,
    lhs: Vec<T>,
    fu: Vec<T>,
    rhs: Vec<T>,
    evaluations: usize,
}

impl<'a, T: Scalar> Defect<'a, T> {
    fn new(pair: &'a EmbeddingPair<T>, f: &'a Nonlinearity<T>, f_eps: &'a Nonlinearity<T>) -> Self {
        let (n, n_eps) = (pair.base().n_modes(), pair.perturbed().n_modes());
        Self {
            pair,
            f,
            f_eps,
            pu: vec![T::zero(); n_eps],
            lhs: vec![T::zero(); n_eps],
            fu: vec![T::zero(); n],
            rhs: vec![T::zero(); n_eps],
            evaluations: 0,
        }
    }

    fn eval(&mut self, u: &[T]) -> T {
        self.evaluations += 1;
        self.pair.embed_slice(u, &mut self.pu);
        self.f_eps.apply_slice(&self.pu, &mut self.lhs);
        self.f.apply_slice(u, &mut self.fu);
        self.pair.embed_slice(&self.fu, &mut self.rhs);
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }
}

fn norm<T: Scalar>(u: &[T]) -> T {
    u.iter().map(|&x| x * x).sum::<T>().sqrt()
}

fn project<T: Scalar>(u: &mut [T], radius: T) {
    let n = norm(u);
    if n > radius {
        let s = radius / n;
        u.iter_mut().for_each(|x| *x = *x * s);
    }
}

fn maximize<T: Scalar>(defect: &mut Defect<'_, T>, radius: T, settings: &ProbeSettings, lane_offset: u64) -> (T, Vec<T>) {
    let n = defect.pair.base().n_modes();
    let mut best = vec![T::zero(); n];
    let mut best_val = defect.eval(&best);
    let mut consider = |u: Vec<T>, defect: &mut Defect<'_, T>| {
        let v = defect.eval(&u);
        if v > best_val {
            best_val = v;
            best = u;
        }
    };
    for i in 0..settings.random {
        let key = NoiseKey {
            master_seed: settings.seed,
            path_index: i as u64,
            lane: NoiseKey::PROBE + lane_offset,
        };
        let mut u: Vec<T> = key.normals(n).into_iter().map(T::lit).collect();
        let len = norm(&u);
        if len == T::zero() {
            continue;
        }
        let r = radius * T::from_usize_lossy(i + 1) / T::from_usize_lossy(settings.random);
        u.iter_mut().for_each(|x| *x = *x * r / len);
        consider(u, defect);
    }
    for k in 0..n {
        for frac in [0.25, 0.375, 0.5] {
            for sign in [T::one(), -T::one()] {
                let mut u = vec![T::zero(); n];
                u[k] = sign * radius * T::lit(frac);
                consider(u, defect);
            }
        }
    }

    let mut step = T::lit(0.1) * radius;
    let mut grad = vec![T::zero(); n];
    for _ in 0..settings.ascent_iters {
        let h = T::epsilon().sqrt() * T::one().max(norm(&best));
        let mut probe = best.clone();
        for k in 0..n {
            probe[k] = best[k] + h;
            grad[k] = (defect.eval(&probe) - best_val) / h;
            probe[k] = best[k];
        }
        let g = norm(&grad);
        if !(g > T::zero()) || !g.is_finite() {
            break;
        }
        let mut cand: Vec<T> = best.iter().zip(&grad).map(|(&x, &d)| x + step * d / g).collect();
        project(&mut cand, radius);
        let v = defect.eval(&cand);
        if v > best_val {
            best_val = v;
            best = cand;
            step = step * T::lit(1.5);
        } else {
            step = step * T::lit(0.5);
        }
    }
    (best_val, best)
}

/// Probe maximization of the compatibility defects of `(f, f^ε)` and
/// `(g, g^ε)`: random points in the ball, scaled coordinate vectors, then
/// projected finite-difference ascent from the best point. The values are
/// attained, hence lower bounds of the suprema.
pub fn probe_defects<T: Scalar>(
    pair: &EmbeddingPair<T>,
    drift: (&Nonlinearity<T>, &Nonlinearity<T>),
    diffusion: (&Nonlinearity<T>, &Nonlinearity<T>),
    probe_radius: T,
    settings: &ProbeSettings,
) -> Result<Tau12Report<T>> {
    for (f, f_eps) in [drift, diffusion] {
        if f.domain() != pair.base() || f_eps.domain() != pair.perturbed() {
            return Err(Error::DomainMismatch(
                "nonlinearities do not match the embedding pair".into(),
            ));
        }
    }
    let base = *pair.base();
    let mut evaluations = 0;
    let mut run = |(f, f_eps): (&Nonlinearity<T>, &Nonlinearity<T>), lane: u64| {
        if f.is_zero() && f_eps.is_zero() {
            return (T::zero(), vec![T::zero(); base.n_modes()]);
        }
        let mut d = Defect::new(pair, f, f_eps);
        let out = maximize(&mut d, probe_radius, settings, lane);
        evaluations += d.evaluations;
        out
    };
    let (tau1, u1) = run(drift, 0);
    let (tau2, u2) = run(diffusion, 1);
    Ok(Tau12Report {
        tau1,
        tau2,
        argmax_f: SpectralVec::from_coeffs(base, u1)?,
        argmax_g: SpectralVec::from_coeffs(base, u2)?,
        probe_radius,
        evaluations,
    })
}

/// `(τ₁, τ₂)` lower bounds for the scenario at one `ε`, probing the ball of
/// [`PerturbationScenario::probe_radius`].
pub fn estimate_tau12<T: Scalar>(
    scenario: &PerturbationScenario<T>,
    eps: T,
    settings: &ProbeSettings,
) -> Result<Tau12Report<T>> {
    let setup = PerturbedSetup::new(scenario, eps)?;
    setup_tau12(scenario, &setup, settings)
}

pub(crate) fn setup_tau12<T: Scalar>(
    scenario: &PerturbationScenario<T>,
    setup: &PerturbedSetup<T>,
    settings: &ProbeSettings,
) -> Result<Tau12Report<T>> {
    probe_defects(
        &setup.pair,
        (scenario.base.drift(), setup.problem.drift()),
        (scenario.base.diffusion(), setup.problem.diffusion()),
        scenario.probe_radius(),
        settings,
    )
}
