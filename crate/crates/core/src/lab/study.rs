use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::lab::coupled::{BaseTrace, PathError, PerturbedSetup};
use crate::lab::quantifiers::{estimate_tau0, setup_tau12, ProbeSettings, Tau12Report};
use crate::lab::scenario::PerturbationScenario;
use crate::operators::{tau_h1, TauReport};
use crate::spde::{NoiseKey, NoisePath};
use crate::{MeanEstimate, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord<T> {
    pub epsilon: T,
    pub tau: T,
    pub tau0: T,
    pub tau1: T,
    pub tau2: T,
    /// Estimate of `E sup_k ‖u^ε_k − P u_k‖²`.
    pub error_mean: T,
    pub error_stderr: T,
    pub i1: T,
    pub i2: T,
    pub i3: T,
    /// Setup, probing and simulation time attributed to this `ε`, summed over
    /// workers.
    pub runtime_ms: f64,
}

/// Thresholds of the three verdict checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictCriteria<T> {
    /// Slack, in combined standard errors, for the monotone trend and the
    /// bound-shape checks.
    pub trend_sigmas: T,
    /// Required ratio of smallest-`ε` to largest-`ε` error.
    pub terminal_fraction: T,
    pub probe: ProbeSettings,
}

impl<T: Scalar> Default for VerdictCriteria<T> {
    fn default() -> Self {
        Self {
            trend_sigmas: T::lit(2.0),
            terminal_fraction: T::lit(0.1),
            probe: ProbeSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub pass: bool,
    pub trend_ok: bool,
    pub terminal_ok: bool,
    pub bound_ok: bool,
    /// Smallest `C` for which the largest-`ε` record meets the bound shape
    /// at every `r`.
    pub fitted_c: T,
    /// Index of the first record failing a check.
    pub offending: Option<usize>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy<T> {
    pub records: Vec<ConvergenceRecord<T>>,
    pub verdict: Verdict<T>,
    pub tau_reports: Vec<TauReport<T>>,
    pub probes: Vec<Tau12Report<T>>,
    /// `per_path[i][p]`: path `p` at `epsilon_grid[i]`.
    pub per_path: Vec<Vec<PathError<T>>>,
    /// See [`PerturbationScenario::contraction_factor`].
    pub contraction_factor: T,
}

/// Per-`ε` errors of one path with their simulation times.
type PathRuns<T> = Result<Vec<(PathError<T>, f64)>>;

/// `r² + r + τ₀ + τ₁ + τ²/r² + τ/r`.
pub fn bound_shape<T: Scalar>(record: &ConvergenceRecord<T>, r: T) -> T {
    let tau = record.tau;
    r * r + r + record.tau0 + record.tau1 + tau * tau / (r * r) + tau / r
}

/// Runs every path once on the base problem and once per `ε` on the
/// perturbed problems, in parallel over paths; reductions follow path order.
pub fn convergence_study<T: Scalar>(
    scenario: &PerturbationScenario<T>,
    criteria: &VerdictCriteria<T>,
) -> Result<ConvergenceStudy<T>> {
    scenario.validate()?;
    if !(criteria.trend_sigmas >= T::zero()) || !(criteria.terminal_fraction >= T::zero()) {
        return Err(invalid("criteria", "thresholds must be non-negative"));
    }
    let mut setups = Vec::with_capacity(scenario.epsilon_grid.len());
    let mut tau_reports = Vec::with_capacity(setups.capacity());
    let mut probes = Vec::with_capacity(setups.capacity());
    let mut tau0s = Vec::with_capacity(setups.capacity());
    let mut setup_ms = Vec::with_capacity(setups.capacity());
    for &eps in &scenario.epsilon_grid {
        let start = Instant::now();
        let setup = PerturbedSetup::new(scenario, eps)?;
        tau_reports.push(tau_h1(&setup.pair)?);
        tau0s.push(estimate_tau0(scenario, eps)?.mean);
        probes.push(setup_tau12(scenario, &setup, &criteria.probe)?);
        setups.push(setup);
        setup_ms.push(start.elapsed().as_secs_f64() * 1e3);
    }

    let base = &scenario.base;
    let outcomes: Vec<PathRuns<T>> = (0..scenario.paths as u64)
        .into_par_iter()
        .map(|p| {
            let noise = NoisePath::generate(NoiseKey::wiener(scenario.master_seed, p), base.horizon(), base.steps())?;
            let trace = BaseTrace::simulate(base, &noise)?;
            let other = PerturbedSetup::perturbed_noise(scenario.coupling, &noise)?;
            setups
                .iter()
                .map(|s| {
                    let start = Instant::now();
                    let e = s.run(&trace, &other)?;
                    Ok((e, start.elapsed().as_secs_f64() * 1e3))
                })
                .collect()
        })
        .collect();

    let n_eps = setups.len();
    let mut per_path: Vec<Vec<PathError<T>>> = vec![Vec::with_capacity(scenario.paths); n_eps];
    let mut sim_ms = vec![0.0; n_eps];
    for outcome in outcomes {
        for (i, (e, ms)) in outcome?.into_iter().enumerate() {
            per_path[i].push(e);
            sim_ms[i] += ms;
        }
    }

    let records: Vec<ConvergenceRecord<T>> = (0..n_eps)
        .map(|i| {
            let col = |f: fn(&PathError<T>) -> T| MeanEstimate::from_samples(&per_path[i].iter().map(f).collect::<Vec<_>>());
            let total = col(|e| e.total);
            ConvergenceRecord {
                epsilon: scenario.epsilon_grid[i],
                tau: tau_reports[i].value,
                tau0: tau0s[i],
                tau1: probes[i].tau1,
                tau2: probes[i].tau2,
                error_mean: total.mean,
                error_stderr: total.stderr,
                i1: col(|e| e.i1).mean,
                i2: col(|e| e.i2).mean,
                i3: col(|e| e.i3).mean,
                runtime_ms: setup_ms[i] + sim_ms[i],
            }
        })
        .collect();

    let verdict = judge(&records, &scenario.r_grid, criteria);
    Ok(ConvergenceStudy {
        records,
        verdict,
        tau_reports,
        probes,
        per_path,
        contraction_factor: scenario.contraction_factor(),
    })
}

/// The three checks over records ordered by decreasing `ε`: (a) error
/// nonincreasing within `trend_sigmas` combined standard errors, (b) last
/// error at most `terminal_fraction` of the first, (c) every record within
/// `C·bound_shape` for every `r`, with `C` fitted on the first record.
pub fn judge<T: Scalar>(records: &[ConvergenceRecord<T>], r_grid: &[T], criteria: &VerdictCriteria<T>) -> Verdict<T> {
    let sig = criteria.trend_sigmas;
    let mut offending = None;
    let mut reason = None;
    let fail = |i: usize, why: String, slot: &mut Option<usize>, msg: &mut Option<String>| {
        if slot.is_none() {
            *slot = Some(i);
            *msg = Some(why);
        }
    };

    let mut trend_ok = true;
    for (i, w) in records.windows(2).enumerate() {
        let slack = sig * (w[0].error_stderr.powi(2) + w[1].error_stderr.powi(2)).sqrt();
        if w[1].error_mean > w[0].error_mean + slack {
            trend_ok = false;
            fail(
                i + 1,
                format!(
                    "error at eps={} ({}) exceeds error at eps={} ({}) by more than {}",
                    w[1].epsilon, w[1].error_mean, w[0].epsilon, w[0].error_mean, slack
                ),
                &mut offending,
                &mut reason,
            );
        }
    }

    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return Verdict {
                pass: false,
                trend_ok,
                terminal_ok: false,
                bound_ok: false,
                fitted_c: T::nan(),
                offending: None,
                reason: Some("no records".into()),
            }
        }
    };
    let terminal_ok = last.error_mean <= criteria.terminal_fraction * first.error_mean;
    if !terminal_ok {
        fail(
            records.len() - 1,
            format!(
                "smallest-eps error {} is above {} of the largest-eps error {}",
                last.error_mean, criteria.terminal_fraction, first.error_mean
            ),
            &mut offending,
            &mut reason,
        );
    }

    let fitted_c = r_grid
        .iter()
        .map(|&r| first.error_mean / bound_shape(first, r))
        .fold(T::zero(), T::max);
    let mut bound_ok = true;
    for (i, rec) in records.iter().enumerate() {
        for &r in r_grid {
            let limit = fitted_c * bound_shape(rec, r);
            if rec.error_mean > limit + sig * rec.error_stderr + T::epsilon() * limit {
                bound_ok = false;
                fail(
                    i,
                    format!(
                        "error {} at eps={} exceeds C*bound = {} at r={}",
                        rec.error_mean, rec.epsilon, limit, r
                    ),
                    &mut offending,
                    &mut reason,
                );
            }
        }
    }

    Verdict {
        pass: trend_ok && terminal_ok && bound_ok,
        trend_ok,
        terminal_ok,
        bound_ok,
        fitted_c,
        offending,
        reason,
    }
}
