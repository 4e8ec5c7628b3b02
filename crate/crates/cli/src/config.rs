//! Strict JSON run configuration and its translation into library objects.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spde_perturb::lab::{Coupling, InitialMode, NonlinearityMode, PerturbationScenario, ProbeSettings, VerdictCriteria};
use spde_perturb::operators::{ComplexRect, ContourQuadrature, TruncationPolicy};
use spde_perturb::spde::{InitialCondition, Nonlinearity, Pointwise, SpdeProblem};
use spde_perturb::spectral::{DirichletDomain, SpectralVec};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Base truncation `N`.
    pub n_modes: usize,
    /// `N_ε = ceil((1+ε)N) + truncation_margin` for `ε > 0`.
    #[serde(default = "default_margin")]
    pub truncation_margin: usize,
    /// Exponential Euler steps `K` on `[0, horizon]`.
    pub time_steps: usize,
    pub horizon: f64,
    /// Monte Carlo paths `M`.
    pub paths: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub epsilon_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    #[serde(default)]
    pub nonlinearity_mode: NonlinearityModeConfig,
    #[serde(default)]
    pub initial_mode: InitialModeConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    pub drift: NonlinearityConfig,
    pub diffusion: NonlinearityConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub operators: OperatorsConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub verdict: VerdictConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_margin() -> usize {
    TruncationPolicy::default().margin
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityModeConfig {
    #[default]
    Induced,
    Native,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialModeConfig {
    #[default]
    Pushforward,
    PerturbedSample,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingConfig {
    #[default]
    Shared,
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseConfig {
    Sin,
    Tanh,
}

/// Coefficient vectors are given as a prefix of the sine expansion; missing
/// modes are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearityConfig {
    Zero,
    Constant {
        offset: Vec<f64>,
    },
    Affine {
        slope: f64,
        #[serde(default)]
        offset: Vec<f64>,
    },
    CutoffNemytskii {
        pointwise: PointwiseConfig,
        radius: f64,
        grid: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub mean: Vec<f64>,
    /// Standard deviation of mode `n` is `jitter / n`.
    #[serde(default)]
    pub jitter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorsConfig {
    pub times: Vec<f64>,
    /// Compact set `K₀ = [re₀, re₁] × [im₀, im₁]` for the spectrum report.
    pub spectrum_re: [f64; 2],
    pub spectrum_im: [f64; 2],
    pub spectrum_samples: usize,
}

impl Default for OperatorsConfig {
    fn default() -> Self {
        Self {
            times: vec![0.05, 0.1, 0.5, 1.0],
            spectrum_re: [-5.0, -1.0],
            spectrum_im: [-1.0, 1.0],
            spectrum_samples: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub ratio: f64,
    pub r_min: f64,
    pub decay_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            ratio: ContourQuadrature::<f64>::DEFAULT_RATIO,
            r_min: ContourQuadrature::<f64>::DEFAULT_R_MIN,
            decay_tol: ContourQuadrature::<f64>::DEFAULT_DECAY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictConfig {
    pub trend_sigmas: f64,
    pub terminal_fraction: f64,
    pub probe_random: usize,
    pub probe_ascent_iters: usize,
    pub probe_seed: u64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        let c = VerdictCriteria::<f64>::default();
        Self {
            trend_sigmas: c.trend_sigmas,
            terminal_fraction: c.terminal_fraction,
            probe_random: c.probe.random,
            probe_ascent_iters: c.probe.ascent_iters,
            probe_seed: c.probe.seed,
        }
    }
}

fn bad(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("`{key}`: {reason}"))
}

fn check_coeffs(key: &str, coeffs: &[f64], n: usize) -> Result<(), CliError> {
    if coeffs.len() > n {
        return Err(bad(key, format!("{} coefficients for {n} modes", coeffs.len())));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(bad(key, "coefficients must be finite"));
    }
    Ok(())
}

impl NonlinearityConfig {
    fn check(&self, key: &str, n: usize) -> Result<(), CliError> {
        match self {
            Self::Zero => Ok(()),
            Self::Constant { offset } => check_coeffs(&format!("{key}.offset"), offset, n),
            Self::Affine { slope, offset } => {
                if !slope.is_finite() {
                    return Err(bad(&format!("{key}.slope"), "must be finite"));
                }
                check_coeffs(&format!("{key}.offset"), offset, n)
            }
            Self::CutoffNemytskii { radius, grid, .. } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(bad(&format!("{key}.radius"), format!("must be positive, got {radius}")));
                }
                if *grid < n {
                    return Err(bad(&format!("{key}.grid"), format!("{grid} points cannot resolve {n} modes")));
                }
                Ok(())
            }
        }
    }

    pub fn build(&self, domain: DirichletDomain<f64>) -> Result<Nonlinearity<f64>, CliError> {
        Ok(match self {
            Self::Zero => Nonlinearity::zero(domain),
            Self::Constant { offset } => Nonlinearity::constant(SpectralVec::from_prefix(domain, offset)),
            Self::Affine { slope, offset } => Nonlinearity::affine(*slope, SpectralVec::from_prefix(domain, offset)),
            Self::CutoffNemytskii { pointwise, radius, grid } => {
                let p = match pointwise {
                    PointwiseConfig::Sin => Pointwise::Sin,
                    PointwiseConfig::Tanh => Pointwise::Tanh,
                };
                Nonlinearity::cutoff_nemytskii(domain, p, *radius, *grid)?
            }
        })
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok((Self::from_json(text)?, bytes))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Every statically checkable constraint, in declaration order; the
    /// first violation is returned.
    pub fn validate(&self) -> Result<(), CliError> {
        let n = self.n_modes;
        if n == 0 {
            return Err(bad("n_modes", "must be at least 1"));
        }
        if self.time_steps == 0 {
            return Err(bad("time_steps", "must be at least 1"));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(bad("horizon", format!("must be positive, got {}", self.horizon)));
        }
        if self.paths == 0 {
            return Err(bad("paths", "must be at least 1"));
        }
        if self.epsilon_grid.is_empty() {
            return Err(bad("epsilon_grid", "must not be empty"));
        }
        if self.epsilon_grid.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(bad("epsilon_grid", "entries must be finite and non-negative"));
        }
        if self.epsilon_grid.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(bad("epsilon_grid", "must be strictly decreasing"));
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(bad("r_grid", "must be non-empty with positive entries"));
        }
        self.drift.check("drift", n)?;
        self.diffusion.check("diffusion", n)?;
        check_coeffs("initial.mean", &self.initial.mean, n)?;
        if !(self.initial.jitter >= 0.0) || !self.initial.jitter.is_finite() {
            return Err(bad("initial.jitter", "must be finite and non-negative"));
        }
        let ops = &self.operators;
        if ops.times.is_empty() || ops.times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(bad("operators.times", "must be non-empty with positive entries"));
        }
        if !(ops.spectrum_re[0] <= ops.spectrum_re[1]) {
            return Err(bad("operators.spectrum_re", "bounds must be ordered"));
        }
        if !(ops.spectrum_im[0] <= ops.spectrum_im[1]) {
            return Err(bad("operators.spectrum_im", "bounds must be ordered"));
        }
        if ops.spectrum_samples < 2 {
            return Err(bad("operators.spectrum_samples", "must be at least 2"));
        }
        let q = &self.quadrature;
        if !(q.ratio > 0.0 && q.ratio < 1.0) {
            return Err(bad("quadrature.ratio", format!("must lie in (0, 1), got {}", q.ratio)));
        }
        if !(q.r_min > 0.0) {
            return Err(bad("quadrature.r_min", "must be positive"));
        }
        if !(q.decay_tol > 0.0 && q.decay_tol < 1.0) {
            return Err(bad("quadrature.decay_tol", "must lie in (0, 1)"));
        }
        let v = &self.verdict;
        if !(v.trend_sigmas >= 0.0) {
            return Err(bad("verdict.trend_sigmas", "must be non-negative"));
        }
        if !(v.terminal_fraction >= 0.0) {
            return Err(bad("verdict.terminal_fraction", "must be non-negative"));
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<DirichletDomain<f64>, CliError> {
        Ok(DirichletDomain::unit(self.n_modes)?)
    }

    pub fn truncation(&self) -> TruncationPolicy {
        TruncationPolicy {
            margin: self.truncation_margin,
        }
    }

    pub fn problem(&self) -> Result<SpdeProblem<f64>, CliError> {
        let d = self.domain()?;
        let mean = SpectralVec::from_prefix(d, &self.initial.mean);
        let initial = if self.initial.jitter > 0.0 {
            InitialCondition::with_jitter(mean, self.initial.jitter)?
        } else {
            InitialCondition::deterministic(mean)
        };
        Ok(SpdeProblem::new(
            self.drift.build(d)?,
            self.diffusion.build(d)?,
            initial,
            self.horizon,
            self.time_steps,
        )?)
    }

    pub fn scenario(&self) -> Result<PerturbationScenario<f64>, CliError> {
        let nl = match self.nonlinearity_mode {
            NonlinearityModeConfig::Induced => NonlinearityMode::Induced,
            NonlinearityModeConfig::Native => NonlinearityMode::Native,
        };
        let init = match self.initial_mode {
            InitialModeConfig::Pushforward => InitialMode::Pushforward,
            InitialModeConfig::PerturbedSample => InitialMode::PerturbedSample,
        };
        let coupling = match self.coupling {
            CouplingConfig::Shared => Coupling::Shared,
            CouplingConfig::Independent => Coupling::Independent,
        };
        Ok(
            PerturbationScenario::new(self.problem()?, self.epsilon_grid.clone(), self.r_grid.clone())?
                .with_modes(nl, init)
                .with_coupling(coupling)
                .with_truncation(self.truncation())
                .with_paths(self.paths)
                .with_seed(self.master_seed),
        )
    }

    pub fn criteria(&self) -> VerdictCriteria<f64> {
        let v = &self.verdict;
        VerdictCriteria {
            trend_sigmas: v.trend_sigmas,
            terminal_fraction: v.terminal_fraction,
            probe: ProbeSettings {
                random: v.probe_random,
                ascent_iters: v.probe_ascent_iters,
                seed: v.probe_seed,
            },
        }
    }

    pub fn quadrature(&self) -> Result<ContourQuadrature<f64>, CliError> {
        let t_min = self.operators.times.iter().copied().fold(f64::INFINITY, f64::min);
        let q = &self.quadrature;
        Ok(ContourQuadrature::with_settings(t_min, q.ratio, q.r_min, q.decay_tol)?)
    }

    pub fn spectrum_rect(&self) -> Result<ComplexRect<f64>, CliError> {
        let o = &self.operators;
        Ok(ComplexRect::new(
            (o.spectrum_re[0], o.spectrum_re[1]),
            (o.spectrum_im[0], o.spectrum_im[1]),
        )?)
    }
}
