//! The four commands. Each `*_table` function computes in the caller's rayon
//! context; [`run`] wraps them in a dedicated pool and writes the files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use spde_perturb::lab::{bound_shape, convergence_study, ConvergenceStudy};
use spde_perturb::operators::{semigroup_diff_norm, semigroup_via_contour, spectrum_gap_check, tau_h1, EmbeddingPair};
use spde_perturb::spde::{moment_bound_check, MomentReport};
use spde_perturb::spectral::SpectralVec;
use spde_perturb::Error;

use crate::config::RunConfig;
use crate::manifest::{timestamp, FileDigest, RunManifest};
use crate::output::{markdown_table, num, write_file, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Operators,
    Simulate,
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Operators => "operators",
            Command::Simulate => "simulate",
            Command::Converge => "converge",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: Option<u64>,
    /// Worker count; 0 lets rayon decide. Never affects output bytes.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub diagnostics: Vec<String>,
    pub manifest: Option<RunManifest>,
}

pub const OPERATORS_HEADER: &[&str] = &[
    "epsilon",
    "n_eps",
    "t",
    "tau_H1",
    "tau_H1_doubled",
    "truncation_rel_gap",
    "truncation_flag",
    "semigroup_diff_norm",
    "diff_t_over_tau",
    "contour_rel_err",
    "spectrum_base_distance",
    "spectrum_perturbed_distance",
    "spectrum_epsilon0",
    "sup_resolvent_norm",
    "resolvent_bound",
    "spectrum_gap_holds",
];

pub const PATHS_HEADER: &[&str] = &["row", "path_index", "sup_norm_sq", "initial_norm_sq", "stderr", "implied_c"];

pub const CONVERGENCE_HEADER: &[&str] = &[
    "epsilon",
    "n_eps",
    "tau_H1",
    "tau_H1_doubled",
    "tau0",
    "tau1",
    "tau2",
    "error_mean_sup_sq",
    "error_stderr",
    "i1",
    "i2",
    "i3",
    "bound_shape_min",
    "bound_r",
    "bound_fit",
];

/// Rows of one `ε` and whether its truncation check failed.
type RowBlock = (Vec<Vec<String>>, bool);

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Static checks plus construction of every library object the other
/// commands would build.
pub fn validate(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let scenario = cfg.scenario()?;
    cfg.quadrature()?;
    let rect = cfg.spectrum_rect()?;
    let mut diag = Vec::new();
    for &eps in &cfg.epsilon_grid {
        let pair = EmbeddingPair::with_policy(eps, cfg.n_modes, cfg.truncation())?;
        let report = spectrum_gap_check(&pair, &rect, 2)?;
        diag.push(format!(
            "epsilon {}: N_eps {}, spectrum gap {}",
            num(eps),
            pair.perturbed().n_modes(),
            if report.gap_holds(eps) { "holds" } else { "violated" }
        ));
    }
    let base = &scenario.base;
    diag.push(format!("drift Lipschitz k1 = {}", num(base.k1())));
    diag.push(format!("diffusion Lipschitz k2 = {}", num(base.k2())));
    diag.push(format!(
        "contraction factor 2T(T+4)k2 = {} (reported, not enforced)",
        num(scenario.contraction_factor())
    ));
    diag.push(format!("probe radius = {}", num(scenario.probe_radius())));
    Ok(diag)
}

/// One row per `(ε, t)`; the flag is set when `τ` at `N_ε` and at `2N_ε`
/// differ by more than 1%.
pub fn operators_table(cfg: &RunConfig) -> Result<(Table, bool), CliError> {
    let quad = cfg.quadrature()?;
    let rect = cfg.spectrum_rect()?;
    let d = cfg.domain()?;
    let probe: Vec<f64> = (1..=cfg.n_modes).map(|n| 1.0 / n as f64).collect();
    let probe = SpectralVec::from_coeffs(d, probe)?;
    let contour: Vec<f64> = cfg
        .operators
        .times
        .iter()
        .map(|&t| semigroup_via_contour(t, &probe, &quad)?.relative_error(t, &probe))
        .collect::<spde_perturb::Result<_>>()?;

    let blocks: Vec<Result<RowBlock, CliError>> = cfg
        .epsilon_grid
        .par_iter()
        .map(|&eps| {
            let pair = EmbeddingPair::with_policy(eps, cfg.n_modes, cfg.truncation())?;
            let (tau, doubled, gap, flagged) = match tau_h1(&pair) {
                Ok(r) => (r.value, r.doubled, r.relative_gap(), false),
                Err(Error::Truncation { value, doubled }) => {
                    (value, doubled, (value - doubled).abs() / value.abs().max(doubled.abs()), true)
                }
                Err(e) => return Err(e.into()),
            };
            let report = spectrum_gap_check(&pair, &rect, cfg.operators.spectrum_samples)?;
            let mut rows = Vec::new();
            for (&t, &c) in cfg.operators.times.iter().zip(&contour) {
                let diff = semigroup_diff_norm(&pair, t)?.value;
                let ratio = if tau > 0.0 { diff * t / tau } else { 0.0 };
                rows.push(vec![
                    num(eps),
                    pair.perturbed().n_modes().to_string(),
                    num(t),
                    num(tau),
                    num(doubled),
                    num(gap),
                    flag(flagged),
                    num(diff),
                    num(ratio),
                    num(c),
                    num(report.base_distance),
                    num(report.perturbed_distance),
                    report.epsilon0.map(num).unwrap_or_default(),
                    num(report.sup_resolvent_norm),
                    num(report.resolvent_bound),
                    flag(report.gap_holds(eps)),
                ]);
            }
            Ok((rows, flagged))
        })
        .collect();

    let mut table = Table::new(OPERATORS_HEADER);
    let mut any = false;
    for b in blocks {
        let (rows, flagged) = b?;
        any |= flagged;
        for r in rows {
            table.push(r);
        }
    }
    Ok((table, any))
}

pub fn paths_table(report: &MomentReport<f64>) -> Table {
    let mut table = Table::new(PATHS_HEADER);
    for (p, &s) in report.per_path.iter().enumerate() {
        table.push(vec!["path".into(), p.to_string(), num(s), String::new(), String::new(), String::new()]);
    }
    table.push(vec![
        "summary".into(),
        String::new(),
        num(report.sup_norm_sq.mean),
        num(report.initial_norm_sq.mean),
        num(report.sup_norm_sq.stderr),
        num(report.implied_constant),
    ]);
    table
}

pub fn simulate_report(cfg: &RunConfig) -> Result<MomentReport<f64>, CliError> {
    Ok(moment_bound_check(&cfg.problem()?, cfg.paths, cfg.master_seed)?)
}

pub fn convergence_table(cfg: &RunConfig, study: &ConvergenceStudy<f64>) -> Table {
    let mut table = Table::new(CONVERGENCE_HEADER);
    let c = study.verdict.fitted_c;
    for (rec, tau) in study.records.iter().zip(&study.tau_reports) {
        let (r, shape) = cfg
            .r_grid
            .iter()
            .map(|&r| (r, bound_shape(rec, r)))
            .fold((f64::NAN, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
        table.push(vec![
            num(rec.epsilon),
            cfg.truncation().perturbed_modes(rec.epsilon, cfg.n_modes).to_string(),
            num(rec.tau),
            num(tau.doubled),
            num(rec.tau0),
            num(rec.tau1),
            num(rec.tau2),
            num(rec.error_mean),
            num(rec.error_stderr),
            num(rec.i1),
            num(rec.i2),
            num(rec.i3),
            num(shape),
            num(r),
            num(c * shape),
        ]);
    }
    table
}

pub fn converge_study(cfg: &RunConfig) -> Result<ConvergenceStudy<f64>, CliError> {
    Ok(convergence_study(&cfg.scenario()?, &cfg.criteria())?)
}

fn simulate_markdown(cfg: &RunConfig, report: &MomentReport<f64>, contraction: f64) -> String {
    let m = &report.sup_norm_sq;
    let rel = if m.mean != 0.0 { m.stderr / m.mean } else { 0.0 };
    let mut s = String::new();
    let _ = writeln!(s, "# Moment bound\n");
    let _ = writeln!(
        s,
        "N = {}, K = {}, T = {}, M = {}, seed = {}\n",
        cfg.n_modes, cfg.time_steps, num(cfg.horizon), cfg.paths, cfg.master_seed
    );
    let _ = writeln!(s, "| quantity | value |\n|---|---|");
    let _ = writeln!(s, "| E sup_t ‖u‖² | {} |", num(m.mean));
    let _ = writeln!(s, "| stderr | {} |", num(m.stderr));
    let _ = writeln!(s, "| relative stderr | {} |", num(rel));
    let _ = writeln!(s, "| E‖u₀‖² | {} |", num(report.initial_norm_sq.mean));
    let _ = writeln!(s, "| implied C in E sup‖u‖² ≤ C(1 + E‖u₀‖²) | {} |", num(report.implied_constant));
    let _ = writeln!(s, "| contraction factor 2T(T+4)k₂ | {} |", num(contraction));
    let _ = writeln!(s, "\nAll {} paths stayed below the blow-up threshold.", cfg.paths);
    s
}

fn converge_markdown(cfg: &RunConfig, study: &ConvergenceStudy<f64>, table: &Table) -> String {
    let v = &study.verdict;
    let ok = |b: bool| if b { "ok" } else { "FAIL" };
    let mut s = String::new();
    let _ = writeln!(s, "# Convergence study\n");
    let _ = writeln!(
        s,
        "N = {}, K = {}, T = {}, M = {}, seed = {}, nonlinearities {:?}, initial data {:?}, noise {:?}\n",
        cfg.n_modes,
        cfg.time_steps,
        num(cfg.horizon),
        cfg.paths,
        cfg.master_seed,
        cfg.nonlinearity_mode,
        cfg.initial_mode,
        cfg.coupling
    );
    let _ = writeln!(s, "## Trend\n");
    s.push_str(&markdown_table(table));
    let _ = writeln!(s, "\n## Channels\n");
    let _ = writeln!(s, "| epsilon | i1 share | i2 share | i3 share |\n|---|---|---|---|");
    for r in &study.records {
        let sum = r.i1 + r.i2 + r.i3;
        let share = |x: f64| if sum > 0.0 { num(x / sum) } else { "0".into() };
        let _ = writeln!(s, "| {} | {} | {} | {} |", num(r.epsilon), share(r.i1), share(r.i2), share(r.i3));
    }
    let _ = writeln!(s, "\n## Verdict: {}\n", if v.pass { "PASS" } else { "FAIL" });
    let c = &cfg.verdict;
    let _ = writeln!(
        s,
        "- (a) error nonincreasing within {} combined standard errors: {}",
        num(c.trend_sigmas),
        ok(v.trend_ok)
    );
    let _ = writeln!(
        s,
        "- (b) terminal error at most {} of the initial: {}",
        num(c.terminal_fraction),
        ok(v.terminal_ok)
    );
    let _ = writeln!(
        s,
        "- (c) every record within C·(r² + r + τ₀ + τ₁ + τ²/r² + τ/r) with C = {}: {}",
        num(v.fitted_c),
        ok(v.bound_ok)
    );
    if let Some(reason) = &v.reason {
        let _ = writeln!(s, "\n{reason}");
    }
    let _ = writeln!(
        s,
        "\nContraction factor 2T(T+4)k₂ = {} (reported, not enforced).",
        num(study.contraction_factor)
    );
    s
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Other(e.to_string()))
}

struct Run<'a> {
    cmd: Command,
    bytes: &'a [u8],
    cfg: &'a RunConfig,
    threads: usize,
    started_at: String,
    clock: Instant,
    out: PathBuf,
}

impl Run<'_> {
    fn finish(&self, files: Vec<FileDigest>, record_runtime_ms: Vec<f64>, exit_code: i32) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            artifact: "spde-perturb".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.cmd.name().into(),
            config_sha256: crate::output::sha256_hex(self.bytes),
            master_seed: self.cfg.master_seed,
            threads: self.threads,
            started_at: self.started_at.clone(),
            finished_at: timestamp(),
            runtime_ms: self.clock.elapsed().as_secs_f64() * 1e3,
            record_runtime_ms,
            files,
            exit_code,
        };
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Other(e.to_string()))?;
        write_file(&self.out, "manifest.json", &(json + "\n"))?;
        Ok(manifest)
    }

    fn table(&self, name: &str, table: &Table) -> Result<FileDigest, CliError> {
        let text = table.render();
        write_file(&self.out, name, &text)?;
        Ok(FileDigest::table(name, table, &text))
    }

    fn text(&self, name: &str, text: &str) -> Result<FileDigest, CliError> {
        write_file(&self.out, name, text)?;
        Ok(FileDigest::text(name, text))
    }
}

/// Loads the config, applies overrides and runs `cmd`. Output files are
/// written before a truncation or FAIL error is returned.
pub fn run(cmd: Command, config: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let started_at = timestamp();
    let clock = Instant::now();
    let (mut cfg, bytes) = RunConfig::load(config)?;
    if let Some(seed) = opts.seed {
        cfg.master_seed = seed;
    }
    let out = opts.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let pool = pool(opts.threads)?;
    let run = Run {
        cmd,
        bytes: &bytes,
        cfg: &cfg,
        threads: pool.current_num_threads(),
        started_at,
        clock,
        out: out.clone(),
    };
    let outcome = |diagnostics, manifest| Outcome {
        out_dir: out.clone(),
        diagnostics,
        manifest,
    };

    match cmd {
        Command::Validate => {
            let diag = validate(&cfg)?;
            Ok(outcome(diag, None))
        }
        Command::Operators => {
            let (table, flagged) = pool.install(|| operators_table(&cfg))?;
            let files = vec![run.table("operators.csv", &table)?];
            let err = flagged.then(|| {
                CliError::Truncation("τ at N_ε and 2N_ε differ by more than 1% on a flagged row".into())
            });
            let code = err.as_ref().map_or(0, CliError::exit_code);
            let manifest = run.finish(files, Vec::new(), code)?;
            match err {
                Some(e) => Err(e),
                None => Ok(outcome(Vec::new(), Some(manifest))),
            }
        }
        Command::Simulate => {
            let contraction = cfg.scenario()?.contraction_factor();
            let report = pool.install(|| simulate_report(&cfg))?;
            let table = paths_table(&report);
            let files = vec![
                run.table("paths.csv", &table)?,
                run.text("report.md", &simulate_markdown(&cfg, &report, contraction))?,
            ];
            let manifest = run.finish(files, Vec::new(), 0)?;
            let m = &report.sup_norm_sq;
            let diag = vec![format!("E sup ‖u‖² = {} ± {}", num(m.mean), num(m.stderr))];
            Ok(outcome(diag, Some(manifest)))
        }
        Command::Converge => {
            let study = pool.install(|| converge_study(&cfg))?;
            let table = convergence_table(&cfg, &study);
            let files = vec![
                run.table("convergence.csv", &table)?,
                run.text("report.md", &converge_markdown(&cfg, &study, &table))?,
            ];
            let runtimes = study.records.iter().map(|r| r.runtime_ms).collect();
            let v = &study.verdict;
            let code = if v.pass { 0 } else { 5 };
            let manifest = run.finish(files, runtimes, code)?;
            if v.pass {
                Ok(outcome(vec![format!("verdict PASS, fitted C = {}", num(v.fitted_c))], Some(manifest)))
            } else {
                Err(CliError::ConvergenceFail(
                    v.reason.clone().unwrap_or_else(|| "verdict checks failed".into()),
                ))
            }
        }
    }
}
