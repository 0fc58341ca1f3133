//! Command implementations behind the `burgers-lab` binary.
//!
//! Each command returns its report as a string so the binary only prints and
//! maps errors to exit codes.

pub mod config;
pub mod verify;

use crate::analysis::{self, AnalysisError, BoundReport, DecaySeries, Window};
use crate::exponents::{self, ExponentError, Rational};
use crate::solver::{self, NumericalFlux, SolverError, Trajectory};
use config::{ConfigError, RunConfig};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;
use verify::{CriterionResult, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} criteria failed")]
    VerificationFailed(usize),
}

impl CliError {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Exponent(ExponentError::InvalidDimension(_)) => "invalid-dim",
            CliError::Exponent(ExponentError::GammaOutOfRange { .. }) => "invalid-gamma",
            CliError::Exponent(_) => "invalid-rational",
            CliError::Config(_) => "config",
            CliError::Solver(SolverError::Contamination(_)) => "contamination",
            CliError::Solver(SolverError::CflViolation { .. } | SolverError::DegenerateStep(_)) => "cfl",
            CliError::Solver(_) => "solver",
            CliError::Analysis(AnalysisError::Solver(SolverError::Contamination(_))) => "contamination",
            CliError::Analysis(_) => "analysis",
            CliError::Io { .. } => "io",
            CliError::VerificationFailed(_) => "verification-failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_ERROR,
        }
    }

    /// `error <code>: <message>` on one line.
    pub fn reason_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error {}: {msg}", self.code())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

/// Exponent table for dimension `dim`. Without `gamma` the ledger uses `γ₀/2`.
pub fn cmd_exponents(dim: i64, gamma: Option<&str>, iters: Option<u32>) -> Result<String, CliError> {
    if dim < 1 || dim > u32::MAX as i64 {
        return Err(ExponentError::InvalidDimension(dim).into());
    }
    let d = dim as u32;
    let set = exponents::ExponentSet::new(d)?;
    let gamma: Rational = match gamma {
        Some(s) => exponents::parse_rational(s)?,
        None => &set.gamma0 / exponents::rat(2, 1),
    };
    let iters = iters.unwrap_or(5);
    let theta = exponents::theta(d, &gamma)?;
    let limit = exponents::compound_limit(d, &gamma)?;
    let interp = exponents::interpolation_check(d)?;
    let invariance = exponents::invariance_exponent_check(d)?;
    let r = exponents::render;
    let verdict = |b: bool| if b { "pass" } else { "fail" };

    let mut out = String::new();
    writeln!(out, "dim = {d}").unwrap();
    writeln!(out, "gamma0 = {}", r(&set.gamma0)).unwrap();
    writeln!(out, "lp.p = {}", r(&set.p)).unwrap();
    writeln!(out, "lp.gamma = {}", r(&set.gamma_lp)).unwrap();
    writeln!(out, "lp.delta = {}", r(&set.delta_lp)).unwrap();
    writeln!(out, "gamma = {}", r(&gamma)).unwrap();
    writeln!(out, "theta = {}", r(&theta)).unwrap();
    writeln!(out, "ledger: steps,constant,l1,t,dyadic,residual").unwrap();
    for j in 0..=iters {
        let row = exponents::compound_partial(d, &gamma, j)?;
        writeln!(
            out,
            "ledger[{j}] = {},{},{},{},{},{}",
            row.steps,
            r(&row.constant_exponent),
            r(&row.l1_exponent),
            r(&row.t_exponent),
            r(&row.dyadic_exponent),
            r(&row.residual_exponent)
        )
        .unwrap();
    }
    writeln!(
        out,
        "limit = ({}, {}, {})",
        r(&limit.l1_exponent),
        r(&limit.t_exponent),
        r(&limit.dyadic_exponent)
    )
    .unwrap();
    writeln!(out, "check.interpolation = {}", verdict(interp.holds)).unwrap();
    writeln!(out, "check.invariance = {}", verdict(invariance)).unwrap();
    Ok(out)
}

fn load_config(path: &Path, flux: Option<NumericalFlux>) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(f) = flux {
        cfg.flux = f;
    }
    Ok(cfg)
}

fn run_config(cfg: &RunConfig) -> Result<Trajectory, CliError> {
    let u0 = cfg.initial_data()?;
    let grid = cfg.grid(&u0)?;
    let samples = cfg.sample_times()?;
    Ok(solver::solve_to(&u0, &grid, cfg.t_final, &samples, &cfg.solver_options())?)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Runs the configured simulation, writing `series.csv` and `field.txt` (the
/// final cell values) into `out`.
pub fn cmd_simulate(config: &Path, out: &Path, flux: Option<NumericalFlux>) -> Result<String, CliError> {
    let cfg = load_config(config, flux)?;
    let traj = run_config(&cfg)?;
    let series = DecaySeries::from_trajectory(&traj);
    ensure_dir(out)?;
    write_file(&out.join("series.csv"), &series.to_csv())?;
    write_file(&out.join("field.txt"), &traj.final_field.to_text())?;
    Ok(format!(
        "ok simulate steps={} samples={} t={:e} out={}\n",
        traj.dts.len(),
        series.rows.len(),
        traj.final_field.time(),
        out.display()
    ))
}

/// The three bound reports for a series: the L∞ estimate, the Lᵖ estimate and
/// the L∞-weighted one for each `γ`.
pub fn bound_reports(series: &DecaySeries, window: &Window, gammas: &[Rational]) -> Result<Vec<BoundReport>, CliError> {
    let mut reports = vec![analysis::linf_ratio(series, window)?, analysis::lp_ratio(series, window)?];
    for g in gammas {
        reports.push(analysis::weighted_linf_ratio(series, g, window)?);
    }
    Ok(reports)
}

/// Runs the configured simulation, writing `series.csv` and `bounds.txt` into `out`.
pub fn cmd_decay(config: &Path, out: &Path, flux: Option<NumericalFlux>) -> Result<String, CliError> {
    let cfg = load_config(config, flux)?;
    let traj = run_config(&cfg)?;
    let series = DecaySeries::from_trajectory(&traj);
    let window = match cfg.window {
        Some((lo, hi)) => Window::new(lo, hi)?,
        None => Window::bound_window(&series)?,
    };
    let reports = bound_reports(&series, &window, &cfg.weighted_gammas())?;
    ensure_dir(out)?;
    write_file(&out.join("series.csv"), &series.to_csv())?;
    let text: String = reports.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n");
    write_file(&out.join("bounds.txt"), &text)?;
    let mut summary = String::new();
    for r in &reports {
        writeln!(
            summary,
            "{} gamma={} sup_ratio={:.6e}",
            r.estimate.id(),
            exponents::render(&r.gamma),
            r.sup_ratio
        )
        .unwrap();
    }
    writeln!(summary, "ok decay rows={} out={}", series.rows.len(), out.display()).unwrap();
    Ok(summary)
}

/// Runs one suite; the error carries the failure count when any criterion fails.
pub fn cmd_verify(suite: &str) -> Result<(String, Vec<CriterionResult>), CliError> {
    let suite: Suite = suite.parse().map_err(CliError::Usage)?;
    let results = verify::run_suite(suite);
    let mut out = String::new();
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(out, "suite {} {}/{} passed", suite.id(), results.len() - failed, results.len()).unwrap();
    Ok((out, results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_d1_table() {
        let out = cmd_exponents(1, None, None).unwrap();
        assert!(out.contains("gamma0 = 1/2\n"));
        assert!(out.contains("lp.p = 4\n"));
        assert!(out.contains("lp.gamma = 5/8\n"));
        assert!(out.contains("lp.delta = 3/8\n"));
        assert!(out.contains("check.interpolation = pass"));
        assert!(out.contains("check.invariance = pass"));
    }

    #[test]
    fn exponents_d2_ledger() {
        let out = cmd_exponents(2, Some("1/8"), Some(3)).unwrap();
        assert!(out.contains("theta = 1/2\n"));
        assert!(out.contains("limit = (1/4, 1/2, 1)\n"));
        assert_eq!(out.matches("ledger[").count(), 4);
    }

    #[test]
    fn exponents_errors_have_codes() {
        assert_eq!(cmd_exponents(0, None, None).unwrap_err().code(), "invalid-dim");
        assert_eq!(cmd_exponents(2, Some("0.1"), None).unwrap_err().code(), "invalid-rational");
        assert_eq!(cmd_exponents(2, Some("1/4"), None).unwrap_err().code(), "invalid-gamma");
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let e = cmd_verify("nope").unwrap_err();
        assert_eq!((e.code(), e.exit_code()), ("usage", EXIT_ERROR));
    }

    #[test]
    fn reason_line_is_single_line() {
        let e = CliError::Usage("a\nb".into());
        assert!(!e.reason_line().contains('\n'));
    }
}
