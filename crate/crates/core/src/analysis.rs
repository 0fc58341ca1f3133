//! Discrete norms, log-log decay fits and bound ratios for the three decay
//! estimates, plus semigroup and scaling residuals.

use crate::equation::{l1_scale_factor, InitialData, ScalingParams};
use crate::exponents::{self, render, to_f64, ExponentError, Rational};
use crate::solver::{self, Field, Grid, SolverError, SolverOptions, Trajectory};
use std::fmt::{self, Write as _};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("Lebesgue exponent must be >= 1 (or infinite), got {0}")]
    InvalidExponent(f64),
    #[error("fit needs at least 3 rows in the window, found {0}")]
    TooFewRows(usize),
    #[error("zero or negative norm at t = {0} inside the fit window")]
    ZeroNorm(f64),
    #[error("inconsistent series: {0}")]
    InconsistentSeries(String),
    #[error("invalid window [{0}, {1}]")]
    InvalidWindow(f64, f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("series parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRecord {
    pub l1: f64,
    pub l2: f64,
    pub lp: f64,
    pub linf: f64,
    /// `Σ u_i · Π dx`.
    pub mass: f64,
}

/// All norms of one field in a single compensated pass.
pub fn norm_record(field: &Field, p: f64) -> NormRecord {
    let vol = field.grid().cell_volume();
    let mut l1 = CompensatedSum::default();
    let mut l2 = CompensatedSum::default();
    let mut lp = CompensatedSum::default();
    let mut mass = CompensatedSum::default();
    let mut linf: f64 = 0.0;
    for &v in field.values() {
        let a = v.abs();
        l1.add(a);
        l2.add(a * a);
        if a > 0.0 {
            lp.add(a.powf(p));
        }
        mass.add(v);
        linf = linf.max(a);
    }
    NormRecord {
        l1: l1.value() * vol,
        l2: (l2.value() * vol).sqrt(),
        lp: (lp.value() * vol).powf(1.0 / p),
        linf,
        mass: mass.value() * vol,
    }
}

/// `(Σ|u_i|^p Π dx)^{1/p}`, or `max |u_i|` for `p = ∞`.
pub fn lp_norm(field: &Field, p: f64) -> Result<f64, AnalysisError> {
    if p.is_nan() || p < 1.0 {
        return Err(AnalysisError::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(field.values().iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let vol = field.grid().cell_volume();
    let s: CompensatedSum = if p == 1.0 {
        field.values().iter().map(|v| v.abs()).collect()
    } else if p == 2.0 {
        field.values().iter().map(|v| v * v).collect()
    } else {
        field.values().iter().map(|v| v.abs().powf(p)).collect()
    };
    Ok((s.value() * vol).powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub lp: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    L1,
    L2,
    Lp,
    Linf,
}

impl SeriesRow {
    pub fn get(&self, c: Column) -> f64 {
        match c {
            Column::L1 => self.l1,
            Column::L2 => self.l2,
            Column::Lp => self.lp,
            Column::Linf => self.linf,
        }
    }
}

pub const SERIES_HEADER: &str = "t,l1,l2,lp,linf";

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    pub d: u32,
    pub l1_0: f64,
    pub linf_0: f64,
    pub rows: Vec<SeriesRow>,
}

impl DecaySeries {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let d = traj.final_field.grid().dim() as u32;
        let rows: Vec<SeriesRow> = traj
            .samples
            .iter()
            .map(|s| SeriesRow {
                t: s.time,
                l1: s.norms.l1,
                l2: s.norms.l2,
                lp: s.norms.lp,
                linf: s.norms.linf,
            })
            .collect();
        let first = traj.initial().norms;
        Self { d, l1_0: first.l1, linf_0: first.linf, rows }
    }

    /// Time strictly increasing, norms nonnegative, L¹ non-increasing up to
    /// `1e-10` relative slack.
    pub fn validate(&self) -> Result<(), AnalysisError> {
        for w in self.rows.windows(2) {
            if w[1].t <= w[0].t {
                return Err(AnalysisError::InconsistentSeries(format!(
                    "time not increasing at t = {}",
                    w[1].t
                )));
            }
            if w[1].l1 > w[0].l1 * (1.0 + 1e-10) {
                return Err(AnalysisError::InconsistentSeries(format!("L1 grew at t = {}", w[1].t)));
            }
        }
        if let Some(r) = self.rows.iter().find(|r| r.l1 < 0.0 || r.l2 < 0.0 || r.lp < 0.0 || r.linf < 0.0) {
            return Err(AnalysisError::InconsistentSeries(format!("negative norm at t = {}", r.t)));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SERIES_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.t, r.l1, r.l2, r.lp, r.linf);
        }
        out
    }

    /// Parses the CSV produced by [`DecaySeries::to_csv`]; the first row is
    /// taken as the initial state.
    pub fn from_csv(d: u32, text: &str) -> Result<Self, AnalysisError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == SERIES_HEADER => {}
            _ => return Err(AnalysisError::Parse { line: 1, reason: format!("expected header `{SERIES_HEADER}`") }),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| AnalysisError::Parse { line: i + 1, reason: e.to_string() })?;
            if vals.len() != 5 {
                return Err(AnalysisError::Parse { line: i + 1, reason: format!("{} columns", vals.len()) });
            }
            rows.push(SeriesRow { t: vals[0], l1: vals[1], l2: vals[2], lp: vals[3], linf: vals[4] });
        }
        let first = rows.first().copied().ok_or(AnalysisError::TooFewRows(0))?;
        Ok(Self { d, l1_0: first.l1, linf_0: first.linf, rows })
    }

    fn in_window(&self, w: &Window) -> impl Iterator<Item = &SeriesRow> {
        let w = *w;
        self.rows.iter().filter(move |r| r.t >= w.lo && r.t <= w.hi)
    }
}

/// Closed time window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self, AnalysisError> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(AnalysisError::InvalidWindow(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    /// `[t₁, 100 t₁]`.
    pub fn two_decades(t1: f64) -> Result<Self, AnalysisError> {
        Self::new(t1, 100.0 * t1)
    }

    /// Bound windows start no earlier than `t = 1`.
    pub fn bound_window(series: &DecaySeries) -> Result<Self, AnalysisError> {
        let last = series.rows.last().map(|r| r.t).unwrap_or(1.0);
        Self::new(1.0, last.max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub rows: usize,
}

/// Least-squares line through `(log t, log norm)` over the window.
pub fn fit_slope(series: &DecaySeries, column: Column, window: &Window) -> Result<SlopeFit, AnalysisError> {
    let pts: Vec<(f64, f64)> = series
        .in_window(window)
        .map(|r| {
            let v = r.get(column);
            if v > 0.0 {
                Ok((r.t.ln(), v.ln()))
            } else {
                Err(AnalysisError::ZeroNorm(r.t))
            }
        })
        .collect::<Result<_, _>>()?;
    if pts.len() < 3 {
        return Err(AnalysisError::TooFewRows(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::TooFewRows(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit { slope, intercept, max_residual, rows: pts.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimate {
    /// `‖u(t)‖_∞ ≤ C ‖u₀‖₁^{γ₀} t^{-dγ₀}`.
    Linf,
    /// `‖u(t)‖_p ≤ C ‖u₀‖₁^γ t^{-δ}`, `p = (d+1)²/d`.
    Lp,
    /// `‖u(t)‖_∞ ≤ C(γ) ‖u₀‖_∞^θ ‖u₀‖₁^γ t^{-dγ}`.
    WeightedLinf,
}

impl Estimate {
    pub fn id(self) -> &'static str {
        match self {
            Estimate::Linf => "linf",
            Estimate::Lp => "lp",
            Estimate::WeightedLinf => "weighted-linf",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub estimate: Estimate,
    pub d: u32,
    pub gamma: Rational,
    pub window: Window,
    /// `(t, ratio)` for rows in the window.
    pub rows: Vec<(f64, f64)>,
    pub sup_ratio: f64,
}

impl BoundReport {
    fn build(
        estimate: Estimate,
        series: &DecaySeries,
        gamma: Rational,
        window: &Window,
        ratio: impl Fn(&SeriesRow) -> f64,
    ) -> Result<Self, AnalysisError> {
        let rows: Vec<(f64, f64)> = series.in_window(window).map(|r| (r.t, ratio(r))).collect();
        if let Some(&(t, r)) = rows.iter().find(|(_, r)| !r.is_finite()) {
            return Err(AnalysisError::InconsistentSeries(format!("ratio {r} at t = {t}")));
        }
        let sup_ratio = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok(Self { estimate, d: series.d, gamma, window: *window, rows, sup_ratio })
    }

    /// Structured-text rendering with exact exponents as `num/den`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "estimate = {}", self.estimate.id());
        let _ = writeln!(out, "d = {}", self.d);
        let _ = writeln!(out, "gamma = {}", render(&self.gamma));
        if self.estimate == Estimate::WeightedLinf {
            if let Ok(th) = exponents::theta(self.d, &self.gamma) {
                let _ = writeln!(out, "theta = {}", render(&th));
            }
        }
        let _ = writeln!(out, "window = {:.16e},{:.16e}", self.window.lo, self.window.hi);
        let _ = writeln!(out, "sup_ratio = {:.16e}", self.sup_ratio);
        let _ = writeln!(out, "rows = {}", self.rows.len());
        for (t, r) in &self.rows {
            let _ = writeln!(out, "{t:.16e},{r:.16e}");
        }
        out
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (gamma = {}): sup ratio {:.6} over t in [{}, {}]",
            self.estimate.id(),
            render(&self.gamma),
            self.sup_ratio,
            self.window.lo,
            self.window.hi
        )
    }
}

fn check_initial(series: &DecaySeries) -> Result<(), AnalysisError> {
    if series.l1_0 == 0.0 && series.rows.iter().any(|r| r.linf != 0.0) {
        return Err(AnalysisError::InconsistentSeries(
            "zero initial L1 norm with a nonzero solution".into(),
        ));
    }
    Ok(())
}

/// `R(t) = ‖u(t)‖_∞ t^{dγ₀} / ‖u₀‖₁^{γ₀}`; its sup is the empirical constant.
pub fn linf_ratio(series: &DecaySeries, window: &Window) -> Result<BoundReport, AnalysisError> {
    check_initial(series)?;
    let g0 = exponents::gamma0(series.d)?;
    let gf = to_f64(&g0);
    let d = series.d as f64;
    let denom = series.l1_0.powf(gf);
    BoundReport::build(Estimate::Linf, series, g0, window, |r| {
        if r.linf == 0.0 {
            0.0
        } else {
            r.linf * r.t.powf(d * gf) / denom
        }
    })
}

/// `‖u(t)‖_p t^δ / ‖u₀‖₁^γ` with `(p, γ, δ)` from [`exponents::lp_exponents`].
pub fn lp_ratio(series: &DecaySeries, window: &Window) -> Result<BoundReport, AnalysisError> {
    check_initial(series)?;
    let e = exponents::lp_exponents(series.d)?;
    let (gf, df) = (to_f64(&e.gamma), to_f64(&e.delta));
    let denom = series.l1_0.powf(gf);
    BoundReport::build(Estimate::Lp, series, e.gamma, window, |r| {
        if r.lp == 0.0 {
            0.0
        } else {
            r.lp * r.t.powf(df) / denom
        }
    })
}

/// `‖u(t)‖_∞ t^{dγ} / (‖u₀‖_∞^θ ‖u₀‖₁^γ)` with `θ = 1 − γ(1 + d(d+1)/2)`.
pub fn weighted_linf_ratio(series: &DecaySeries, gamma: &Rational, window: &Window) -> Result<BoundReport, AnalysisError> {
    check_initial(series)?;
    let th = to_f64(&exponents::theta(series.d, gamma)?);
    let gf = to_f64(gamma);
    let d = series.d as f64;
    let denom = series.linf_0.powf(th) * series.l1_0.powf(gf);
    BoundReport::build(Estimate::WeightedLinf, series, gamma.clone(), window, |r| {
        if r.linf == 0.0 {
            0.0
        } else {
            r.linf * r.t.powf(d * gf) / denom
        }
    })
}

/// Row-wise check of `‖u‖_p ≤ ‖u‖₁^{1/p} ‖u‖_∞^{1−1/p}` with relative slack.
/// Returns the worst `lhs/rhs − 1`, or an error naming the first violating row.
pub fn interpolation_rows(series: &DecaySeries, slack: f64) -> Result<f64, AnalysisError> {
    let p = to_f64(&exponents::lp_exponents(series.d)?.p);
    let mut worst = f64::NEG_INFINITY;
    for r in &series.rows {
        let rhs = r.l1.powf(1.0 / p) * r.linf.powf(1.0 - 1.0 / p);
        if rhs == 0.0 {
            if r.lp != 0.0 {
                return Err(AnalysisError::InconsistentSeries(format!("lp > 0 with zero bound at t = {}", r.t)));
            }
            continue;
        }
        let excess = r.lp / rhs - 1.0;
        if excess > slack {
            return Err(AnalysisError::InconsistentSeries(format!(
                "interpolation inequality fails at t = {} (excess {excess:e})",
                r.t
            )));
        }
        worst = worst.max(excess);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupMode {
    /// Both legs replay the step sequence of the full run.
    ReplaySchedule,
    /// Each leg picks its own steps.
    Independent,
}

/// Max-abs cell difference between a run to `t` and two chained runs to `t/2`.
pub fn semigroup_residual(
    u0: &InitialData,
    grid: &Grid,
    t: f64,
    opts: &SolverOptions,
    mode: SemigroupMode,
) -> Result<f64, AnalysisError> {
    let half = 0.5 * t;
    match mode {
        SemigroupMode::ReplaySchedule => {
            let full = solver::solve_to(u0, grid, t, &[half], opts)?;
            let split = full
                .samples
                .iter()
                .find(|s| s.time == half)
                .map(|s| s.step)
                .ok_or_else(|| AnalysisError::InconsistentSeries("full run never landed on t/2".into()))?;
            let start = Field::from_initial_data(u0, grid)?;
            let first = solver::replay(&start, &full.dts[..split], opts.flux)?;
            let second = solver::replay(&first, &full.dts[split..], opts.flux)?;
            Ok(full.final_field.max_abs_diff(&second))
        }
        SemigroupMode::Independent => {
            let full = solver::solve_to(u0, grid, t, &[], opts)?;
            let first = solver::solve_to(u0, grid, half, &[], opts)?;
            let second = solver::solve_from(first.final_field.with_time(0.0), half, &[], opts)?;
            if second.final_field.grid() != full.final_field.grid() {
                return Err(AnalysisError::GridMismatch("legs ran on different grids".into()));
            }
            Ok(full.final_field.max_abs_diff(&second.final_field))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingOutcome {
    /// Max relative difference of the L∞ bound ratio over matched rows.
    pub max_relative_difference: f64,
    /// Measured `‖v₀‖₁ / ‖u₀‖₁` on the discretized data.
    pub measured_l1_ratio: f64,
    pub predicted_l1_ratio: f64,
}

/// Runs `u₀` on `grid` to `t` and the scaled data on `scaled_grid` to `t/s`,
/// comparing the L∞ bound ratios at matched times `T` and `T/s`.
pub fn scaling_residual(
    u0: &InitialData,
    params: &ScalingParams,
    grid: &Grid,
    scaled_grid: &Grid,
    t: f64,
    sample_times: &[f64],
    opts: &SolverOptions,
) -> Result<ScalingOutcome, AnalysisError> {
    let expected = grid.scaled(params)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    if expected.cells() != scaled_grid.cells()
        || !expected
            .bounds()
            .iter()
            .zip(scaled_grid.bounds())
            .all(|(a, b)| close(a.lo, b.lo) && close(a.hi, b.hi))
    {
        return Err(AnalysisError::GridMismatch(
            "scaled grid must have equal cells and boxes mapped by x_k / a_k".into(),
        ));
    }
    let v0 = u0.apply_scaling(params);
    let s = params.s();
    let base = solver::solve_to(u0, grid, t, sample_times, opts)?;
    let scaled_samples: Vec<f64> = sample_times.iter().map(|x| x / s).collect();
    let scaled = solver::solve_to(&v0, scaled_grid, t / s, &scaled_samples, opts)?;
    let bs = DecaySeries::from_trajectory(&base);
    let ss = DecaySeries::from_trajectory(&scaled);
    if bs.rows.len() != ss.rows.len() {
        return Err(AnalysisError::InconsistentSeries("runs recorded different sample counts".into()));
    }
    let g0 = to_f64(&exponents::gamma0(bs.d)?);
    let d = bs.d as f64;
    let ratio = |series: &DecaySeries, r: &SeriesRow| {
        if r.linf == 0.0 {
            0.0
        } else {
            r.linf * r.t.powf(d * g0) / series.l1_0.powf(g0)
        }
    };
    let mut worst: f64 = 0.0;
    for (rb, rs) in bs.rows.iter().zip(&ss.rows) {
        if rb.t == 0.0 {
            continue;
        }
        let (a, b) = (ratio(&bs, rb), ratio(&ss, rs));
        let scale = a.abs().max(b.abs());
        if scale > 0.0 {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    let measured = if bs.l1_0 > 0.0 { ss.l1_0 / bs.l1_0 } else { f64::NAN };
    Ok(ScalingOutcome {
        max_relative_difference: worst,
        measured_l1_ratio: measured,
        predicted_l1_ratio: l1_scale_factor(params, u0.dim()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rat;
    use crate::solver::Grid;

    fn series(d: u32, rows: Vec<(f64, f64)>) -> DecaySeries {
        let rows: Vec<SeriesRow> = rows
            .into_iter()
            .map(|(t, v)| SeriesRow { t, l1: 1.0, l2: v, lp: v, linf: v })
            .collect();
        DecaySeries { d, l1_0: 1.0, linf_0: rows[0].linf, rows }
    }

    #[test]
    fn lp_norm_examples() {
        let g = Grid::uniform_1d(1, 0.0, 0.25).unwrap();
        let f = Field::new(g, vec![2.0], 0.0).unwrap();
        assert_eq!(lp_norm(&f, 1.0).unwrap(), 0.5);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 2.0);
        let g = Grid::uniform_1d(2, 0.0, 2.0).unwrap();
        let f = Field::new(g, vec![3.0, -4.0], 0.0).unwrap();
        assert_eq!(lp_norm(&f, 2.0).unwrap(), 5.0);
        assert!(lp_norm(&f, 0.5).is_err());
        assert!(lp_norm(&f, f64::NAN).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn fit_exact_power_law() {
        let rows = (0..=20).map(|i| {
            let t = 10f64.powf(1.0 + i as f64 / 10.0);
            (t, 3.0 * t.powf(-0.5))
        });
        let s = series(1, rows.collect());
        let fit = fit_slope(&s, Column::Linf, &Window::new(10.0, 1000.0).unwrap()).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fit_constant_rows() {
        let s = series(1, (1..=5).map(|i| (i as f64, 2.0)).collect());
        let fit = fit_slope(&s, Column::Linf, &Window::new(1.0, 5.0).unwrap()).unwrap();
        assert!(fit.slope.abs() < 1e-15);
    }

    #[test]
    fn fit_errors() {
        let s = series(1, vec![(1.0, 1.0), (2.0, 0.5)]);
        assert!(matches!(
            fit_slope(&s, Column::Linf, &Window::new(1.0, 2.0).unwrap()),
            Err(AnalysisError::TooFewRows(2))
        ));
        let s = series(1, vec![(1.0, 1.0), (2.0, 0.0), (3.0, 0.1)]);
        assert!(matches!(
            fit_slope(&s, Column::Linf, &Window::new(1.0, 3.0).unwrap()),
            Err(AnalysisError::ZeroNorm(_))
        ));
    }

    #[test]
    fn linf_ratio_on_constructed_equality() {
        // d = 2: linf = l1_0^{1/4} t^{-1/2} with l1_0 = 16
        let rows: Vec<SeriesRow> = [1.0, 4.0, 9.0]
            .iter()
            .map(|&t: &f64| SeriesRow { t, l1: 16.0, l2: 0.0, lp: 0.0, linf: 2.0 / t.sqrt() })
            .collect();
        let s = DecaySeries { d: 2, l1_0: 16.0, linf_0: 2.0, rows };
        let r = linf_ratio(&s, &Window::new(1.0, 9.0).unwrap()).unwrap();
        assert!((r.sup_ratio - 1.0).abs() < 1e-15);
        assert_eq!(r.gamma, rat(1, 4));
    }

    #[test]
    fn lp_ratio_on_constructed_equality() {
        // d = 1: lp = l1_0^{5/8} t^{-3/8}
        let rows: Vec<SeriesRow> = [1.0, 2.0, 5.0]
            .iter()
            .map(|&t: &f64| SeriesRow { t, l1: 3.0, l2: 0.0, lp: 3f64.powf(0.625) * t.powf(-0.375), linf: 1.0 })
            .collect();
        let s = DecaySeries { d: 1, l1_0: 3.0, linf_0: 1.0, rows };
        let r = lp_ratio(&s, &Window::new(1.0, 5.0).unwrap()).unwrap();
        assert!((r.sup_ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_solution_ratios() {
        let rows = vec![SeriesRow { t: 0.0, l1: 0.0, l2: 0.0, lp: 0.0, linf: 0.0 }, SeriesRow { t: 2.0, l1: 0.0, l2: 0.0, lp: 0.0, linf: 0.0 }];
        let s = DecaySeries { d: 1, l1_0: 0.0, linf_0: 0.0, rows };
        let w = Window::new(1.0, 2.0).unwrap();
        assert_eq!(linf_ratio(&s, &w).unwrap().sup_ratio, 0.0);
        assert_eq!(lp_ratio(&s, &w).unwrap().sup_ratio, 0.0);
        assert_eq!(weighted_linf_ratio(&s, &rat(1, 4), &w).unwrap().sup_ratio, 0.0);
    }

    #[test]
    fn inconsistent_series_rejected() {
        let rows = vec![SeriesRow { t: 1.0, l1: 0.0, l2: 0.0, lp: 0.0, linf: 1.0 }];
        let s = DecaySeries { d: 1, l1_0: 0.0, linf_0: 1.0, rows };
        assert!(linf_ratio(&s, &Window::new(1.0, 2.0).unwrap()).is_err());
    }

    #[test]
    fn weighted_linf_rejects_gamma_out_of_range() {
        let s = series(1, vec![(1.0, 1.0), (2.0, 0.5)]);
        let w = Window::new(1.0, 2.0).unwrap();
        assert!(weighted_linf_ratio(&s, &rat(1, 2), &w).is_err());
        let r = weighted_linf_ratio(&s, &rat(1, 4), &w).unwrap();
        assert_eq!(r.gamma, rat(1, 4));
        assert!(r.to_text().contains("theta = 1/2"));
    }

    #[test]
    fn csv_round_trip() {
        let s = series(1, vec![(0.0, 1.0), (0.5, 0.7), (1.0, 1.0 / 3.0)]);
        let text = s.to_csv();
        assert!(text.starts_with("t,l1,l2,lp,linf\n"));
        assert_eq!(DecaySeries::from_csv(1, &text).unwrap(), s);
        assert!(DecaySeries::from_csv(1, "t,x\n").is_err());
    }

    #[test]
    fn validate_detects_bad_rows() {
        let mut s = series(1, vec![(0.0, 1.0), (1.0, 0.5)]);
        assert!(s.validate().is_ok());
        s.rows[1].t = 0.0;
        assert!(s.validate().is_err());
    }
}
