//! First-order unsplit monotone finite-volume scheme for
//! `u_t + Σ_k ∂_k (u^{k+1}/(k+1)) = 0` on a uniform box with zero ghost cells.

use crate::analysis::{self, NormRecord};
use crate::equation::{self, flux_value, powu, EquationError, InitialData, Interval};
use crate::exponents;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Upper bound on the total number of cells of a grid.
pub const MAX_CELLS: usize = 1 << 28;
pub const DEFAULT_CFL: f64 = 0.9;
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Width, in cells, of the edge band inspected by [`boundary_check`].
pub const EDGE_BAND: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid direction index {0}")]
    InvalidDirection(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("cfl number {0} outside (0, 1)")]
    InvalidCfl(f64),
    #[error("time step {dt} exceeds the stable step {stable}")]
    CflViolation { dt: f64, stable: f64 },
    #[error("degenerate time step {0}")]
    DegenerateStep(f64),
    #[error("non-finite value {value} in cell {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("{0}")]
    Contamination(ContaminationReport),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("dimension mismatch: data has d = {data}, grid has d = {grid}")]
    DimensionMismatch { data: usize, grid: usize },
    #[error("invalid sample schedule: {0}")]
    InvalidSchedule(String),
    #[error("field dump: {0}")]
    Dump(String),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumericalFlux {
    #[default]
    EngquistOsher,
    Godunov,
}

impl NumericalFlux {
    #[inline]
    fn eval(self, k: usize, a: f64, b: f64) -> f64 {
        match self {
            NumericalFlux::EngquistOsher => eo_flux_unchecked(k, a, b),
            NumericalFlux::Godunov => godunov_flux_unchecked(k, a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NumericalFlux::EngquistOsher => "eo",
            NumericalFlux::Godunov => "godunov",
        }
    }
}

impl FromStr for NumericalFlux {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "eo" | "engquist_osher" | "engquist-osher" => Ok(NumericalFlux::EngquistOsher),
            "godunov" => Ok(NumericalFlux::Godunov),
            other => Err(format!("unknown flux {other:?} (expected eo or godunov)")),
        }
    }
}

impl fmt::Display for NumericalFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[inline]
fn eo_flux_unchecked(k: usize, a: f64, b: f64) -> f64 {
    if k.is_multiple_of(2) {
        // f' = u^k ≥ 0: pure upwind
        flux_value(k, a)
    } else {
        flux_value(k, a.max(0.0)) + flux_value(k, b.min(0.0))
    }
}

#[inline]
fn godunov_flux_unchecked(k: usize, a: f64, b: f64) -> f64 {
    if k.is_multiple_of(2) {
        // f increasing: min over [a,b] and max over [b,a] are both f(a)
        flux_value(k, a)
    } else if a <= b {
        flux_value(k, 0.0_f64.clamp(a, b))
    } else {
        flux_value(k, a).max(flux_value(k, b))
    }
}

/// Engquist–Osher flux `F(a,b) = f(0) + ∫₀^a max(f',0) + ∫₀^b min(f',0)` for `f_k`.
pub fn eo_flux(k: usize, a: f64, b: f64) -> Result<f64, SolverError> {
    if k == 0 {
        return Err(SolverError::InvalidDirection(k));
    }
    Ok(eo_flux_unchecked(k, a, b))
}

/// Godunov flux: `min_{[a,b]} f_k` if `a ≤ b`, else `max_{[b,a]} f_k`.
pub fn godunov_flux(k: usize, a: f64, b: f64) -> Result<f64, SolverError> {
    if k == 0 {
        return Err(SolverError::InvalidDirection(k));
    }
    Ok(godunov_flux_unchecked(k, a, b))
}

/// Uniform Cartesian grid. Cell storage is row-major: the last direction is
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    cells: Vec<usize>,
    bounds: Vec<Interval>,
    dx: Vec<f64>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(cells: Vec<usize>, bounds: Vec<Interval>) -> Result<Self, SolverError> {
        if cells.is_empty() || cells.len() != bounds.len() {
            return Err(SolverError::InvalidGrid(format!(
                "{} cell counts for {} intervals",
                cells.len(),
                bounds.len()
            )));
        }
        let mut total: usize = 1;
        for &n in &cells {
            if n == 0 {
                return Err(SolverError::InvalidGrid("zero cells in a direction".into()));
            }
            total = total
                .checked_mul(n)
                .filter(|&t| t <= MAX_CELLS)
                .ok_or_else(|| SolverError::InvalidGrid(format!("more than {MAX_CELLS} cells")))?;
        }
        let mut dx = Vec::with_capacity(cells.len());
        for (n, b) in cells.iter().zip(&bounds) {
            let h = (b.hi - b.lo) / *n as f64;
            if !(h.is_finite() && h > 0.0) {
                return Err(SolverError::InvalidGrid(format!("bad interval [{}, {}]", b.lo, b.hi)));
            }
            dx.push(h);
        }
        let mut strides = vec![1; cells.len()];
        for k in (0..cells.len() - 1).rev() {
            strides[k] = strides[k + 1] * cells[k + 1];
        }
        Ok(Self { cells, bounds, dx, strides })
    }

    pub fn uniform_1d(cells: usize, lo: f64, hi: f64) -> Result<Self, SolverError> {
        Self::new(vec![cells], vec![Interval::new(lo, hi)])
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx.iter().product()
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.cells)
            .map(|(s, n)| (flat / s) % n)
            .collect()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Left edge of cell `i` in direction `k` (0-based).
    pub fn edge(&self, k: usize, i: usize) -> f64 {
        if i == self.cells[k] {
            self.bounds[k].hi
        } else {
            self.bounds[k].lo + i as f64 * self.dx[k]
        }
    }

    pub fn center(&self, k: usize, i: usize) -> f64 {
        self.bounds[k].lo + (i as f64 + 0.5) * self.dx[k]
    }

    /// The grid obtained by mapping each box through `x_k ↦ x_k / a_k`.
    pub fn scaled(&self, params: &equation::ScalingParams) -> Result<Self, SolverError> {
        let bounds = self
            .bounds
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let a = params.spatial_factor(k + 1);
                Interval::new(b.lo / a, b.hi / a)
            })
            .collect();
        Self::new(self.cells.clone(), bounds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    time: f64,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self, SolverError> {
        if values.len() != grid.len() {
            return Err(SolverError::InvalidGrid(format!(
                "{} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SolverError::NonFinite { index, value });
        }
        Ok(Self { grid, values, time })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self { grid, values: vec![0.0; n], time: 0.0 }
    }

    /// Exact cell averages of analytic initial data.
    pub fn from_initial_data(u0: &InitialData, grid: &Grid) -> Result<Self, SolverError> {
        if u0.dim() != grid.dim() {
            return Err(SolverError::DimensionMismatch { data: u0.dim(), grid: grid.dim() });
        }
        if u0.is_zero() {
            return Ok(Self::zeros(grid.clone()));
        }
        // tensor-product data: per-direction factor averages, then products
        let factors: Vec<Vec<f64>> = (0..grid.dim())
            .map(|k| {
                (0..grid.cells[k])
                    .map(|i| u0.factor_average(k, grid.edge(k, i), grid.edge(k, i + 1)))
                    .collect()
            })
            .collect();
        let amp = u0.sup_norm();
        let values: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .with_min_len(1024)
            .map(|flat| {
                let mut v = amp;
                for (k, f) in factors.iter().enumerate() {
                    v *= f[(flat / grid.strides[k]) % grid.cells[k]];
                }
                v
            })
            .collect();
        Field::new(grid.clone(), values, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// `(min, max)` of the cell values together with the zero ghost state.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((0.0_f64, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Text dump: header lines `d`, `cells`, `box`, `time`, then one value per
    /// line in row-major order with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(24 * self.values.len() + 128);
        out.push_str(&format!("d {}\n", self.grid.dim()));
        let cells: Vec<String> = self.grid.cells.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("cells {}\n", cells.join(" ")));
        let bx: Vec<String> = self
            .grid
            .bounds
            .iter()
            .map(|b| format!("{:.16e} {:.16e}", b.lo, b.hi))
            .collect();
        out.push_str(&format!("box {}\n", bx.join(" ")));
        out.push_str(&format!("time {:.16e}\n", self.time));
        for v in &self.values {
            out.push_str(&format!("{v:.16e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SolverError> {
        let bad = |m: &str| SolverError::Dump(m.to_string());
        let mut lines = text.lines();
        let mut header = |key: &str| -> Result<Vec<String>, SolverError> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(bad(&format!("expected `{key}` header line")));
            }
            Ok(parts.map(str::to_string).collect())
        };
        let d: usize = header("d")?
            .first()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad dimension"))?;
        let cells: Vec<usize> = header("cells")?
            .iter()
            .map(|s| s.parse().map_err(|_| bad("bad cell count")))
            .collect::<Result<_, _>>()?;
        let bx: Vec<f64> = header("box")?
            .iter()
            .map(|s| s.parse().map_err(|_| bad("bad box bound")))
            .collect::<Result<_, _>>()?;
        let time: f64 = header("time")?
            .first()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad time"))?;
        if cells.len() != d || bx.len() != 2 * d {
            return Err(bad("header sizes do not match d"));
        }
        let bounds = bx.chunks(2).map(|c| Interval::new(c[0], c[1])).collect();
        let grid = Grid::new(cells, bounds)?;
        let values: Vec<f64> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse().map_err(|_| bad("bad value")))
            .collect::<Result<_, _>>()?;
        Field::new(grid, values, time)
    }
}

/// Largest monotone step: `cfl / Σ_k (max_wave_speed_k / dx_k)`. Returns
/// `f64::INFINITY` when every wave speed vanishes.
pub fn stable_dt(grid: &Grid, umin: f64, umax: f64, cfl: f64) -> Result<f64, SolverError> {
    if !(cfl > 0.0 && cfl < 1.0) {
        return Err(SolverError::InvalidCfl(cfl));
    }
    let mut rate = 0.0;
    for (j, h) in grid.dx.iter().enumerate() {
        rate += equation::max_wave_speed(j + 1, umin, umax)? / h;
    }
    if rate == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(cfl / rate)
}

/// Stable step for the field's current range at the given CFL number.
pub fn field_stable_dt(field: &Field, cfl: f64) -> Result<f64, SolverError> {
    let (lo, hi) = field.range();
    stable_dt(&field.grid, lo, hi, cfl)
}

/// Monotonicity limit (CFL number 1) for the current field.
fn monotone_limit(field: &Field) -> f64 {
    let (lo, hi) = field.range();
    let m = lo.abs().max(hi.abs());
    let rate: f64 = field.grid.dx.iter().enumerate().map(|(j, h)| powu(m, j + 1) / h).sum();
    if rate == 0.0 {
        f64::INFINITY
    } else {
        1.0 / rate
    }
}

/// One conservative update
/// `u_i ← u_i − Σ_k (dt/dx_k)(F_k(u_i, u_{i+e_k}) − F_k(u_{i−e_k}, u_i))`.
///
/// Cells are updated independently from the previous field, so the parallel
/// evaluation is bit-identical to a sequential sweep.
pub fn step(field: &Field, dt: f64, flux: NumericalFlux) -> Result<Field, SolverError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::DegenerateStep(dt));
    }
    let limit = monotone_limit(field);
    if dt > limit {
        return Err(SolverError::CflViolation { dt, stable: limit });
    }
    let grid = &field.grid;
    let u = &field.values;
    let ratios: Vec<f64> = grid.dx.iter().map(|h| dt / h).collect();
    let values: Vec<f64> = (0..u.len())
        .into_par_iter()
        .with_min_len(512)
        .map(|i| {
            let ui = u[i];
            let mut acc = ui;
            for (k, ratio) in ratios.iter().enumerate() {
                let s = grid.strides[k];
                let pos = (i / s) % grid.cells[k];
                let left = if pos > 0 { u[i - s] } else { 0.0 };
                let right = if pos + 1 < grid.cells[k] { u[i + s] } else { 0.0 };
                let diff = flux.eval(k + 1, ui, right) - flux.eval(k + 1, left, ui);
                acc -= ratio * diff;
            }
            acc
        })
        .collect();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(SolverError::NonFinite { index, value });
    }
    Ok(Field { grid: grid.clone(), values, time: field.time + dt })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContaminationReport {
    pub cell: Vec<usize>,
    pub value: f64,
    pub time: f64,
}

impl fmt::Display for ContaminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "boundary contamination at t = {}: cell {:?} has |u| = {:e}",
            self.time,
            self.cell,
            self.value.abs()
        )
    }
}

/// `Ok` iff every cell within [`EDGE_BAND`] cells of the box edge has `|u| ≤ tol`.
pub fn boundary_check(field: &Field, tol: f64) -> Result<(), ContaminationReport> {
    let grid = &field.grid;
    let mut worst: Option<(usize, f64)> = None;
    for (flat, &v) in field.values.iter().enumerate() {
        if v.abs() <= tol {
            continue;
        }
        let near_edge = grid.strides.iter().zip(&grid.cells).any(|(s, n)| {
            let p = (flat / s) % n;
            p < EDGE_BAND || p + EDGE_BAND >= *n
        });
        if near_edge && worst.is_none_or(|(_, w)| v.abs() > w.abs()) {
            worst = Some((flat, v));
        }
    }
    match worst {
        None => Ok(()),
        Some((flat, value)) => Err(ContaminationReport {
            cell: grid.multi_index(flat),
            value,
            time: field.time,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub cfl: f64,
    pub flux: NumericalFlux,
    /// Lebesgue exponent of the `lp` column of each norm record.
    pub lp: f64,
    pub boundary_tol: f64,
    /// Per-step max principle and per-sample contraction/conservation checks.
    pub check_invariants: bool,
}

impl SolverOptions {
    pub fn for_dim(d: usize) -> Self {
        let p = exponents::lp_exponents(d as u32).map(|e| exponents::to_f64(&e.p)).unwrap_or(2.0);
        Self {
            cfl: DEFAULT_CFL,
            flux: NumericalFlux::EngquistOsher,
            lp: p,
            boundary_tol: BOUNDARY_TOL,
            check_invariants: true,
        }
    }

    pub fn with_flux(mut self, flux: NumericalFlux) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub norms: NormRecord,
    /// Number of steps taken from the start of the run when this sample was recorded.
    pub step: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub final_field: Field,
    pub options: SolverOptions,
    /// Every time step taken, in order.
    pub dts: Vec<f64>,
}

impl Trajectory {
    pub fn initial(&self) -> &Sample {
        &self.samples[0]
    }
}

fn validate_schedule(start: f64, t_final: f64, sample_times: &[f64]) -> Result<Vec<f64>, SolverError> {
    if !(t_final.is_finite() && t_final >= start) {
        return Err(SolverError::InvalidSchedule(format!("t_final = {t_final} before start {start}")));
    }
    let mut times: Vec<f64> = Vec::with_capacity(sample_times.len() + 1);
    for &t in sample_times {
        if !t.is_finite() || t < 0.0 || t > t_final {
            return Err(SolverError::InvalidSchedule(format!("sample time {t} outside [0, {t_final}]")));
        }
        if t > start {
            times.push(t);
        }
    }
    times.push(t_final);
    times.sort_by(f64::total_cmp);
    times.dedup();
    times.retain(|&t| t > start);
    Ok(times)
}

/// Evolves analytic initial data to `t_final`, recording norms at `t = 0`,
/// at each requested sample time and at `t_final`.
pub fn solve_to(
    u0: &InitialData,
    grid: &Grid,
    t_final: f64,
    sample_times: &[f64],
    opts: &SolverOptions,
) -> Result<Trajectory, SolverError> {
    let field = Field::from_initial_data(u0, grid)?;
    solve_from(field, t_final, sample_times, opts)
}

struct InvariantBaseline {
    range: (f64, f64),
    l1: f64,
    linf: f64,
    mass: f64,
}

impl InvariantBaseline {
    fn slack(&self) -> f64 {
        8.0 * f64::EPSILON * self.range.0.abs().max(self.range.1.abs())
    }

    fn check_step(&self, f: &Field) -> Result<(), SolverError> {
        let (lo, hi) = f.range();
        let s = self.slack();
        if lo < self.range.0 - s || hi > self.range.1 + s {
            return Err(SolverError::InvariantViolation(format!(
                "max principle: range [{lo}, {hi}] escapes [{}, {}] at t = {}",
                self.range.0,
                self.range.1,
                f.time()
            )));
        }
        Ok(())
    }

    fn check_sample(&self, n: &NormRecord, time: f64, boundary_ok: bool) -> Result<(), SolverError> {
        if n.l1 > self.l1 * (1.0 + 1e-10) {
            return Err(SolverError::InvariantViolation(format!(
                "L1 grew from {} to {} at t = {time}",
                self.l1, n.l1
            )));
        }
        if n.linf > self.linf * (1.0 + 1e-10) {
            return Err(SolverError::InvariantViolation(format!(
                "Linf grew from {} to {} at t = {time}",
                self.linf, n.linf
            )));
        }
        if boundary_ok && (n.mass - self.mass).abs() > 1e-12 * self.l1 {
            return Err(SolverError::InvariantViolation(format!(
                "mass drifted from {} to {} at t = {time}",
                self.mass, n.mass
            )));
        }
        Ok(())
    }
}

/// Continues a field from its current time to `t_final`. Time steps are
/// shortened to land exactly on sample times.
pub fn solve_from(
    field: Field,
    t_final: f64,
    sample_times: &[f64],
    opts: &SolverOptions,
) -> Result<Trajectory, SolverError> {
    if !(opts.cfl > 0.0 && opts.cfl < 1.0) {
        return Err(SolverError::InvalidCfl(opts.cfl));
    }
    let start = field.time;
    let targets = validate_schedule(start, t_final, sample_times)?;
    let first = analysis::norm_record(&field, opts.lp);
    let baseline = InvariantBaseline {
        range: field.range(),
        l1: first.l1,
        linf: first.linf,
        mass: first.mass,
    };
    boundary_check(&field, opts.boundary_tol).map_err(SolverError::Contamination)?;
    let mut samples = vec![Sample { time: start, norms: first, step: 0 }];
    let mut dts = Vec::new();
    let mut current = field;
    for &target in &targets {
        while current.time < target {
            let stable = field_stable_dt(&current, opts.cfl)?;
            let remaining = target - current.time;
            let (dt, lands) = if stable >= remaining { (remaining, true) } else { (stable, false) };
            let mut next = step(&current, dt, opts.flux)?;
            if lands {
                next.time = target;
            }
            if opts.check_invariants {
                baseline.check_step(&next)?;
            }
            dts.push(dt);
            current = next;
        }
        let boundary = boundary_check(&current, opts.boundary_tol);
        let norms = analysis::norm_record(&current, opts.lp);
        if opts.check_invariants {
            baseline.check_sample(&norms, current.time, boundary.is_ok())?;
        }
        boundary.map_err(SolverError::Contamination)?;
        samples.push(Sample { time: current.time, norms, step: dts.len() });
    }
    Ok(Trajectory { samples, final_field: current, options: *opts, dts })
}

/// Applies a recorded step sequence verbatim.
pub fn replay(field: &Field, dts: &[f64], flux: NumericalFlux) -> Result<Field, SolverError> {
    let mut current = field.clone();
    for &dt in dts {
        current = step(&current, dt, flux)?;
    }
    Ok(current)
}

/// Directions of possible wave motion for direction `k` (1-based):
/// `(towards −∞, towards +∞)`. Speeds are `u^k`.
fn travel_sides(k: usize, umin: f64, umax: f64) -> (bool, bool) {
    let neg = umin < 0.0;
    let pos = umax > 0.0;
    if k.is_multiple_of(2) {
        (false, neg || pos)
    } else {
        (neg, pos)
    }
}

/// Parameters of the automatic domain sizing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoDomain {
    /// Relative margin on the predicted 1-D support growth.
    pub margin_1d: f64,
    /// Relative margin on the predicted multi-d displacement.
    pub margin_nd: f64,
    /// Cells per direction of the coarse pilot run used to measure the decay constant.
    pub pilot_cells: usize,
}

impl Default for AutoDomain {
    fn default() -> Self {
        Self { margin_1d: 0.5, margin_nd: 1.0, pilot_cells: 128 }
    }
}

/// Box `support ± pad`, extended by `extent[k]` on the sides where waves
/// travel. The pad is at least a quarter of the support and wide enough that
/// the edge band never overlaps the initial support.
fn grown_box(u0: &InitialData, cells: &[usize], extent: &[f64]) -> Vec<Interval> {
    let (umin, umax) = u0.range();
    let band = (EDGE_BAND + 2) as f64;
    u0.support_box()
        .iter()
        .enumerate()
        .map(|(j, iv)| {
            let (left, right) = travel_sides(j + 1, umin, umax);
            let grown = iv.width() + extent[j] * (left as u8 + right as u8) as f64;
            let n = cells[j] as f64;
            let mut pad = 0.25 * iv.width();
            if n > 2.0 * band {
                pad = pad.max(band * grown / (n - 2.0 * band));
            }
            Interval::new(
                iv.lo - pad - if left { extent[j] } else { 0.0 },
                iv.hi + pad + if right { extent[j] } else { 0.0 },
            )
        })
        .collect()
}

/// Displacement `∫₀^T min(L, A t^{-β})^k dt` of a front moving at speed `u^k`.
pub fn front_displacement(k: usize, linf0: f64, amplitude: f64, beta: f64, t_final: f64) -> f64 {
    let kf = k as f64;
    if linf0 == 0.0 {
        return 0.0;
    }
    let t_star = (amplitude / linf0).powf(1.0 / beta);
    if t_final <= t_star {
        return powu(linf0, k) * t_final;
    }
    let head = powu(linf0, k) * t_star;
    let e = 1.0 - beta * kf;
    let tail = if e.abs() < 1e-12 {
        powu(amplitude, k) * (t_final / t_star).ln()
    } else {
        powu(amplitude, k) * (t_final.powf(e) - t_star.powf(e)) / e
    };
    head + tail
}

/// Chooses a box for a run to `t_final` from the a-priori support growth.
///
/// For `d = 1` the front moves at most `√(2 M t)`. For `d ≥ 2` the decay
/// constant `C` of `‖u(t)‖_∞ ≤ C ‖u₀‖₁^{γ₀} t^{-dγ₀}` is measured on a coarse
/// pilot run and the front displacement is integrated from it.
pub fn auto_grid(
    u0: &InitialData,
    cells: &[usize],
    t_final: f64,
    opts: &SolverOptions,
    policy: &AutoDomain,
) -> Result<Grid, SolverError> {
    let d = u0.dim();
    if cells.len() != d {
        return Err(SolverError::DimensionMismatch { data: d, grid: cells.len() });
    }
    if u0.is_zero() {
        return Grid::new(cells.to_vec(), grown_box(u0, cells, &vec![0.0; d]));
    }
    let mass = u0.l1_norm();
    let linf0 = u0.sup_norm();
    if d == 1 {
        let growth = (1.0 + policy.margin_1d) * (2.0 * mass * t_final).sqrt();
        return Grid::new(cells.to_vec(), grown_box(u0, cells, &[growth]));
    }
    let g0 = exponents::to_f64(&exponents::gamma0(d as u32).expect("d >= 1"));
    let beta = d as f64 * g0;
    let constant = pilot_constant(u0, t_final, opts, policy)?;
    let amplitude = constant * mass.powf(g0);
    let extent: Vec<f64> = (1..=d)
        .map(|k| (1.0 + policy.margin_nd) * front_displacement(k, linf0, amplitude, beta, t_final))
        .collect();
    Grid::new(cells.to_vec(), grown_box(u0, cells, &extent))
}

/// Empirical `sup_t ‖u(t)‖_∞ t^{dγ₀} / ‖u₀‖₁^{γ₀}` from a coarse run on a box
/// sized by the max principle alone.
fn pilot_constant(
    u0: &InitialData,
    t_final: f64,
    opts: &SolverOptions,
    policy: &AutoDomain,
) -> Result<f64, SolverError> {
    let d = u0.dim();
    let linf0 = u0.sup_norm();
    let extent: Vec<f64> = (1..=d).map(|k| powu(linf0, k) * t_final).collect();
    let grid = Grid::new(vec![policy.pilot_cells; d], grown_box(u0, &vec![policy.pilot_cells; d], &extent))?;
    let samples = log_spaced(t_final * 1e-3, t_final, 8)?;
    let pilot_opts = SolverOptions { check_invariants: false, ..*opts };
    let traj = solve_to(u0, &grid, t_final, &samples, &pilot_opts)?;
    let g0 = exponents::to_f64(&exponents::gamma0(d as u32).expect("d >= 1"));
    let l1 = traj.initial().norms.l1;
    let c = traj
        .samples
        .iter()
        .filter(|s| s.time > 0.0)
        .map(|s| s.norms.linf * s.time.powf(d as f64 * g0) / l1.powf(g0))
        .fold(0.0, f64::max);
    Ok(c)
}

/// `per_decade` logarithmically spaced times per decade on `[t_start, t_end]`,
/// both ends included.
pub fn log_spaced(t_start: f64, t_end: f64, per_decade: usize) -> Result<Vec<f64>, SolverError> {
    if !(t_start > 0.0 && t_end >= t_start && per_decade > 0) {
        return Err(SolverError::InvalidSchedule(format!(
            "log spacing needs 0 < t_start <= t_end and a positive density (got {t_start}, {t_end}, {per_decade})"
        )));
    }
    let decades = (t_end / t_start).log10();
    let n = ((decades * per_decade as f64).round() as usize).max(1);
    let mut out: Vec<f64> = (0..=n)
        .map(|i| t_start * 10f64.powf(decades * i as f64 / n as f64))
        .collect();
    out[0] = t_start;
    out[n] = t_end;
    Ok(out)
}
