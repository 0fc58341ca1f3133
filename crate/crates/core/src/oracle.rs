//! Exact entropy solution of 1-D Burgers `u_t + (u²/2)_x = 0` for compactly
//! supported piecewise-linear data, via the Lax–Oleinik formula
//!
//! ```text
//! u(t, x) = (x − y*)/t,   y* = argmin_y  U₀(y) + (x − y)²/(2t),
//! ```
//!
//! with `U₀` the primitive of `u₀`. `U₀` is piecewise quadratic, so every
//! piece of the objective is minimized in closed form and the global minimum
//! is found by enumeration. No discretization is involved.

use crate::equation::{EquationError, InitialData};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

/// Piecewise-linear compactly supported data. Breakpoint `j` is
/// `(x_j, u(x_j−), u(x_j+))`; between breakpoints `u` interpolates linearly
/// from the right value at `x_j` to the left value at `x_{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    xs: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    slopes: Vec<f64>,
    /// `U₀(x_j)`.
    primitive: Vec<f64>,
}

/// Which piece of the objective attains the minimum. Ordered by position
/// along the `y` axis, so the minimizing piece is non-decreasing in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    GapLeft,
    Breakpoint(usize),
    Segment(usize),
    GapRight,
}

impl Piece {
    fn ordinal(self, n: usize) -> usize {
        match self {
            Piece::GapLeft => 0,
            Piece::Breakpoint(j) => 2 * j + 1,
            Piece::Segment(j) => 2 * j + 2,
            Piece::GapRight => 2 * n + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimizer {
    pub y: f64,
    pub value: f64,
    pub piece: Piece,
}

/// `u(t,·)` restricted to an interval where it is affine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePiece {
    pub x0: f64,
    pub x1: f64,
    pub u0: f64,
    pub u1: f64,
}

impl Profile1D {
    pub fn new(breakpoints: Vec<(f64, f64, f64)>) -> Result<Self, OracleError> {
        if breakpoints.len() < 2 {
            return Err(OracleError::InvalidProfile("need at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|(x, l, r)| !(x.is_finite() && l.is_finite() && r.is_finite())) {
            return Err(OracleError::InvalidProfile("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(OracleError::InvalidProfile("breakpoints must be strictly increasing".into()));
        }
        let n = breakpoints.len();
        if breakpoints[0].1 != 0.0 || breakpoints[n - 1].2 != 0.0 {
            return Err(OracleError::InvalidProfile("data must vanish outside the breakpoints".into()));
        }
        let xs: Vec<f64> = breakpoints.iter().map(|b| b.0).collect();
        let left: Vec<f64> = breakpoints.iter().map(|b| b.1).collect();
        let right: Vec<f64> = breakpoints.iter().map(|b| b.2).collect();
        let mut slopes = Vec::with_capacity(n - 1);
        let mut primitive = vec![0.0; n];
        for j in 0..n - 1 {
            let h = xs[j + 1] - xs[j];
            let m = (left[j + 1] - right[j]) / h;
            slopes.push(m);
            primitive[j + 1] = primitive[j] + 0.5 * (right[j] + left[j + 1]) * h;
        }
        Ok(Self { xs, left, right, slopes, primitive })
    }

    pub fn from_initial_data(u0: &InitialData) -> Result<Self, OracleError> {
        Self::new(u0.piecewise_linear_1d()?)
    }

    /// Triangle of the given height on `[lo, hi]`, peaking at the midpoint.
    pub fn triangle(lo: f64, hi: f64, height: f64) -> Result<Self, OracleError> {
        let c = 0.5 * (lo + hi);
        Self::new(vec![(lo, 0.0, 0.0), (c, height, height), (hi, 0.0, 0.0)])
    }

    /// `u_left` on `[lo, mid)`, `u_right` on `[mid, hi]`, zero elsewhere.
    pub fn riemann(lo: f64, mid: f64, hi: f64, u_left: f64, u_right: f64) -> Result<Self, OracleError> {
        Self::new(vec![(lo, 0.0, u_left), (mid, u_left, u_right), (hi, u_right, 0.0)])
    }

    pub fn zero() -> Self {
        Self::new(vec![(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).expect("valid")
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn mass(&self) -> f64 {
        self.primitive[self.primitive.len() - 1]
    }

    /// `(min u₀, max u₀)`, including the zero state outside the support.
    pub fn range(&self) -> (f64, f64) {
        self.left
            .iter()
            .chain(&self.right)
            .fold((0.0_f64, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn eval(&self, y: f64) -> f64 {
        let n = self.xs.len();
        if y < self.xs[0] || y > self.xs[n - 1] {
            return 0.0;
        }
        let j = self.xs.partition_point(|&x| x <= y).saturating_sub(1).min(n - 2);
        self.right[j] + self.slopes[j] * (y - self.xs[j])
    }

    /// `U₀(y) = ∫_{-∞}^{y} u₀`.
    pub fn primitive(&self, y: f64) -> f64 {
        let n = self.xs.len();
        if y <= self.xs[0] {
            return 0.0;
        }
        if y >= self.xs[n - 1] {
            return self.primitive[n - 1];
        }
        let j = self.xs.partition_point(|&x| x <= y).saturating_sub(1).min(n - 2);
        let s = y - self.xs[j];
        self.primitive[j] + self.right[j] * s + 0.5 * self.slopes[j] * s * s
    }

    /// Global minimizer of `G(y) = U₀(y) + (x − y)²/(2t)`; ties go to the smaller `y`.
    pub fn minimize(&self, t: f64, x: f64) -> Minimizer {
        let n = self.xs.len();
        let g = |y: f64, base: f64| base + (x - y) * (x - y) / (2.0 * t);
        let mut best = Minimizer { y: f64::NAN, value: f64::INFINITY, piece: Piece::GapLeft };
        let mut offer = |y: f64, value: f64, piece: Piece| {
            if value < best.value {
                best = Minimizer { y, value, piece };
            }
        };
        if x < self.xs[0] {
            offer(x, g(x, 0.0), Piece::GapLeft);
        }
        for j in 0..n {
            offer(self.xs[j], g(self.xs[j], self.primitive[j]), Piece::Breakpoint(j));
            if j + 1 < n {
                let curvature = self.slopes[j] + 1.0 / t;
                let h = self.xs[j + 1] - self.xs[j];
                if curvature > 0.0 {
                    let s = ((x - self.xs[j]) / t - self.right[j]) / curvature;
                    if s > 0.0 && s < h {
                        let y = self.xs[j] + s;
                        let base = self.primitive[j] + self.right[j] * s + 0.5 * self.slopes[j] * s * s;
                        offer(y, g(y, base), Piece::Segment(j));
                    }
                }
            }
        }
        if x > self.xs[n - 1] {
            offer(x, self.primitive[n - 1], Piece::GapRight);
        }
        best
    }

    /// Hopf–Lax value `Φ(t, x) = min_y G(y)`, the primitive of `u(t,·)`.
    pub fn value_function(&self, t: f64, x: f64) -> Result<f64, OracleError> {
        check_time(t)?;
        Ok(self.minimize(t, x).value)
    }

    /// Exact average of `u(t,·)` over `[a, b]`.
    pub fn cell_average(&self, t: f64, a: f64, b: f64) -> Result<f64, OracleError> {
        check_time(t)?;
        Ok((self.minimize(t, b).value - self.minimize(t, a).value) / (b - a))
    }

    /// `u` at `x` when the minimizer lies on `piece`.
    fn piece_value(&self, piece: Piece, t: f64, x: f64) -> f64 {
        match piece {
            Piece::GapLeft | Piece::GapRight => 0.0,
            Piece::Breakpoint(j) => (x - self.xs[j]) / t,
            Piece::Segment(j) => {
                let curvature = self.slopes[j] + 1.0 / t;
                let s = ((x - self.xs[j]) / t - self.right[j]) / curvature;
                (x - self.xs[j] - s) / t
            }
        }
    }

    /// Affine pieces of `u(t,·)` covering the domain of dependence of the support.
    pub fn solution_pieces(&self, t: f64) -> Result<Vec<AffinePiece>, OracleError> {
        check_time(t)?;
        let n = self.xs.len();
        let (umin, umax) = self.range();
        let (lo, hi) = self.support();
        let pad = 1.0 + (hi - lo);
        let xa = lo + t * umin - pad;
        let xb = hi + t * umax + pad;
        let ord = |x: f64| {
            let p = self.minimize(t, x).piece;
            (p.ordinal(n), p)
        };
        let scan = 4096;
        let mut transitions: Vec<(f64, Piece, Piece)> = Vec::new();
        let mut prev_x = xa;
        let mut prev = ord(xa);
        for i in 1..=scan {
            let x = xa + (xb - xa) * i as f64 / scan as f64;
            let cur = ord(x);
            if cur.0 != prev.0 {
                self.bisect(prev_x, prev, x, cur, &ord, &mut transitions);
            }
            prev_x = x;
            prev = cur;
        }
        let mut pieces = Vec::with_capacity(transitions.len() + 1);
        let mut start = xa;
        let mut piece = ord(xa).1;
        for (xt, before, after) in transitions {
            debug_assert_eq!(before, piece);
            pieces.push(AffinePiece {
                x0: start,
                x1: xt,
                u0: self.piece_value(piece, t, start),
                u1: self.piece_value(piece, t, xt),
            });
            start = xt;
            piece = after;
        }
        pieces.push(AffinePiece {
            x0: start,
            x1: xb,
            u0: self.piece_value(piece, t, start),
            u1: self.piece_value(piece, t, xb),
        });
        Ok(pieces)
    }

    fn bisect(
        &self,
        xa: f64,
        pa: (usize, Piece),
        xb: f64,
        pb: (usize, Piece),
        ord: &dyn Fn(f64) -> (usize, Piece),
        out: &mut Vec<(f64, Piece, Piece)>,
    ) {
        let tol = 1e-13 * (1.0 + xa.abs().max(xb.abs()));
        if xb - xa <= tol {
            out.push((0.5 * (xa + xb), pa.1, pb.1));
            return;
        }
        let xm = 0.5 * (xa + xb);
        let pm = ord(xm);
        if pm.0 != pa.0 {
            self.bisect(xa, pa, xm, pm, ord, out);
        }
        if pm.0 != pb.0 {
            self.bisect(xm, pm, xb, pb, ord, out);
        }
    }
}

fn check_time(t: f64) -> Result<(), OracleError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(OracleError::NonPositiveTime(t));
    }
    Ok(())
}

/// Entropy solution `u(t, x)`; at a shock returns the left state.
pub fn lax_oleinik_eval(profile: &Profile1D, t: f64, x: f64) -> Result<f64, OracleError> {
    check_time(t)?;
    let m = profile.minimize(t, x);
    Ok((x - m.y) / t)
}

/// `‖u(t,·)‖_∞` from the piecewise-affine structure of the solution.
pub fn linf_exact(profile: &Profile1D, t: f64) -> Result<f64, OracleError> {
    Ok(profile
        .solution_pieces(t)?
        .iter()
        .map(|p| p.u0.abs().max(p.u1.abs()))
        .fold(0.0, f64::max))
}

/// `‖u(t,·)‖_{L¹}` from the piecewise-affine structure of the solution.
pub fn l1_exact(profile: &Profile1D, t: f64) -> Result<f64, OracleError> {
    let mut total = 0.0;
    for p in profile.solution_pieces(t)? {
        let w = p.x1 - p.x0;
        if p.u0 * p.u1 >= 0.0 {
            total += 0.5 * w * (p.u0.abs() + p.u1.abs());
        } else {
            let z = w * p.u0.abs() / (p.u0.abs() + p.u1.abs());
            total += 0.5 * (z * p.u0.abs() + (w - z) * p.u1.abs());
        }
    }
    Ok(total)
}

/// N-wave peak height `√(2M/t)` for single-signed data of mass `M`.
pub fn nwave_peak(mass: f64, t: f64) -> f64 {
    (2.0 * mass / t).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shock_example() {
        let p = Profile1D::riemann(-10.0, 0.0, 10.0, 1.0, 0.0).unwrap();
        assert!((lax_oleinik_eval(&p, 1.0, 0.4).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(lax_oleinik_eval(&p, 1.0, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn rarefaction_example() {
        let p = Profile1D::riemann(-10.0, 0.0, 10.0, 0.0, 1.0).unwrap();
        assert!((lax_oleinik_eval(&p, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
        assert!((lax_oleinik_eval(&p, 2.0, 0.5).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn far_left_is_zero() {
        let p = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
        assert_eq!(lax_oleinik_eval(&p, 5.0, -10.0).unwrap(), 0.0);
        assert!(lax_oleinik_eval(&p, 0.0, 1.0).is_err());
    }

    #[test]
    fn triangle_peak_matches_hand_computation() {
        // for t ≥ 1 the front sits at √(2(1+t)) and the peak is √(2/(1+t))
        let p = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
        for &t in &[3.0_f64, 10.0, 100.0] {
            let exact = (2.0 / (1.0 + t)).sqrt();
            assert!((linf_exact(&p, t).unwrap() - exact).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn nwave_asymptotics() {
        let p = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
        for &t in &[1e2, 1e3, 1e4] {
            let r = linf_exact(&p, t).unwrap() * t.sqrt();
            assert!((r - 2f64.sqrt()).abs() < 0.01 * 2f64.sqrt(), "t={t} r={r}");
        }
        assert!((linf_exact(&p, 1e-6).unwrap() - 1.0).abs() < 1e-5);
        assert_eq!(linf_exact(&Profile1D::zero(), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn nwave_peak_examples() {
        assert_eq!(nwave_peak(1.0, 2.0), 1.0);
        assert!((nwave_peak(1.0, 100.0) - 0.02f64.sqrt()).abs() < 1e-15);
        assert_eq!(nwave_peak(2.0, 1.0), 2.0);
    }

    #[test]
    fn profile_validation() {
        assert!(Profile1D::new(vec![(0.0, 0.0, 1.0)]).is_err());
        assert!(Profile1D::new(vec![(0.0, 1.0, 1.0), (1.0, 0.0, 0.0)]).is_err());
        assert!(Profile1D::new(vec![(1.0, 0.0, 0.0), (0.0, 0.0, 0.0)]).is_err());
        let p = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
        assert_eq!(p.mass(), 1.0);
        assert_eq!(p.eval(0.5), 0.5);
        assert_eq!(p.primitive(1.0), 0.5);
    }

    #[test]
    fn l1_is_conserved_for_single_signed_data() {
        let p = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
        for &t in &[0.5, 2.0, 50.0] {
            assert!((l1_exact(&p, t).unwrap() - 1.0).abs() < 1e-9);
        }
    }
}
