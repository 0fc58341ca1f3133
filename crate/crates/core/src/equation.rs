//! The multi-dimensional Burgers flux family and its two-parameter scaling group.
//!
//! Direction `k` (1-based) carries the flux `f_k(u) = u^{k+1}/(k+1)`, so the
//! conservative system is `u_t + Σ_k ∂_k f_k(u) = 0`, i.e. `u_t + Σ_k u^k ∂_k u = 0`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("direction index {k} outside 1..={d}")]
    InvalidDirection { k: usize, d: usize },
    #[error("invalid range: umin = {umin} > umax = {umax}")]
    InvalidRange { umin: f64, umax: f64 },
    #[error("scaling parameters must be positive and finite (lambda = {lambda}, s = {s})")]
    InvalidScaling { lambda: f64, s: f64 },
    #[error("initial data: {0}")]
    InvalidInitialData(String),
}

/// `u^n` by repeated multiplication.
#[inline]
pub fn powu(u: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= u;
    }
    acc
}

/// `f_k(u) = u^{k+1}/(k+1)`. `k ≥ 1` is the caller's responsibility.
#[inline]
pub fn flux_value(k: usize, u: f64) -> f64 {
    powu(u, k + 1) / (k + 1) as f64
}

/// `f_k'(u) = u^k`.
#[inline]
pub fn flux_derivative(k: usize, u: f64) -> f64 {
    powu(u, k)
}

/// `max_{u ∈ [umin, umax]} |u^k| = max(|umin|, |umax|)^k`.
pub fn max_wave_speed(k: usize, umin: f64, umax: f64) -> Result<f64, EquationError> {
    if umin > umax || umin.is_nan() || umax.is_nan() {
        return Err(EquationError::InvalidRange { umin, umax });
    }
    Ok(powu(umin.abs().max(umax.abs()), k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FluxModel {
    d: usize,
}

impl FluxModel {
    pub fn new(d: usize) -> Result<Self, EquationError> {
        if d == 0 {
            return Err(EquationError::InvalidDimension);
        }
        Ok(Self { d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn check_direction(&self, k: usize) -> Result<(), EquationError> {
        if k == 0 || k > self.d {
            return Err(EquationError::InvalidDirection { k, d: self.d });
        }
        Ok(())
    }

    pub fn flux_value(&self, k: usize, u: f64) -> Result<f64, EquationError> {
        self.check_direction(k)?;
        Ok(flux_value(k, u))
    }

    pub fn flux_derivative(&self, k: usize, u: f64) -> Result<f64, EquationError> {
        self.check_direction(k)?;
        Ok(flux_derivative(k, u))
    }

    pub fn max_wave_speed(&self, k: usize, umin: f64, umax: f64) -> Result<f64, EquationError> {
        self.check_direction(k)?;
        max_wave_speed(k, umin, umax)
    }
}

/// Element `(λ, s)` of the scaling group
/// `v(t, x) = λ·u(s t, s λ^{-1} x_1, …, s λ^{-d} x_d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    lambda: f64,
    s: f64,
}

impl ScalingParams {
    pub fn new(lambda: f64, s: f64) -> Result<Self, EquationError> {
        if !(lambda > 0.0 && lambda.is_finite() && s > 0.0 && s.is_finite()) {
            return Err(EquationError::InvalidScaling { lambda, s });
        }
        Ok(Self { lambda, s })
    }

    pub fn identity() -> Self {
        Self { lambda: 1.0, s: 1.0 }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Spatial factor `a_k = s·λ^{-k}` for direction `k` (1-based).
    pub fn spatial_factor(&self, k: usize) -> f64 {
        self.s / powu(self.lambda, k)
    }

    pub fn compose(&self, other: &ScalingParams) -> ScalingParams {
        ScalingParams {
            lambda: self.lambda * other.lambda,
            s: self.s * other.s,
        }
    }
}

/// `‖v₀‖_{L¹} / ‖u₀‖_{L¹} = λ^{1 + d(d+1)/2} s^{-d}`.
pub fn l1_scale_factor(params: &ScalingParams, d: usize) -> f64 {
    powu(params.lambda, 1 + d * (d + 1) / 2) / powu(params.s, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Indicator of the support box.
    Box,
    /// Tensor product of hat functions peaking at the box center.
    Tent,
    /// Tensor product of Gaussians centered in the box, each factor cut off
    /// where it drops below `GAUSS_CUTOFF`.
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    Positive,
    Negative,
    /// `sign(x_1 − c_1)` with `c_1` the support center in direction 1.
    Dipole,
}

pub const GAUSS_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Analytic initial data: `value_scale · amplitude · sign(x) · Π_k φ_k(coord_scale_k · x_k)`.
///
/// The scaling group only ever touches `value_scale` and `coord_scale`, so it
/// acts exactly; discretization to cell averages happens in the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    kind: ProfileKind,
    amplitude: f64,
    support: Vec<Interval>,
    sign: SignPattern,
    value_scale: f64,
    coord_scale: Vec<f64>,
}

impl InitialData {
    pub fn new(
        kind: ProfileKind,
        amplitude: f64,
        support: Vec<Interval>,
        sign: SignPattern,
    ) -> Result<Self, EquationError> {
        if support.is_empty() {
            return Err(EquationError::InvalidDimension);
        }
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(EquationError::InvalidInitialData(format!(
                "amplitude must be finite and nonnegative, got {amplitude}"
            )));
        }
        for iv in &support {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi) {
                return Err(EquationError::InvalidInitialData(format!(
                    "support interval [{}, {}] is empty or not finite",
                    iv.lo, iv.hi
                )));
            }
        }
        let d = support.len();
        Ok(Self {
            kind,
            amplitude,
            support,
            sign,
            value_scale: 1.0,
            coord_scale: vec![1.0; d],
        })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            kind: ProfileKind::Box,
            amplitude: 0.0,
            support: vec![Interval::new(-1.0, 1.0); d],
            sign: SignPattern::Positive,
            value_scale: 1.0,
            coord_scale: vec![1.0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn sign(&self) -> SignPattern {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    /// Peak magnitude `sup |u₀|`.
    pub fn sup_norm(&self) -> f64 {
        self.value_scale * self.amplitude
    }

    /// Range `[min u₀, max u₀]`, always containing 0.
    pub fn range(&self) -> (f64, f64) {
        let m = self.sup_norm();
        match self.sign {
            SignPattern::Positive => (0.0, m),
            SignPattern::Negative => (-m, 0.0),
            SignPattern::Dipole => (-m, m),
        }
    }

    /// Support box in physical coordinates.
    pub fn support_box(&self) -> Vec<Interval> {
        self.support
            .iter()
            .zip(&self.coord_scale)
            .map(|(iv, a)| Interval::new(iv.lo / a, iv.hi / a))
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim());
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let mut v = self.value_scale * self.amplitude;
        for (k, (&xk, iv)) in x.iter().zip(&self.support).enumerate() {
            let y = self.coord_scale[k] * xk;
            v *= factor(self.kind, iv, y);
            if k == 0 {
                v *= self.sign_at(y);
            }
        }
        v
    }

    fn sign_at(&self, y1: f64) -> f64 {
        match self.sign {
            SignPattern::Positive => 1.0,
            SignPattern::Negative => -1.0,
            SignPattern::Dipole => {
                if y1 >= self.support[0].center() {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Exact average of the 1-D factor for direction `k` (0-based) over the
    /// physical interval `[lo, hi]`, including the sign pattern in direction 0.
    pub fn factor_average(&self, k: usize, lo: f64, hi: f64) -> f64 {
        let a = self.coord_scale[k];
        let (ylo, yhi) = (a * lo, a * hi);
        let iv = &self.support[k];
        let integral = if k == 0 {
            match self.sign {
                SignPattern::Positive => antiderivative(self.kind, iv, yhi) - antiderivative(self.kind, iv, ylo),
                SignPattern::Negative => antiderivative(self.kind, iv, ylo) - antiderivative(self.kind, iv, yhi),
                SignPattern::Dipole => {
                    let c = iv.center();
                    let q = |y: f64| {
                        let p = |z: f64| antiderivative(self.kind, iv, z);
                        -p(y.min(c)) + (p(y.max(c)) - p(c))
                    };
                    q(yhi) - q(ylo)
                }
            }
        } else {
            antiderivative(self.kind, iv, yhi) - antiderivative(self.kind, iv, ylo)
        };
        integral / (yhi - ylo)
    }

    /// Exact average over an axis-aligned cell given per-direction bounds.
    pub fn cell_average(&self, cell: &[Interval]) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let mut v = self.value_scale * self.amplitude;
        for (k, c) in cell.iter().enumerate() {
            v *= self.factor_average(k, c.lo, c.hi);
            if v == 0.0 {
                return 0.0;
            }
        }
        v
    }

    /// Exact `‖u₀‖_{L¹}`.
    pub fn l1_norm(&self) -> f64 {
        let mut v = self.value_scale * self.amplitude;
        for (iv, a) in self.support.iter().zip(&self.coord_scale) {
            let full = antiderivative(self.kind, iv, iv.hi) - antiderivative(self.kind, iv, iv.lo);
            v *= full / a;
        }
        v
    }

    /// `∫ u₀`.
    pub fn mass(&self) -> f64 {
        match self.sign {
            SignPattern::Positive => self.l1_norm(),
            SignPattern::Negative => -self.l1_norm(),
            SignPattern::Dipole => {
                let iv = &self.support[0];
                let p = |z: f64| antiderivative(self.kind, iv, z);
                let signed = (p(iv.hi) - p(iv.center())) - (p(iv.center()) - p(iv.lo));
                let full = p(iv.hi) - p(iv.lo);
                self.l1_norm() * signed / full
            }
        }
    }

    /// Applies the scaling group element: `v₀(x) = λ·u₀(s λ^{-1} x_1, …, s λ^{-d} x_d)`.
    pub fn apply_scaling(&self, params: &ScalingParams) -> InitialData {
        let mut out = self.clone();
        out.value_scale *= params.lambda();
        for (k, a) in out.coord_scale.iter_mut().enumerate() {
            *a *= params.spatial_factor(k + 1);
        }
        out
    }

    /// Piecewise-linear 1-D breakpoints `(x, left value, right value)` for
    /// box and tent data, used by the exact 1-D oracle.
    pub fn piecewise_linear_1d(&self) -> Result<Vec<(f64, f64, f64)>, EquationError> {
        if self.dim() != 1 {
            return Err(EquationError::InvalidInitialData(
                "piecewise-linear description needs d = 1".into(),
            ));
        }
        if self.kind == ProfileKind::Gauss {
            return Err(EquationError::InvalidInitialData(
                "gaussian data is not piecewise linear".into(),
            ));
        }
        let iv = self.support_box()[0];
        let c = iv.center();
        let m = self.sup_norm();
        let (s_left, s_right) = match self.sign {
            SignPattern::Positive => (1.0, 1.0),
            SignPattern::Negative => (-1.0, -1.0),
            SignPattern::Dipole => (-1.0, 1.0),
        };
        Ok(match self.kind {
            ProfileKind::Box => vec![
                (iv.lo, 0.0, s_left * m),
                (c, s_left * m, s_right * m),
                (iv.hi, s_right * m, 0.0),
            ],
            ProfileKind::Tent => vec![
                (iv.lo, 0.0, 0.0),
                (c, s_left * m, s_right * m),
                (iv.hi, 0.0, 0.0),
            ],
            ProfileKind::Gauss => unreachable!(),
        })
    }
}

fn gauss_sigma(iv: &Interval) -> f64 {
    let r = (2.0 * (1.0 / GAUSS_CUTOFF).ln()).sqrt();
    0.5 * iv.width() / r
}

/// 1-D factor `φ(y)` on support `iv`, max value 1.
pub fn factor(kind: ProfileKind, iv: &Interval, y: f64) -> f64 {
    if y < iv.lo || y > iv.hi {
        return 0.0;
    }
    match kind {
        ProfileKind::Box => 1.0,
        ProfileKind::Tent => {
            let h = 0.5 * iv.width();
            (1.0 - (y - iv.center()).abs() / h).max(0.0)
        }
        ProfileKind::Gauss => {
            let z = (y - iv.center()) / gauss_sigma(iv);
            (-0.5 * z * z).exp()
        }
    }
}

/// `∫_{-∞}^{y} φ`.
pub fn antiderivative(kind: ProfileKind, iv: &Interval, y: f64) -> f64 {
    let y = y.clamp(iv.lo, iv.hi);
    match kind {
        ProfileKind::Box => y - iv.lo,
        ProfileKind::Tent => {
            let h = 0.5 * iv.width();
            let c = iv.center();
            if y <= c {
                let r = y - iv.lo;
                0.5 * r * r / h
            } else {
                let r = iv.hi - y;
                h - 0.5 * r * r / h
            }
        }
        ProfileKind::Gauss => {
            let sigma = gauss_sigma(iv);
            let scale = sigma * (std::f64::consts::PI / 2.0).sqrt();
            let zc = |v: f64| libm::erf((v - iv.center()) / (sigma * std::f64::consts::SQRT_2));
            scale * (zc(y) - zc(iv.lo))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_examples() {
        assert_eq!(flux_value(1, 2.0), 2.0);
        assert_eq!(flux_value(2, -1.0), -1.0 / 3.0);
        assert_eq!(flux_value(3, 0.0), 0.0);
        assert_eq!(flux_derivative(1, 3.0), 3.0);
        assert_eq!(flux_derivative(2, -2.0), 4.0);
        assert_eq!(flux_derivative(3, -1.0), -1.0);
    }

    #[test]
    fn wave_speed_examples() {
        assert_eq!(max_wave_speed(1, -1.0, 2.0).unwrap(), 2.0);
        assert_eq!(max_wave_speed(2, -3.0, 1.0).unwrap(), 9.0);
        assert_eq!(max_wave_speed(2, 0.0, 0.0).unwrap(), 0.0);
        assert!(max_wave_speed(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn model_rejects_bad_direction() {
        let m = FluxModel::new(2).unwrap();
        assert!(m.flux_value(0, 1.0).is_err());
        assert!(m.flux_value(3, 1.0).is_err());
        assert_eq!(m.flux_value(2, 3.0).unwrap(), 9.0);
        assert!(FluxModel::new(0).is_err());
    }

    #[test]
    fn derivative_matches_central_differences() {
        for k in 1..=4 {
            for i in -100..=100 {
                let u = i as f64 / 10.0;
                let h = 1e-5 * (1.0 + u.abs());
                let fd = (flux_value(k, u + h) - flux_value(k, u - h)) / (2.0 * h);
                let exact = flux_derivative(k, u);
                let scale = exact.abs().max(1.0);
                assert!((fd - exact).abs() <= 1e-6 * scale, "k={k} u={u} fd={fd} exact={exact}");
            }
        }
    }

    #[test]
    fn scaling_params_validation() {
        assert!(ScalingParams::new(0.0, 1.0).is_err());
        assert!(ScalingParams::new(1.0, -1.0).is_err());
        assert!(ScalingParams::new(f64::INFINITY, 1.0).is_err());
        let p = ScalingParams::new(2.0, 3.0).unwrap();
        assert_eq!(p.spatial_factor(1), 1.5);
        assert_eq!(p.spatial_factor(2), 0.75);
    }

    #[test]
    fn identity_scaling_is_noop() {
        let u0 = InitialData::new(
            ProfileKind::Tent,
            1.0,
            vec![Interval::new(0.0, 2.0), Interval::new(-1.0, 1.0)],
            SignPattern::Dipole,
        )
        .unwrap();
        assert_eq!(u0.apply_scaling(&ScalingParams::identity()), u0);
    }

    #[test]
    fn amplitude_scaling_stretches_support() {
        let u0 = InitialData::new(ProfileKind::Box, 1.0, vec![Interval::new(0.0, 1.0)], SignPattern::Positive).unwrap();
        let v0 = u0.apply_scaling(&ScalingParams::new(2.0, 1.0).unwrap());
        assert_eq!(v0.support_box(), vec![Interval::new(0.0, 2.0)]);
        assert_eq!(v0.eval(&[1.5]), 2.0);
        assert_eq!(v0.eval(&[2.5]), 0.0);
        assert_eq!(v0.l1_norm(), 4.0);
    }

    #[test]
    fn time_scaling_shrinks_support() {
        let u0 = InitialData::new(
            ProfileKind::Tent,
            1.0,
            vec![Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)],
            SignPattern::Positive,
        )
        .unwrap();
        let v0 = u0.apply_scaling(&ScalingParams::new(1.0, 2.0).unwrap());
        assert_eq!(v0.support_box(), vec![Interval::new(0.0, 0.5); 2]);
        for &(x, y) in &[(0.1, 0.2), (0.25, 0.25), (0.4, 0.1)] {
            assert_eq!(v0.eval(&[x, y]), u0.eval(&[2.0 * x, 2.0 * y]));
        }
    }

    #[test]
    fn l1_scale_factor_examples() {
        assert_eq!(l1_scale_factor(&ScalingParams::identity(), 3), 1.0);
        assert_eq!(l1_scale_factor(&ScalingParams::new(2.0, 1.0).unwrap(), 1), 4.0);
        assert_eq!(l1_scale_factor(&ScalingParams::new(1.0, 2.0).unwrap(), 2), 0.25);
    }

    #[test]
    fn cell_average_matches_midpoint_quadrature() {
        let u0 = InitialData::new(ProfileKind::Gauss, 1.5, vec![Interval::new(-1.0, 3.0)], SignPattern::Dipole).unwrap();
        for &(lo, hi) in &[(-1.2, -0.3), (0.5, 1.5), (0.9, 1.1), (2.0, 3.5)] {
            let n = 200_000;
            let h = (hi - lo) / n as f64;
            let q: f64 = (0..n).map(|i| u0.eval(&[lo + (i as f64 + 0.5) * h])).sum::<f64>() * h / (hi - lo);
            let exact = u0.cell_average(&[Interval::new(lo, hi)]);
            assert!((q - exact).abs() < 1e-6, "[{lo},{hi}] quad={q} exact={exact}");
        }
    }

    #[test]
    fn piecewise_linear_description() {
        let u0 = InitialData::new(ProfileKind::Tent, 1.0, vec![Interval::new(0.0, 2.0)], SignPattern::Positive).unwrap();
        assert_eq!(
            u0.piecewise_linear_1d().unwrap(),
            vec![(0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (2.0, 0.0, 0.0)]
        );
        let r = InitialData::new(ProfileKind::Box, 1.0, vec![Interval::new(-1.5, 1.5)], SignPattern::Dipole).unwrap();
        assert_eq!(
            r.piecewise_linear_1d().unwrap(),
            vec![(-1.5, 0.0, -1.0), (0.0, -1.0, 1.0), (1.5, 1.0, 0.0)]
        );
    }
}
