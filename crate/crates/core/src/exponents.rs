//! Exact-rational exponent calculus for the Burgers decay estimates.
//!
//! Everything here is carried as [`BigRational`]; conversion to `f64` only
//! happens in `analysis` and the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(i64),
    #[error("gamma = {gamma} is outside the open interval (0, {gamma0})")]
    GammaOutOfRange { gamma: String, gamma0: String },
    #[error("cannot parse rational {0:?}; expected \"num/den\"")]
    Parse(String),
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `num/den`, or just `num` for integers.
pub fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den` (or a bare integer). Decimal notation is rejected so
/// exponents stay exact end to end.
pub fn parse_rational(s: &str) -> Result<Rational, ExponentError> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(ExponentError::Parse(s.to_string()));
    }
    let r: Rational = s.parse().map_err(|_| ExponentError::Parse(s.to_string()))?;
    Ok(r)
}

pub fn to_f64(r: &Rational) -> f64 {
    // numer/denom can exceed f64 range individually for deep ledgers; scale first.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let nf = num_traits::ToPrimitive::to_f64(&(n >> shift)).unwrap_or(f64::NAN);
    let df = num_traits::ToPrimitive::to_f64(&(d >> shift)).unwrap_or(f64::NAN);
    nf / df
}

fn check_dim(d: u32) -> Result<(), ExponentError> {
    if d < 1 {
        return Err(ExponentError::InvalidDimension(d as i64));
    }
    Ok(())
}

/// `1 + d(d+1)/2`, the total homogeneity weight of the scaling group.
pub fn scaling_weight(d: u32) -> Rational {
    let d = d as u64;
    int(1) + int(d * (d + 1)) / int(2)
}

/// The optimal L¹→L∞ decay exponent `2/(d² + d + 2)`.
pub fn gamma0(d: u32) -> Result<Rational, ExponentError> {
    check_dim(d)?;
    let d = d as u64;
    Ok(int(2) / int(d * d + d + 2))
}

/// Lebesgue exponent and (γ, δ) of the L^p decay estimate with `p = (d+1)²/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpExponents {
    pub p: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

pub fn lp_exponents(d: u32) -> Result<LpExponents, ExponentError> {
    check_dim(d)?;
    let d = d as u64;
    let p = int((d + 1) * (d + 1)) / int(d);
    let gamma = int(d * d + 2 * d + 2) / int((1 + d) * (d * d + d + 2));
    let delta = int(2 * d * (d * d + d + 1)) / int((1 + d) * (1 + d) * (d * d + d + 2));
    Ok(LpExponents { p, gamma, delta })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    pub d: u32,
    pub gamma0: Rational,
    pub p: Rational,
    pub gamma_lp: Rational,
    pub delta_lp: Rational,
}

impl ExponentSet {
    pub fn new(d: u32) -> Result<Self, ExponentError> {
        let LpExponents { p, gamma, delta } = lp_exponents(d)?;
        Ok(Self {
            d,
            gamma0: gamma0(d)?,
            p,
            gamma_lp: gamma,
            delta_lp: delta,
        })
    }
}

fn check_gamma(d: u32, gamma: &Rational) -> Result<Rational, ExponentError> {
    let g0 = gamma0(d)?;
    if !gamma.is_positive() || *gamma >= g0 {
        return Err(ExponentError::GammaOutOfRange {
            gamma: render(gamma),
            gamma0: render(&g0),
        });
    }
    Ok(g0)
}

/// `θ = 1 − γ(1 + d(d+1)/2)`, defined for `γ ∈ (0, γ₀)` where it lies in (0, 1).
pub fn theta(d: u32, gamma: &Rational) -> Result<Rational, ExponentError> {
    check_gamma(d, gamma)?;
    Ok(Rational::one() - gamma * scaling_weight(d))
}

/// Exponents left over after `steps + 1` applications of the L∞-weighted
/// estimate on the dyadic intervals `(t/2^{j+1}, t/2^j)`, `j = 0..=steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompoundLedger {
    pub d: u32,
    pub gamma: Rational,
    pub theta: Rational,
    pub steps: u32,
    /// Power of the constant, `Σθʲ`.
    pub constant_exponent: Rational,
    pub l1_exponent: Rational,
    pub t_exponent: Rational,
    pub dyadic_exponent: Rational,
    pub residual_exponent: Rational,
}

pub fn compound_partial(d: u32, gamma: &Rational, steps: u32) -> Result<CompoundLedger, ExponentError> {
    let th = theta(d, gamma)?;
    let dd = int(d as u64);
    let mut geometric = Rational::zero();
    let mut weighted = Rational::zero();
    let mut power = Rational::one();
    for j in 0..=steps {
        geometric += &power;
        weighted += int(j as u64 + 1) * &power;
        power *= &th;
    }
    Ok(CompoundLedger {
        d,
        gamma: gamma.clone(),
        theta: th,
        steps,
        l1_exponent: gamma * &geometric,
        t_exponent: &dd * gamma * &geometric,
        dyadic_exponent: &dd * gamma * weighted,
        constant_exponent: geometric,
        residual_exponent: power,
    })
}

/// Limits of the compounded exponents as the number of dyadic steps goes to ∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompoundLimit {
    pub l1_exponent: Rational,
    pub t_exponent: Rational,
    pub dyadic_exponent: Rational,
}

pub fn compound_limit(d: u32, gamma: &Rational) -> Result<CompoundLimit, ExponentError> {
    let th = theta(d, gamma)?;
    let dd = int(d as u64);
    let gap = Rational::one() - th;
    Ok(CompoundLimit {
        l1_exponent: gamma / &gap,
        t_exponent: &dd * gamma / &gap,
        dyadic_exponent: &dd * gamma / (&gap * &gap),
    })
}

/// Witnesses for deriving the L^p estimate from the L∞ one by interpolating
/// against the non-increasing L¹ norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationWitness {
    pub holds: bool,
    pub gamma_interpolated: Rational,
    pub gamma_lp: Rational,
    pub delta_interpolated: Rational,
    pub delta_lp: Rational,
}

pub fn interpolation_check(d: u32) -> Result<InterpolationWitness, ExponentError> {
    let g0 = gamma0(d)?;
    let LpExponents { p, gamma, delta } = lp_exponents(d)?;
    let inv_p = p.recip();
    let one_minus = Rational::one() - &inv_p;
    let gamma_interpolated = &inv_p + &g0 * &one_minus;
    let delta_interpolated = int(d as u64) * &g0 * &one_minus;
    Ok(InterpolationWitness {
        holds: gamma_interpolated == gamma && delta_interpolated == delta,
        gamma_interpolated,
        gamma_lp: gamma,
        delta_interpolated,
        delta_lp: delta,
    })
}

/// `(1 + d(d+1)/2)·γ₀ = 1` and the time exponents cancel, so the L∞ bound
/// ratio is invariant under the two-parameter scaling group.
pub fn invariance_exponent_check(d: u32) -> Result<bool, ExponentError> {
    let g0 = gamma0(d)?;
    let dd = int(d as u64);
    let amplitude = scaling_weight(d) * &g0 == Rational::one();
    let time = (-&dd) * &g0 + &dd * &g0 == Rational::zero();
    Ok(amplitude && time)
}

impl fmt::Display for CompoundLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} C^{} L1^{} t^-{} 2^{} residual^{}",
            self.steps,
            render(&self.constant_exponent),
            render(&self.l1_exponent),
            render(&self.t_exponent),
            render(&self.dyadic_exponent),
            render(&self.residual_exponent)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_values() {
        assert_eq!(gamma0(1).unwrap(), rat(1, 2));
        assert_eq!(gamma0(2).unwrap(), rat(1, 4));
        assert_eq!(gamma0(3).unwrap(), rat(1, 7));
        assert!(gamma0(0).is_err());
    }

    #[test]
    fn lp_exponent_values() {
        let e = lp_exponents(1).unwrap();
        assert_eq!((e.p, e.gamma, e.delta), (rat(4, 1), rat(5, 8), rat(3, 8)));
        let e = lp_exponents(2).unwrap();
        assert_eq!((e.p, e.gamma, e.delta), (rat(9, 2), rat(5, 12), rat(7, 18)));
        let e = lp_exponents(3).unwrap();
        assert_eq!((e.p, e.gamma, e.delta), (rat(16, 3), rat(17, 56), rat(39, 112)));
        assert!(lp_exponents(0).is_err());
    }

    #[test]
    fn theta_values_and_endpoint() {
        assert_eq!(theta(1, &rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(theta(2, &rat(1, 8)).unwrap(), rat(1, 2));
        assert!(theta(1, &rat(1, 2)).is_err());
        assert!(theta(1, &rat(0, 1)).is_err());
        assert!(theta(1, &rat(-1, 4)).is_err());
    }

    #[test]
    fn compound_partial_examples() {
        let l = compound_partial(1, &rat(1, 4), 0).unwrap();
        assert_eq!(l.l1_exponent, rat(1, 4));
        assert_eq!(l.t_exponent, rat(1, 4));
        assert_eq!(l.dyadic_exponent, rat(1, 4));
        assert_eq!(l.residual_exponent, rat(1, 2));

        let l = compound_partial(1, &rat(1, 4), 1).unwrap();
        assert_eq!(l.l1_exponent, rat(3, 8));
        assert_eq!(l.t_exponent, rat(3, 8));
        assert_eq!(l.dyadic_exponent, rat(1, 2));
        assert_eq!(l.residual_exponent, rat(1, 4));

        let l = compound_partial(2, &rat(1, 8), 0).unwrap();
        assert_eq!(l.l1_exponent, rat(1, 8));
        assert_eq!(l.t_exponent, rat(1, 4));
        assert_eq!(l.dyadic_exponent, rat(1, 4));
        assert_eq!(l.residual_exponent, rat(1, 2));
    }

    #[test]
    fn compound_limit_examples() {
        let l = compound_limit(1, &rat(1, 4)).unwrap();
        assert_eq!((l.l1_exponent, l.t_exponent, l.dyadic_exponent), (rat(1, 2), rat(1, 2), rat(1, 1)));
        let l = compound_limit(1, &rat(1, 3)).unwrap();
        assert_eq!((l.l1_exponent, l.t_exponent, l.dyadic_exponent), (rat(1, 2), rat(1, 2), rat(3, 4)));
        let l = compound_limit(3, &rat(1, 14)).unwrap();
        assert_eq!((l.l1_exponent, l.t_exponent, l.dyadic_exponent), (rat(1, 7), rat(3, 7), rat(6, 7)));
    }

    #[test]
    fn interpolation_examples() {
        let w = interpolation_check(1).unwrap();
        assert!(w.holds);
        assert_eq!(w.gamma_interpolated, rat(5, 8));
        let w = interpolation_check(2).unwrap();
        assert!(w.holds);
        assert_eq!(w.delta_interpolated, rat(7, 18));
        assert!(interpolation_check(10).unwrap().holds);
    }

    #[test]
    fn invariance_examples() {
        for d in [1, 2, 7] {
            assert!(invariance_exponent_check(d).unwrap());
        }
    }

    #[test]
    fn limit_equals_gamma0_on_tenths() {
        for d in 1..=10 {
            let g0 = gamma0(d).unwrap();
            for q in 1..=9 {
                let g = &g0 * rat(q, 10);
                assert_eq!(compound_limit(d, &g).unwrap().l1_exponent, g0);
            }
        }
    }

    #[test]
    fn partial_monotone_with_closed_form_remainder() {
        for d in 1..=6 {
            let g0 = gamma0(d).unwrap();
            for q in 1..=9 {
                let g = &g0 * rat(q, 10);
                let lim = compound_limit(d, &g).unwrap();
                let mut prev: Option<CompoundLedger> = None;
                for k in 0..12 {
                    let cur = compound_partial(d, &g, k).unwrap();
                    assert!(cur.l1_exponent < g0);
                    let remainder = &g * &cur.residual_exponent / (Rational::one() - &cur.theta);
                    assert_eq!(&lim.l1_exponent - &cur.l1_exponent, remainder);
                    if let Some(p) = prev {
                        assert!(cur.l1_exponent > p.l1_exponent);
                        assert!(cur.residual_exponent < p.residual_exponent);
                    }
                    prev = Some(cur);
                }
            }
        }
    }

    #[test]
    fn rational_rendering_and_parsing() {
        assert_eq!(render(&rat(3, 6)), "1/2");
        assert_eq!(render(&rat(4, 1)), "4");
        assert_eq!(parse_rational("1/8").unwrap(), rat(1, 8));
        assert_eq!(parse_rational(" 3 ").unwrap(), rat(3, 1));
        assert!(parse_rational("0.125").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn to_f64_survives_huge_terms() {
        let l = compound_partial(3, &rat(1, 14), 400).unwrap();
        let v = to_f64(&l.l1_exponent);
        assert!((v - 1.0 / 7.0).abs() < 1e-15, "{v}");
    }
}
