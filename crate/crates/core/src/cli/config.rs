//! Flat `key = value` run configuration with dotted keys.
//!
//! ```text
//! dim = 1
//! grid.cells = 4096
//! grid.box = auto            # or per-direction "lo,hi;lo,hi"
//! init.kind = triangle       # box | triangle | gauss
//! init.amplitude = 1
//! init.support = 0,2         # one interval, or one per direction
//! init.sign = positive       # positive | negative | dipole
//! time.t_final = 10000
//! time.cfl = 0.9
//! time.samples = decades:20  # or an explicit list "1,2,5"
//! time.t_start = 100
//! flux = eo                  # eo | godunov
//! analysis.gammas = 1/8,3/16
//! analysis.window = 100,10000
//! ```

use crate::equation::{InitialData, Interval, ProfileKind, SignPattern};
use crate::exponents::{self, Rational};
use crate::solver::{self, AutoDomain, Grid, NumericalFlux, SolverOptions};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: &'static str, reason: String },
}

const KEYS: &[&str] = &[
    "dim",
    "grid.cells",
    "grid.box",
    "init.kind",
    "init.amplitude",
    "init.support",
    "init.sign",
    "time.t_final",
    "time.cfl",
    "time.samples",
    "time.t_start",
    "flux",
    "analysis.gammas",
    "analysis.window",
    "check_invariants",
];

#[derive(Debug, Clone, PartialEq)]
pub enum BoxSpec {
    Auto,
    Explicit(Vec<Interval>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSpec {
    /// Log-spaced, this many per decade from `t_start` to `t_final`.
    Decades(usize),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub cells: Vec<usize>,
    pub domain: BoxSpec,
    pub init_kind: ProfileKind,
    pub amplitude: f64,
    pub support: Vec<Interval>,
    pub sign: SignPattern,
    pub t_final: f64,
    pub cfl: f64,
    pub samples: SampleSpec,
    pub t_start: f64,
    pub flux: NumericalFlux,
    pub gammas: Option<Vec<Rational>>,
    pub window: Option<(f64, f64)>,
    pub check_invariants: bool,
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            reason: "expected `key = value`".into(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1, reason: "empty key or value".into() });
        }
        if !KEYS.contains(&k) {
            return Err(ConfigError::UnknownKey(k.to_string()));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError::DuplicateKey(k.to_string()));
        }
    }
    Ok(map)
}

fn num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| ConfigError::BadValue { key, reason: e.to_string() })
}

fn list<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.split(',').map(|s| num(key, s)).collect()
}

fn intervals(key: &'static str, v: &str, dim: usize) -> Result<Vec<Interval>, ConfigError> {
    let parts: Vec<Interval> = v
        .split(';')
        .map(|p| {
            let xs: Vec<f64> = list(key, p)?;
            match xs.as_slice() {
                [lo, hi] if lo < hi => Ok(Interval::new(*lo, *hi)),
                _ => Err(ConfigError::BadValue { key, reason: format!("expected `lo,hi` with lo < hi, got {p:?}") }),
            }
        })
        .collect::<Result<_, _>>()?;
    broadcast(key, parts, dim)
}

fn broadcast<T: Clone>(key: &'static str, v: Vec<T>, dim: usize) -> Result<Vec<T>, ConfigError> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); dim]),
        n if n == dim => Ok(v),
        n => Err(ConfigError::BadValue { key, reason: format!("{n} entries for dimension {dim}") }),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let map = parse_pairs(text)?;
        let get = |k: &'static str| map.get(k).map(String::as_str);
        let req = |k: &'static str| get(k).ok_or(ConfigError::MissingKey(k));

        let dim: usize = num("dim", req("dim")?)?;
        if dim == 0 {
            return Err(ConfigError::BadValue { key: "dim", reason: "must be at least 1".into() });
        }
        let cells = broadcast("grid.cells", list("grid.cells", req("grid.cells")?)?, dim)?;
        let domain = match get("grid.box").unwrap_or("auto") {
            "auto" => BoxSpec::Auto,
            v => BoxSpec::Explicit(intervals("grid.box", v, dim)?),
        };
        let init_kind = match req("init.kind")? {
            "box" => ProfileKind::Box,
            "triangle" | "tent" => ProfileKind::Tent,
            "gauss" | "gaussian" => ProfileKind::Gauss,
            other => {
                return Err(ConfigError::BadValue { key: "init.kind", reason: format!("unknown kind {other:?}") })
            }
        };
        let amplitude: f64 = num("init.amplitude", get("init.amplitude").unwrap_or("1"))?;
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(ConfigError::BadValue { key: "init.amplitude", reason: "must be finite and >= 0".into() });
        }
        let support = intervals("init.support", req("init.support")?, dim)?;
        let sign = match get("init.sign").unwrap_or("positive") {
            "positive" => SignPattern::Positive,
            "negative" => SignPattern::Negative,
            "dipole" => SignPattern::Dipole,
            other => {
                return Err(ConfigError::BadValue { key: "init.sign", reason: format!("unknown sign pattern {other:?}") })
            }
        };
        let t_final: f64 = num("time.t_final", req("time.t_final")?)?;
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(ConfigError::BadValue { key: "time.t_final", reason: "must be positive".into() });
        }
        let cfl: f64 = num("time.cfl", get("time.cfl").unwrap_or("0.9"))?;
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(ConfigError::BadValue { key: "time.cfl", reason: "must lie in (0, 1)".into() });
        }
        let samples = match get("time.samples") {
            None => SampleSpec::Decades(10),
            Some(v) => match v.strip_prefix("decades:") {
                Some(n) => {
                    let n: usize = num("time.samples", n)?;
                    if n == 0 {
                        return Err(ConfigError::BadValue { key: "time.samples", reason: "need at least one sample per decade".into() });
                    }
                    SampleSpec::Decades(n)
                }
                None => SampleSpec::List(list("time.samples", v.strip_prefix("list:").unwrap_or(v))?),
            },
        };
        if let SampleSpec::List(ts) = &samples {
            if ts.iter().any(|&t| !(0.0..=t_final).contains(&t)) {
                return Err(ConfigError::BadValue { key: "time.samples", reason: "sample times must lie in [0, t_final]".into() });
            }
        }
        let t_start: f64 = num("time.t_start", get("time.t_start").unwrap_or("1"))?;
        if !(t_start > 0.0 && t_start <= t_final) {
            return Err(ConfigError::BadValue { key: "time.t_start", reason: "must lie in (0, t_final]".into() });
        }
        let flux = match get("flux") {
            None => NumericalFlux::EngquistOsher,
            Some(v) => v.parse().map_err(|e: String| ConfigError::BadValue { key: "flux", reason: e })?,
        };
        let gammas = match get("analysis.gammas") {
            None => None,
            Some(v) => Some(
                v.split(',')
                    .map(|s| exponents::parse_rational(s).map_err(|e| ConfigError::BadValue { key: "analysis.gammas", reason: e.to_string() }))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let window = match get("analysis.window") {
            None => None,
            Some(v) => match list::<f64>("analysis.window", v)?.as_slice() {
                [lo, hi] if *lo > 0.0 && lo <= hi => Some((*lo, *hi)),
                _ => return Err(ConfigError::BadValue { key: "analysis.window", reason: "expected `lo,hi` with 0 < lo <= hi".into() }),
            },
        };
        let check_invariants = match get("check_invariants").unwrap_or("true") {
            "true" => true,
            "false" => false,
            other => return Err(ConfigError::BadValue { key: "check_invariants", reason: format!("{other:?} is not a boolean") }),
        };
        Ok(Self {
            dim,
            cells,
            domain,
            init_kind,
            amplitude,
            support,
            sign,
            t_final,
            cfl,
            samples,
            t_start,
            flux,
            gammas,
            window,
            check_invariants,
        })
    }

    pub fn initial_data(&self) -> Result<InitialData, ConfigError> {
        InitialData::new(self.init_kind, self.amplitude, self.support.clone(), self.sign)
            .map_err(|e| ConfigError::BadValue { key: "init.support", reason: e.to_string() })
    }

    pub fn solver_options(&self) -> SolverOptions {
        let mut o = SolverOptions::for_dim(self.dim).with_cfl(self.cfl).with_flux(self.flux);
        o.check_invariants = self.check_invariants;
        o
    }

    pub fn sample_times(&self) -> Result<Vec<f64>, solver::SolverError> {
        match &self.samples {
            SampleSpec::Decades(n) => solver::log_spaced(self.t_start, self.t_final, *n),
            SampleSpec::List(ts) => Ok(ts.clone()),
        }
    }

    /// Explicit grid, or the automatic box for `grid.box = auto`.
    pub fn grid(&self, u0: &InitialData) -> Result<Grid, solver::SolverError> {
        match &self.domain {
            BoxSpec::Explicit(b) => Grid::new(self.cells.clone(), b.clone()),
            BoxSpec::Auto => solver::auto_grid(u0, &self.cells, self.t_final, &self.solver_options(), &AutoDomain::default()),
        }
    }

    /// `γ` values for the L∞-weighted report; defaults to `{5, 7, 9}/10 · γ₀`.
    pub fn weighted_gammas(&self) -> Vec<Rational> {
        match &self.gammas {
            Some(g) => g.clone(),
            None => {
                let g0 = exponents::gamma0(self.dim as u32).expect("dim >= 1");
                [5, 7, 9].iter().map(|q| &g0 * exponents::rat(*q, 10)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\
# unit-mass triangle
dim = 1
grid.cells = 4096
grid.box = auto
init.kind = triangle
init.support = 0,2
time.t_final = 10000
time.samples = decades:20
time.t_start = 100
";

    #[test]
    fn parses_bundled_style_config() {
        let c = RunConfig::parse(TRIANGLE).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.cells, vec![4096]);
        assert_eq!(c.domain, BoxSpec::Auto);
        assert_eq!(c.init_kind, ProfileKind::Tent);
        assert_eq!(c.samples, SampleSpec::Decades(20));
        assert_eq!(c.flux, NumericalFlux::EngquistOsher);
        assert_eq!(c.cfl, 0.9);
        let ts = c.sample_times().unwrap();
        assert_eq!(ts.len(), 41);
        assert_eq!(c.initial_data().unwrap().l1_norm(), 1.0);
    }

    #[test]
    fn broadcasts_and_explicit_boxes() {
        let c = RunConfig::parse(
            "dim = 2\ngrid.cells = 64\ngrid.box = -1,3;0,2\ninit.kind = box\ninit.support = 0,1\ntime.t_final = 1\ntime.samples = 0.5,1\nflux = godunov\nanalysis.gammas = 1/8\n",
        )
        .unwrap();
        assert_eq!(c.cells, vec![64, 64]);
        assert_eq!(c.domain, BoxSpec::Explicit(vec![Interval::new(-1.0, 3.0), Interval::new(0.0, 2.0)]));
        assert_eq!(c.support, vec![Interval::new(0.0, 1.0); 2]);
        assert_eq!(c.samples, SampleSpec::List(vec![0.5, 1.0]));
        assert_eq!(c.flux, NumericalFlux::Godunov);
        assert_eq!(c.weighted_gammas(), vec![exponents::rat(1, 8)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::parse("dim = 1\nfoo = 2\n"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("dim = 1\ndim = 2\n"), Err(ConfigError::DuplicateKey(_))));
        assert!(matches!(RunConfig::parse("dim 1\n"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(RunConfig::parse("dim = 1\n"), Err(ConfigError::MissingKey("grid.cells"))));
        let bad_gamma = TRIANGLE.to_string() + "analysis.gammas = 0.25\n";
        assert!(RunConfig::parse(&bad_gamma).is_err());
        let bad_cfl = TRIANGLE.to_string() + "time.cfl = 1.5\n";
        assert!(RunConfig::parse(&bad_cfl).is_err());
        assert!(RunConfig::parse(&TRIANGLE.replace("dim = 1", "dim = 0")).is_err());
    }

    #[test]
    fn default_weighted_gammas_are_tenths_of_gamma0() {
        let c = RunConfig::parse(TRIANGLE).unwrap();
        let g = c.weighted_gammas();
        assert_eq!(g, vec![exponents::rat(1, 4), exponents::rat(7, 20), exponents::rat(9, 20)]);
    }
}
