mod common;

use burgers_lab::analysis::{self, DecaySeries, Window};
use burgers_lab::equation::{l1_scale_factor, InitialData, Interval, ProfileKind, ScalingParams, SignPattern};
use burgers_lab::exponents::{self, rat};
use burgers_lab::oracle::{self, Profile1D};
use burgers_lab::solver::{self, AutoDomain, Grid, SolverOptions};
use common::midpoint;

fn tent(d: usize) -> InitialData {
    InitialData::new(ProfileKind::Tent, 1.0, vec![Interval::new(0.0, 2.0); d], SignPattern::Positive).unwrap()
}

#[test]
fn scaling_group_law_holds_pointwise() {
    let p = ScalingParams::new(1.7, 0.6).unwrap();
    let q = ScalingParams::new(0.8, 2.3).unwrap();
    let u0 = InitialData::new(ProfileKind::Tent, 1.3, vec![Interval::new(-1.0, 2.0), Interval::new(0.0, 1.0)], SignPattern::Dipole)
        .unwrap();
    let chained = u0.apply_scaling(&p).apply_scaling(&q);
    let direct = u0.apply_scaling(&p.compose(&q));
    for i in 0..40 {
        for j in 0..40 {
            let x = [-3.0 + 0.17 * i as f64, -1.0 + 0.09 * j as f64];
            let (a, b) = (chained.eval(&x), direct.eval(&x));
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{x:?}: {a} vs {b}");
        }
    }
    let back = u0.apply_scaling(&p).apply_scaling(&ScalingParams::new(1.0 / 1.7, 1.0 / 0.6).unwrap());
    for i in 0..50 {
        let x = [-2.0 + 0.1 * i as f64, 0.5];
        assert!((back.eval(&x) - u0.eval(&x)).abs() <= 1e-12);
    }
}

#[test]
fn l1_scale_factor_matches_quadrature() {
    let params = ScalingParams::new(1.5, 0.75).unwrap();
    let u1 = InitialData::new(ProfileKind::Tent, 1.0, vec![Interval::new(-1.0, 3.0)], SignPattern::Dipole).unwrap();
    let v1 = u1.apply_scaling(&params);
    let l1 = |f: &InitialData, lo: f64, hi: f64| midpoint(&|x| f.eval(&[x]).abs(), lo, hi, 400_000);
    let measured = l1(&v1, -20.0, 20.0) / l1(&u1, -20.0, 20.0);
    let predicted = l1_scale_factor(&params, 1);
    assert!((measured / predicted - 1.0).abs() <= 1e-6, "{measured} vs {predicted}");

    let u2 = tent(2);
    let v2 = u2.apply_scaling(&params);
    let l1_2d = |f: &InitialData| midpoint(&|y| midpoint(&|x| f.eval(&[x, y]).abs(), -1.0, 10.0, 2000), -1.0, 10.0, 2000);
    let measured = l1_2d(&v2) / l1_2d(&u2);
    let predicted = l1_scale_factor(&params, 2);
    assert!((measured / predicted - 1.0).abs() <= 1e-6, "{measured} vs {predicted}");
    assert!((v2.l1_norm() / u2.l1_norm() / predicted - 1.0).abs() <= 1e-12);
}

#[test]
fn discrete_scheme_commutes_with_scaling_in_two_dimensions() {
    let u0 = tent(2);
    let params = ScalingParams::new(1.5, 2.0).unwrap();
    let opts = SolverOptions::for_dim(2);
    let grid = Grid::new(vec![64, 64], vec![Interval::new(-0.5, 8.0), Interval::new(-0.5, 4.0)]).unwrap();
    let scaled = grid.scaled(&params).unwrap();
    let out = analysis::scaling_residual(&u0, &params, &grid, &scaled, 8.0, &[1.0, 2.0, 4.0], &opts).unwrap();
    assert!(out.max_relative_difference <= 1e-12, "{}", out.max_relative_difference);
    assert!((out.measured_l1_ratio / out.predicted_l1_ratio - 1.0).abs() <= 1e-12);
}

/// For the exact 1-D triangle `R(t) = √2·√(t/(1+t))` is increasing, so the
/// window sup rises slightly when `t₁` doubles; the rise stays under 1%.
#[test]
fn linf_window_sup_is_stable_under_doubling_for_exact_triangle() {
    let tri = Profile1D::triangle(0.0, 2.0, 1.0).unwrap();
    let sup = |t1: f64| {
        (0..=40)
            .map(|i| t1 * 100f64.powf(i as f64 / 40.0))
            .map(|t| oracle::linf_exact(&tri, t).unwrap() * t.sqrt())
            .fold(0.0, f64::max)
    };
    let mut t1 = 1.0;
    while t1 <= 64.0 {
        let (a, b) = (sup(t1), sup(2.0 * t1));
        assert!(b <= a * 1.01, "t1 = {t1}: {b} > {a}");
        t1 *= 2.0;
    }
}

fn series_for(u0: &InitialData, cells: &[usize], grid: Option<Grid>, t_final: f64, t_start: f64) -> DecaySeries {
    let opts = SolverOptions::for_dim(u0.dim());
    let grid = grid.unwrap_or_else(|| solver::auto_grid(u0, cells, t_final, &opts, &AutoDomain::default()).unwrap());
    let samples = solver::log_spaced(t_start, t_final, 10).unwrap();
    DecaySeries::from_trajectory(&solver::solve_to(u0, &grid, t_final, &samples, &opts).unwrap())
}

#[test]
fn linf_window_sup_is_stable_under_doubling_for_numerical_runs() {
    let s1 = series_for(&tent(1), &[2048], None, 1600.0, 1.0);
    for t1 in [2.0, 4.0, 8.0] {
        let a = analysis::linf_ratio(&s1, &Window::two_decades(t1 / 2.0).unwrap()).unwrap().sup_ratio;
        let b = analysis::linf_ratio(&s1, &Window::two_decades(t1).unwrap()).unwrap().sup_ratio;
        assert!(b <= a * 1.01, "d=1 t1={t1}: {b} > {a}");
    }
    let grid = Grid::new(vec![128, 128], vec![Interval::new(-0.5, 14.0), Interval::new(-0.5, 5.0)]).unwrap();
    let s2 = series_for(&tent(2), &[128, 128], Some(grid), 100.0, 0.5);
    let a = analysis::linf_ratio(&s2, &Window::two_decades(0.5).unwrap()).unwrap().sup_ratio;
    let b = analysis::linf_ratio(&s2, &Window::two_decades(1.0).unwrap()).unwrap().sup_ratio;
    assert!(b <= a * 1.01, "d=2: {b} > {a}");
}

#[test]
fn linf_weighted_bound_across_gamma() {
    let s = series_for(&tent(1), &[2048], None, 1000.0, 1.0);
    let window = Window::new(1.0, 1000.0).unwrap();
    let g0 = exponents::gamma0(1).unwrap();
    println!("gamma/gamma0  gamma   sup ratio");
    for q in [5, 7, 9] {
        let gamma = &g0 * rat(q, 10);
        let r = analysis::weighted_linf_ratio(&s, &gamma, &window).unwrap();
        println!("{q}/10         {:<7} {:.6}", exponents::render(&gamma), r.sup_ratio);
        assert!(r.sup_ratio.is_finite() && r.sup_ratio > 0.0);
    }
    let lp = analysis::lp_ratio(&s, &window).unwrap();
    assert!(lp.sup_ratio.is_finite() && lp.sup_ratio > 0.0);
}

#[test]
fn fitted_slopes_follow_the_decay_rate() {
    let s = series_for(&tent(1), &[4096], None, 10_000.0, 100.0);
    let w = Window::new(100.0, 10_000.0).unwrap();
    let fit = analysis::fit_slope(&s, analysis::Column::Linf, &w).unwrap();
    assert!((fit.slope + 0.5).abs() < 0.03, "{}", fit.slope);
    let l1 = analysis::fit_slope(&s, analysis::Column::L1, &w).unwrap();
    assert!(l1.slope.abs() < 1e-6, "{}", l1.slope);
}
