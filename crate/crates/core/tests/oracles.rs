//! Frozen closed-form values. The expected numbers were computed
//! independently (high-precision Bessel zeros, π_p formula) before the
//! solver ran against them.

use ptone_core::bounds::{
    barta_bound, stability_criterion_meancurv, theorem17_bound, trial_profile, BartaInput,
};
use ptone_core::critical::{compute_r_star, verify_spherical_positivity, CriticalConstants, Method};
use ptone_core::modelspace::{conjugate_radius, s_c, WarpingProfile};
use ptone_core::radial::{
    interval_eigenvalue, solve_annulus_eigenvalue, solve_ball_eigenvalue, solve_ball_eigenvalue_with, RadialProblem,
    SolveOptions,
};
use ptone_core::surfaces::{verify_minimality, RotSurface, SurfaceBand};

const PI_SQUARED: f64 = 9.869_604_401_089_358;
const J01_SQUARED: f64 = 5.783_185_962_946_784;
const INTERVAL: [(f64, f64); 3] = [(1.5, 1.880_450_809_513_591), (3.0, 3.536_095_247_000_319), (4.0, 4.566_051_142_218_864)];

fn ball(p: f64, m: u32, c: f64, r: f64) -> f64 {
    let prob = RadialProblem::space_form_ball(p, m, c, r).unwrap();
    solve_ball_eigenvalue(&prob, 1e-10).unwrap().lambda
}

#[test]
fn three_ball_is_pi_squared() {
    assert!((ball(2.0, 3, 0.0, 1.0) / PI_SQUARED - 1.0).abs() < 1e-8);
}

#[test]
fn disk_is_first_bessel_zero_squared() {
    assert!((ball(2.0, 2, 0.0, 1.0) / J01_SQUARED - 1.0).abs() < 1e-8);
}

#[test]
fn interval_matches_pi_p() {
    for (p, expect) in INTERVAL {
        assert!((ball(p, 1, 0.0, 1.0) / expect - 1.0).abs() < 1e-8, "p = {p}");
        assert!((interval_eigenvalue(p, 1.0) / expect - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sphere_cap_of_half_width_is_known() {
    // hemisphere of S^2: first Dirichlet eigenvalue 2
    let l = ball(2.0, 2, 1.0, std::f64::consts::FRAC_PI_2 - 1e-9);
    assert!((l - 2.0).abs() < 1e-5, "{l}");
}

#[test]
fn flat_one_dimensional_annulus_is_an_interval() {
    let prob = RadialProblem::annulus(2.0, 1, WarpingProfile::space_form(0.0), 0.5, 2.0).unwrap();
    let l = solve_annulus_eigenvalue(&prob, 1e-10).unwrap().lambda;
    let expect = (std::f64::consts::PI / 1.5).powi(2);
    assert!((l / expect - 1.0).abs() < 1e-8);
}

#[test]
fn mean_curvature_bound_fixtures() {
    assert!((theorem17_bound(3, 2.0, 0.0, 1.0, 0.0).unwrap().value - 0.25).abs() < 1e-15);
    let b = theorem17_bound(3, 3.0, -1.0, 1.0, 0.5).unwrap();
    assert!((b.bracket - 0.813_035_285_499_331_3).abs() < 1e-15);
    assert!((b.value - 0.019_905_102_514_829_02).abs() < 1e-15);
    let inadmissible = theorem17_bound(3, 2.0, 0.0, 1.0, 2.0).unwrap();
    assert!(!inadmissible.admissible && inadmissible.value == 0.0);
}

#[test]
fn catenoid_mean_curvature_verdict() {
    let v = stability_criterion_meancurv(2f64.sqrt(), 2, 2.0, 1.2).unwrap();
    assert!(!v.stable);
    assert!((v.threshold - 1.0 / 2.4).abs() < 1e-15);
}

#[test]
fn trial_profile_is_below_lambda() {
    for (p, m, c) in [(2.0, 2, 0.0), (3.0, 3, -1.0), (1.5, 1, 1.0)] {
        let prob = RadialProblem::space_form_ball(p, m, c, 1.0).unwrap();
        let l = solve_ball_eigenvalue(&prob, 1e-10).unwrap().lambda;
        let cert = barta_bound(&BartaInput { eta: trial_profile(&prob, 2048), problem: prob }).unwrap();
        assert!(cert.value < l && cert.value > 0.0, "p = {p}: {} vs {l}", cert.value);
    }
}

#[test]
fn critical_radius_fixtures() {
    for c in [-1.0, 0.0, 1.0] {
        let prob = RadialProblem::space_form_ball(2.0, 2, c, 1.0).unwrap();
        let rep = compute_r_star(c, &solve_ball_eigenvalue(&prob, 1e-10).unwrap()).unwrap();
        assert_eq!(rep.r_star, 1.0);
        assert_eq!(rep.method, Method::DirectW);
    }
    let prob = RadialProblem::space_form_ball(3.0, 2, 1.0, 1.4).unwrap();
    let sol = solve_ball_eigenvalue_with(&prob, &SolveOptions::with_tol(1e-10)).unwrap();
    assert_eq!(compute_r_star(1.0, &sol).unwrap().r_star, 1.4);
    assert!(verify_spherical_positivity(&sol).unwrap().margin > 0.0);
    // a p = 3 solution cannot be analysed with the wrong curvature
    assert!(compute_r_star(0.0, &sol).is_err());
}

#[test]
fn critical_constants_arithmetic() {
    let k = CriticalConstants::new(6.0, 3.0, 2);
    assert_eq!(k.c1, 6.0 * 5.0 / 3.0);
    assert_eq!(k.c2, 6.0 * (1.0 / 3.0 + 6.0 / 9.0));
    assert_eq!(k.c3, 2.0);
    assert_eq!(k.c4, 2.0);
    assert_eq!(k.c4_without_lambda, 1.0 / 3.0);
}

#[test]
fn space_form_profiles() {
    assert_eq!(s_c(0.0, 0.7).unwrap(), 0.7);
    assert!((s_c(1.0, 0.7).unwrap() - 0.7f64.sin()).abs() < 1e-16);
    assert!((s_c(-4.0, 0.7).unwrap() - (1.4f64).sinh() / 2.0).abs() < 1e-15);
    assert_eq!(conjugate_radius(1.0), std::f64::consts::PI);
    assert!(conjugate_radius(-1.0).is_infinite());
}

#[test]
fn surfaces_are_minimal_and_bands_are_well_posed() {
    for s in [RotSurface::plane(), RotSurface::catenoid()] {
        let rep = verify_minimality(&s, 2.0, 200);
        assert!(rep.ok, "{rep:?}");
    }
    let band = SurfaceBand::new(RotSurface::catenoid(), 1.2).unwrap();
    assert_eq!(band.k, 0.0);
    assert!(SurfaceBand::new(RotSurface::catenoid(), 0.9).is_err());
    assert_eq!(SurfaceBand::new(RotSurface::plane(), 1.2).unwrap().k, 1.0);
}
