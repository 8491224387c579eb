use proptest::prelude::*;

use ptone_core::bounds::{barta_bound, picone_defect, picone_scale, trial_profile, BartaInput};
use ptone_core::modelspace::{s_c, s_c_prime};
use ptone_core::radial::{solve_ball_eigenvalue, RadialProblem};
use ptone_core::rayleigh::{rayleigh_quotient, Grid1D};

fn lambda(p: f64, m: u32, c: f64, r: f64) -> f64 {
    let prob = RadialProblem::space_form_ball(p, m, c, r).unwrap();
    solve_ball_eigenvalue(&prob, 1e-10).unwrap().lambda
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flat_eigenvalue_scales_like_r_to_minus_p(p in 1.2f64..6.0, m in 1u32..4, r in 0.3f64..3.0) {
        let l1 = lambda(p, m, 0.0, 1.0);
        let lr = lambda(p, m, 0.0, r);
        prop_assert!(((lr - r.powf(-p) * l1) / lr).abs() < 1e-6);
    }

    #[test]
    fn eigenvalue_decreases_with_radius(p in 1.3f64..5.0, m in 1u32..4, c in -1.0f64..1.0, r in 0.3f64..1.2) {
        prop_assert!(lambda(p, m, c, r) > lambda(p, m, c, r * 1.1));
    }

    #[test]
    fn curvature_orders_eigenvalues(p in 1.3f64..5.0, m in 2u32..4, r in 0.3f64..1.4) {
        let (neg, zero, pos) = (lambda(p, m, -1.0, r), lambda(p, m, 0.0, r), lambda(p, m, 1.0, r));
        prop_assert!(neg > zero && zero > pos);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn picone_defect_is_nonnegative(
        p in 1.05f64..8.0,
        u in 0.0f64..5.0, du in -5.0f64..5.0,
        v in 1e-3f64..5.0, dv in -5.0f64..5.0,
    ) {
        let d = picone_defect(&[u], &[du], &[v], &[dv], p).unwrap()[0];
        let s = picone_scale(&[u], &[du], &[v], &[dv], p)[0];
        prop_assert!(d >= -1e-12 * s.max(f64::MIN_POSITIVE), "defect {d} scale {s}");
    }

    #[test]
    fn picone_vanishes_on_proportional_pairs(p in 1.05f64..8.0, beta in 0.01f64..50.0, v in 1e-2f64..5.0, dv in -5.0f64..5.0) {
        let (u, du) = (beta * v, beta * dv);
        let d = picone_defect(&[u], &[du], &[v], &[dv], p).unwrap()[0];
        let s = picone_scale(&[u], &[du], &[v], &[dv], p)[0];
        prop_assert!(d.abs() <= 1e-13 * s + 1e-300);
    }

    #[test]
    fn space_form_identity(c in -4.0f64..4.0, t in 0.0f64..1.5) {
        let s = s_c(c, t).unwrap();
        let ds = s_c_prime(c, t).unwrap();
        prop_assert!((ds * ds + c * s * s - 1.0).abs() < 1e-12 * (1.0 + (c * s * s).abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn barta_is_invariant_under_positive_scaling(p in 1.3f64..5.0, m in 1u32..4, c in -1.0f64..1.0, beta in 1e-3f64..1e3) {
        let prob = RadialProblem::space_form_ball(p, m, c, 1.0).unwrap();
        let eta = trial_profile(&prob, 512);
        let a = barta_bound(&BartaInput { eta: eta.clone(), problem: prob.clone() }).unwrap().value;
        let b = barta_bound(&BartaInput { eta: eta.scaled(beta), problem: prob }).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 * a.abs());
    }

    #[test]
    fn rayleigh_quotient_is_zero_homogeneous(p in 1.3f64..5.0, beta in 1e-3f64..1e3, k in 1usize..4) {
        let prob = RadialProblem::space_form_ball(p, 2, 0.0, 1.0).unwrap();
        let grid = Grid1D::for_problem(&prob, 256).unwrap();
        let u: Vec<f64> = grid.nodes.iter().map(|t| (k as f64 * std::f64::consts::FRAC_PI_2 * t).cos().abs() * (1.0 - t)).collect();
        let scaled: Vec<f64> = u.iter().map(|x| beta * x).collect();
        let a = rayleigh_quotient(&u, &grid, p).unwrap();
        let b = rayleigh_quotient(&scaled, &grid, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }
}
