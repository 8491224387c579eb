//! The acceptance suite: fifteen numbered criteria, each reduced to a
//! pass flag and a deterministic one-line detail.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ptone_core::bounds::{
    barta_bound, collar_range, div_field_bound, pointwise_div_field_expression, eigen_field, kazdan_source, kazdan_transform,
    node_plap_radial, picone_defect, picone_scale, stability_criterion_immersion, stability_criterion_meancurv,
    stability_functional, theorem17_bound, BartaInput, DiscreteField, RangeStats,
};
use ptone_core::critical::{compute_r_star, flat_integral, lhs_expression, verify_spherical_positivity, TOL_W};
use ptone_core::modelspace::{verification_nodes, verify_curvature_bound, WarpingProfile, DEFAULT_VERIFY_NODES};
use ptone_core::radial::{solve_ball_eigenvalue_with, RadialProblem, RadialSolution, SolveOptions, MAX_GRID};
use ptone_core::rayleigh::{default_initial, minimize_rayleigh, p_energy, Grid1D, MinimizeOptions};
use ptone_core::surfaces::{modelcontrol_check, route_agreement, transplant, RotSurface, SurfaceBand, BAND_GRID};

use crate::config::DEFAULT_SEED;
use crate::output::Table;

const SOLVE_TOL: f64 = 1e-10;
const SUITE_GRID: usize = 2000;

/// Oracle values the suite compares against. Overridable from a config file,
/// which is how a tampered fixture is exercised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fixtures {
    pub pi_squared: f64,
    pub j01_squared: f64,
    /// `(p, (p−1)(π_p/2)^p)` for the unit interval.
    pub interval: Vec<(f64, f64)>,
    pub mean_curvature_flat: f64,
    pub mean_curvature_hyperbolic: f64,
}

impl Default for Fixtures {
    fn default() -> Self {
        Self {
            pi_squared: 9.869_604_401_089_358,
            j01_squared: 5.783_185_962_946_784,
            interval: vec![(1.5, 1.880_450_809_513_591), (3.0, 3.536_095_247_000_319), (4.0, 4.566_051_142_218_864)],
            mean_curvature_flat: 0.25,
            // (coth 1 − 1/2)^3 / 27
            mean_curvature_hyperbolic: 0.019_905_102_514_829_02,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub seed: u64,
    pub fixtures: Fixtures,
}

impl Default for Suite {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, fixtures: Fixtures::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub tags: &'static [&'static str],
}

pub const CRITERIA: [Criterion; 15] = [
    Criterion { id: 1, name: "closed-form-eigenvalues", tags: &["eig"] },
    Criterion { id: 2, name: "scaling-law", tags: &["eig"] },
    Criterion { id: 3, name: "solver-cross-validation", tags: &["eig", "rayleigh"] },
    Criterion { id: 4, name: "barta-sharpness", tags: &["barta"] },
    Criterion { id: 5, name: "picone", tags: &["picone"] },
    Criterion { id: 6, name: "divergence-field", tags: &["divfield"] },
    Criterion { id: 7, name: "curvature-monotonicity", tags: &["eig", "compare"] },
    Criterion { id: 8, name: "cheng-warped-barta", tags: &["barta", "compare"] },
    Criterion { id: 9, name: "critical-radius", tags: &["rstar"] },
    Criterion { id: 10, name: "flat-integral-identity", tags: &["rstar"] },
    Criterion { id: 11, name: "jk-route-agreement", tags: &["surface"] },
    Criterion { id: 12, name: "model-control", tags: &["surface"] },
    Criterion { id: 13, name: "kazdan-kramer", tags: &["kazdan"] },
    Criterion { id: 14, name: "stability-arithmetic", tags: &["stability", "meancurv"] },
    Criterion { id: 15, name: "harness-determinism", tags: &["selftest"] },
];

impl Criterion {
    pub fn get(id: u8) -> Option<Criterion> {
        CRITERIA.iter().copied().find(|c| c.id == id)
    }

    /// A filter selects by id, by tag, or by a substring of the name.
    pub fn matches(&self, filter: &str) -> bool {
        let f = filter.trim().to_ascii_lowercase();
        f.parse::<u8>().is_ok_and(|id| id == self.id) || self.tags.contains(&f.as_str()) || self.name.contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// Wall time; reported on the console only, never in the CSV body.
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<26} {}  {}  ({:.2} s)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

type Check = std::result::Result<Verdict, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn solve(p: f64, m: u32, c: f64, r: f64, n: usize) -> std::result::Result<RadialSolution, String> {
    let prob = RadialProblem::space_form_ball(p, m, c, r).map_err(err)?;
    solve_ball_eigenvalue_with(&prob, &SolveOptions::with_tol(SOLVE_TOL).grid(n)).map_err(err)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `p ∈ {1.5, 2, 2.5, 3} × m ∈ {1, 2, 3} × c ∈ {−1, 0, 1}`, radius 1.
fn matrix3() -> Vec<(f64, u32, f64)> {
    let mut v = Vec::new();
    for p in [1.5, 2.0, 2.5, 3.0] {
        for m in [1, 2, 3] {
            for c in [-1.0, 0.0, 1.0] {
                v.push((p, m, c));
            }
        }
    }
    v
}

fn case(p: f64, m: u32, c: f64) -> String {
    format!("p={p} m={m} c={c}")
}

/// Largest value with its label; NaN counts as worst.
fn worst<I: IntoIterator<Item = (f64, String)>>(items: I) -> (f64, String) {
    items.into_iter().fold((f64::NEG_INFINITY, String::new()), |acc, (v, label)| {
        if v.is_nan() || (!acc.0.is_nan() && v > acc.0) {
            (v, label)
        } else {
            acc
        }
    })
}

fn collect<T: Send>(results: Vec<std::result::Result<T, String>>) -> std::result::Result<Vec<T>, String> {
    results.into_iter().collect()
}

fn closed_forms(s: &Suite) -> Check {
    let fx = &s.fixtures;
    let mut cases = vec![(2.0, 3, fx.pi_squared), (2.0, 2, fx.j01_squared)];
    cases.extend(fx.interval.iter().map(|&(p, v)| (p, 1, v)));
    let runs = collect(
        cases
            .par_iter()
            .map(|&(p, m, oracle)| {
                let prob = RadialProblem::space_form_ball(p, m, 0.0, 1.0).map_err(err)?;
                let t0 = Instant::now();
                let sol = solve_ball_eigenvalue_with(&prob, &SolveOptions::with_tol(SOLVE_TOL)).map_err(err)?;
                Ok((rel(sol.lambda, oracle), t0.elapsed(), format!("p={p} m={m}")))
            })
            .collect(),
    )?;
    let slow = runs.iter().filter(|r| r.1 > Duration::from_secs(1)).count();
    let (e, at) = worst(runs.iter().map(|r| (r.0, r.2.clone())));
    Ok(Verdict::new(e <= 1e-5 && slow == 0, format!("max rel err {e:.3e} at {at}; {} cases, {slow} over 1 s", runs.len())))
}

fn scaling(_: &Suite) -> Check {
    let mut cases = Vec::new();
    for p in [1.5, 2.0, 3.0, 4.0] {
        for m in [1, 2, 3] {
            cases.push((p, m));
        }
    }
    let errs = collect(
        cases
            .par_iter()
            .map(|&(p, m)| {
                let base = solve(p, m, 0.0, 1.0, SUITE_GRID)?.lambda;
                let mut out = Vec::new();
                for r in [0.5, 2.0] {
                    let l = solve(p, m, 0.0, r, SUITE_GRID)?.lambda;
                    out.push(((l - r.powf(-p) * base).abs() / l, format!("p={p} m={m} r={r}")));
                }
                Ok(out)
            })
            .collect(),
    )?;
    let (e, at) = worst(errs.into_iter().flatten());
    Ok(Verdict::new(e <= 1e-6, format!("max rel deviation {e:.3e} at {at}; 24 radii")))
}

fn cross_validation(_: &Suite) -> Check {
    let errs = collect(
        matrix3()
            .par_iter()
            .map(|&(p, m, c)| {
                let sol = solve(p, m, c, 1.0, SUITE_GRID)?;
                let grid = Grid1D::for_problem(&sol.problem, SUITE_GRID).map_err(err)?;
                let init = default_initial(&grid);
                let min = minimize_rayleigh(&grid, p, &init, &MinimizeOptions::default()).map_err(err)?;
                Ok((rel(min.lambda_est, sol.lambda), case(p, m, c)))
            })
            .collect(),
    )?;
    let (e, at) = worst(errs);
    Ok(Verdict::new(e <= 1e-3, format!("max rel gap {e:.3e} at {at}; 36 cases")))
}

/// `η = ω(1 + ε Σ a_k cos(kπt/r))` with seeded `a_k ∈ [−1, 1]`; positive
/// inside since `ε Σ|a_k| ≤ 0.3`.
fn perturbed_eta(sol: &RadialSolution, rng: &mut ChaCha8Rng) -> std::result::Result<DiscreteField, String> {
    const EPS: f64 = 0.1;
    let r = sol.radius();
    let a: [f64; 3] = [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
    let g = |t: f64| -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for (k, ak) in a.iter().enumerate() {
            let w = (k + 1) as f64 * PI / r;
            v += ak * (w * t).cos();
            d -= ak * w * (w * t).sin();
        }
        (1.0 + EPS * v, EPS * d)
    };
    let mut values = Vec::with_capacity(sol.grid.len());
    let mut slopes = Vec::with_capacity(sol.grid.len());
    for (i, &t) in sol.grid.iter().enumerate() {
        let (gv, gd) = g(t);
        values.push(sol.omega[i] * gv);
        slopes.push(sol.omega_prime[i] * gv + sol.omega[i] * gd);
    }
    DiscreteField::with_slopes(sol.grid.clone(), values, slopes).map_err(err)
}

fn barta_sharpness(s: &Suite) -> Check {
    let seed = s.seed;
    let rows = collect(
        matrix3()
            .par_iter()
            .enumerate()
            .map(|(idx, &(p, m, c))| {
                let sol = solve(p, m, c, 1.0, SUITE_GRID)?;
                let cert = barta_bound(&BartaInput { eta: DiscreteField::from_solution(&sol), problem: sol.problem.clone() })
                    .map_err(err)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
                let mut gap = f64::INFINITY;
                for _ in 0..10 {
                    let eta = perturbed_eta(&sol, &mut rng)?;
                    let b = barta_bound(&BartaInput { eta, problem: sol.problem.clone() }).map_err(err)?;
                    gap = gap.min((sol.lambda - b.value) / sol.lambda);
                }
                Ok((rel(cert.value, sol.lambda), gap, case(p, m, c)))
            })
            .collect(),
    )?;
    let (e, at) = worst(rows.iter().map(|r| (r.0, r.2.clone())));
    let (g, gat) = worst(rows.iter().map(|r| (-r.1, r.2.clone())));
    let pass = e <= 1e-4 && -g > 0.0;
    Ok(Verdict::new(
        pass,
        format!("eigenfunction max rel err {e:.3e} at {at}; smallest perturbed gap (lambda-cert)/lambda {:.3e} at {gat}", -g),
    ))
}

fn picone(s: &Suite) -> Check {
    let mut worst_neg = 0.0f64;
    let mut worst_prop = 0.0f64;
    for (k, p) in [1.5, 2.0, 3.0, 4.0].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(1000 + k as u64));
        let mut draw = |lo: f64, hi: f64| rng.gen_range(lo..=hi);
        let n = 1000;
        let (mut u, mut du, mut v, mut dv) = (vec![], vec![], vec![], vec![]);
        let (mut pu, mut pdu) = (vec![], vec![]);
        for _ in 0..n {
            v.push(draw(0.05, 2.0));
            dv.push(draw(-3.0, 3.0));
            u.push(draw(1e-3, 2.0));
            du.push(draw(-3.0, 3.0));
            let beta = draw(0.1, 10.0);
            pu.push(beta * v[v.len() - 1]);
            pdu.push(beta * dv[dv.len() - 1]);
        }
        let d = picone_defect(&u, &du, &v, &dv, p).map_err(err)?;
        let sc = picone_scale(&u, &du, &v, &dv, p);
        for i in 0..n {
            worst_neg = worst_neg.max(-d[i] / sc[i]);
        }
        let d = picone_defect(&pu, &pdu, &v, &dv, p).map_err(err)?;
        let sc = picone_scale(&pu, &pdu, &v, &dv, p);
        for i in 0..n {
            worst_prop = worst_prop.max(d[i].abs() / sc[i]);
        }
    }
    let pass = worst_neg <= 1e-12 && worst_prop <= 1e-13;
    Ok(Verdict::new(pass, format!("min defect/scale {:.3e}; proportional max |defect|/scale {worst_prop:.3e}", -worst_neg)))
}

fn divergence_field(_: &Suite) -> Check {
    let rows = collect(
        matrix3()
            .par_iter()
            .map(|&(p, m, c)| {
                let sol = solve(p, m, c, 1.0, SUITE_GRID)?;
                let prob = &sol.problem;
                let x = eigen_field(&sol).map_err(err)?;
                let bound = div_field_bound(&x, prob).map_err(err)?;
                let lhs = pointwise_div_field_expression(&x, prob);
                let lap = node_plap_radial(&DiscreteField::from_solution(&sol), prob).map_err(err)?;
                let (i0, i1) = collar_range(prob, &sol.grid);
                let mut pointwise = 0.0f64;
                for i in i0..=i1 {
                    let rhs = -lap[i] / sol.omega[i].powf(p - 1.0);
                    let scale = sol.lambda + (p - 1.0) * x.values[i].abs().powf(prob.q());
                    let e = (lhs[i] - rhs).abs() / scale;
                    pointwise = if e.is_nan() { f64::NAN } else { pointwise.max(e) };
                }
                Ok((rel(bound.value, sol.lambda), pointwise, case(p, m, c)))
            })
            .collect(),
    )?;
    let (e, at) = worst(rows.iter().map(|r| (r.0, r.2.clone())));
    let (w, wat) = worst(rows.iter().map(|r| (r.1, r.2.clone())));
    Ok(Verdict::new(
        e <= 1e-4 && w <= 1e-6,
        format!("bound max rel err {e:.3e} at {at}; pointwise identity max scaled err {w:.3e} at {wat}"),
    ))
}

fn monotonicity(_: &Suite) -> Check {
    let mut cases = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for m in [2, 3] {
            for r in [0.8, 1.4] {
                cases.push((p, m, r));
            }
        }
    }
    let rows = collect(
        cases
            .par_iter()
            .map(|&(p, m, r)| {
                let l: Vec<f64> = [-1.0, 0.0, 1.0]
                    .iter()
                    .map(|&c| solve(p, m, c, r, SUITE_GRID).map(|s| s.lambda))
                    .collect::<std::result::Result<_, _>>()?;
                let gap = ((l[0] - l[1]) / l[1]).min((l[1] - l[2]) / l[1]);
                Ok((gap, format!("p={p} m={m} r={r}")))
            })
            .collect(),
    )?;
    let (g, at) = worst(rows.into_iter().map(|(g, l)| (-g, l)));
    Ok(Verdict::new(-g > 0.0, format!("smallest relative gap {:.3e} at {at}; 12 triples", -g)))
}

/// Samples of `t + t³/5` on 65 nodes over `[0, 1.2]`.
fn tabulated_profile() -> std::result::Result<WarpingProfile, String> {
    let t: Vec<f64> = (0..=64).map(|i| 1.2 * i as f64 / 64.0).collect();
    let f: Vec<f64> = t.iter().map(|&t| t + t * t * t / 5.0).collect();
    WarpingProfile::tabulated(t, f).map_err(err)
}

fn cheng(_: &Suite) -> Check {
    let tab = tabulated_profile()?;
    let nodes = verification_nodes(1.0, DEFAULT_VERIFY_NODES);
    let mut cases = Vec::new();
    for p in [2.0, 2.5, 3.0] {
        for m in [2, 3] {
            cases.push((p, m));
        }
    }
    let rows = collect(
        cases
            .par_iter()
            .map(|&(p, m)| {
                let sol = solve(p, m, 0.0, 1.0, SUITE_GRID)?;
                let eta = DiscreteField::from_solution(&sol);
                let cert = |profile: &WarpingProfile| -> std::result::Result<f64, String> {
                    let prob = RadialProblem::ball(p, m, profile.clone(), 1.0).map_err(err)?;
                    Ok(barta_bound(&BartaInput { eta: eta.clone(), problem: prob }).map_err(err)?.value)
                };
                let mut below = Vec::new();
                for (name, profile) in [("hyperbolic", WarpingProfile::space_form(-1.0)), ("tabulated", tab.clone())] {
                    let check = verify_curvature_bound(&profile, 0.0, &nodes);
                    if !check.ok {
                        return Err(format!("{name} profile fails the curvature check at t={}", check.worst_t));
                    }
                    below.push(((sol.lambda - cert(&profile)?) / sol.lambda, format!("{name} p={p} m={m}")));
                }
                let equal = (rel(cert(&WarpingProfile::space_form(0.0))?, sol.lambda), format!("p={p} m={m}"));
                Ok((below, equal))
            })
            .collect(),
    )?;
    let (shortfall, at) = worst(rows.iter().flat_map(|r| r.0.clone()));
    let (eq, eqat) = worst(rows.iter().map(|r| r.1.clone()));
    Ok(Verdict::new(
        shortfall <= 1e-6 && eq <= 1e-6,
        format!("max shortfall (lambda-cert)/lambda {shortfall:.3e} at {at}; flat equality max rel err {eq:.3e} at {eqat}"),
    ))
}

fn critical_radius(_: &Suite) -> Check {
    let mut notes = Vec::new();
    let mut pass = true;
    // p = 2: the restriction inequality holds on the whole ball
    for c in [-1.0, 0.0, 1.0] {
        for m in [2, 3] {
            let rep = compute_r_star(c, &solve(2.0, m, c, 1.0, SUITE_GRID)?).map_err(err)?;
            if rep.r_star != rep.r {
                pass = false;
                notes.push(format!("p=2 m={m} c={c}: r_star={:.6}", rep.r_star));
            }
        }
    }
    let mut sph_margin = f64::INFINITY;
    for p in [3.0, 4.0] {
        let sol = solve(p, 2, 1.0, 1.4, SUITE_GRID)?;
        let rep = compute_r_star(1.0, &sol).map_err(err)?;
        let check = verify_spherical_positivity(&sol).map_err(err)?;
        sph_margin = sph_margin.min(check.margin);
        if rep.r_star != rep.r || !(check.margin > 0.0) {
            pass = false;
            notes.push(format!("c=1 p={p}: r_star={:.6} margin={:.3e}", rep.r_star, check.margin));
        }
    }
    notes.push(format!("spherical margin {sph_margin:.3e}"));
    for c in [0.0, -1.0] {
        let fine = compute_r_star(c, &solve(3.0, 2, c, 1.0, MAX_GRID)?).map_err(err)?;
        let coarse = compute_r_star(c, &solve(3.0, 2, c, 1.0, MAX_GRID / 2)?).map_err(err)?;
        let interior = fine.r_star > 0.0 && fine.r_star < fine.r;
        let max_w = fine
            .grid
            .iter()
            .zip(&fine.w_samples)
            .filter(|(t, _)| **t > 0.0 && **t < fine.r_star)
            .fold(f64::NEG_INFINITY, |a, (_, w)| a.max(w / fine.lambda));
        let cell = fine.r / MAX_GRID as f64;
        let shift = ((fine.r_star - coarse.r_star) / cell).abs();
        let ok = interior && max_w <= TOL_W && shift <= 2.0;
        pass &= ok;
        notes.push(format!(
            "c={c} p=3: r_star={:.6} in (0,r) {interior}, max W/lambda {max_w:.3e}, refinement shift {shift:.1} cells",
            fine.r_star
        ));
    }
    Ok(Verdict::new(pass, notes.join("; ")))
}

fn flat_identity(_: &Suite) -> Check {
    let mut cases = Vec::new();
    for p in [2.5, 3.0] {
        for m in [2, 3] {
            cases.push((p, m));
        }
    }
    let rows = collect(
        cases
            .par_iter()
            .map(|&(p, m)| {
                let sol = solve(p, m, 0.0, 1.0, SUITE_GRID)?;
                let integral = flat_integral(&sol).map_err(err)?;
                let mut sup_l = 0.0f64;
                let mut sup_d = 0.0f64;
                for (i, &t) in sol.grid.iter().enumerate() {
                    let l = lhs_expression(0.0, t, &sol).map_err(err)?;
                    sup_l = sup_l.max(l.abs());
                    sup_d = sup_d.max((integral[i] - l).abs());
                }
                Ok((sup_d / sup_l, format!("p={p} m={m}")))
            })
            .collect(),
    )?;
    let (e, at) = worst(rows);
    Ok(Verdict::new(e <= 1e-4, format!("max sup-relative gap {e:.3e} at {at}")))
}

fn surfaces() -> [RotSurface; 2] {
    [RotSurface::plane(), RotSurface::catenoid()]
}

fn route_agreement_check(_: &Suite) -> Check {
    let mut cases = Vec::new();
    for surface in surfaces() {
        for p in [2.0, 2.5, 3.0, 4.0] {
            cases.push((surface, p));
        }
    }
    let rows = collect(
        cases
            .par_iter()
            .map(|&(surface, p)| {
                let sol = solve(p, 2, 0.0, 1.2, SUITE_GRID)?;
                let band = SurfaceBand::new(surface, 1.2).map_err(err)?;
                let field = transplant(&sol, &band, BAND_GRID).map_err(err)?;
                let e = route_agreement(&field, &surface, p).map_err(err)?;
                Ok((e, format!("{} p={p}", surface.kind)))
            })
            .collect(),
    )?;
    let (e, at) = worst(rows);
    Ok(Verdict::new(e <= 1e-6, format!("max scaled sup difference {e:.3e} at {at}")))
}

fn model_control(_: &Suite) -> Check {
    let mut cases = Vec::new();
    for surface in surfaces() {
        for p in [2.0, 3.0] {
            for r in [1.1, 1.2] {
                cases.push((surface, p, r));
            }
        }
    }
    let rows = collect(
        cases
            .par_iter()
            .map(|&(surface, p, r)| {
                let sol = solve(p, 2, 0.0, r, SUITE_GRID)?;
                let band = SurfaceBand::new(surface, r).map_err(err)?;
                let mc = modelcontrol_check(&surface, &sol, &band, p).map_err(err)?;
                Ok((surface, mc.min_margin / sol.lambda, mc.direct_min_margin / sol.lambda, mc.pass, format!("{} p={p} r={r}", surface.kind)))
            })
            .collect(),
    )?;
    let mut pass = true;
    let mut cat = f64::INFINITY;
    let mut plane = 0.0f64;
    for (surface, margin, direct, ok, _) in &rows {
        if surface.kind == ptone_core::surfaces::SurfaceKind::Plane {
            plane = plane.max(margin.abs()).max(direct.abs());
            pass &= margin.abs() <= 1e-4 && direct.abs() <= 1e-4;
        } else {
            cat = cat.min(*margin);
            pass &= *ok;
        }
    }
    Ok(Verdict::new(pass, format!("catenoid min margin/lambda {cat:.3e}; plane max |margin|/lambda {plane:.3e}")))
}

fn kazdan(_: &Suite) -> Check {
    let rows = collect(
        matrix3()
            .par_iter()
            .map(|&(p, m, c)| {
                let mut devs = Vec::new();
                let mut sandwich = true;
                for n in [SUITE_GRID, 2 * SUITE_GRID, 4 * SUITE_GRID] {
                    let sol = solve(p, m, c, 1.0, n)?;
                    let prob = &sol.problem;
                    let range = collar_range(prob, &sol.grid);
                    let v = kazdan_transform(&DiscreteField::from_solution(&sol)).map_err(err)?;
                    let psi = kazdan_source(&v, prob).map_err(err)?;
                    devs.push(RangeStats::of(&psi, range).max_deviation(sol.lambda) / sol.lambda);
                    if n == SUITE_GRID {
                        let mut phi = DiscreteField::from_fn(&sol.grid, |t| 1.0 - t * t, |t| -2.0 * t).map_err(err)?;
                        let last = phi.values.len() - 1;
                        phi.values[last] = 0.0;
                        let v = kazdan_transform(&phi).map_err(err)?;
                        let st = RangeStats::of(&kazdan_source(&v, prob).map_err(err)?, range);
                        sandwich = st.inf <= sol.lambda && sol.lambda <= st.sup;
                    }
                }
                let ratio = (devs[1] / devs[0]).max(devs[2] / devs[1]);
                Ok((devs[0], ratio, sandwich, case(p, m, c)))
            })
            .collect(),
    )?;
    let (d, dat) = worst(rows.iter().map(|r| (r.0, r.3.clone())));
    let (q, qat) = worst(rows.iter().map(|r| (r.1, r.3.clone())));
    let broken = rows.iter().filter(|r| !r.2).count();
    Ok(Verdict::new(
        d <= 1e-2 && q < 0.6 && broken == 0,
        format!("max |Psi-lambda|/lambda {d:.3e} at {dat}; worst doubling ratio {q:.3} at {qat}; sandwich failures {broken}"),
    ))
}

fn stability_arithmetic(s: &Suite) -> Check {
    let fx = &s.fixtures;
    let a = theorem17_bound(3, 2.0, 0.0, 1.0, 0.0).map_err(err)?.value;
    let b = theorem17_bound(3, 3.0, -1.0, 1.0, 0.5).map_err(err)?.value;
    let mc_err = (a - fx.mean_curvature_flat).abs().max((b - fx.mean_curvature_hyperbolic).abs());
    // (sup‖A‖^p, k, p, λ) → sup‖A‖^p ≤ k^{p−2}λ
    let immersion = [
        (1.0, 1.0, 2.0, 5.78, true),
        (6.0, 1.0, 2.0, 5.78, false),
        (2.0, 0.5, 3.0, 5.0, true),
        (3.0, 0.5, 3.0, 5.0, false),
        (1.0, 0.5, 4.0, 5.0, true),
        (1.5, 0.5, 4.0, 5.0, false),
    ];
    // (A_sup, m, p, r) → A_sup ≤ (m−1)/(pr)
    let meancurv = [
        (2f64.sqrt(), 2, 2.0, 1.2, false),
        (0.4, 2, 2.0, 1.2, true),
        (0.42, 2, 2.0, 1.2, false),
        (0.5, 3, 3.0, 1.0, true),
        (0.7, 3, 3.0, 1.0, false),
        (1.0, 2, 2.0, 0.5, true),
    ];
    let mut mismatches = 0;
    for (a, k, p, l, expect) in immersion {
        mismatches += usize::from(stability_criterion_immersion(a, k, p, l).map_err(err)? != expect);
    }
    for (a, m, p, r, expect) in meancurv {
        mismatches += usize::from(stability_criterion_meancurv(a, m, p, r).map_err(err)?.stable != expect);
    }
    let guards = stability_criterion_immersion(1.0, 0.0, 3.0, 1.0).is_err() && stability_criterion_immersion(1.0, 1.0, 1.5, 1.0).is_err();
    let prob = RadialProblem::space_form_ball(3.0, 2, 0.0, 1.0).map_err(err)?;
    let grid = Grid1D::for_problem(&prob, SUITE_GRID).map_err(err)?;
    let min = minimize_rayleigh(&grid, 3.0, &default_initial(&grid), &MinimizeOptions::default()).map_err(err)?;
    let potential = vec![min.lambda_est; grid.len()];
    let q = stability_functional(&min.u_min, &potential, &grid, 3.0).map_err(err)?;
    let energy = p_energy(&min.u_min, &grid, 3.0).map_err(err)?;
    let qrel = q.abs() / energy;
    Ok(Verdict::new(
        mc_err <= 1e-10 && mismatches == 0 && guards && qrel <= 1e-3,
        format!("mean-curvature bound max abs err {mc_err:.3e}; verdict mismatches {mismatches}; guards {guards}; |Q|/energy {qrel:.3e}"),
    ))
}

/// Runs criteria 1 to 14 once single-threaded and once on the ambient pool.
fn determinism(s: &Suite) -> Check {
    let ids: Vec<u8> = (1..=14).collect();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let t0 = Instant::now();
    let first = single.install(|| run_ids(s, &ids));
    let single_time = t0.elapsed();
    let second = run_ids(s, &ids);
    let a = selftest_table(&first).csv_body().map_err(err)?;
    let b = selftest_table(&second).csv_body().map_err(err)?;
    let same = a == b;
    let fast = single_time <= Duration::from_secs(600);
    Ok(Verdict::new(
        same && fast,
        format!("csv bodies identical {same} ({} bytes); single-threaded run within 600 s {fast}", a.len()),
    ))
}

fn body(id: u8, s: &Suite) -> Check {
    match id {
        1 => closed_forms(s),
        2 => scaling(s),
        3 => cross_validation(s),
        4 => barta_sharpness(s),
        5 => picone(s),
        6 => divergence_field(s),
        7 => monotonicity(s),
        8 => cheng(s),
        9 => critical_radius(s),
        10 => flat_identity(s),
        11 => route_agreement_check(s),
        12 => model_control(s),
        13 => kazdan(s),
        14 => stability_arithmetic(s),
        15 => determinism(s),
        _ => Err(format!("no criterion {id}")),
    }
}

pub fn run_criterion(id: u8, suite: &Suite) -> Outcome {
    let name = Criterion::get(id).map_or("unknown", |c| c.name);
    let t0 = Instant::now();
    let (pass, detail) = match body(id, suite) {
        Ok(v) => (v.pass, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome { id, name, pass, detail, elapsed: t0.elapsed() }
}

fn run_ids(suite: &Suite, ids: &[u8]) -> Vec<Outcome> {
    ids.iter().map(|&id| run_criterion(id, suite)).collect()
}

/// Criteria selected by `filter` (all when `None`), in id order.
pub fn selected(filter: Option<&str>) -> Vec<u8> {
    CRITERIA.iter().filter(|c| filter.is_none_or(|f| c.matches(f))).map(|c| c.id).collect()
}

pub fn run_suite(suite: &Suite, filter: Option<&str>) -> Vec<Outcome> {
    run_ids(suite, &selected(filter))
}

pub fn selftest_table(outcomes: &[Outcome]) -> Table {
    let mut t = Table::new("selftest", &["id", "name", "pass", "detail"]);
    for o in outcomes {
        t.push(vec![(o.id as u32).into(), o.name.into(), o.pass.into(), o.detail.clone().into()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert_eq!(selected(Some("barta")), vec![4, 8]);
        assert_eq!(selected(Some("9")), vec![9]);
        assert_eq!(selected(Some("kazdan")), vec![13]);
        assert_eq!(selected(None).len(), 15);
        assert!(selected(Some("nothing-matches")).is_empty());
    }

    #[test]
    fn fixture_oracles_match_closed_forms() {
        let fx = Fixtures::default();
        assert!((fx.pi_squared - PI * PI).abs() < 1e-14);
        for &(p, v) in &fx.interval {
            let pi_p = 2.0 * PI / (p * (PI / p).sin());
            assert!(((p - 1.0) * (pi_p / 2.0).powf(p) - v).abs() < 1e-13);
        }
        let b = 1.0f64 / 1.0f64.tanh() - 0.5;
        assert!((b.powi(3) / 27.0 - fx.mean_curvature_hyperbolic).abs() < 1e-16);
    }
}
