//! Radial Dirichlet eigenvalue problem by shooting.
//!
//! The radial equation `(w|ω′|^{p−2}ω′)′ + λ w ω^{p−1} = 0`, `w = f^{m−1}`, is
//! integrated in first-order form on the state `(ω, F)`:
//!
//! ```text
//! F′ = w·ω^{p−1},     ω′ = −(λF/w)^{1/(p−1)},
//! ```
//!
//! so that the flux `w|ω′|^{p−2}ω′` equals `−λF`. This form is regular at
//! `ω′ = 0` for every `p > 1`; only the pole needs a series start.

use serde::{Deserialize, Serialize};

use crate::interp::hermite;
use crate::modelspace::WarpingProfile;
use crate::ode::{Integrator, Rhs, Tolerances};
use crate::quad::{gauss8, gauss8_graded, grading_for};
use crate::{spow, Error, Result};

pub const P_MIN: f64 = 1.05;
pub const P_MAX: f64 = 16.0;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 2048;
pub const MAX_GRID: usize = 16384;
pub const MAX_BISECTIONS: usize = 200;
/// Accepted `|ω|` at a Dirichlet endpoint after the final integration.
pub const TOL_BC: f64 = 1e-6;
/// Pole startup interval as a fraction of the radius.
pub const STARTUP_FRACTION: f64 = 1e-4;
const MAX_DOUBLINGS: usize = 60;

/// Radially symmetric domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    Ball { r: f64 },
    Annulus { a: f64, b: f64 },
}

impl Domain {
    pub fn left(&self) -> f64 {
        match *self {
            Domain::Ball { .. } => 0.0,
            Domain::Annulus { a, .. } => a,
        }
    }

    pub fn right(&self) -> f64 {
        match *self {
            Domain::Ball { r } => r,
            Domain::Annulus { b, .. } => b,
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, Domain::Ball { .. })
    }
}

/// Dirichlet eigenvalue problem on a radial domain of a warped model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub p: f64,
    pub m: u32,
    pub profile: WarpingProfile,
    pub domain: Domain,
}

impl RadialProblem {
    pub fn new(p: f64, m: u32, profile: WarpingProfile, domain: Domain) -> Result<Self> {
        if !(P_MIN..=P_MAX).contains(&p) {
            return Err(Error::InvalidInput(format!("p = {p} outside the supported range [{P_MIN}, {P_MAX}]")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("dimension m must be at least 1".into()));
        }
        let (a, b) = (domain.left(), domain.right());
        if !(b > a) || !a.is_finite() || !b.is_finite() || a < 0.0 {
            return Err(Error::InvalidInput(format!("degenerate radial domain [{a}, {b}]")));
        }
        if !profile.contains(b) {
            return Err(Error::Domain(format!(
                "radius {b} outside the profile domain (r_max = {})",
                profile.r_max()
            )));
        }
        if let Domain::Annulus { a, .. } = domain {
            if a == 0.0 && m > 1 {
                return Err(Error::InvalidInput("annulus with inner radius 0 needs m = 1".into()));
            }
        }
        Ok(Self { p, m, profile, domain })
    }

    pub fn ball(p: f64, m: u32, profile: WarpingProfile, r: f64) -> Result<Self> {
        Self::new(p, m, profile, Domain::Ball { r })
    }

    pub fn annulus(p: f64, m: u32, profile: WarpingProfile, a: f64, b: f64) -> Result<Self> {
        Self::new(p, m, profile, Domain::Annulus { a, b })
    }

    /// Geodesic ball of radius `r` in the space form of curvature `c`.
    pub fn space_form_ball(p: f64, m: u32, c: f64, r: f64) -> Result<Self> {
        Self::ball(p, m, WarpingProfile::space_form(c), r)
    }

    /// Conjugate exponent `p/(p−1)`.
    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn sigma(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.domain.right()
    }

    /// Volume density `w = f^{m−1}`.
    pub fn weight(&self, t: f64) -> f64 {
        if self.m == 1 {
            return 1.0;
        }
        let f = self.profile.eval_unchecked(t).0;
        f.powi(self.m as i32 - 1)
    }

    /// `w′/w = (m−1) f′/f`.
    pub fn weight_log_derivative(&self, t: f64) -> f64 {
        if self.m == 1 {
            return 0.0;
        }
        (self.m - 1) as f64 * self.profile.log_derivative(t)
    }

    /// `∫_a^b w`, by 8-point Gauss–Legendre.
    pub fn weight_integral(&self, a: f64, b: f64) -> f64 {
        gauss8(a, b, |t| self.weight(t))
    }

    pub(crate) fn startup_length(&self) -> f64 {
        STARTUP_FRACTION * self.radius()
    }

    /// Series state `(ω, F)` at `t ≤ t₀` near the pole.
    pub(crate) fn pole_state(&self, lambda: f64, t: f64) -> [f64; 2] {
        if t == 0.0 {
            return [1.0, 0.0];
        }
        let (p, m, s, q) = (self.p, self.m as f64, self.sigma(), self.q());
        let t0 = self.startup_length();
        let beta = if self.m == 1 {
            0.0
        } else {
            (self.profile.ratio_to_flat(t0).powi(self.m as i32 - 1) - 1.0) / (t0 * t0)
        };
        let lm = (lambda / m).powf(s);
        let a = (p - 1.0) / p * lm;
        let f = t.powf(m) / m + beta * t.powf(m + 2.0) / (m + 2.0) - (p - 1.0) * a * t.powf(m + q) / (m + q);
        let omega = 1.0
            - lm * (t.powf(s + 1.0) / (s + 1.0)
                - 2.0 * s * beta * t.powf(s + 3.0) / ((m + 2.0) * (s + 3.0))
                - s * (p - 1.0) * a * m * t.powf(s + 1.0 + q) / ((m + q) * (s + 1.0 + q)));
        [omega, f]
    }

    /// `ω′` from the state; zero at the pole.
    pub fn omega_prime(&self, lambda: f64, t: f64, flux: f64) -> f64 {
        if self.domain.is_ball() && t == 0.0 {
            return 0.0;
        }
        -spow(lambda * flux / self.weight(t), self.sigma())
    }

    /// `ω″` from the first-order system, without dividing by `|ω′|^{p−2}`.
    pub fn omega_second(&self, lambda: f64, t: f64, omega: f64, flux: f64) -> f64 {
        let w = self.weight(t);
        let x = lambda * flux / w;
        let s = self.sigma();
        let dx = lambda * (spow(omega, self.p - 1.0) - flux / w * self.weight_log_derivative(t));
        -s * x.abs().powf(s - 1.0) * dx
    }

    fn initial(&self, lambda: f64) -> (f64, [f64; 2]) {
        match self.domain {
            Domain::Ball { .. } => {
                let t0 = self.startup_length();
                (t0, self.pole_state(lambda, t0))
            }
            Domain::Annulus { a, .. } => (a, [0.0, -1.0 / lambda]),
        }
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { h_max: (self.domain.right() - self.domain.left()) / 32.0, rtol: 1e-12, atol: 1e-13 }
    }
}

struct Shooting<'a> {
    prob: &'a RadialProblem,
    lambda: f64,
}

impl Rhs for Shooting<'_> {
    fn eval(&self, t: f64, y: [f64; 2]) -> [f64; 2] {
        let w = self.prob.weight(t);
        let omp = -spow(self.lambda * y[1] / w, self.prob.sigma());
        let fp = w * spow(y[0], self.prob.p - 1.0);
        [omp, fp]
    }
}

/// Result of one shooting integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub omega: Vec<f64>,
    pub omega_prime: Vec<f64>,
    pub flux: Vec<f64>,
    /// First zero of `ω`, when one occurs before the right endpoint.
    pub first_zero: Option<f64>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("trial eigenvalue must be positive, got {lambda}")));
    }
    Ok(())
}

fn shoot_zero(prob: &RadialProblem, lambda: f64, t_end: f64) -> Result<Option<f64>> {
    let rhs = Shooting { prob, lambda };
    let (t0, y0) = prob.initial(lambda);
    let h0 = (t_end - t0).min(prob.radius()) * 1e-3;
    let mut it = Integrator::new(&rhs, t0, y0, h0, prob.tolerances());
    let tol_t = 1e-12 * prob.radius();
    Ok(it.advance_to(t_end, Some(tol_t))?.map(|c| c.t))
}

/// Integrates the initial value problem at a trial `λ` from the pole (ball)
/// or from the inner radius with `ω(a) = 0` and unit flux (annulus).
///
/// The search for a zero runs a relative `1e−6` past the right endpoint,
/// so a zero sitting on the endpoint is still reported.
pub fn integrate_profile(problem: &RadialProblem, lambda: f64) -> Result<Trajectory> {
    check_lambda(lambda)?;
    let prob = problem;
    let right = prob.radius();
    let mut t_end = right * (1.0 + 1e-6);
    if !prob.profile.contains(t_end) {
        t_end = right;
    }
    let rhs = Shooting { prob, lambda };
    let (t0, y0) = prob.initial(lambda);
    let mut it = Integrator::new(&rhs, t0, y0, (t_end - t0) * 1e-3, prob.tolerances()).recording();
    let crossing = it.advance_to(t_end, Some(1e-12 * right))?;
    let mut pts = Vec::new();
    if prob.domain.is_ball() {
        pts.push((0.0, [1.0, 0.0]));
    }
    pts.extend(it.record.take().unwrap_or_default());
    if let Some(c) = crossing {
        pts.push((c.t, c.y));
    }
    let mut traj = Trajectory {
        grid: Vec::with_capacity(pts.len()),
        omega: Vec::with_capacity(pts.len()),
        omega_prime: Vec::with_capacity(pts.len()),
        flux: Vec::with_capacity(pts.len()),
        first_zero: crossing.map(|c| c.t),
    };
    for (t, y) in pts {
        traj.grid.push(t);
        traj.omega.push(y[0]);
        traj.omega_prime.push(prob.omega_prime(lambda, t, y[1]));
        traj.flux.push(y[1]);
    }
    Ok(traj)
}

/// Options for the eigenvalue solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Relative tolerance on `λ`.
    pub tol: f64,
    /// Number of uniform intervals of the output grid.
    pub grid_intervals: usize,
    pub max_bisections: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, grid_intervals: DEFAULT_GRID, max_bisections: MAX_BISECTIONS }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn grid(mut self, n: usize) -> Self {
        self.grid_intervals = n;
        self
    }
}

/// A solved radial eigenpair sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub problem: RadialProblem,
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub omega: Vec<f64>,
    pub omega_prime: Vec<f64>,
    /// `F(t) = ∫ f^{m−1} ω^{p−1}` from the left end; the flux is `−λF`.
    pub flux: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Point values from [`RadialSolution::eval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub omega: f64,
    pub omega_prime: f64,
    pub omega_second: f64,
    pub flux: f64,
}

impl RadialSolution {
    pub fn p(&self) -> f64 {
        self.problem.p
    }

    pub fn m(&self) -> u32 {
        self.problem.m
    }

    pub fn radius(&self) -> f64 {
        self.problem.radius()
    }

    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    /// Solution at an arbitrary `t`, by integrating the system from the
    /// nearest grid node at or below `t` (series start near the pole).
    pub fn eval(&self, t: f64) -> Result<PointValue> {
        let prob = &self.problem;
        let (a, b) = (prob.domain.left(), prob.domain.right());
        if !(t >= a && t <= b) {
            return Err(Error::Domain(format!("t = {t} outside the solution domain [{a}, {b}]")));
        }
        let n = self.intervals();
        let h = (b - a) / n as f64;
        let i = (((t - a) / h).floor() as usize).min(n);
        let lambda = self.lambda;
        let t0 = prob.startup_length();
        let state = if t == self.grid[i] {
            [self.omega[i], self.flux[i]]
        } else if prob.domain.is_ball() && t <= t0 {
            prob.pole_state(lambda, t)
        } else {
            let (ts, ys) = if prob.domain.is_ball() && self.grid[i] < t0 {
                (t0, prob.pole_state(lambda, t0))
            } else {
                (self.grid[i], [self.omega[i], self.flux[i]])
            };
            let rhs = Shooting { prob, lambda };
            if t - ts <= 1e-12 * (b - a) {
                // within rounding of a node: one Euler step is exact to O(δ²)
                let d = rhs.eval(ts, ys);
                [ys[0] + (t - ts) * d[0], ys[1] + (t - ts) * d[1]]
            } else {
                let mut it = Integrator::new(&rhs, ts, ys, t - ts, prob.tolerances());
                it.advance_to(t, None)?;
                it.y
            }
        };
        let omega_prime = prob.omega_prime(lambda, t, state[1]);
        let omega_second = if prob.domain.is_ball() && t == 0.0 {
            if prob.p == 2.0 {
                -lambda / prob.m as f64
            } else if prob.p < 2.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            prob.omega_second(lambda, t, state[0], state[1])
        };
        Ok(PointValue { omega: state[0], omega_prime, omega_second, flux: state[1] })
    }
}

fn bracket_start(prob: &RadialProblem) -> f64 {
    let r = prob.radius();
    let floor = 1e-3 / r.powf(prob.p);
    let barta = crate::bounds::trial_profile_barta(prob, 256).unwrap_or(0.0);
    let lo = 0.5 * barta;
    if lo.is_finite() && lo > floor {
        lo
    } else {
        floor
    }
}

fn solve_eigenvalue(problem: &RadialProblem, opts: &SolveOptions) -> Result<RadialSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if opts.grid_intervals < 17 || opts.grid_intervals > MAX_GRID {
        return Err(Error::InvalidInput(format!(
            "grid size {} outside [17, {MAX_GRID}]",
            opts.grid_intervals
        )));
    }
    let prob = problem;
    let right = prob.radius();
    let zero_before = |lam: f64| -> Result<bool> { Ok(shoot_zero(prob, lam, right)?.is_some()) };

    let mut lo = bracket_start(prob);
    let mut guard = 0;
    while zero_before(lo)? {
        lo *= 0.5;
        guard += 1;
        if guard > MAX_DOUBLINGS {
            return Err(Error::NonConvergence("could not find a lower bracket for lambda".into()));
        }
    }
    let mut hi = 2.0 * lo;
    let mut doublings = 0;
    while !zero_before(hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::NonConvergence("no zero before the boundary after 60 doublings".into()));
        }
    }
    let mut iterations = 0;
    while hi - lo > opts.tol * lo {
        if iterations >= opts.max_bisections {
            return Err(Error::NonConvergence(format!(
                "bisection did not reach relative tolerance {} in {} steps",
                opts.tol, opts.max_bisections
            )));
        }
        let mid = 0.5 * (lo + hi);
        if zero_before(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let lambda = 0.5 * (lo + hi);
    let mut sol = sample_on_grid(prob, lambda, opts.grid_intervals)?;
    sol.iterations = iterations;
    sol.residual = eigen_equation_residual(&sol);
    Ok(sol)
}

fn sample_on_grid(prob: &RadialProblem, lambda: f64, n: usize) -> Result<RadialSolution> {
    let (a, b) = (prob.domain.left(), prob.domain.right());
    let grid: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
    let mut omega = Vec::with_capacity(n + 1);
    let mut flux = Vec::with_capacity(n + 1);
    let rhs = Shooting { prob, lambda };
    let (t0, y0) = prob.initial(lambda);
    let mut it = Integrator::new(&rhs, t0, y0, (b - a) / n as f64, prob.tolerances());
    for &t in &grid {
        let y = if prob.domain.is_ball() && t <= t0 {
            prob.pole_state(lambda, t)
        } else {
            it.advance_to(t, None)?;
            it.y
        };
        omega.push(y[0]);
        flux.push(y[1]);
    }
    if omega[n].abs() > TOL_BC * omega.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) {
        return Err(Error::NonConvergence(format!(
            "boundary value omega({b}) = {:e} exceeds tolerance",
            omega[n]
        )));
    }
    omega[n] = 0.0;
    if !prob.domain.is_ball() {
        omega[0] = 0.0;
        let peak = omega.iter().fold(0.0f64, |acc, v| acc.max(*v));
        let scale_f = peak.powf(-(prob.p - 1.0));
        for v in omega.iter_mut() {
            *v /= peak;
        }
        for v in flux.iter_mut() {
            *v *= scale_f;
        }
    }
    let omega_prime = grid.iter().zip(&flux).map(|(&t, &f)| prob.omega_prime(lambda, t, f)).collect();
    Ok(RadialSolution {
        problem: prob.clone(),
        lambda,
        grid,
        omega,
        omega_prime,
        flux,
        residual: f64::NAN,
        iterations: 0,
    })
}

/// First Dirichlet eigenpair of a geodesic ball with `ω(0) = 1`.
pub fn solve_ball_eigenvalue(problem: &RadialProblem, tol: f64) -> Result<RadialSolution> {
    solve_ball_eigenvalue_with(problem, &SolveOptions::with_tol(tol))
}

pub fn solve_ball_eigenvalue_with(problem: &RadialProblem, opts: &SolveOptions) -> Result<RadialSolution> {
    if !problem.domain.is_ball() {
        return Err(Error::InvalidInput("solve_ball_eigenvalue needs a ball domain".into()));
    }
    solve_eigenvalue(problem, opts)
}

/// First Dirichlet eigenpair of an annulus, normalized to `max ω = 1`.
pub fn solve_annulus_eigenvalue(problem: &RadialProblem, tol: f64) -> Result<RadialSolution> {
    solve_annulus_eigenvalue_with(problem, &SolveOptions::with_tol(tol))
}

pub fn solve_annulus_eigenvalue_with(problem: &RadialProblem, opts: &SolveOptions) -> Result<RadialSolution> {
    if problem.domain.is_ball() {
        return Err(Error::InvalidInput("solve_annulus_eigenvalue needs an annulus domain".into()));
    }
    solve_eigenvalue(problem, opts)
}

/// Scaled sup-norm residual of the eigen-equation on interior nodes.
///
/// At node `i` the equation is integrated over `[t_{i−1}, t_{i+1}]`:
/// `G_{i+1} − G_{i−1} + λ∫w ω^{p−1}` with nodal fluxes `G = w|ω′|^{p−2}ω′`,
/// normalized by `λ·∫w·max|ω|^{p−1}`. Between nodes `ω` is the cubic
/// Hermite interpolant of `(ω, ω′)`, except on the cell touching the pole,
/// where the series/ODE evaluation replaces it.
pub fn eigen_equation_residual(solution: &RadialSolution) -> f64 {
    let prob = &solution.problem;
    let n = solution.intervals();
    if n < 17 {
        return f64::NAN;
    }
    let p = prob.p;
    let lambda = solution.lambda;
    let g = &solution.grid;
    let om = &solution.omega;
    let dom = &solution.omega_prime;
    let peak = om.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).powf(p - 1.0);
    let mut cell_mass = vec![0.0; n];
    let mut cell_vol = vec![0.0; n];
    for c in 0..n {
        let (a, b) = (g[c], g[c + 1]);
        cell_vol[c] = prob.weight_integral(a, b);
        let boundary_cell = (c == n - 1 || (c == 0 && !prob.domain.is_ball())) && p < 2.0;
        cell_mass[c] = if boundary_cell {
            gauss8_graded(a, b, c == n - 1, grading_for(p), |t| {
                let (v, _) = hermite(a, b, om[c], om[c + 1], dom[c], dom[c + 1], t);
                prob.weight(t) * spow(v, p - 1.0)
            })
        } else if c == 0 && prob.domain.is_ball() {
            gauss8(a, b, |t| {
                let v = solution.eval(t).map(|pv| pv.omega).unwrap_or(f64::NAN);
                prob.weight(t) * spow(v, p - 1.0)
            })
        } else {
            gauss8(a, b, |t| {
                let (v, _) = hermite(a, b, om[c], om[c + 1], dom[c], dom[c + 1], t);
                prob.weight(t) * spow(v, p - 1.0)
            })
        };
    }
    let flux: Vec<f64> = (0..=n).map(|i| prob.weight(g[i]) * spow(dom[i], p - 1.0)).collect();
    let mut worst = 0.0f64;
    for i in 1..n {
        let defect = flux[i + 1] - flux[i - 1] + lambda * (cell_mass[i - 1] + cell_mass[i]);
        let scale = lambda * (cell_vol[i - 1] + cell_vol[i]) * peak;
        let r = (defect / scale).abs();
        if r.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(r);
    }
    worst
}

/// `r^{−p}·λ(B₁)`, valid for flat profiles only.
pub fn scaled_eigenvalue(lambda_unit: f64, r: f64, p: f64, profile: &WarpingProfile) -> Result<f64> {
    if !profile.is_flat() {
        return Err(Error::InvalidInput("eigenvalue scaling holds only for the flat profile".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    Ok(r.powf(-p) * lambda_unit)
}

/// `(p−1)(π_p/(2r))^p`, the first eigenvalue of `(−r, r)`, with
/// `π_p = 2π/(p sin(π/p))`.
pub fn interval_eigenvalue(p: f64, r: f64) -> f64 {
    let pi_p = 2.0 * std::f64::consts::PI / (p * (std::f64::consts::PI / p).sin());
    (p - 1.0) * (pi_p / (2.0 * r)).powf(p)
}
