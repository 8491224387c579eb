//! Lower-bound certificates and identities for the radial p-Laplacian.
//!
//! Discrete operators are finite-volume: at node `i` the divergence of a
//! radial flux `G` is `(G_{i+1} − G_{i−1})/∫_{t_{i−1}}^{t_{i+1}} w` when the
//! field carries nodal slopes, and the staggered
//! `(G_{i+1/2} − G_{i−1/2})/∫_{t_{i−1/2}}^{t_{i+1/2}} w` when it does not.
//! The Barta quotient divides the same flux difference by the cell integral of
//! `w η^{p−1}`, so it is a `wη^{p−1}`-weighted average of the pointwise
//! quotient over the cell.

use serde::{Deserialize, Serialize};

use crate::interp::hermite;
use crate::modelspace::{cot_c, s_c, s_c_prime};
use crate::quad::gauss8;
use crate::radial::{RadialProblem, RadialSolution};
use crate::rayleigh::{p_energy, Grid1D};
use crate::{spow, Error, Result};

/// Boundary layers dropped next to each Dirichlet endpoint.
pub const BOUNDARY_LAYERS: usize = 2;
/// Relative collar kept away from Dirichlet endpoints for quantities that
/// blow up there (Kazdan–Kramer source, pointwise field identity).
pub const COLLAR: f64 = 0.1;

/// Samples of a radial function with optional exact nodal slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteField {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Option<Vec<f64>>,
}

impl DiscreteField {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 3 {
            return Err(Error::InvalidInput("field and grid lengths differ or are too short".into()));
        }
        Ok(Self { grid, values, slopes: None })
    }

    pub fn with_slopes(grid: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if slopes.len() != grid.len() {
            return Err(Error::InvalidInput("slope array length differs from grid".into()));
        }
        let mut f = Self::new(grid, values)?;
        f.slopes = Some(slopes);
        Ok(f)
    }

    /// Samples `f` and `f′` on `grid`.
    pub fn from_fn(grid: &[f64], f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Result<Self> {
        Self::with_slopes(grid.to_vec(), grid.iter().map(|&t| f(t)).collect(), grid.iter().map(|&t| df(t)).collect())
    }

    /// The eigenfunction `ω` with slopes `ω′`.
    pub fn from_solution(sol: &RadialSolution) -> Self {
        Self {
            grid: sol.grid.clone(),
            values: sol.omega.clone(),
            slopes: Some(sol.omega_prime.clone()),
        }
    }

    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    /// `β·self`, slopes included.
    pub fn scaled(&self, beta: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| beta * v).collect(),
            slopes: self.slopes.as_ref().map(|s| s.iter().map(|v| beta * v).collect()),
        }
    }
}

/// Inclusive node range `[i0, i1]` used for infima and suprema: the pole
/// node and `BOUNDARY_LAYERS` nodes next to each Dirichlet endpoint are left
/// out.
pub fn evaluation_range(problem: &RadialProblem, intervals: usize) -> (usize, usize) {
    let n = intervals;
    let start = if problem.domain.is_ball() { 1 } else { 1 + BOUNDARY_LAYERS };
    (start, n - 1 - BOUNDARY_LAYERS)
}

/// [`evaluation_range`] further restricted to nodes at relative distance at
/// least `COLLAR` from both ends of the radial interval. The pole is
/// excluded too: for `p ≠ 2` the profile is not smooth there.
pub fn collar_range(problem: &RadialProblem, grid: &[f64]) -> (usize, usize) {
    let n = grid.len() - 1;
    let (mut i0, mut i1) = evaluation_range(problem, n);
    let (a, b) = (problem.domain.left(), problem.domain.right());
    let len = b - a;
    while i1 > i0 && grid[i1] > b - COLLAR * len {
        i1 -= 1;
    }
    while i0 < i1 && grid[i0] < a + COLLAR * len {
        i0 += 1;
    }
    (i0, i1)
}

fn check_grid(field: &DiscreteField, problem: &RadialProblem) -> Result<()> {
    let n = field.intervals();
    if n < 10 {
        return Err(Error::InvalidInput("field needs at least 8 interior nodes".into()));
    }
    let (a, b) = (problem.domain.left(), problem.domain.right());
    let g = &field.grid;
    if (g[0] - a).abs() > 1e-12 * b || (g[n] - b).abs() > 1e-12 * b {
        return Err(Error::InvalidInput(format!("field grid [{}, {}] does not span the domain [{a}, {b}]", g[0], g[n])));
    }
    Ok(())
}

/// Nodal fluxes `w φ(η′)` (slopes) or midpoint fluxes (no slopes; length n).
fn fluxes(field: &DiscreteField, problem: &RadialProblem) -> Vec<f64> {
    let p = problem.p;
    let g = &field.grid;
    match &field.slopes {
        Some(s) => g.iter().zip(s).map(|(&t, &d)| problem.weight(t) * spow(d, p - 1.0)).collect(),
        None => (0..g.len() - 1)
            .map(|j| {
                let h = g[j + 1] - g[j];
                let d = (field.values[j + 1] - field.values[j]) / h;
                problem.weight(0.5 * (g[j] + g[j + 1])) * spow(d, p - 1.0)
            })
            .collect(),
    }
}

/// `Δ_p η` at each node; `NaN` where the stencil does not fit.
pub fn discrete_plap_radial(eta: &DiscreteField, problem: &RadialProblem) -> Result<Vec<f64>> {
    check_grid(eta, problem)?;
    let n = eta.intervals();
    let g = &eta.grid;
    let flux = fluxes(eta, problem);
    let mut out = vec![f64::NAN; n + 1];
    for i in 1..n {
        out[i] = match eta.slopes {
            Some(_) => (flux[i + 1] - flux[i - 1]) / problem.weight_integral(g[i - 1], g[i + 1]),
            None => {
                let (lo, hi) = (0.5 * (g[i - 1] + g[i]), 0.5 * (g[i] + g[i + 1]));
                (flux[i] - flux[i - 1]) / problem.weight_integral(lo, hi)
            }
        };
    }
    Ok(out)
}

/// Pointwise `Δ_p η` at the nodes from the nodal fluxes `wφ(η′)`; needs
/// slopes. `NaN` where the stencil does not fit.
pub fn node_plap_radial(eta: &DiscreteField, problem: &RadialProblem) -> Result<Vec<f64>> {
    check_grid(eta, problem)?;
    if eta.slopes.is_none() {
        return Err(Error::InvalidInput("pointwise p-Laplacian needs nodal slopes".into()));
    }
    Ok(node_divergence(&fluxes(eta, problem), &eta.grid, problem))
}

/// Input of the Barta certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct BartaInput {
    pub eta: DiscreteField,
    pub problem: RadialProblem,
}

/// Kind of lower-bound certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Barta,
    DivField,
    DivSup,
    Theorem17,
}

/// A lower bound on the first eigenvalue with the node range it was taken over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub kind: CertificateKind,
    pub value: f64,
    /// Short description of the test function or field.
    pub witness: String,
    pub evaluation_range: (usize, usize),
    /// Node where the infimum was attained.
    pub argmin: usize,
    /// True when the certificate degenerates to the trivial bound.
    pub vacuous: bool,
}

/// Pointwise Barta quotients `−Δ_pη/η^{p−1}` (cell-averaged form); `NaN`
/// outside the stencil.
pub fn barta_ratios(input: &BartaInput) -> Result<Vec<f64>> {
    let eta = &input.eta;
    let problem = &input.problem;
    check_grid(eta, problem)?;
    let p = problem.p;
    let n = eta.intervals();
    let g = &eta.grid;
    let v = &eta.values;
    let flux = fluxes(eta, problem);
    let mut out = vec![f64::NAN; n + 1];
    match &eta.slopes {
        Some(s) => {
            let cell: Vec<f64> = (0..n)
                .map(|c| {
                    let (a, b) = (g[c], g[c + 1]);
                    gauss8(a, b, |t| {
                        let (h, _) = hermite(a, b, v[c], v[c + 1], s[c], s[c + 1], t);
                        problem.weight(t) * h.abs().powf(p - 1.0)
                    })
                })
                .collect();
            for i in 1..n {
                out[i] = -(flux[i + 1] - flux[i - 1]) / (cell[i - 1] + cell[i]);
            }
        }
        None => {
            for i in 1..n {
                let (lo, hi) = (0.5 * (g[i - 1] + g[i]), 0.5 * (g[i] + g[i + 1]));
                let lin = |t: f64| -> f64 {
                    let j = if t < g[i] { i - 1 } else { i };
                    let s = (t - g[j]) / (g[j + 1] - g[j]);
                    v[j] + s * (v[j + 1] - v[j])
                };
                let den = gauss8(lo, g[i], |t| problem.weight(t) * lin(t).abs().powf(p - 1.0))
                    + gauss8(g[i], hi, |t| problem.weight(t) * lin(t).abs().powf(p - 1.0));
                out[i] = -(flux[i] - flux[i - 1]) / den;
            }
        }
    }
    Ok(out)
}

/// `inf(−Δ_pη/η^{p−1})` over the evaluation set.
pub fn barta_bound(input: &BartaInput) -> Result<BoundCertificate> {
    let n = input.eta.intervals();
    let (i0, i1) = evaluation_range(&input.problem, n);
    for i in i0..=i1 {
        if !(input.eta.values[i] > 0.0) {
            return Err(Error::InvalidInput(format!("test function not positive at node {i}")));
        }
    }
    let ratios = barta_ratios(input)?;
    let (argmin, value) = infimum(&ratios, i0, i1);
    Ok(BoundCertificate {
        kind: CertificateKind::Barta,
        value,
        witness: "test function".into(),
        evaluation_range: (i0, i1),
        argmin,
        vacuous: value <= 0.0,
    })
}

fn infimum(v: &[f64], i0: usize, i1: usize) -> (usize, f64) {
    let mut best = (i0, f64::INFINITY);
    for (i, &x) in v.iter().enumerate().take(i1 + 1).skip(i0) {
        if x.is_nan() {
            return (i, f64::NAN);
        }
        if x < best.1 {
            best = (i, x);
        }
    }
    best
}

/// Cosine (ball) or sine (annulus) trial profile vanishing on the boundary.
pub fn trial_profile(problem: &RadialProblem, n: usize) -> DiscreteField {
    let (a, b) = (problem.domain.left(), problem.domain.right());
    let grid: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
    let mut field = if problem.domain.is_ball() {
        let k = std::f64::consts::FRAC_PI_2 / b;
        DiscreteField::from_fn(&grid, |t| (k * t).cos(), |t| -k * (k * t).sin())
    } else {
        let k = std::f64::consts::PI / (b - a);
        DiscreteField::from_fn(&grid, |t| (k * (t - a)).sin(), |t| k * (k * (t - a)).cos())
    }
    .expect("grid length is fixed");
    let last = field.values.len() - 1;
    field.values[last] = 0.0;
    if !problem.domain.is_ball() {
        field.values[0] = 0.0;
    }
    field
}

pub(crate) fn trial_profile_barta(problem: &RadialProblem, n: usize) -> Result<f64> {
    let input = BartaInput { eta: trial_profile(problem, n), problem: problem.clone() };
    Ok(barta_bound(&input)?.value)
}

/// Pointwise Picone defect
/// `|u′|^p + (p−1)(u/v)^p|v′|^p − p(u/v)^{p−1}|v′|^{p−2}u′v′`.
pub fn picone_defect(u: &[f64], du: &[f64], v: &[f64], dv: &[f64], p: f64) -> Result<Vec<f64>> {
    let n = u.len();
    if du.len() != n || v.len() != n || dv.len() != n {
        return Err(Error::InvalidInput("Picone arrays must have equal length".into()));
    }
    if !(p > 1.0) {
        return Err(Error::InvalidInput(format!("p = {p} must exceed 1")));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if !(v[i] > 0.0) {
            return Err(Error::InvalidInput(format!("v must be positive, v[{i}] = {}", v[i])));
        }
        if u[i] < 0.0 {
            return Err(Error::InvalidInput(format!("u must be nonnegative, u[{i}] = {}", u[i])));
        }
        let ratio = u[i] / v[i];
        let gv = dv[i].abs();
        out.push(
            du[i].abs().powf(p) + (p - 1.0) * ratio.powf(p) * gv.powf(p)
                - p * ratio.powf(p - 1.0) * spow(dv[i], p - 1.0) * du[i],
        );
    }
    Ok(out)
}

/// Natural size of each Picone term, `max(|u′|^p, (u/v)^p|v′|^p)`.
pub fn picone_scale(u: &[f64], du: &[f64], v: &[f64], dv: &[f64], p: f64) -> Vec<f64> {
    (0..u.len())
        .map(|i| du[i].abs().powf(p).max((u[i] / v[i]).powf(p) * dv[i].abs().powf(p)))
        .collect()
}

/// Radial vector field `X(t)∂_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialField {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// `X = −|ω′|^{p−2}ω′/ω^{p−1}`; `NaN` where `ω` vanishes.
pub fn eigen_field(solution: &RadialSolution) -> Result<RadialField> {
    let prob = &solution.problem;
    let p = prob.p;
    let values = solution
        .grid
        .iter()
        .zip(solution.omega.iter().zip(&solution.flux))
        .map(|(&t, (&om, &f))| {
            if om <= 0.0 {
                f64::NAN
            } else if prob.domain.is_ball() && t == 0.0 {
                0.0
            } else {
                solution.lambda * f / (prob.weight(t) * om.powf(p - 1.0))
            }
        })
        .collect();
    Ok(RadialField { grid: solution.grid.clone(), values })
}

/// `div X = (wX)′/w` by centered differences over two cells.
pub fn divergence(x: &RadialField, problem: &RadialProblem) -> Vec<f64> {
    let g = &x.grid;
    let n = g.len() - 1;
    let wx = weighted(x, problem);
    let mut out = vec![f64::NAN; n + 1];
    for i in 1..n {
        out[i] = (wx[i + 1] - wx[i - 1]) / problem.weight_integral(g[i - 1], g[i + 1]);
    }
    out
}

/// Pointwise `div X` at the nodes, fourth order in the interior. Sharper
/// than [`divergence`] away from the Dirichlet boundary, unreliable next to
/// it where `X` blows up.
pub fn pointwise_divergence(x: &RadialField, problem: &RadialProblem) -> Vec<f64> {
    node_divergence(&weighted(x, problem), &x.grid, problem)
}

fn weighted(x: &RadialField, problem: &RadialProblem) -> Vec<f64> {
    x.grid.iter().zip(&x.values).map(|(&t, &v)| problem.weight(t) * v).collect()
}

/// `(wY)′/w` at the nodes from nodal values of `wY`. Fourth-order centered
/// differences where the five-point stencil is uniform and finite, the
/// cell average `[wY]/∫w` over two cells elsewhere.
fn node_divergence(wy: &[f64], g: &[f64], problem: &RadialProblem) -> Vec<f64> {
    let n = g.len() - 1;
    // wY has parity (−1)^m through the pole, which supplies ghost values there
    let pole = problem.domain.is_ball() && g[0] == 0.0;
    let parity = if problem.m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let at = |j: isize| -> f64 {
        if j < 0 {
            parity * wy[(-j) as usize]
        } else {
            wy[j as usize]
        }
    };
    let mut out = vec![f64::NAN; n + 1];
    for i in 1..n {
        let lo = if pole { 0 } else { i.saturating_sub(2) };
        let wide = (pole || i >= 2)
            && i + 2 <= n
            && (0..5).all(|k| at(i as isize - 2 + k).is_finite())
            && {
                let h = g[i + 1] - g[i];
                g[lo..=i + 2].windows(2).all(|c| ((c[1] - c[0]) - h).abs() <= 1e-9 * h)
            };
        let w = problem.weight(g[i]);
        out[i] = if wide && w > 0.0 {
            let h = g[i + 1] - g[i];
            let j = i as isize;
            (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h) / w
        } else {
            (wy[i + 1] - wy[i - 1]) / problem.weight_integral(g[i - 1], g[i + 1])
        };
    }
    out
}

/// `(1−p)|X|^q + div X` at each node, with the cell-averaged divergence.
pub fn div_field_expression(x: &RadialField, problem: &RadialProblem) -> Vec<f64> {
    add_source(x, problem, divergence(x, problem))
}

/// [`div_field_expression`] with [`pointwise_divergence`].
pub fn pointwise_div_field_expression(x: &RadialField, problem: &RadialProblem) -> Vec<f64> {
    add_source(x, problem, pointwise_divergence(x, problem))
}

fn add_source(x: &RadialField, problem: &RadialProblem, div: Vec<f64>) -> Vec<f64> {
    let q = problem.q();
    div.iter().zip(&x.values).map(|(d, v)| (1.0 - problem.p) * v.abs().powf(q) + d).collect()
}

fn check_field(x: &RadialField, problem: &RadialProblem) -> Result<()> {
    let f = DiscreteField { grid: x.grid.clone(), values: x.values.clone(), slopes: None };
    check_grid(&f, problem)
}

/// `inf((1−p)|X|^q + div X)` over the evaluation set.
pub fn div_field_bound(x: &RadialField, problem: &RadialProblem) -> Result<BoundCertificate> {
    check_field(x, problem)?;
    let (i0, i1) = evaluation_range(problem, x.grid.len() - 1);
    if x.values[i0..=i1].iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("vector field not finite on the evaluation set".into()));
    }
    let expr = div_field_expression(x, problem);
    let (argmin, value) = infimum(&expr, i0, i1);
    Ok(BoundCertificate {
        kind: CertificateKind::DivField,
        value,
        witness: "radial vector field".into(),
        evaluation_range: (i0, i1),
        argmin,
        vacuous: value <= 0.0,
    })
}

/// `(1/p^p)(inf div X/‖X‖_∞)^p`; vacuous (value 0) when `inf div X ≤ 0`.
pub fn div_sup_bound(x: &RadialField, problem: &RadialProblem) -> Result<BoundCertificate> {
    check_field(x, problem)?;
    let (i0, i1) = evaluation_range(problem, x.grid.len() - 1);
    let div = divergence(x, problem);
    let (argmin, inf_div) = infimum(&div, i0, i1);
    let sup = x.values[i0..=i1].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !sup.is_finite() || inf_div.is_nan() {
        return Err(Error::InvalidInput("vector field not finite on the evaluation set".into()));
    }
    let p = problem.p;
    let (value, vacuous) = if inf_div > 0.0 && sup > 0.0 {
        ((inf_div / sup).powf(p) / p.powf(p), false)
    } else {
        (0.0, true)
    };
    Ok(BoundCertificate {
        kind: CertificateKind::DivSup,
        value,
        witness: "radial vector field".into(),
        evaluation_range: (i0, i1),
        argmin,
        vacuous,
    })
}

/// Mean-curvature lower bound `(1/p^p)((m−2)cot_c(r) − h)^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem17Bound {
    pub value: f64,
    pub admissible: bool,
    pub bracket: f64,
    /// Largest radius at which the bracket is still positive.
    pub bracket_radius: f64,
    /// `(S_c/S_c′)(h/(m−2))`, the radius condition read as a function value;
    /// `None` when undefined.
    pub function_reading_radius: Option<f64>,
}

pub fn theorem17_bound(m: u32, p: f64, c: f64, r: f64, h: f64) -> Result<Theorem17Bound> {
    if m < 2 {
        return Err(Error::InvalidInput("mean-curvature bound needs m >= 2".into()));
    }
    if !(p > 1.0) || !(h >= 0.0) {
        return Err(Error::InvalidInput("need p > 1 and h >= 0".into()));
    }
    let cot = cot_c(c, r)?;
    let bracket = (m - 2) as f64 * cot - h;
    let admissible = bracket > 0.0;
    let value = if admissible { bracket.powf(p) / p.powf(p) } else { 0.0 };
    let (bracket_radius, function_reading_radius) = if m == 2 {
        (0.0, None)
    } else {
        let y = h / (m - 2) as f64;
        let br = if c > 0.0 {
            let k = c.sqrt();
            (k / y).atan() / k
        } else if c < 0.0 {
            let k = (-c).sqrt();
            if y > k {
                (k / y).atanh() / k
            } else {
                f64::INFINITY
            }
        } else if y > 0.0 {
            1.0 / y
        } else {
            f64::INFINITY
        };
        let fr = match (s_c(c, y), s_c_prime(c, y)) {
            (Ok(s), Ok(ds)) if ds != 0.0 => Some(s / ds),
            _ => None,
        };
        (br, fr)
    };
    Ok(Theorem17Bound { value, admissible, bracket, bracket_radius, function_reading_radius })
}

/// `Q_p(u) = p_energy(u) − Σ w_i 𝒱_i |u_i|^p ĥ_i`.
pub fn stability_functional(u: &[f64], potential: &[f64], grid: &Grid1D, p: f64) -> Result<f64> {
    if potential.len() != grid.len() {
        return Err(Error::InvalidInput("potential length differs from grid".into()));
    }
    if let Some(i) = potential.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidInput(format!("potential must be nonnegative, entry {i} = {}", potential[i])));
    }
    let e = p_energy(u, grid, p)?;
    let mut s = 0.0;
    for i in 0..grid.len() {
        s += grid.mass(i) * potential[i] * u[i].abs().powf(p);
    }
    Ok(e - s)
}

/// `sup‖A‖^p ≤ k^{p−2}λ_model`.
pub fn stability_criterion_immersion(sup_a_p: f64, k: f64, p: f64, lambda_model: f64) -> Result<bool> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::InvalidInput(format!("gradient bound k = {k} must lie in (0, 1]")));
    }
    if !(p >= 2.0) {
        return Err(Error::InvalidInput(format!("criterion needs p >= 2, got {p}")));
    }
    Ok(sup_a_p <= k.powf(p - 2.0) * lambda_model)
}

/// Verdict of the mean-curvature stability criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvatureVerdict {
    pub stable: bool,
    /// `(m−1)/(pr)`.
    pub threshold: f64,
    /// `(m−2)/(pr)`, the threshold implied by the flat mean-curvature
    /// bracket; `None` for `m < 3`.
    pub flat_bracket_threshold: Option<f64>,
    /// Whether `A_sup` also passes the flat-bracket threshold. Recorded, not
    /// enforced: the two thresholds differ.
    pub consistent_with_flat_bracket: Option<bool>,
}

pub fn stability_criterion_meancurv(a_sup: f64, m: u32, p: f64, r: f64) -> Result<MeanCurvatureVerdict> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    if m < 1 || !(p > 1.0) {
        return Err(Error::InvalidInput("need m >= 1 and p > 1".into()));
    }
    let threshold = (m as f64 - 1.0) / (p * r);
    let stable = a_sup <= threshold;
    let flat = (m >= 3).then(|| (m as f64 - 2.0) / (p * r));
    Ok(MeanCurvatureVerdict {
        stable,
        threshold,
        flat_bracket_threshold: flat,
        consistent_with_flat_bracket: flat.map(|f| !stable || a_sup <= f),
    })
}

/// `(k^{p−2}λ(B₁)/λ(Ω))^{1/p}`.
pub fn radius_lower_bound(k: f64, p: f64, lambda_unit_ball: f64, lambda_omega: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) || !(p >= 2.0) || !(lambda_unit_ball > 0.0) || !(lambda_omega > 0.0) {
        return Err(Error::InvalidInput("need k in (0, 1], p >= 2 and positive eigenvalues".into()));
    }
    Ok((k.powf(p - 2.0) * lambda_unit_ball / lambda_omega).powf(1.0 / p))
}

/// `v = −log φ`, with the nodes where `φ = 0` listed in `blowup`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KazdanField {
    pub field: DiscreteField,
    pub blowup: Vec<usize>,
}

pub fn kazdan_transform(phi: &DiscreteField) -> Result<KazdanField> {
    let n = phi.intervals();
    let mut values = Vec::with_capacity(n + 1);
    let mut slopes = phi.slopes.as_ref().map(|_| Vec::with_capacity(n + 1));
    let mut blowup = Vec::new();
    for (i, &v) in phi.values.iter().enumerate() {
        let endpoint = i == 0 || i == n;
        if v > 0.0 {
            values.push(-v.ln());
            if let (Some(out), Some(s)) = (slopes.as_mut(), phi.slopes.as_ref()) {
                out.push(-s[i] / v);
            }
        } else if v == 0.0 && endpoint {
            blowup.push(i);
            values.push(f64::INFINITY);
            if let Some(out) = slopes.as_mut() {
                out.push(f64::NAN);
            }
        } else {
            return Err(Error::InvalidInput(format!("phi must be positive inside, phi[{i}] = {v}")));
        }
    }
    Ok(KazdanField { field: DiscreteField { grid: phi.grid.clone(), values, slopes }, blowup })
}

/// `Ψ = Δ_p v − (p−1)|∇v|^p`; `NaN` where undefined.
pub fn kazdan_source(v: &KazdanField, problem: &RadialProblem) -> Result<Vec<f64>> {
    let f = &v.field;
    check_grid(f, problem)?;
    let p = problem.p;
    let g = &f.grid;
    let lap = match &f.slopes {
        Some(_) => node_divergence(&fluxes(f, problem), g, problem),
        None => discrete_plap_radial(f, problem)?,
    };
    let n = f.intervals();
    let mut out = vec![f64::NAN; n + 1];
    for i in 1..n {
        let grad = match &f.slopes {
            Some(s) => s[i],
            None => (f.values[i + 1] - f.values[i - 1]) / (g[i + 1] - g[i - 1]),
        };
        let val = lap[i] - (p - 1.0) * grad.abs().powf(p);
        if val.is_finite() {
            out[i] = val;
        }
    }
    Ok(out)
}

/// Extremes of a nodal array over an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeStats {
    pub inf: f64,
    pub sup: f64,
    pub range: (usize, usize),
}

impl RangeStats {
    pub fn of(values: &[f64], range: (usize, usize)) -> Self {
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        for &v in &values[range.0..=range.1] {
            if v.is_nan() {
                return Self { inf: f64::NAN, sup: f64::NAN, range };
            }
            inf = inf.min(v);
            sup = sup.max(v);
        }
        Self { inf, sup, range }
    }

    pub fn spread(&self) -> f64 {
        self.sup - self.inf
    }

    /// `sup|x − target|`.
    pub fn max_deviation(&self, target: f64) -> f64 {
        (self.sup - target).abs().max((self.inf - target).abs())
    }
}
