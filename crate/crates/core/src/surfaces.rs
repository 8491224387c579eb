//! Rotational minimal surfaces in flat 3-space and the transplanted model
//! eigenfunction `ψ = ω(t)`.
//!
//! Surfaces are parametrized by meridian arclength `s` with embedding
//! `(R(s)cos θ, R(s)sin θ, z(s))`. The normal is `N = (z′, −R′)` in the
//! meridian plane; principal curvatures are `κ₁ = ⟨X_ss, N⟩` (meridian) and
//! `κ₂ = −z′/R` (parallel).

use serde::{Deserialize, Serialize};

use crate::critical::compute_r_star;
use crate::radial::RadialSolution;
use crate::rayleigh::{default_initial, minimize_rayleigh, Grid1D, MinimizeOptions};
use crate::bounds::{stability_criterion_immersion, stability_criterion_meancurv, MeanCurvatureVerdict};
use crate::{spow, Error, Result};

/// Nodes with `cos α` below this are left out of comparisons.
pub const MIN_ANGLE_COS: f64 = 1e-3;
/// Nodes with `ψ` below this are left out of comparisons.
pub const MIN_PSI: f64 = 1e-6;
/// Intervals of the meridian grid used for pointwise checks.
pub const BAND_GRID: usize = 16384;
/// Intervals of the grid used for the band Rayleigh estimate.
pub const RAYLEIGH_GRID: usize = 2000;
/// Tolerance of the minimality check.
pub const TOL_MEAN_CURVATURE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Plane,
    Catenoid,
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SurfaceKind::Plane => "plane",
            SurfaceKind::Catenoid => "catenoid",
        })
    }
}

impl std::str::FromStr for SurfaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plane" => Ok(SurfaceKind::Plane),
            "catenoid" => Ok(SurfaceKind::Catenoid),
            other => Err(Error::InvalidInput(format!("unknown surface '{other}'"))),
        }
    }
}

/// Meridian derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Meridian {
    pub r: f64,
    pub z: f64,
    pub dr: f64,
    pub dz: f64,
    pub ddr: f64,
    pub ddz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotSurface {
    pub kind: SurfaceKind,
}

impl RotSurface {
    pub fn plane() -> Self {
        Self { kind: SurfaceKind::Plane }
    }

    pub fn catenoid() -> Self {
        Self { kind: SurfaceKind::Catenoid }
    }

    /// Closed-form meridian `(R, z)` with two derivatives. The plane uses
    /// `R = s` for `s ≥ 0`.
    pub fn meridian(&self, s: f64) -> Meridian {
        match self.kind {
            SurfaceKind::Plane => Meridian { r: s, z: 0.0, dr: 1.0, dz: 0.0, ddr: 0.0, ddz: 0.0 },
            SurfaceKind::Catenoid => {
                let q = 1.0 + s * s;
                let sq = q.sqrt();
                Meridian {
                    r: sq,
                    z: s.asinh(),
                    dr: s / sq,
                    dz: 1.0 / sq,
                    ddr: 1.0 / (q * sq),
                    ddz: -s / (q * sq),
                }
            }
        }
    }

    /// Intrinsic warping `ρ(s)`.
    pub fn rho(&self, s: f64) -> f64 {
        match self.kind {
            SurfaceKind::Plane => s.abs(),
            SurfaceKind::Catenoid => (1.0 + s * s).sqrt(),
        }
    }

    /// `t(s) = |X(s)|`.
    pub fn extrinsic_distance(&self, s: f64) -> f64 {
        match self.kind {
            SurfaceKind::Plane => s.abs(),
            SurfaceKind::Catenoid => (1.0 + s * s + s.asinh().powi(2)).sqrt(),
        }
    }

    /// `dt/ds`, signed.
    pub fn distance_slope(&self, s: f64) -> f64 {
        match self.kind {
            SurfaceKind::Plane => s.signum(),
            SurfaceKind::Catenoid => {
                let t = self.extrinsic_distance(s);
                (s + s.asinh() / (1.0 + s * s).sqrt()) / t
            }
        }
    }

    /// `cos α = |dt/ds|`.
    pub fn angle_cos(&self, s: f64) -> Result<f64> {
        if self.kind == SurfaceKind::Plane && s == 0.0 {
            return Err(Error::Domain("angle function undefined at the plane's pole".into()));
        }
        Ok(self.distance_slope(s).abs())
    }

    /// `(κ₁, κ₂)`.
    pub fn principal_curvatures(&self, s: f64) -> (f64, f64) {
        match self.kind {
            SurfaceKind::Plane => (0.0, 0.0),
            SurfaceKind::Catenoid => {
                let k = 1.0 / (1.0 + s * s);
                (k, -k)
            }
        }
    }

    /// `⟨X, N⟩`.
    pub fn support(&self, s: f64) -> f64 {
        let g = self.meridian(s);
        g.r * g.dz - g.z * g.dr
    }

    pub fn second_form_norm(&self, s: f64) -> f64 {
        match self.kind {
            SurfaceKind::Plane => 0.0,
            SurfaceKind::Catenoid => std::f64::consts::SQRT_2 / (1.0 + s * s),
        }
    }

    /// `sup‖A‖` over the whole surface.
    pub fn second_form_sup(&self) -> f64 {
        self.second_form_norm(0.0)
    }

    /// Principal curvatures from fourth-order differences of the embedding.
    pub fn numeric_principal_curvatures(&self, s: f64, h: f64) -> (f64, f64) {
        let pt = |x: f64| {
            let g = self.meridian(x);
            (g.r, g.z)
        };
        let (r0, z0) = pt(s);
        let (r1, z1) = pt(s + h);
        let (r_1, z_1) = pt(s - h);
        let (r2, z2) = pt(s + 2.0 * h);
        let (r_2, z_2) = pt(s - 2.0 * h);
        let d1 = |a2: f64, a1: f64, m1: f64, m2: f64| (-a2 + 8.0 * a1 - 8.0 * m1 + m2) / (12.0 * h);
        let d2 = |a2: f64, a1: f64, a0: f64, m1: f64, m2: f64| {
            (-a2 + 16.0 * a1 - 30.0 * a0 + 16.0 * m1 - m2) / (12.0 * h * h)
        };
        let dr = d1(r2, r1, r_1, r_2);
        let dz = d1(z2, z1, z_1, z_2);
        let ddr = d2(r2, r1, r0, r_1, r_2);
        let ddz = d2(z2, z1, z0, z_1, z_2);
        let speed = (dr * dr + dz * dz).sqrt();
        let k1 = (ddr * dz - ddz * dr) / speed.powi(3);
        let k2 = -dz / (speed * r0);
        (k1, k2)
    }

    /// `κ₁ + κ₂` from the numeric shape operator.
    pub fn numeric_mean_curvature(&self, s: f64) -> f64 {
        let (k1, k2) = self.numeric_principal_curvatures(s, 4e-3);
        k1 + k2
    }

    /// `Hess_M t(e₁, e₁) = sin²α/t + κ₁⟨X,N⟩/t` along the meridian.
    pub fn distance_hessian_meridian(&self, s: f64) -> f64 {
        let t = self.extrinsic_distance(s);
        let c = self.distance_slope(s);
        let (k1, _) = self.principal_curvatures(s);
        ((1.0 - c * c) + k1 * self.support(s)) / t
    }
}

/// Report of the minimality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub max_abs_h: f64,
    pub worst_s: f64,
    pub ok: bool,
}

/// Numeric mean curvature at `samples` uniform points of `[−half, half]`.
pub fn verify_minimality(surface: &RotSurface, half: f64, samples: usize) -> MinimalityReport {
    let mut rep = MinimalityReport { max_abs_h: 0.0, worst_s: 0.0, ok: true };
    for i in 0..samples {
        let s = -half + 2.0 * half * i as f64 / (samples - 1) as f64;
        let h = surface.numeric_mean_curvature(s).abs();
        if h > rep.max_abs_h {
            rep.max_abs_h = h;
            rep.worst_s = s;
        }
    }
    rep.ok = rep.max_abs_h <= TOL_MEAN_CURVATURE;
    rep
}

/// Connected component of the surface inside the ambient ball of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceBand {
    pub surface: RotSurface,
    pub r: f64,
    pub s_range: (f64, f64),
    /// `inf cos α` over the band.
    pub k: f64,
}

impl SurfaceBand {
    pub fn new(surface: RotSurface, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("band radius must be positive, got {r}")));
        }
        match surface.kind {
            SurfaceKind::Plane => Ok(Self { surface, r, s_range: (0.0, r), k: 1.0 }),
            SurfaceKind::Catenoid => {
                if r <= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "catenoid bands need r > 1 (neck distance), got {r}"
                    )));
                }
                let (mut lo, mut hi) = (0.0f64, r);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if surface.extrinsic_distance(mid) < r {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-15 * r {
                        break;
                    }
                }
                let s_end = 0.5 * (lo + hi);
                // the neck s = 0 lies inside the band and has cos α = 0
                Ok(Self { surface, r, s_range: (-s_end, s_end), k: 0.0 })
            }
        }
    }

    /// Uniform meridian grid with `n` intervals; `n` is rounded up to even so
    /// a symmetric band contains `s = 0`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let n = n + n % 2;
        let (a, b) = self.s_range;
        (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect()
    }
}

/// `ψ(s) = ω(t(s))` sampled on a band with the model derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransplantedField {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub psi: Vec<f64>,
    /// `ψ′(s) = ω′(t)t′(s)`.
    pub psi_prime: Vec<f64>,
    pub omega_prime: Vec<f64>,
    pub omega_second: Vec<f64>,
    /// Model flux `F(t) = ∫₀ᵗ τω^{p−1}`.
    pub flux: Vec<f64>,
    pub lambda: f64,
}

fn check_model(solution: &RadialSolution, r: f64) -> Result<()> {
    let prob = &solution.problem;
    if !prob.domain.is_ball() || !prob.profile.is_flat() || prob.m != 2 {
        return Err(Error::InvalidInput("transplant needs a flat two-dimensional ball solution".into()));
    }
    if (solution.radius() - r).abs() > 1e-12 * r {
        return Err(Error::InvalidInput(format!(
            "model radius {} differs from band radius {r}",
            solution.radius()
        )));
    }
    Ok(())
}

pub fn transplant(solution: &RadialSolution, band: &SurfaceBand, n: usize) -> Result<TransplantedField> {
    check_model(solution, band.r)?;
    let r = band.r;
    let s = band.grid(n);
    let mut out = TransplantedField {
        t: Vec::with_capacity(s.len()),
        psi: Vec::with_capacity(s.len()),
        psi_prime: Vec::with_capacity(s.len()),
        omega_prime: Vec::with_capacity(s.len()),
        omega_second: Vec::with_capacity(s.len()),
        flux: Vec::with_capacity(s.len()),
        s: Vec::new(),
        lambda: solution.lambda,
    };
    for &x in &s {
        let mut t = band.surface.extrinsic_distance(x);
        if t > r {
            if t - r > 1e-10 * r {
                return Err(Error::Domain(format!("t({x}) = {t} exceeds the band radius {r}")));
            }
            t = r;
        }
        let pv = solution.eval(t)?;
        let psi = if t == r { 0.0 } else { pv.omega };
        out.t.push(t);
        out.psi.push(psi);
        out.psi_prime.push(pv.omega_prime * band.surface.distance_slope(x));
        out.omega_prime.push(pv.omega_prime);
        out.omega_second.push(pv.omega_second);
        out.flux.push(pv.flux);
    }
    out.s = s;
    Ok(out)
}

/// `ρ^{−1}(ρ|ψ′|^{p−2}ψ′)′` by fourth-order central differences of the nodal
/// flux. At the plane's pole the flux `−λ∫₀ˢ τψ^{p−1}` is reflected as an
/// even function; `NaN`
/// where the stencil does not fit or `ρ = 0`.
pub fn plap_intrinsic(field: &TransplantedField, surface: &RotSurface, p: f64) -> Vec<f64> {
    let s = &field.s;
    let n = s.len() - 1;
    let h = (s[n] - s[0]) / n as f64;
    let flux: Vec<f64> = s.iter().zip(&field.psi_prime).map(|(&x, &d)| surface.rho(x) * spow(d, p - 1.0)).collect();
    let pole = surface.kind == SurfaceKind::Plane && s[0] == 0.0;
    let at = |j: isize| -> Option<f64> {
        if j >= 0 && (j as usize) <= n {
            Some(flux[j as usize])
        } else if j < 0 && pole && ((-j) as usize) <= n {
            Some(flux[(-j) as usize])
        } else {
            None
        }
    };
    (0..=n)
        .map(|i| {
            let j = i as isize;
            let rho = surface.rho(s[i]);
            match (at(j - 2), at(j - 1), at(j + 1), at(j + 2)) {
                (Some(m2), Some(m1), Some(p1), Some(p2)) if rho > 0.0 => {
                    (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h) / rho
                }
                _ => f64::NAN,
            }
        })
        .collect()
}

// `K = (1 + sin²α + ⟨X,N⟩(κ₁+κ₂))/t + (p−2)Hess_M t(e₁,e₁)`, the factor of
// `ω′` in `Δψ + (p−2)Hess ψ(e₁,e₁)`.
fn jk_factor(surface: &RotSurface, s: f64, t: f64, p: f64) -> f64 {
    let cos2 = surface.distance_slope(s).powi(2);
    let (k1, k2) = surface.principal_curvatures(s);
    (1.0 + (1.0 - cos2) + surface.support(s) * (k1 + k2)) / t + (p - 2.0) * surface.distance_hessian_meridian(s)
}

/// `|∇ψ|^{p−2}[Δψ + (p−2)Hess ψ(e₁,e₁)]` with `Δψ = ω″cos²α +
/// ω′(1 + sin²α + ⟨X,N⟩(κ₁+κ₂))/t` and
/// `Hess ψ(e₁,e₁) = ω″cos²α + ω′·Hess_M t(e₁,e₁)`. `NaN` where `∇ψ = 0`.
pub fn plap_jk(field: &TransplantedField, surface: &RotSurface, p: f64) -> Vec<f64> {
    (0..field.s.len())
        .map(|i| {
            let s = field.s[i];
            let t = field.t[i];
            let grad = field.psi_prime[i].abs();
            if grad == 0.0 || t == 0.0 {
                return f64::NAN;
            }
            let cos2 = surface.distance_slope(s).powi(2);
            let d1 = field.omega_prime[i];
            let d2 = field.omega_second[i];
            grad.powf(p - 2.0) * ((p - 1.0) * d2 * cos2 + d1 * jk_factor(surface, s, t, p))
        })
        .collect()
}

/// `−Δ_pψ/(ψ^{p−1}cos^{p−2}α) − λ` after eliminating `ω″` with the model
/// equation `(p−1)|ω′|^{p−2}ω″ = −λω^{p−1} − |ω′|^{p−2}ω′/t`:
/// `−λsin²α + λF/(tω^{p−1})·(K − cos²α/t)`. This form has no cancellation
/// where `ψ` is small.
pub fn modelcontrol_margins(field: &TransplantedField, surface: &RotSurface, p: f64) -> Vec<f64> {
    let lambda = field.lambda;
    (0..field.s.len())
        .map(|i| {
            let (s, t, psi) = (field.s[i], field.t[i], field.psi[i]);
            if t == 0.0 || psi <= 0.0 {
                return f64::NAN;
            }
            let cos2 = surface.distance_slope(s).powi(2);
            let x = lambda * field.flux[i] / (t * psi.powf(p - 1.0));
            -lambda * (1.0 - cos2) + x * (jk_factor(surface, s, t, p) - cos2 / t)
        })
        .collect()
}

/// Nodes admitted to pointwise comparisons.
pub fn comparison_mask(field: &TransplantedField, surface: &RotSurface) -> Vec<bool> {
    field
        .s
        .iter()
        .zip(&field.psi)
        .map(|(&s, &psi)| {
            let cos_ok = surface.angle_cos(s).is_ok_and(|c| c >= MIN_ANGLE_COS);
            cos_ok && psi >= MIN_PSI
        })
        .collect()
}

/// `sup|jk − intrinsic| / sup|jk|` over admitted nodes where both routes are
/// defined.
pub fn route_agreement(field: &TransplantedField, surface: &RotSurface, p: f64) -> Result<f64> {
    let a = plap_jk(field, surface, p);
    let b = plap_intrinsic(field, surface, p);
    let mask = comparison_mask(field, surface);
    let (mut diff, mut scale, mut count) = (0.0f64, 0.0f64, 0usize);
    for i in 0..a.len() {
        if mask[i] && a[i].is_finite() && b[i].is_finite() {
            diff = diff.max((a[i] - b[i]).abs());
            scale = scale.max(a[i].abs());
            count += 1;
        }
    }
    if count == 0 || scale == 0.0 {
        return Err(Error::InvalidInput("no admissible nodes for the route comparison".into()));
    }
    Ok(diff / scale)
}

/// Result of the pointwise comparison inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelControl {
    /// `min(−Δ_pψ/(ψ^{p−1}cos^{p−2}α) − λ)` over admitted nodes.
    pub min_margin: f64,
    /// Same quantity from the raw [`plap_jk`] values; loses accuracy where
    /// `ψ^{p−1}` is tiny.
    pub direct_min_margin: f64,
    pub worst_s: f64,
    pub nodes: usize,
    pub pass: bool,
}

pub fn modelcontrol_check(surface: &RotSurface, solution: &RadialSolution, band: &SurfaceBand, p: f64) -> Result<ModelControl> {
    if p < 2.0 {
        return Err(Error::InvalidInput(format!("comparison inequality needs p >= 2, got {p}")));
    }
    if (solution.p() - p).abs() > 0.0 || band.surface != *surface {
        return Err(Error::InvalidInput("solution exponent or band surface does not match".into()));
    }
    let rep = compute_r_star(0.0, solution)?;
    if band.r > rep.r_star {
        return Err(Error::InvalidInput(format!("band radius {} exceeds r_star = {}", band.r, rep.r_star)));
    }
    let field = transplant(solution, band, BAND_GRID)?;
    let margins = modelcontrol_margins(&field, surface, p);
    let lap = plap_jk(&field, surface, p);
    let mask = comparison_mask(&field, surface);
    let lambda = solution.lambda;
    let mut out = ModelControl {
        min_margin: f64::INFINITY,
        direct_min_margin: f64::INFINITY,
        worst_s: f64::NAN,
        nodes: 0,
        pass: false,
    };
    for i in 0..margins.len() {
        if !mask[i] || !margins[i].is_finite() {
            continue;
        }
        if margins[i] < out.min_margin {
            out.min_margin = margins[i];
            out.worst_s = field.s[i];
        }
        let cos = surface.distance_slope(field.s[i]).abs();
        let direct = -lap[i] / (field.psi[i].powf(p - 1.0) * cos.powf(p - 2.0)) - lambda;
        out.direct_min_margin = out.direct_min_margin.min(direct);
        out.nodes += 1;
    }
    if out.nodes == 0 {
        return Err(Error::InvalidInput("empty evaluation set for the comparison inequality".into()));
    }
    out.pass = out.min_margin >= -1e-6 * lambda;
    Ok(out)
}

/// Upper estimate of the band eigenvalue in the rotationally symmetric class.
pub fn band_rayleigh_estimate(band: &SurfaceBand, p: f64, n: usize) -> Result<f64> {
    let (a, b) = band.s_range;
    let surface = band.surface;
    let pole = surface.kind == SurfaceKind::Plane;
    let grid = Grid1D::uniform(a, b, n, |s| surface.rho(s), !pole, true)?;
    let init = default_initial(&grid);
    Ok(minimize_rayleigh(&grid, p, &init, &MinimizeOptions::default())?.lambda_est)
}

/// Every band quantity in one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub surface: SurfaceKind,
    pub p: f64,
    pub r: f64,
    pub k: f64,
    pub lambda_model: f64,
    /// `k^{p−2}λ_model`.
    pub rhs: f64,
    /// True when `k = 0`, so the lower bound says nothing.
    pub vacuous: bool,
    pub lambda_band_upper: f64,
    pub modelcontrol_margin: f64,
    pub modelcontrol_pass: bool,
    /// `sup‖A‖^p ≤ k^{p−2}λ_model`; `None` when `k = 0` or `p < 2`.
    pub cor13: Option<bool>,
    pub cor15: MeanCurvatureVerdict,
}

pub fn band_report(band: &SurfaceBand, p: f64, solution_model: &RadialSolution) -> Result<BandReport> {
    check_model(solution_model, band.r)?;
    let lambda = solution_model.lambda;
    let k = band.k;
    let rhs = if k == 0.0 && p > 2.0 { 0.0 } else { k.powf(p - 2.0) * lambda };
    let upper = band_rayleigh_estimate(band, p, RAYLEIGH_GRID)?;
    let mc = modelcontrol_check(&band.surface, solution_model, band, p)?;
    let a_sup = band.surface.second_form_sup();
    let cor13 = if k > 0.0 && p >= 2.0 {
        Some(stability_criterion_immersion(a_sup.powf(p), k, p, lambda)?)
    } else {
        None
    };
    let cor15 = stability_criterion_meancurv(a_sup, 2, p, band.r)?;
    Ok(BandReport {
        surface: band.surface.kind,
        p,
        r: band.r,
        k,
        lambda_model: lambda,
        rhs,
        vacuous: k == 0.0,
        lambda_band_upper: upper,
        modelcontrol_margin: mc.min_margin,
        modelcontrol_pass: mc.pass,
        cor13,
        cor15,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catenoid_distance_and_angle() {
        let c = RotSurface::catenoid();
        assert_eq!(c.extrinsic_distance(0.0), 1.0);
        let expect = (2.0 + 1f64.asinh().powi(2)).sqrt();
        assert!((c.extrinsic_distance(1.0) - expect).abs() < 1e-15);
        assert_eq!(c.angle_cos(0.0).unwrap(), 0.0);
        let h = 1e-6;
        let fd = (c.extrinsic_distance(2.0 + h) - c.extrinsic_distance(2.0 - h)) / (2.0 * h);
        assert!((c.angle_cos(2.0).unwrap() - fd).abs() < 1e-9);
    }

    #[test]
    fn meridian_hessian_is_second_derivative_of_distance() {
        let c = RotSurface::catenoid();
        for s in [-1.3, -0.2, 0.4, 2.0] {
            let h = 1e-4;
            let fd = (c.distance_slope(s + h) - c.distance_slope(s - h)) / (2.0 * h);
            assert!((c.distance_hessian_meridian(s) - fd).abs() < 1e-7, "s = {s}");
        }
    }

    #[test]
    fn shape_operator_matches_closed_form() {
        let c = RotSurface::catenoid();
        for s in [-2.0, 0.0, 0.7] {
            let (k1, k2) = c.numeric_principal_curvatures(s, 1e-3);
            let norm = (k1 * k1 + k2 * k2).sqrt();
            assert!((norm - c.second_form_norm(s)).abs() < 1e-6);
        }
        assert!((c.second_form_norm(0.0) - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(RotSurface::plane().second_form_norm(3.0), 0.0);
    }

    #[test]
    fn plane_angle_has_pole() {
        assert!(RotSurface::plane().angle_cos(0.0).is_err());
        assert_eq!(RotSurface::plane().angle_cos(0.3).unwrap(), 1.0);
    }
}
