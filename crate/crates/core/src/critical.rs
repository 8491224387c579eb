//! Critical radius `r⋆(c)` of the comparison argument for `p ≥ 2`.
//!
//! The restriction inequality is
//! `W(t) = (p+m−2)·cot_c(t)·|ω′|^{p−2}ω′ + λω^{p−1} ≤ 0`. It is certified
//! through the sign of
//! `LHS(t) = S_c^{m−1}(V_c′ω^{p−1} − V_c|ω′|^{p−2}ω′)` and then checked
//! directly on the grid.
//!
//! With `g = V′/V` and `a = λ/(p+m−2)` the exact derivative of `LHS` is
//! `S^{m−1}V·([(m−1)cot·g + g′ + g² + λ]ω^{p−1} + (p−1)gω^{p−2}ω′ + g|ω′|^{p−1})`.

use serde::{Deserialize, Serialize};

use crate::modelspace::{cot_c, s_c, WarpingProfile};
use crate::radial::{PointValue, RadialSolution};
use crate::{Error, Result};

/// Relative tolerance on `W`, in units of `λ`.
pub const TOL_W: f64 = 1e-9;

fn check_c(c: f64) -> Result<()> {
    if c == 0.0 || c == 1.0 || c == -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("critical-radius analysis needs c in {{-1, 0, 1}}, got {c}")))
    }
}

fn exponent(lambda: f64, p: f64, m: u32) -> f64 {
    lambda / (p + m as f64 - 2.0)
}

/// `V_c(t)`: `exp(−at²/2)`, `cos(t)^{−a}` or `cosh(t)^{−a}` with
/// `a = λ/(p+m−2)`.
pub fn weight_v(c: f64, t: f64, lambda: f64, p: f64, m: u32) -> Result<f64> {
    check_c(c)?;
    let a = exponent(lambda, p, m);
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t = {t} must be nonnegative")));
    }
    Ok(if c == 0.0 {
        (-0.5 * a * t * t).exp()
    } else if c == 1.0 {
        if t >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain(format!("t = {t} must be below pi/2")));
        }
        t.cos().powf(-a)
    } else {
        t.cosh().powf(-a)
    })
}

/// `(V′/V, (V′/V)′)`.
pub fn weight_v_log_derivative(c: f64, t: f64, lambda: f64, p: f64, m: u32) -> Result<(f64, f64)> {
    check_c(c)?;
    let a = exponent(lambda, p, m);
    Ok(if c == 0.0 {
        (-a * t, -a)
    } else if c == 1.0 {
        if t >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain(format!("t = {t} must be below pi/2")));
        }
        let tan = t.tan();
        (a * tan, a * (1.0 + tan * tan))
    } else {
        let th = t.tanh();
        (-a * th, -a * (1.0 - th * th))
    })
}

fn space_form_of(solution: &RadialSolution) -> Result<f64> {
    match solution.problem.profile {
        WarpingProfile::SpaceForm { c } if solution.problem.domain.is_ball() => Ok(c),
        _ => Err(Error::InvalidInput("critical-radius analysis needs a space-form ball solution".into())),
    }
}

fn point(solution: &RadialSolution, t: f64) -> Result<PointValue> {
    let r = solution.radius();
    if !(t >= 0.0 && t <= r) {
        return Err(Error::Domain(format!("t = {t} outside [0, {r}]")));
    }
    solution.eval(t)
}

/// `W(t)`; at the pole the limit `−λ(p−2)/m·ω(0)^{p−1}` is returned.
pub fn restriction_w(t: f64, solution: &RadialSolution, c: f64) -> Result<f64> {
    check_c(c)?;
    let p = solution.p();
    let m = solution.m() as f64;
    let lambda = solution.lambda;
    let pv = point(solution, t)?;
    if t == 0.0 {
        return Ok(-lambda * (p - 2.0) / m * pv.omega.powf(p - 1.0));
    }
    let w = solution.problem.weight(t);
    Ok(lambda * pv.omega.max(0.0).powf(p - 1.0) - (p + m - 2.0) * cot_c(c, t)? * lambda * pv.flux / w)
}

/// `S_c^{m−1}(V′ω^{p−1} − V|ω′|^{p−2}ω′) = S_c^{m−1}V′ω^{p−1} + λVF`.
pub fn lhs_expression(c: f64, t: f64, solution: &RadialSolution) -> Result<f64> {
    check_c(c)?;
    let p = solution.p();
    let m = solution.m();
    let lambda = solution.lambda;
    if t == 0.0 {
        return Ok(0.0);
    }
    let pv = point(solution, t)?;
    let v = weight_v(c, t, lambda, p, m)?;
    let (g, _) = weight_v_log_derivative(c, t, lambda, p, m)?;
    let w = s_c(c, t)?.powi(m as i32 - 1);
    Ok(w * g * v * pv.omega.max(0.0).powf(p - 1.0) + lambda * v * pv.flux)
}

/// Exact integrand `Φ` with `LHS′ = S^{m−1}VΦ`.
pub fn lhs_integrand(c: f64, t: f64, solution: &RadialSolution) -> Result<f64> {
    check_c(c)?;
    let p = solution.p();
    let m = solution.m();
    let lambda = solution.lambda;
    let pv = point(solution, t)?;
    let (g, dg) = weight_v_log_derivative(c, t, lambda, p, m)?;
    let om = pv.omega.max(0.0);
    let slope = pv.omega_prime.abs();
    let coupling = if t == 0.0 {
        // (m−1)·cot·g → (m−1)·g′(0) at the pole
        (m as f64 - 1.0) * dg
    } else {
        (m as f64 - 1.0) * cot_c(c, t)? * g
    };
    let mixed = if p == 2.0 { -slope } else { -om.powf(p - 2.0) * slope };
    Ok((coupling + dg + g * g + lambda) * om.powf(p - 1.0) + (p - 1.0) * g * mixed + g * slope.powf(p - 1.0))
}

/// `Φ₀(s)` exactly as displayed for the flat case:
/// `(p−2)ω^{p−1} + (λ/(p+m−2))s²ω^{p−1} + (p−1)ω^{p−2}|ω′| − |ω′|^{p−1}`.
pub fn phi0(s: f64, solution: &RadialSolution) -> Result<f64> {
    let p = solution.p();
    let a = exponent(solution.lambda, p, solution.m());
    let pv = point(solution, s)?;
    let om = pv.omega.max(0.0);
    let slope = pv.omega_prime.abs();
    Ok((p - 2.0) * om.powf(p - 1.0) + a * s * s * om.powf(p - 1.0) + (p - 1.0) * om.powf(p - 2.0) * slope
        - slope.powf(p - 1.0))
}

/// Constants of the spherical and hyperbolic integrands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalConstants {
    /// `λ(p+2m−2)/(p+m−2)`
    pub c1: f64,
    /// `λ(1/(p+m−2) + λ/(p+m−2)²)`
    pub c2: f64,
    /// `λ/(p+m−2)`
    pub c3: f64,
    /// `λ(p−2)/(p+m−2)`, the value that makes the hyperbolic identity exact.
    pub c4: f64,
    /// `(p−2)/(p+m−2)` as printed, without the factor `λ`.
    pub c4_without_lambda: f64,
}

impl CriticalConstants {
    pub fn new(lambda: f64, p: f64, m: u32) -> Self {
        let d = p + m as f64 - 2.0;
        Self {
            c1: lambda * (p + 2.0 * m as f64 - 2.0) / d,
            c2: lambda * (1.0 / d + lambda / (d * d)),
            c3: lambda / d,
            c4: lambda * (p - 2.0) / d,
            c4_without_lambda: (p - 2.0) / d,
        }
    }
}

fn check_spherical(solution: &RadialSolution) -> Result<()> {
    if solution.radius() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("spherical analysis needs r < pi/2, got {}", solution.radius())));
    }
    Ok(())
}

/// `Φ₁(s) = (C₁ + C₂tan²s)ω^{p−1} + C₃tan s(|ω′|^{p−1}/(p−1) − ω^{p−2}|ω′|)`.
pub fn phi1(s: f64, solution: &RadialSolution) -> Result<f64> {
    check_spherical(solution)?;
    if s >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("s = {s} must be below pi/2")));
    }
    let p = solution.p();
    let k = CriticalConstants::new(solution.lambda, p, solution.m());
    let pv = point(solution, s)?;
    let om = pv.omega.max(0.0);
    let slope = pv.omega_prime.abs();
    let tan = s.tan();
    Ok((k.c1 + k.c2 * tan * tan) * om.powf(p - 1.0)
        + k.c3 * tan * (slope.powf(p - 1.0) / (p - 1.0) - om.powf(p - 2.0) * slope))
}

/// Young barrier `(C₁ + C₂τ² − C₃τ(p−2)/(p−1))` with `τ = tan s`; `Φ₁`
/// dominates it times `ω^{p−1}`.
pub fn spherical_barrier(s: f64, lambda: f64, p: f64, m: u32) -> f64 {
    let k = CriticalConstants::new(lambda, p, m);
    let tan = s.tan();
    k.c1 + k.c2 * tan * tan - k.c3 * tan * (p - 2.0) / (p - 1.0)
}

/// Outcome of the spherical positivity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCheck {
    pub positive: bool,
    /// `min Φ₁` over interior grid nodes.
    pub margin: f64,
    /// Minimum of the Young barrier over the same nodes.
    pub barrier_margin: f64,
}

pub fn verify_spherical_positivity(solution: &RadialSolution) -> Result<SphericalCheck> {
    check_spherical(solution)?;
    let n = solution.intervals();
    let mut margin = f64::INFINITY;
    let mut barrier = f64::INFINITY;
    for &t in &solution.grid[1..n] {
        margin = margin.min(phi1(t, solution)?);
        barrier = barrier.min(spherical_barrier(t, solution.lambda, solution.p(), solution.m()));
    }
    Ok(SphericalCheck { positive: margin > 0.0, margin, barrier_margin: barrier })
}

/// Cumulative trapezoid integral of `s^{m−1}V₀Φ` on the solution grid, where
/// `Φ` is the exact flat integrand. Its values approximate
/// `lhs_expression(0, t)` at the nodes.
pub fn flat_integral(solution: &RadialSolution) -> Result<Vec<f64>> {
    let p = solution.p();
    let m = solution.m();
    let lambda = solution.lambda;
    let g = &solution.grid;
    let mut vals = Vec::with_capacity(g.len());
    for &t in g {
        let phi = lhs_integrand(0.0, t, solution)?;
        vals.push(t.powi(m as i32 - 1) * weight_v(0.0, t, lambda, p, m)? * phi);
    }
    let mut acc = vec![0.0; g.len()];
    for i in 1..g.len() {
        acc[i] = acc[i - 1] + 0.5 * (g[i] - g[i - 1]) * (vals[i] + vals[i - 1]);
    }
    Ok(acc)
}

/// How `r⋆` was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `p = 2`: the restriction inequality is checked directly.
    DirectW,
    /// First sign change of the integral left side.
    IntegralLhs,
}

/// `r⋆(c)` with the sampled diagnostics that justify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRadiusReport {
    pub c: f64,
    pub p: f64,
    pub m: u32,
    pub r: f64,
    pub lambda: f64,
    pub r_star: f64,
    pub method: Method,
    pub grid: Vec<f64>,
    pub w_samples: Vec<f64>,
    pub lhs_samples: Vec<f64>,
    /// Case integrand: `Φ₀` as displayed (c = 0), `Φ₁` (c = 1), or the
    /// reconstructed `LHS′/(S^{m−1}V)` (c = −1).
    pub phi_samples: Vec<f64>,
    pub constants: CriticalConstants,
    /// `min(−W/λ)` over grid nodes in `(0, r⋆)`.
    pub min_w_margin: f64,
    /// `max W/λ` over all interior nodes.
    pub max_w_over_lambda: f64,
    /// Endpoint value of the displayed `Φ₀` and the `|ω′(r)|^{p−2}` reading.
    pub phi0_endpoint: Option<(f64, f64)>,
}

/// Scans `lhs_expression` on the solution grid and certifies `W` on `(0, r⋆)`.
pub fn compute_r_star(c: f64, solution: &RadialSolution) -> Result<CriticalRadiusReport> {
    check_c(c)?;
    let sc = space_form_of(solution)?;
    if sc != c {
        return Err(Error::InvalidInput(format!("solution has curvature {sc}, requested c = {c}")));
    }
    let p = solution.p();
    if p < 2.0 {
        return Err(Error::InvalidInput(format!("critical radius is not defined for p = {p} < 2")));
    }
    if c == 1.0 {
        check_spherical(solution)?;
    }
    let lambda = solution.lambda;
    let r = solution.radius();
    let n = solution.intervals();
    let grid = solution.grid.clone();
    let mut w_samples = Vec::with_capacity(n + 1);
    let mut lhs_samples = Vec::with_capacity(n + 1);
    let mut phi_samples = Vec::with_capacity(n + 1);
    for &t in &grid {
        w_samples.push(restriction_w(t, solution, c)?);
        lhs_samples.push(lhs_expression(c, t, solution)?);
        phi_samples.push(if c == 0.0 {
            phi0(t, solution)?
        } else if c == 1.0 {
            phi1(t, solution)?
        } else {
            lhs_integrand(c, t, solution)?
        });
    }
    let (method, r_star) = if p == 2.0 {
        (Method::DirectW, r)
    } else {
        let first = (1..n).find(|&i| lhs_samples[i] <= 0.0);
        (Method::IntegralLhs, first.map_or(r, |i| grid[i]))
    };
    let mut min_margin = f64::INFINITY;
    for i in 1..n {
        if grid[i] >= r_star {
            break;
        }
        let wl = w_samples[i] / lambda;
        if wl > TOL_W {
            return Err(Error::Verification(format!(
                "W({}) = {:e} exceeds the tolerance inside r_star = {r_star}",
                grid[i], w_samples[i]
            )));
        }
        min_margin = min_margin.min(-wl);
    }
    let max_w = w_samples[1..n].iter().fold(f64::NEG_INFINITY, |acc, w| acc.max(w / lambda));
    let phi0_endpoint = (c == 0.0).then(|| {
        let slope = solution.omega_prime[n].abs();
        (phi_samples[n], -slope.powf(p - 2.0))
    });
    Ok(CriticalRadiusReport {
        c,
        p,
        m: solution.m(),
        r,
        lambda,
        r_star,
        method,
        grid,
        w_samples,
        lhs_samples,
        phi_samples,
        constants: CriticalConstants::new(lambda, p, solution.m()),
        min_w_margin: min_margin,
        max_w_over_lambda: max_w,
        phi0_endpoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert_eq!(weight_v(0.0, 0.0, 3.0, 3.0, 2).unwrap(), 1.0);
        let v = weight_v(0.0, 1.0, 4.0, 2.0, 2).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!(weight_v(2.0, 0.5, 1.0, 2.0, 2).is_err());
        let near = std::f64::consts::FRAC_PI_2 - 1e-7;
        assert!(weight_v(1.0, near, 5.0, 3.0, 2).unwrap() > 1e10);
    }

    #[test]
    fn log_derivative_matches_difference_quotient() {
        for c in [-1.0, 0.0, 1.0] {
            let (lam, p, m, t, h) = (7.0, 3.0, 2, 0.6, 1e-6);
            let (g, dg) = weight_v_log_derivative(c, t, lam, p, m).unwrap();
            let v = |s| weight_v(c, s, lam, p, m).unwrap();
            let fd = (v(t + h) - v(t - h)) / (2.0 * h) / v(t);
            assert!((g - fd).abs() < 1e-7, "c = {c}");
            let gg = |s| weight_v_log_derivative(c, s, lam, p, m).unwrap().0;
            assert!((dg - (gg(t + h) - gg(t - h)) / (2.0 * h)).abs() < 1e-6);
        }
    }
}
