//! Model-space functions and rotationally symmetric warping profiles.
//!
//! A warping profile `f` describes the metric `dt² + f(t)²dθ²` around a pole.
//! The space forms use `f = S_c`, with `S_c(t) = sin(√c t)/√c` for `c > 0`,
//! `t` for `c = 0` and `sinh(√−c t)/√−c` for `c < 0`. Radial sectional
//! curvature is `−f″/f`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::interp::MonotoneCubic;
use crate::{Error, Result};

/// Absolute slack allowed in `−f″/f ≤ c`.
pub const TOL_CURV: f64 = 1e-9;

/// Default size of the curvature verification grid.
pub const DEFAULT_VERIFY_NODES: usize = 4096;

// Below this value of |c|·t² the trigonometric forms lose digits to
// cancellation in cot, so the power series takes over.
const SERIES_SWITCH: f64 = 1e-4;

/// Curvature/dimension pair of a space form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceFormParams {
    pub c: f64,
    pub m: u32,
}

impl SpaceFormParams {
    pub fn new(c: f64, m: u32) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("curvature must be finite, got {c}")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("dimension m must be at least 1".into()));
        }
        Ok(Self { c, m })
    }

    /// Largest admissible radius: the first conjugate point for `c > 0`.
    pub fn conjugate_radius(&self) -> f64 {
        conjugate_radius(self.c)
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || r >= self.conjugate_radius() {
            return Err(Error::Domain(format!(
                "radius {r} not in (0, {}) for c = {}",
                self.conjugate_radius(),
                self.c
            )));
        }
        Ok(())
    }
}

/// `π/√c` for `c > 0`, infinity otherwise.
pub fn conjugate_radius(c: f64) -> f64 {
    if c > 0.0 {
        PI / c.sqrt()
    } else {
        f64::INFINITY
    }
}

fn check_t(c: f64, t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("t = {t} must be finite and nonnegative")));
    }
    if !c.is_finite() {
        return Err(Error::Domain(format!("curvature c = {c} must be finite")));
    }
    if t >= conjugate_radius(c) {
        return Err(Error::Domain(format!(
            "t = {t} at or beyond the conjugate point {} for c = {c}",
            conjugate_radius(c)
        )));
    }
    Ok(())
}

fn small(c: f64, t: f64) -> bool {
    t < 1e-6 || (c * t * t).abs() < SERIES_SWITCH
}

/// The model function `S_c(t)`.
pub fn s_c(c: f64, t: f64) -> Result<f64> {
    check_t(c, t)?;
    Ok(s_c_unchecked(c, t))
}

fn s_c_unchecked(c: f64, t: f64) -> f64 {
    if small(c, t) {
        let x = c * t * t;
        return t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)));
    }
    if c > 0.0 {
        let k = c.sqrt();
        (k * t).sin() / k
    } else if c < 0.0 {
        let k = (-c).sqrt();
        (k * t).sinh() / k
    } else {
        t
    }
}

/// `S_c′(t)`.
pub fn s_c_prime(c: f64, t: f64) -> Result<f64> {
    check_t(c, t)?;
    Ok(s_c_prime_unchecked(c, t))
}

fn s_c_prime_unchecked(c: f64, t: f64) -> f64 {
    if small(c, t) {
        let x = c * t * t;
        return 1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0));
    }
    if c > 0.0 {
        (c.sqrt() * t).cos()
    } else if c < 0.0 {
        ((-c).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// `S_c′(t)/S_c(t)`, the mean curvature of distance spheres per dimension.
pub fn cot_c(c: f64, t: f64) -> Result<f64> {
    check_t(c, t)?;
    if t == 0.0 {
        return Err(Error::Domain("cot_c is singular at t = 0".into()));
    }
    if small(c, t) {
        let x = c * t * t;
        return Ok((1.0 - x / 3.0 - x * x / 45.0 - 2.0 * x * x * x / 945.0) / t);
    }
    Ok(if c > 0.0 {
        let k = c.sqrt();
        k / (k * t).tan()
    } else if c < 0.0 {
        let k = (-c).sqrt();
        k / (k * t).tanh()
    } else {
        1.0 / t
    })
}

/// Sample table of a warping function, interpolated by a monotone cubic.
///
/// The interpolant acts on the deviation `f(t) − t`, so the pole conditions
/// `f(0) = 0`, `f′(0) = 1` hold exactly and a convex table stays convex near
/// the pole, where a direct fit of `f` would bend the wrong way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRaw")]
pub struct Tabulated {
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    #[serde(skip)]
    spline: MonotoneCubic,
}

#[derive(Deserialize)]
struct TableRaw {
    t: Vec<f64>,
    f: Vec<f64>,
}

impl TryFrom<TableRaw> for Tabulated {
    type Error = Error;
    fn try_from(raw: TableRaw) -> Result<Self> {
        Tabulated::new(raw.t, raw.f)
    }
}

impl Tabulated {
    pub fn new(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if t.len() != f.len() || t.len() < 3 {
            return Err(Error::InvalidInput(
                "tabulated profile needs at least 3 (t, f) pairs of equal length".into(),
            ));
        }
        if t[0] != 0.0 {
            return Err(Error::InvalidInput("tabulated t must start at 0".into()));
        }
        if f[0] != 0.0 {
            return Err(Error::InvalidInput("tabulated f must vanish at the pole".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("tabulated t must be strictly increasing".into()));
        }
        if f[1..].iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("tabulated f must be positive away from the pole".into()));
        }
        let dev: Vec<f64> = t.iter().zip(&f).map(|(a, b)| b - a).collect();
        let spline = MonotoneCubic::with_left_slope(&t, &dev, 0.0)?;
        Ok(Self { t, f, spline })
    }

    /// Reads a two-column CSV with header `t,f`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        let headers = rdr.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["t", "f"] {
            return Err(Error::InvalidInput(format!("expected header `t,f`, found `{}`", names.join(","))));
        }
        let (mut t, mut f) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .unwrap_or("")
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad number in profile table: {e}")))
            };
            t.push(parse(0)?);
            f.push(parse(1)?);
        }
        Self::new(t, f)
    }

    pub fn r_max(&self) -> f64 {
        *self.t.last().unwrap()
    }

    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let (g, g1, g2) = self.spline.eval(t);
        (t + g, 1.0 + g1, g2)
    }
}

/// Kind of warping function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpingProfile {
    SpaceForm { c: f64 },
    /// `f(t) = S_c(t)·(1 + ε t²)`.
    Perturbed { c: f64, eps: f64 },
    Tabulated(Tabulated),
}

impl WarpingProfile {
    pub fn space_form(c: f64) -> Self {
        WarpingProfile::SpaceForm { c }
    }

    pub fn perturbed(c: f64, eps: f64) -> Result<Self> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::InvalidInput(format!("perturbation eps = {eps} must be >= 0")));
        }
        Ok(WarpingProfile::Perturbed { c, eps })
    }

    pub fn tabulated(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        Ok(WarpingProfile::Tabulated(Tabulated::new(t, f)?))
    }

    /// Right end of the domain. Open for space forms with `c > 0`.
    pub fn r_max(&self) -> f64 {
        match self {
            WarpingProfile::SpaceForm { c } | WarpingProfile::Perturbed { c, .. } => conjugate_radius(*c),
            WarpingProfile::Tabulated(tab) => tab.r_max(),
        }
    }

    /// Whether `t` lies in the profile domain.
    pub fn contains(&self, t: f64) -> bool {
        match self {
            WarpingProfile::Tabulated(tab) => t >= 0.0 && t <= tab.r_max(),
            _ => t >= 0.0 && t < self.r_max(),
        }
    }

    /// Curvature parameter of the underlying space form, if any.
    pub fn base_curvature(&self) -> Option<f64> {
        match self {
            WarpingProfile::SpaceForm { c } | WarpingProfile::Perturbed { c, .. } => Some(*c),
            WarpingProfile::Tabulated(_) => None,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, WarpingProfile::SpaceForm { c } if *c == 0.0)
    }

    /// `(f, f′, f″)` at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !t.is_finite() || !self.contains(t) {
            return Err(Error::Domain(format!("t = {t} outside profile domain [0, {})", self.r_max())));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> (f64, f64, f64) {
        match self {
            WarpingProfile::SpaceForm { c } => {
                let s = s_c_unchecked(*c, t);
                (s, s_c_prime_unchecked(*c, t), -c * s)
            }
            WarpingProfile::Perturbed { c, eps } => {
                let s = s_c_unchecked(*c, t);
                let s1 = s_c_prime_unchecked(*c, t);
                let s2 = -c * s;
                let g = 1.0 + eps * t * t;
                (
                    s * g,
                    s1 * g + 2.0 * eps * t * s,
                    s2 * g + 4.0 * eps * t * s1 + 2.0 * eps * s,
                )
            }
            WarpingProfile::Tabulated(tab) => tab.eval(t),
        }
    }

    /// `f′/f` for `t > 0`, evaluated without cancellation near the pole.
    pub(crate) fn log_derivative(&self, t: f64) -> f64 {
        match self {
            WarpingProfile::SpaceForm { c } => cot_c(*c, t).unwrap_or(f64::NAN),
            WarpingProfile::Perturbed { c, eps } => {
                let cot = cot_c(*c, t).unwrap_or(f64::NAN);
                cot + 2.0 * eps * t / (1.0 + eps * t * t)
            }
            WarpingProfile::Tabulated(tab) => {
                let (f, f1, _) = tab.eval(t);
                f1 / f
            }
        }
    }

    /// `f(t)/t`, finite at the pole.
    pub(crate) fn ratio_to_flat(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        match self {
            WarpingProfile::SpaceForm { c } => s_c_unchecked(*c, t) / t,
            WarpingProfile::Perturbed { c, eps } => s_c_unchecked(*c, t) / t * (1.0 + eps * t * t),
            WarpingProfile::Tabulated(tab) => tab.eval(t).0 / t,
        }
    }

    /// Radial curvature `−f″/f` at `t > 0`.
    pub fn radial_curvature(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::Domain("radial curvature needs t > 0".into()));
        }
        let (f, _, f2) = self.eval(t)?;
        Ok(-f2 / f)
    }
}

/// Outcome of a curvature verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub ok: bool,
    /// Node with the largest `−f″/f`.
    pub worst_t: f64,
    pub max_curvature: f64,
    /// `c − max(−f″/f)`; negative means violated.
    pub margin: f64,
}

/// Checks `−f″/f ≤ c + TOL_CURV` at every node.
pub fn verify_curvature_bound(profile: &WarpingProfile, c: f64, nodes: &[f64]) -> CurvatureReport {
    let mut worst_t = f64::NAN;
    let mut max_k = f64::NEG_INFINITY;
    let mut ok = true;
    for &t in nodes {
        let k = match profile.radial_curvature(t) {
            Ok(k) if k.is_finite() => k,
            _ => {
                ok = false;
                f64::INFINITY
            }
        };
        if k > max_k {
            max_k = k;
            worst_t = t;
        }
    }
    let ok = ok && !nodes.is_empty() && max_k <= c + TOL_CURV;
    CurvatureReport { ok, worst_t, max_curvature: max_k, margin: c - max_k }
}

/// Uniform nodes `r·i/n` for `i = 1..=n`.
pub fn verification_nodes(r: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| r * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_form_values() {
        assert_eq!(s_c(0.0, 0.7).unwrap(), 0.7);
        assert!((s_c(1.0, PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((s_c(-1.0, 1.0).unwrap() - 1.1752011936438014).abs() < 1e-14);
        assert!(s_c(1.0, PI).is_err());
        assert!(s_c(0.0, -1.0).is_err());
    }

    #[test]
    fn cot_values() {
        assert_eq!(cot_c(0.0, 2.0).unwrap(), 0.5);
        assert!((cot_c(1.0, PI / 4.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((cot_c(-1.0, 1.0).unwrap() - 1.3130352854993312).abs() < 1e-14);
        assert!(cot_c(1.0, 0.0).is_err());
        for c in [-1.0, 0.0, 1.0] {
            let t = 1e-4;
            assert!((cot_c(c, t).unwrap() * t - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn series_branch_matches_closed_form() {
        for c in [-2.0f64, -1.0, 0.5, 1.0] {
            for &t in &[0.009, 0.0099, 0.0101, 0.011] {
                let closed = if c > 0.0 {
                    (c.sqrt() * t).sin() / c.sqrt()
                } else {
                    ((-c).sqrt() * t).sinh() / (-c).sqrt()
                };
                assert!((s_c(c, t).unwrap() - closed).abs() <= 1e-15 * closed);
            }
        }
    }

    #[test]
    fn warping_eval_examples() {
        assert_eq!(WarpingProfile::space_form(0.0).eval(1.0).unwrap(), (1.0, 1.0, 0.0));
        let (f, f1, f2) = WarpingProfile::perturbed(0.0, 0.1).unwrap().eval(1.0).unwrap();
        assert!((f - 1.1).abs() < 1e-15 && (f1 - 1.3).abs() < 1e-15 && (f2 - 0.6).abs() < 1e-15);
        assert_eq!(WarpingProfile::space_form(-1.0).eval(0.0).unwrap(), (0.0, 1.0, 0.0));
        assert!(WarpingProfile::space_form(1.0).eval(4.0).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_tables() {
        assert!(Tabulated::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(Tabulated::new(vec![0.1, 1.0, 2.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(Tabulated::new(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(Tabulated::new(vec![0.0, 1.0, 2.0], vec![0.0, -1.0, 2.0]).is_err());
    }
}
