//! Discrete weighted p-Rayleigh quotient on 1D grids and its minimizer.
//!
//! `R(u) = Σ w_{i+1/2}|Du|^p h_i / Σ w_i|u_i|^p ĥ_i` with midpoint weights
//! `w_{i+1/2} = (w_i + w_{i+1})/2` and nodal cell lengths
//! `ĥ_i = (t_{i+1} − t_{i−1})/2` (halved at the ends).

use serde::{Deserialize, Serialize};

use crate::radial::RadialProblem;
use crate::{spow, Error, Result};

/// Grid with volume weights and Dirichlet flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub nodes: Vec<f64>,
    pub weight: Vec<f64>,
    pub dirichlet_left: bool,
    pub dirichlet_right: bool,
}

impl Grid1D {
    pub fn new(nodes: Vec<f64>, weight: Vec<f64>, dirichlet_left: bool, dirichlet_right: bool) -> Result<Self> {
        let n = nodes.len();
        if n < 3 || weight.len() != n {
            return Err(Error::InvalidInput("grid needs at least 3 nodes and matching weights".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("grid nodes must be strictly increasing".into()));
        }
        for (i, &w) in weight.iter().enumerate() {
            let pole = (i == 0 && nodes[0] == 0.0) || (i == n - 1 && nodes[n - 1] == 0.0);
            if !(w > 0.0) && !(pole && w == 0.0) {
                return Err(Error::InvalidInput(format!("weight at node {i} must be positive, got {w}")));
            }
        }
        Ok(Self { nodes, weight, dirichlet_left, dirichlet_right })
    }

    /// Uniform grid on `[a, b]` with `n` intervals.
    pub fn uniform(a: f64, b: f64, n: usize, weight: impl Fn(f64) -> f64, dl: bool, dr: bool) -> Result<Self> {
        let nodes: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
        let w = nodes.iter().map(|&t| weight(t)).collect();
        Self::new(nodes, w, dl, dr)
    }

    /// Grid of a radial problem; the pole of a ball carries no boundary
    /// condition.
    pub fn for_problem(problem: &RadialProblem, n: usize) -> Result<Self> {
        let (a, b) = (problem.domain.left(), problem.domain.right());
        Self::uniform(a, b, n, |t| problem.weight(t), !problem.domain.is_ball(), true)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn spacing(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    fn midpoint_weight(&self, j: usize) -> f64 {
        0.5 * (self.weight[j] + self.weight[j + 1])
    }

    /// Nodal mass `w_i ĥ_i`.
    pub fn mass(&self, i: usize) -> f64 {
        let n = self.len();
        let left = if i > 0 { self.spacing(i - 1) } else { 0.0 };
        let right = if i + 1 < n { self.spacing(i) } else { 0.0 };
        self.weight[i] * 0.5 * (left + right)
    }

    fn is_free(&self, i: usize) -> bool {
        !((i == 0 && self.dirichlet_left) || (i == self.len() - 1 && self.dirichlet_right))
    }

    /// Zeroes the Dirichlet nodes.
    pub fn apply_bc(&self, u: &mut [f64]) {
        if self.dirichlet_left {
            u[0] = 0.0;
        }
        if self.dirichlet_right {
            let n = u.len();
            u[n - 1] = 0.0;
        }
    }
}

fn check_len(u: &[f64], grid: &Grid1D) -> Result<()> {
    if u.len() != grid.len() {
        return Err(Error::InvalidInput(format!("field has {} values, grid has {} nodes", u.len(), grid.len())));
    }
    Ok(())
}

/// `Σ w_{i+1/2}|(u_{i+1} − u_i)/h_i|^p h_i`.
pub fn p_energy(u: &[f64], grid: &Grid1D, p: f64) -> Result<f64> {
    check_len(u, grid)?;
    let mut e = 0.0;
    for j in 0..grid.len() - 1 {
        let h = grid.spacing(j);
        let d = (u[j + 1] - u[j]) / h;
        e += grid.midpoint_weight(j) * d.abs().powf(p) * h;
    }
    Ok(e)
}

/// `Σ w_i|u_i|^p ĥ_i`.
pub fn p_norm_pow(u: &[f64], grid: &Grid1D, p: f64) -> Result<f64> {
    check_len(u, grid)?;
    let mut s = 0.0;
    for (i, v) in u.iter().enumerate() {
        s += grid.mass(i) * v.abs().powf(p);
    }
    Ok(s)
}

pub fn rayleigh_quotient(u: &[f64], grid: &Grid1D, p: f64) -> Result<f64> {
    let den = p_norm_pow(u, grid, p)?;
    if !(den > 0.0) {
        return Err(Error::InvalidInput("Rayleigh quotient of a zero field".into()));
    }
    Ok(p_energy(u, grid, p)? / den)
}

/// Options for [`minimize_rayleigh`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Stop after `stall_window` successive iterations with relative
    /// decrease below `tol`.
    pub tol: f64,
    pub stall_window: usize,
    pub max_iter: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { tol: 1e-12, stall_window: 20, max_iter: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighMinimum {
    pub lambda_est: f64,
    pub u_min: Vec<f64>,
    /// Iterations before the final stall window.
    pub iterations: usize,
}

/// Positive distance-to-boundary profile respecting the grid's conditions.
pub fn default_initial(grid: &Grid1D) -> Vec<f64> {
    let a = grid.nodes[0];
    let b = *grid.nodes.last().unwrap();
    grid.nodes
        .iter()
        .map(|&t| match (grid.dirichlet_left, grid.dirichlet_right) {
            (true, true) => (t - a).min(b - t),
            (false, true) => b - t,
            (true, false) => t - a,
            (false, false) => 1.0,
        })
        .collect()
}

// Solves the symmetric tridiagonal system (diag, off) x = rhs in place.
fn thomas(diag: &[f64], off: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    c[0] = if n > 1 { off[0] / d } else { 0.0 };
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / d;
        }
        rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Minimizes the discrete quotient on the unit p-norm sphere.
///
/// Each step moves along the gradient of `R` preconditioned by the weighted
/// stiffness tridiagonal `p(p−1)w_{i+1/2}|D|^{p−2}/h` (exact energy Hessian;
/// for `p = 2` a unit step is one inverse iteration), renormalizes, and
/// backtracks with Armijo factor 0.5 and sufficient decrease `1e−4`.
pub fn minimize_rayleigh(grid: &Grid1D, p: f64, init: &[f64], opts: &MinimizeOptions) -> Result<RayleighMinimum> {
    check_len(init, grid)?;
    let n = grid.len();
    let mut u = init.to_vec();
    grid.apply_bc(&mut u);
    let norm = p_norm_pow(&u, grid, p)?;
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("initial field vanishes".into()));
    }
    let scale_to_sphere = |v: &mut Vec<f64>| -> Result<()> {
        let s = p_norm_pow(v, grid, p)?;
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::NonConvergence("iterate left the admissible set".into()));
        }
        let k = s.powf(-1.0 / p);
        for x in v.iter_mut() {
            *x *= k;
        }
        Ok(())
    };
    scale_to_sphere(&mut u)?;
    let free: Vec<usize> = (0..n).filter(|&i| grid.is_free(i)).collect();
    let mut quotient = rayleigh_quotient(&u, grid, p)?;
    let mut stall = 0;
    let mut last_progress = 0;
    let mut step0: f64 = 1.0;
    for iter in 0..opts.max_iter {
        // Gradient of R at the normalized point (N = 1).
        let d: Vec<f64> = (0..n - 1).map(|j| (u[j + 1] - u[j]) / grid.spacing(j)).collect();
        let dmax = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut grad = vec![0.0; n];
        for j in 0..n - 1 {
            let g = p * grid.midpoint_weight(j) * spow(d[j], p - 1.0);
            grad[j] -= g;
            grad[j + 1] += g;
        }
        for i in 0..n {
            grad[i] -= quotient * p * grid.mass(i) * spow(u[i], p - 1.0);
        }
        let floor = (1e-6 * dmax).max(1e-300);
        let k: Vec<f64> = (0..n - 1)
            .map(|j| p * (p - 1.0) * grid.midpoint_weight(j) * d[j].abs().max(floor).powf(p - 2.0) / grid.spacing(j))
            .collect();
        let m = free.len();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        let mut rhs = vec![0.0; m];
        for (a, &i) in free.iter().enumerate() {
            if i > 0 {
                diag[a] += k[i - 1];
            }
            if i + 1 < n {
                diag[a] += k[i];
            }
            // Tiny mass shift keeps the system definite on fully free grids.
            diag[a] += 1e-14 * quotient * p * (p - 1.0) * grid.mass(i);
            if a + 1 < m {
                off[a] = -k[i];
            }
            rhs[a] = -grad[i];
        }
        thomas(&diag, &off, &mut rhs);
        let mut dir = vec![0.0; n];
        for (a, &i) in free.iter().enumerate() {
            dir[i] = rhs[a];
        }
        let slope: f64 = (0..n).map(|i| grad[i] * dir[i]).sum();
        if !(slope < 0.0) {
            stall += 1;
            if stall >= opts.stall_window {
                break;
            }
            continue;
        }
        let mut tau = step0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial: Vec<f64> = u.iter().zip(&dir).map(|(a, b)| a + tau * b).collect();
            grid.apply_bc(&mut trial);
            if scale_to_sphere(&mut trial).is_ok() {
                let rq = rayleigh_quotient(&trial, grid, p)?;
                if rq <= quotient + 1e-4 * tau * slope {
                    accepted = Some((trial, rq));
                    break;
                }
            }
            tau *= 0.5;
        }
        let Some((next, rq)) = accepted else {
            // No admissible decrease left at working precision.
            break;
        };
        step0 = (2.0 * tau).min(1.0);
        let decrease = quotient - rq;
        u = next;
        quotient = rq;
        if decrease < opts.tol * quotient {
            stall += 1;
            if stall >= opts.stall_window {
                break;
            }
        } else {
            stall = 0;
            last_progress = iter + 1;
        }
        if iter + 1 == opts.max_iter {
            return Err(Error::NonConvergence(format!("Rayleigh minimization hit the cap of {} iterations", opts.max_iter)));
        }
    }
    for v in u.iter_mut() {
        *v = v.abs();
    }
    let lambda_est = rayleigh_quotient(&u, grid, p)?;
    Ok(RayleighMinimum { lambda_est, u_min: u, iterations: last_progress })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn string(n: usize) -> Grid1D {
        Grid1D::uniform(0.0, 1.0, n, |_| 1.0, true, true).unwrap()
    }

    #[test]
    fn energy_examples() {
        let g = string(100);
        let zero = vec![0.0; 101];
        assert_eq!(p_energy(&zero, &g, 2.0).unwrap(), 0.0);
        let lin: Vec<f64> = g.nodes.clone();
        assert!((p_energy(&lin, &g, 3.0).unwrap() - 1.0).abs() < 1e-13);
        let g = string(2000);
        let s: Vec<f64> = g.nodes.iter().map(|t| (PI * t).sin()).collect();
        assert!((p_energy(&s, &g, 2.0).unwrap() - PI * PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn quotient_examples() {
        let g = string(2000);
        let s: Vec<f64> = g.nodes.iter().map(|t| (PI * t).sin()).collect();
        assert!((rayleigh_quotient(&s, &g, 2.0).unwrap() - PI * PI).abs() < 1e-3);
        let b: Vec<f64> = g.nodes.iter().map(|t| t * (1.0 - t)).collect();
        assert!((rayleigh_quotient(&b, &g, 2.0).unwrap() - 10.0).abs() < 1e-3);
        assert!(rayleigh_quotient(&vec![0.0; 2001], &g, 2.0).is_err());
    }

    #[test]
    fn string_minimum() {
        let g = string(400);
        let init = default_initial(&g);
        let res = minimize_rayleigh(&g, 2.0, &init, &MinimizeOptions::default()).unwrap();
        assert!((res.lambda_est - PI * PI).abs() < 1e-2);
    }
}
