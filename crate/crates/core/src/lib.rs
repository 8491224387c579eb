//! Radial p-Laplacian spectral toolkit.
//!
//! Computes first Dirichlet eigenvalues of the p-Laplacian on geodesic balls
//! and annuli of rotationally symmetric models, and evaluates the lower-bound
//! certificates, comparison inequalities and transform identities that go
//! with them.
//!
//! Module map:
//! - [`modelspace`]: model functions `S_c`, warping profiles, curvature checks.
//! - [`radial`]: shooting solver for the radial eigenvalue problem.
//! - [`rayleigh`]: discrete weighted Rayleigh quotient and its minimizer.
//! - [`bounds`]: Barta, Picone, divergence-field and stability certificates.
//! - [`critical`]: critical radius for the transplanted comparison.
//! - [`surfaces`]: plane and catenoid, extrinsic transplantation, model control.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod critical;
mod error;
pub mod interp;
pub mod modelspace;
pub mod ode;
pub mod quad;
pub mod radial;
pub mod rayleigh;
pub mod surfaces;

pub use error::{Error, Result};

/// Signed power `sign(x)·|x|^e`.
#[inline]
pub fn spow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(e)
    }
}
