//! Adaptive Dormand–Prince 5(4) integrator with sign-change event location.

use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Right-hand side of a 2-component autonomous-in-form system `y′ = f(t, y)`.
pub trait Rhs {
    fn eval(&self, t: f64, y: [f64; 2]) -> [f64; 2];
}

impl<F: Fn(f64, [f64; 2]) -> [f64; 2]> Rhs for F {
    fn eval(&self, t: f64, y: [f64; 2]) -> [f64; 2] {
        self(t, y)
    }
}

#[inline]
fn axpy(y: [f64; 2], h: f64, terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = y;
    for (a, k) in terms {
        out[0] += h * a * k[0];
        out[1] += h * a * k[1];
    }
    out
}

/// One Dormand–Prince step: returns the 5th order solution and the error
/// estimate.
pub fn dp_step<R: Rhs + ?Sized>(rhs: &R, t: f64, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    let k1 = rhs.eval(t, y);
    let k2 = rhs.eval(t + C2 * h, axpy(y, h, &[(A21, k1)]));
    let k3 = rhs.eval(t + C3 * h, axpy(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = rhs.eval(t + C4 * h, axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = rhs.eval(t + C5 * h, axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
    let k6 = rhs.eval(t + h, axpy(y, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]));
    let y5 = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = rhs.eval(t + h, y5);
    let err = axpy([0.0; 2], h, &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)]);
    (y5, err)
}

/// Tolerances and step bounds.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on a single step.
    pub h_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, h_max: f64::INFINITY }
    }
}

/// Integrator state advanced piecewise to target abscissae.
pub struct Integrator<'a, R: Rhs + ?Sized> {
    rhs: &'a R,
    pub t: f64,
    pub y: [f64; 2],
    h: f64,
    tol: Tolerances,
    /// Accepted `(t, y)` pairs when recording is on.
    pub record: Option<Vec<(f64, [f64; 2])>>,
}

/// Where a sign change of `y[0]` from positive to nonpositive was located.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub t: f64,
    pub y: [f64; 2],
}

impl<'a, R: Rhs + ?Sized> Integrator<'a, R> {
    pub fn new(rhs: &'a R, t0: f64, y0: [f64; 2], h0: f64, tol: Tolerances) -> Self {
        Self { rhs, t: t0, y: y0, h: h0, tol, record: None }
    }

    pub fn recording(mut self) -> Self {
        self.record = Some(vec![(self.t, self.y)]);
        self
    }

    fn error_norm(&self, y_new: [f64; 2], err: [f64; 2]) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..2 {
            let sc = self.tol.atol + self.tol.rtol * self.y[i].abs().max(y_new[i].abs());
            e = e.max((err[i] / sc).abs());
        }
        e
    }

    /// Advances to `t_end`. With `stop_at_zero`, stops at the first point
    /// where `y[0]` crosses from positive to nonpositive and returns it.
    pub fn advance_to(&mut self, t_end: f64, stop_at_zero: Option<f64>) -> Result<Option<Crossing>> {
        let span = (t_end - self.t).abs().max(self.t.abs()).max(1e-300);
        while self.t < t_end {
            let remaining = t_end - self.t;
            let mut h = self.h.min(self.tol.h_max);
            // stretch onto the target instead of leaving a sliver behind
            if h >= remaining * (1.0 - 1e-3) {
                h = remaining;
            }
            let last = h == remaining;
            if h <= 1e-15 * span {
                return Err(Error::Integration(format!("step size underflow at t = {}", self.t)));
            }
            let (y_new, err) = dp_step(self.rhs, self.t, self.y, h);
            if !y_new[0].is_finite() || !y_new[1].is_finite() {
                // Treat as a rejected step; a NaN from a too-large step near a
                // singular point often recovers at a smaller step.
                self.h = 0.25 * h;
                if self.h <= 1e-15 * span {
                    return Err(Error::Integration(format!("non-finite state at t = {}", self.t)));
                }
                continue;
            }
            let en = self.error_norm(y_new, err);
            if en <= 1.0 {
                let t_new = if last { t_end } else { self.t + h };
                if let Some(tol_t) = stop_at_zero {
                    if self.y[0] > 0.0 && y_new[0] <= 0.0 {
                        let cross = self.locate_zero(h, y_new, tol_t)?;
                        return Ok(Some(cross));
                    }
                }
                self.t = t_new;
                self.y = y_new;
                if let Some(rec) = self.record.as_mut() {
                    rec.push((self.t, self.y));
                }
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
            } else {
                self.h = h * (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        Ok(None)
    }

    // Illinois regula falsi on the step length, each trial a single step from
    // the accepted start point.
    fn locate_zero(&self, h: f64, y_end: [f64; 2], tol_t: f64) -> Result<Crossing> {
        let (mut a, mut fa) = (0.0, self.y[0]);
        let (mut b, mut fb) = (h, y_end[0]);
        let mut yb = y_end;
        let mut side = 0i8;
        for _ in 0..200 {
            if (b - a) <= tol_t {
                break;
            }
            let mut tau = (a * fb - b * fa) / (fb - fa);
            if !(tau > a && tau < b) {
                tau = 0.5 * (a + b);
            }
            let (y_tau, _) = dp_step(self.rhs, self.t, self.y, tau);
            let ft = y_tau[0];
            if !ft.is_finite() {
                return Err(Error::Integration("non-finite state during zero location".into()));
            }
            if ft > 0.0 {
                a = tau;
                fa = ft;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = tau;
                fb = ft;
                yb = y_tau;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
            if ft == 0.0 {
                break;
            }
        }
        // Linear interpolation inside the final bracket.
        let tau = if fa - fb != 0.0 { a + (b - a) * fa / (fa - fb) } else { b };
        let (y_tau, _) = dp_step(self.rhs, self.t, self.y, tau);
        let y = if y_tau[0].is_finite() { y_tau } else { yb };
        Ok(Crossing { t: self.t + tau, y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_zero() {
        // y0' = y1, y1' = -y0, y0(0)=1 -> cos t, zero at pi/2
        let rhs = |_t: f64, y: [f64; 2]| [y[1], -y[0]];
        let mut it = Integrator::new(&rhs, 0.0, [1.0, 0.0], 1e-3, Tolerances::default());
        let c = it.advance_to(3.0, Some(1e-13)).unwrap().unwrap();
        assert!((c.t - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn lands_exactly_on_targets() {
        let rhs = |_t: f64, y: [f64; 2]| [y[0], 2.0 * y[1]];
        let mut it = Integrator::new(&rhs, 0.0, [1.0, 1.0], 0.1, Tolerances::default());
        for k in 1..=10 {
            let tk = k as f64 * 0.1;
            it.advance_to(tk, None).unwrap();
            assert_eq!(it.t, tk);
            assert!((it.y[0] - tk.exp()).abs() < 1e-9 * tk.exp());
            assert!((it.y[1] - (2.0 * tk).exp()).abs() < 1e-9 * (2.0 * tk).exp());
        }
    }
}
