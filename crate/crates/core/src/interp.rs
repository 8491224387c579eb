//! Piecewise cubic Hermite interpolation.

use crate::{Error, Result};

/// Cubic Hermite value and first derivative on `[x0, x1]`.
#[inline]
pub fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    let dv = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
    (v, dv)
}

/// Shape-preserving (Fritsch–Butland) piecewise cubic through `(x_i, y_i)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Interpolant with the standard one-sided end slopes.
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::build(x, y, None)
    }

    /// Interpolant whose slope at `x[0]` is fixed to `d0`.
    pub fn with_left_slope(x: &[f64], y: &[f64], d0: f64) -> Result<Self> {
        Self::build(x, y, Some(d0))
    }

    fn build(x: &[f64], y: &[f64], left: Option<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::InvalidInput("monotone cubic needs at least 3 points".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("abscissae must be strictly increasing".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            if del[k - 1] * del[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
            }
        }
        d[0] = match left {
            Some(v) => v,
            None => edge_slope(h[0], h[1], del[0], del[1]),
        };
        d[n - 1] = edge_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        Ok(Self { x: x.to_vec(), y: y.to_vec(), d })
    }

    /// `(value, first, second)` derivative; constant extrapolation of the
    /// end cubics outside the table.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        let i = self.x.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i], self.d[i + 1]);
        let (v, dv) = hermite(x0, x1, y0, y1, d0, d1, t);
        let s = (t - x0) / h;
        let dd = ((12.0 * s - 6.0) * (y0 - y1) / h + (6.0 * s - 4.0) * d0 + (6.0 * s - 2.0) * d1) / h;
        (v, dv, dd)
    }
}

// Three-point end formula with the usual shape-preserving limits.
fn edge_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic_data_derivatives_at_nodes() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let mc = MonotoneCubic::with_left_slope(&x, &y, 0.0).unwrap();
        for &t in &x {
            assert!((mc.eval(t).0 - t * t * t).abs() < 1e-14);
        }
        let (v, _, _) = mc.eval(0.55);
        assert!((v - 0.55f64.powi(3)).abs() < 2e-3);
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.1, 5.0, 5.1, 5.2];
        let mc = MonotoneCubic::new(&x, &y).unwrap();
        let mut prev = -1.0;
        for k in 0..=400 {
            let v = mc.eval(k as f64 * 0.01).0;
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn hermite_exact_for_cubics() {
        let f = |x: f64| 1.0 - 2.0 * x + 3.0 * x * x - x * x * x;
        let df = |x: f64| -2.0 + 6.0 * x - 3.0 * x * x;
        let (v, dv) = hermite(0.3, 0.8, f(0.3), f(0.8), df(0.3), df(0.8), 0.47);
        assert!((v - f(0.47)).abs() < 1e-14);
        assert!((dv - df(0.47)).abs() < 1e-13);
    }
}
