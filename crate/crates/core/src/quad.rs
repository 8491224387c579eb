//! Fixed-order Gauss–Legendre quadrature.

const NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss8(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for k in 0..8 {
        acc += WEIGHTS[k] * f(mid + half * NODES[k]);
    }
    acc * half
}

/// Gauss–Legendre on `[a, b]` after the substitution `t = e ± (b−a)u^k`
/// grading towards the endpoint `e` (`b` when `at_right`, else `a`). Handles
/// integrands behaving like `|t − e|^γ` with `γ > −1` far better than
/// [`gauss8`].
pub fn gauss8_graded(a: f64, b: f64, at_right: bool, k: u32, mut f: impl FnMut(f64) -> f64) -> f64 {
    let len = b - a;
    let kf = k as f64;
    gauss8(0.0, 1.0, |u| {
        let jac = len * kf * u.powi(k as i32 - 1);
        let d = len * u.powi(k as i32);
        let t = if at_right { b - d } else { a + d };
        f(t) * jac
    })
}

/// Grading exponent making `|t − e|^{p−1}` at least linear in `u`.
pub fn grading_for(p: f64) -> u32 {
    if p >= 2.0 {
        1
    } else {
        (1.0 / (p - 1.0)).ceil().clamp(2.0, 24.0) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_degree_15_exactly() {
        let v = gauss8(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-10);
        let s = gauss8(0.0, std::f64::consts::PI, f64::sin);
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn graded_rule_handles_root_singularity() {
        let exact = 2.0 / 3.0;
        let plain = gauss8(0.0, 1.0, |x| (1.0 - x).sqrt());
        let graded = gauss8_graded(0.0, 1.0, true, 2, |x| (1.0 - x).sqrt());
        assert!((graded - exact).abs() < 1e-14);
        assert!((plain - exact).abs() > 1e-5);
    }
}
