//! Test-only quadrature used as an independent oracle. Shares no code with
//! the adaptive integrator.

use std::f64::consts::FRAC_PI_2;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * i as f64);
    }
    acc * h / 3.0
}

/// Tanh-sinh rule on `[0, 1]`. The integrand receives `(t, 1 − t)`, both
/// computed without cancellation, so algebraic endpoint singularities are fine.
pub fn tanh_sinh01<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 256.0;
    let kmax = (4.5 / h) as i64;
    let mut acc = 0.0;
    for k in -kmax..=kmax {
        let s = k as f64 * h;
        let u = FRAC_PI_2 * s.sinh();
        let e = (-2.0 * u.abs()).exp();
        let (small, large) = (e / (1.0 + e), 1.0 / (1.0 + e));
        let (t, omt) = if u >= 0.0 { (large, small) } else { (small, large) };
        if t == 0.0 || omt == 0.0 {
            continue;
        }
        let w = FRAC_PI_2 * s.cosh() * 2.0 * t * omt;
        let v = f(t, omt);
        if w > 0.0 && v.is_finite() {
            acc += w * v;
        }
    }
    acc * h
}

#[test]
fn oracle_sanity() {
    assert!((simpson(|t| t * t, 0.0, 3.0, 10) - 9.0).abs() < 1e-12);
    let half_pi = tanh_sinh01(|t, omt| 1.0 / (t * omt).sqrt());
    assert!((half_pi - std::f64::consts::PI).abs() < 1e-12, "{half_pi}");
}
