//! Test-only oracles, independent of the library's integrator and closed forms.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh rule on `[0, 1]`; the integrand receives `(t, 1 − t)` computed
/// without cancellation, so algebraic endpoint singularities are harmless.
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

/// `∫ₐᵇ f` by tanh-sinh after mapping to `[0, 1]`.
pub fn oracle_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    (b - a) * tanh_sinh01(|t, omt| f(a * omt + b * t))
}

/// `(ab/(b−a))∫ₐᵇ f(u)/u² du`.
pub fn oracle_weighted_mean<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    a * b / (b - a) * oracle_integral(|u| f(u) / (u * u), a, b)
}

/// The defining λ₁..λ₄ integrands, written out from their definitions.
pub fn lambda_oracle(kind: u8, theta: f64, x: f64, s: f64, vartheta: f64, rho: f64) -> f64 {
    tanh_sinh01(|t, omt| {
        let den = (t * theta + omt * x).powf(2.0 * vartheta);
        match kind {
            1 | 3 => t.powf(rho + s) / den,
            2 | 4 => t.powf(rho) * omt.powf(s) / den,
            _ => unreachable!("kinds 1..4"),
        }
    })
}

pub fn lambda5_oracle(theta: f64, x: f64) -> f64 {
    tanh_sinh01(|t, omt| {
        let den = t * theta + omt * x;
        t / (den * den)
    })
}

pub type RealFn = fn(f64) -> f64;

/// Registry functions with hand-written values and derivatives.
pub fn registry_closed(id: &str) -> (RealFn, RealFn) {
    match id {
        "const:2" => (|_| 2.0, |_| 0.0),
        "id" => (|u| u, |_| 1.0),
        "pow:2" => (|u| u * u, |u| 2.0 * u),
        "pow:0.5" => (|u| u.sqrt(), |u| 0.5 / u.sqrt()),
        "inv" => (|u| 1.0 / u, |u| -1.0 / (u * u)),
        "neg" => (|u| -u, |_| -1.0),
        _ => panic!("no closed form for {id}"),
    }
}

pub fn rel(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        x.abs()
    } else {
        (x - y).abs() / y.abs()
    }
}
