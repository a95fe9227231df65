//! Log-Gamma, Euler Beta and the Gauss hypergeometric function ₂F₁ on the
//! real parameter region `c > b > 0`, `a ≥ 0`, `0 ≤ z < 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{integrate_with, QuadOptions};

/// Arguments with `z` at or above this are rejected: the λ coefficients
/// diverge as `z → 1`.
pub const Z_MAX: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFnConfig {
    pub series_rel_tol: f64,
    pub series_max_terms: usize,
    pub z_series_cutoff: f64,
}

impl Default for SpecFnConfig {
    fn default() -> Self {
        SpecFnConfig {
            series_rel_tol: 1e-16,
            series_max_terms: 100_000,
            z_series_cutoff: 0.9,
        }
    }
}

impl SpecFnConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_rel_tol > 0.0 && self.series_rel_tol < 1e-6) {
            return Err(Error::domain(format!(
                "series_rel_tol must lie in (0, 1e-6), got {}",
                self.series_rel_tol
            )));
        }
        if !(self.z_series_cutoff > 0.0 && self.z_series_cutoff < 1.0) {
            return Err(Error::domain(format!(
                "z_series_cutoff must lie in (0, 1), got {}",
                self.z_series_cutoff
            )));
        }
        if self.series_max_terms == 0 {
            return Err(Error::domain("series_max_terms must be positive"));
        }
        Ok(())
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!("ln_gamma needs a finite positive argument, got {x}")));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1)/x keeps the series argument in its accurate range.
        return Ok(lanczos_ln_gamma(x + 1.0) - x.ln());
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Euler Beta `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::domain(format!("beta needs positive arguments, got ({x}, {y})")));
    }
    Ok((ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?).exp())
}

fn check_region(a: f64, b: f64, c: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain("hyp2f1 arguments must be finite"));
    }
    if a < 0.0 {
        return Err(Error::domain(format!("hyp2f1 needs a >= 0, got {a}")));
    }
    if !(b > 0.0 && c > b) {
        return Err(Error::domain(format!("hyp2f1 needs c > b > 0, got b = {b}, c = {c}")));
    }
    if !(0.0..Z_MAX).contains(&z) {
        return Err(Error::domain(format!("hyp2f1 needs 0 <= z < 1 - 1e-12, got {z}")));
    }
    Ok(())
}

/// `₂F₁(a, b; c; z)` with the default configuration.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1_with(a, b, c, z, &SpecFnConfig::default())
}

/// Dispatches to the power series for `z ≤ z_series_cutoff` and to the Euler
/// integral above it.
pub fn hyp2f1_with(a: f64, b: f64, c: f64, z: f64, cfg: &SpecFnConfig) -> Result<f64> {
    cfg.validate()?;
    check_region(a, b, c, z)?;
    if z <= cfg.z_series_cutoff {
        series(a, b, c, z, cfg)
    } else {
        euler_integral(a, b, c, z)
    }
}

/// Gauss power series summed until two consecutive terms fall below
/// `series_rel_tol` relative to the partial sum.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64, cfg: &SpecFnConfig) -> Result<f64> {
    cfg.validate()?;
    check_region(a, b, c, z)?;
    series(a, b, c, z, cfg)
}

/// `(1/B(b, c−b))·∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−zt)^{−a} dt` by adaptive quadrature.
pub fn hyp2f1_euler(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_region(a, b, c, z)?;
    euler_integral(a, b, c, z)
}

fn series(a: f64, b: f64, c: f64, z: f64, cfg: &SpecFnConfig) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small_run = 0;
    for n in 0..cfg.series_max_terms {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term.abs() <= cfg.series_rel_tol * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Numeric {
        msg: format!("2F1 series did not converge in {} terms", cfg.series_max_terms),
        value: sum,
        err_est: term.abs(),
    })
}

fn euler_integral(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let d = c - b;
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_depth: 60,
        max_intervals: 50_000,
    };
    let kernel = |t: f64| (1.0 - z * t).powf(-a);
    // Split at 1/2 and substitute t = u^{1/b} on the left, 1 − t = v^{1/d} on
    // the right; both endpoint weights become constants.
    let left = integrate_with(
        |u: f64| {
            let t = u.powf(1.0 / b);
            (1.0 - t).powf(d - 1.0) * kernel(t)
        },
        0.0,
        0.5_f64.powf(b),
        &opts,
    )?;
    let right = integrate_with(
        |v: f64| {
            let s = v.powf(1.0 / d);
            (1.0 - s).powf(b - 1.0) * kernel(1.0 - s)
        },
        0.0,
        0.5_f64.powf(d),
        &opts,
    )?;
    Ok((left.value / b + right.value / d) / beta(b, d)?)
}
