//! Quadrature oracle and the function registry.

mod quad;
mod registry;

pub use quad::{
    integrate, integrate_with, QuadOptions, QuadResult, DEFAULT_MAX_DEPTH, DEFAULT_TOL,
    EXACT_DEGREE, ROUNDOFF_REL,
};
pub use registry::{derivative, uses_finite_difference, FunctionSpec, Interval};

pub(crate) use registry::uniform_grid;

use crate::error::{Error, Result};

/// The harmonic integral mean `(ab/(b−a))·∫ₐᵇ f(u)/u² du`.
pub fn weighted_mean(f: &FunctionSpec, iv: &Interval, tol: f64) -> Result<f64> {
    Ok(weighted_mean_quad(f, iv, tol)?.value)
}

/// As [`weighted_mean`], keeping the quadrature diagnostics (already scaled by
/// `ab/(b−a)`).
pub fn weighted_mean_quad(f: &FunctionSpec, iv: &Interval, tol: f64) -> Result<QuadResult> {
    let (a, b) = (iv.a(), iv.b());
    if !f.covers(a, b) {
        let (lo, hi) = f.domain();
        return Err(Error::domain(format!(
            "[{a}, {b}] is not inside the domain [{lo}, {hi}] of {}",
            f.id()
        )));
    }
    let scale = a * b / (b - a);
    let r = integrate(|u| f.eval_unchecked(u) / (u * u), a, b, tol / scale)?;
    Ok(QuadResult {
        value: scale * r.value,
        err_est: scale * r.err_est,
        evals: r.evals,
    })
}
