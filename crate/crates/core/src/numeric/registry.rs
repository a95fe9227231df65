use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed interval `[a, b]` with `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || a >= b {
            return Err(Error::domain(format!("interval requires 0 < a < b, got [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `n` uniform points from `a` to `b` inclusive; the last point is `b` exactly.
    /// A single point is placed at the midpoint.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.a, self.b, n)
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// A scalar function with an optional analytic derivative and the closed
/// range on which it may be evaluated.
#[derive(Clone)]
pub struct FunctionSpec {
    id: String,
    eval: ScalarFn,
    deriv: Option<ScalarFn>,
    domain_lo: f64,
    domain_hi: f64,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("id", &self.id)
            .field("analytic_deriv", &self.deriv.is_some())
            .field("domain", &(self.domain_lo, self.domain_hi))
            .finish()
    }
}

impl FunctionSpec {
    pub fn new<F>(id: impl Into<String>, eval: F, domain_lo: f64, domain_hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if domain_lo.is_nan() || domain_hi.is_nan() || domain_lo < 0.0 || domain_lo >= domain_hi {
            return Err(Error::domain(format!(
                "function domain must satisfy 0 <= lo < hi, got [{domain_lo}, {domain_hi}]"
            )));
        }
        Ok(FunctionSpec {
            id: id.into(),
            eval: Arc::new(eval),
            deriv: None,
            domain_lo,
            domain_hi,
        })
    }

    pub fn with_derivative<D>(mut self, deriv: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    /// Parses a registry id: `const:<c>`, `id`, `pow:<r>`, `inv` or `neg`.
    pub fn parse(id: &str) -> Result<Self> {
        let (head, arg) = match id.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (id, None),
        };
        let number = |what: &str| -> Result<f64> {
            let raw = arg.ok_or_else(|| Error::usage(format!("`{what}` needs a value, e.g. `{what}:2`")))?;
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::usage(format!("cannot parse `{raw}` in function id `{id}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::usage(format!("non-finite parameter in function id `{id}`")))
            }
        };
        match (head, arg) {
            ("const", _) => Ok(Self::constant(number("const")?)),
            ("pow", _) => Self::power(number("pow")?),
            ("id", None) => Ok(Self::identity()),
            ("inv", None) => Ok(Self::reciprocal()),
            ("neg", None) => Ok(Self::negated()),
            _ => Err(Error::usage(format!(
                "unknown function `{id}` (expected const:<c>, id, pow:<r>, inv, neg)"
            ))),
        }
    }

    pub fn constant(c: f64) -> Self {
        FunctionSpec {
            id: format!("const:{c}"),
            eval: Arc::new(move |_| c),
            deriv: Some(Arc::new(|_| 0.0)),
            domain_lo: 0.0,
            domain_hi: f64::INFINITY,
        }
    }

    pub fn identity() -> Self {
        FunctionSpec {
            id: "id".into(),
            eval: Arc::new(|u| u),
            deriv: Some(Arc::new(|_| 1.0)),
            domain_lo: 0.0,
            domain_hi: f64::INFINITY,
        }
    }

    /// `u ↦ u^r` for `r > 0`.
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::usage(format!("pow:<r> needs r > 0, got {r}")));
        }
        Ok(FunctionSpec {
            id: format!("pow:{r}"),
            eval: Arc::new(move |u: f64| u.powf(r)),
            deriv: Some(Arc::new(move |u: f64| r * u.powf(r - 1.0))),
            domain_lo: 0.0,
            domain_hi: f64::INFINITY,
        })
    }

    pub fn reciprocal() -> Self {
        FunctionSpec {
            id: "inv".into(),
            eval: Arc::new(|u| 1.0 / u),
            deriv: Some(Arc::new(|u| -1.0 / (u * u))),
            domain_lo: f64::MIN_POSITIVE,
            domain_hi: f64::INFINITY,
        }
    }

    /// `u ↦ −u`: linear, nonincreasing, and not harmonically convex.
    pub fn negated() -> Self {
        FunctionSpec {
            id: "neg".into(),
            eval: Arc::new(|u| -u),
            deriv: Some(Arc::new(|_| -1.0)),
            domain_lo: 0.0,
            domain_hi: f64::INFINITY,
        }
    }

    /// The registry members used by the verification matrices.
    pub fn registry() -> Vec<FunctionSpec> {
        ["const:2", "id", "pow:0.5", "pow:2", "inv", "neg"]
            .iter()
            .map(|id| Self::parse(id).expect("registry ids parse"))
            .collect()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_lo, self.domain_hi)
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.domain_lo <= lo && hi <= self.domain_hi
    }

    /// Evaluates `f(u)`, rejecting points outside the domain and non-finite values.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(self.domain_lo <= u && u <= self.domain_hi) {
            return Err(Error::domain(format!(
                "{} evaluated at {u} outside its domain [{}, {}]",
                self.id, self.domain_lo, self.domain_hi
            )));
        }
        let v = (self.eval)(u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("{} is not finite at {u}", self.id)))
        }
    }

    /// Evaluates without the domain check. Used inside integrands, where
    /// limits have already been validated against the domain.
    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        (self.eval)(u)
    }

    pub(crate) fn analytic_derivative(&self, u: f64) -> Option<f64> {
        self.deriv.as_ref().map(|d| d(u))
    }

    /// A new function `u ↦ |f′(u)|^q`. It carries no derivative of its own.
    pub fn abs_derivative_pow(&self, q: f64) -> FunctionSpec {
        let base = self.clone();
        FunctionSpec {
            id: format!("|{}'|^{q}", self.id),
            eval: Arc::new(move |u| match derivative(&base, u) {
                Ok(d) => d.abs().powf(q),
                Err(_) => f64::NAN,
            }),
            deriv: None,
            domain_lo: self.domain_lo,
            domain_hi: self.domain_hi,
        }
    }
}

/// `f′(x)`: the analytic derivative when the function has one, otherwise a
/// central difference with step `cbrt(ε)·max(1, |x|)`.
pub fn derivative(f: &FunctionSpec, x: f64) -> Result<f64> {
    if let Some(d) = f.analytic_derivative(x) {
        if !(f.domain_lo <= x && x <= f.domain_hi) {
            return Err(Error::domain(format!("{}' requested at {x} outside the domain", f.id)));
        }
        return if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::domain(format!("{}' is not finite at {x}", f.id)))
        };
    }
    let h = f64::EPSILON.cbrt() * x.abs().max(1.0);
    if x - h < f.domain_lo || x + h > f.domain_hi {
        return Err(Error::domain(format!(
            "{} has no analytic derivative and {x} is too close to the domain boundary",
            f.id
        )));
    }
    // The step is rounded to a representable difference so the divisor matches.
    let hi = x + h;
    let lo = x - h;
    Ok((f.eval(hi)? - f.eval(lo)?) / (hi - lo))
}

/// Whether `derivative` would fall back to finite differences.
pub fn uses_finite_difference(f: &FunctionSpec) -> bool {
    !f.has_derivative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_vocabulary() {
        for id in ["const:2", "const:-1.5", "id", "pow:0.5", "pow:3", "inv", "neg"] {
            let f = FunctionSpec::parse(id).unwrap();
            assert!(f.has_derivative(), "{id}");
        }
        for bad in ["cosh", "pow", "pow:x", "pow:-1", "const:", "id:3", "const:inf"] {
            assert!(matches!(FunctionSpec::parse(bad), Err(Error::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn interval_invariants() {
        assert!(Interval::new(1.0, 2.0).is_ok());
        assert!(Interval::new(0.0, 2.0).is_err());
        assert!(Interval::new(2.0, 2.0).is_err());
        assert!(Interval::new(3.0, 2.0).is_err());
        let g = Interval::new(0.5, 3.0).unwrap().grid(9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[8], 3.0);
        assert_eq!(g[4], 1.75);
    }

    #[test]
    fn derivative_examples() {
        let sq = FunctionSpec::power(2.0).unwrap();
        assert_eq!(derivative(&sq, 1.5).unwrap(), 3.0);
        assert_eq!(derivative(&FunctionSpec::constant(7.0), 4.0).unwrap(), 0.0);
        let root = FunctionSpec::power(0.5).unwrap();
        assert_eq!(derivative(&root, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn finite_difference_fallback() {
        let f = FunctionSpec::new("cube", |u: f64| u * u * u, 0.0, 10.0).unwrap();
        assert!(uses_finite_difference(&f));
        let d = derivative(&f, 2.0).unwrap();
        assert!((d - 12.0).abs() < 1e-8 * 12.0, "{d}");
        // boundary without analytic derivative
        assert!(matches!(derivative(&f, 0.0), Err(Error::Domain(_))));
        assert!(matches!(derivative(&f, 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn analytic_derivatives_match_central_differences() {
        for f in FunctionSpec::registry() {
            let numeric = FunctionSpec::new("fd", {
                let g = f.clone();
                move |u| g.eval_unchecked(u)
            }, 0.01, 100.0)
            .unwrap();
            for &x in &[0.3, 0.75, 1.0, 1.7, 2.9, 6.5] {
                let exact = derivative(&f, x).unwrap();
                let approx = derivative(&numeric, x).unwrap();
                let scale = exact.abs().max(1.0);
                assert!((exact - approx).abs() <= 1e-6 * scale, "{} at {x}: {exact} vs {approx}", f.id());
            }
        }
    }

    #[test]
    fn domain_checks() {
        let inv = FunctionSpec::reciprocal();
        assert!(inv.eval(0.0).is_err());
        assert!(inv.eval(2.0).is_ok());
        assert!(FunctionSpec::new("bad", |u| u, 2.0, 1.0).is_err());
    }
}
