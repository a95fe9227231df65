//! Empirical checks: the integral identity behind the Ostrowski-type bounds,
//! hypothesis-gated slack scans for each theorem, and closed-form versus
//! quadrature agreement for the λ family.

use serde::Serialize;

use crate::bounds::{
    evaluate_ostrowski, hh_harmonic_bounds, lambda5, lambda_quadrature, lambda_with_form, BoundResult, Exponent,
    Lambda2Form, LambdaArgs, LambdaKind, Theorem, CSV_HEADER,
};
use crate::convexity::{check_convexity_on, ConvexityMode, ConvexityReport, GridSpec, SExponent};
use crate::error::{Error, Result};
use crate::numeric::{derivative, integrate, weighted_mean, FunctionSpec, Interval, DEFAULT_TOL};
use crate::output::{ser_f64, ser_opt_f64};

/// Allowed negative slack: quadrature and special-function error on both sides.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub x_grid: usize,
    pub hypothesis_grid: GridSpec,
    pub quad_tol: f64,
    pub slack_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            x_grid: 9,
            hypothesis_grid: GridSpec::new(17, 9),
            quad_tol: DEFAULT_TOL,
            slack_tol: SLACK_TOL,
        }
    }
}

/// `|lhs − rhs|` of the identity
/// `f(x) − M(f) = (ab/(b−a))·[(x−a)²∫₀¹ t·f′(ax/(ta+(1−t)x))/(ta+(1−t)x)² dt
///               − (b−x)²∫₀¹ t·f′(bx/(tb+(1−t)x))/(tb+(1−t)x)² dt]`
/// with every integral done by quadrature.
pub fn lemma_residual(f: &FunctionSpec, x: f64, iv: &Interval, tol: f64) -> Result<f64> {
    if !iv.contains(x) {
        return Err(Error::domain(format!("x = {x} lies outside [{}, {}]", iv.a(), iv.b())));
    }
    let (a, b) = (iv.a(), iv.b());
    let lhs = f.eval(x)? - weighted_mean(f, iv, tol)?;
    let side = |end: f64| -> Result<f64> {
        let w = (x - end) * (x - end);
        if w == 0.0 {
            return Ok(0.0);
        }
        let r = integrate(
            |t| {
                let den = t * end + (1.0 - t) * x;
                derivative(f, end * x / den).map_or(f64::NAN, |d| t * d / (den * den))
            },
            0.0,
            1.0,
            tol,
        )?;
        Ok(w * r.value)
    };
    let rhs = a * b / (b - a) * (side(a)? - side(b)?);
    Ok((lhs - rhs).abs())
}

/// Checks the theorem's hypothesis on a sample grid: harmonic s-convexity of
/// `f` for T2_2, of `u ↦ |f′(u)|^q` otherwise.
pub fn hypothesis_gate(
    theorem: Theorem,
    f: &FunctionSpec,
    iv: &Interval,
    s: SExponent,
    exponent: Option<Exponent>,
    grid: &GridSpec,
) -> Result<ConvexityReport> {
    let mode = ConvexityMode::HarmonicallySConvex;
    match (theorem, exponent) {
        (Theorem::T2_2, _) => check_convexity_on(f, iv, mode, s, grid),
        (_, Some(e)) => check_convexity_on(&f.abs_derivative_pow(e.q()), iv, mode, s, grid),
        (_, None) => Err(Error::usage(format!("{theorem} needs an exponent"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDescription {
    pub function: String,
    #[serde(serialize_with = "ser_f64")]
    pub a: f64,
    #[serde(serialize_with = "ser_f64")]
    pub b: f64,
    #[serde(serialize_with = "ser_f64")]
    pub s: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub q: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub p: Option<f64>,
    pub x_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub grid: GridDescription,
    pub hypothesis: ConvexityReport,
    pub results: Vec<BoundResult>,
    /// Minimum slack over `results`; absent when there are none.
    #[serde(serialize_with = "ser_opt_f64")]
    pub min_slack: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub slack_tolerance: f64,
    pub hypothesis_ok: bool,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.results {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Gates on the hypothesis, then evaluates the inequality on `x_grid` uniform
/// points of `[a, b]` (T2_2 yields its two chain links instead).
pub fn verify_theorem(
    theorem: Theorem,
    f: &FunctionSpec,
    iv: &Interval,
    s: SExponent,
    exponent: Option<Exponent>,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    if opts.x_grid == 0 {
        return Err(Error::usage("the x grid must contain at least one point"));
    }
    if theorem != Theorem::T2_2 && exponent.is_none() {
        return Err(Error::usage(format!("{theorem} needs an exponent")));
    }
    let exponent = if theorem == Theorem::T2_2 { None } else { exponent };
    let hypothesis = hypothesis_gate(theorem, f, iv, s, exponent, &opts.hypothesis_grid)?;
    let hypothesis_ok = hypothesis.holds();

    let mut results = Vec::new();
    if hypothesis_ok {
        if theorem == Theorem::T2_2 {
            let triple = hh_harmonic_bounds(f, iv, s, opts.quad_tol)?;
            let x = 2.0 * iv.a() * iv.b() / (iv.a() + iv.b());
            let row = |name: &str, lhs: f64, rhs: f64| BoundResult {
                theorem: name.to_owned(),
                x,
                a: iv.a(),
                b: iv.b(),
                s: Some(s.get()),
                q: None,
                p: None,
                m: None,
                lhs,
                rhs,
                slack: rhs - lhs,
                hypothesis_ok,
                finite_difference: false,
            };
            results.push(row("T2_2:left", triple.left, triple.middle));
            results.push(row("T2_2:right", triple.middle, triple.right));
        } else {
            let e = exponent.expect("checked above");
            for x in iv.grid(opts.x_grid) {
                results.push(evaluate_ostrowski(theorem, f, x, iv, s, e, None, hypothesis_ok, opts.quad_tol)?);
            }
        }
    }
    let min_slack = results.iter().map(|r| r.slack).reduce(f64::min);
    let pass = hypothesis_ok && min_slack.is_some_and(|m| m >= -opts.slack_tol);
    Ok(VerifyReport {
        theorem,
        grid: GridDescription {
            function: f.id().to_owned(),
            a: iv.a(),
            b: iv.b(),
            s: s.get(),
            q: exponent.map(|e| e.q()),
            p: exponent.and_then(|e| e.p()),
            x_count: if theorem == Theorem::T2_2 { 1 } else { opts.x_grid },
        },
        hypothesis,
        results,
        min_slack,
        slack_tolerance: opts.slack_tol,
        hypothesis_ok,
        pass,
    })
}

/// Points at which closed-form λ values are compared with quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub points: Vec<LambdaArgs>,
    pub lambda5_points: Vec<(f64, f64)>,
    pub form: Lambda2Form,
}

impl LambdaGrid {
    /// 240 λ points: a-side pairs `(1, 1.1), (1, 1.5), (1, 1.9)` and their
    /// reverses on the b-side, `s ∈ {0, 0.25, 0.5, 0.75, 1}`, and
    /// `(ϑ, ρ) ∈ {(1, 0), (1, 1), (2, 2), (1.5, 1.5)}`. The λ₅ points mix
    /// well-separated pairs with pairs straddling the series handoff.
    pub fn default_grid() -> Self {
        let pairs = [(1.0, 1.1), (1.0, 1.5), (1.0, 1.9)];
        let mut points = Vec::with_capacity(240);
        for kind in LambdaKind::ALL {
            for &(lo, hi) in &pairs {
                let (theta, x) = if kind.is_left() { (lo, hi) } else { (hi, lo) };
                for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    for (vartheta, rho) in [(1.0, 0.0), (1.0, 1.0), (2.0, 2.0), (1.5, 1.5)] {
                        points.push(LambdaArgs { kind, theta, x, s, vartheta, rho });
                    }
                }
            }
        }
        let mut lambda5_points = vec![(1.0, 1.0), (1.0, 2.0), (2.0, 1.5), (0.5, 3.0), (3.0, 0.5), (1.0, 1.9), (1.9, 1.0)];
        for x in [0.5, 1.0, 2.0] {
            for r in [1e-6, 1e-5, 5e-5, 1e-4, 2e-4, 1e-3] {
                lambda5_points.push((x * (1.0 - r), x));
                lambda5_points.push((x * (1.0 + r), x));
            }
        }
        LambdaGrid { points, lambda5_points, form: Lambda2Form::Integral }
    }

    pub fn with_form(mut self, form: Lambda2Form) -> Self {
        self.form = form;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub points: usize,
    #[serde(serialize_with = "ser_f64")]
    pub max_rel_error: f64,
    pub worst: Option<LambdaArgs>,
    pub lambda5_points: usize,
    #[serde(serialize_with = "ser_f64")]
    pub lambda5_max_rel_error: f64,
    #[serde(serialize_with = "crate::output::ser_opt_pair")]
    pub lambda5_worst: Option<(f64, f64)>,
}

const ORACLE_TOL: f64 = 1e-14;

fn rel_err(closed: f64, oracle: f64) -> f64 {
    if oracle == 0.0 {
        closed.abs()
    } else {
        (closed - oracle).abs() / oracle.abs()
    }
}

/// Maximum relative discrepancy between closed forms and quadrature of the
/// defining integrals over the grid.
pub fn lambda_consistency(grid: &LambdaGrid) -> Result<ConsistencyReport> {
    if grid.points.is_empty() && grid.lambda5_points.is_empty() {
        return Err(Error::usage("lambda consistency grid is empty"));
    }
    let mut max_rel_error = 0.0_f64;
    let mut worst = None;
    for args in &grid.points {
        let closed = lambda_with_form(args, grid.form)?;
        let oracle = lambda_quadrature(args, ORACLE_TOL)?.value;
        let e = rel_err(closed, oracle);
        if e > max_rel_error || worst.is_none() {
            max_rel_error = max_rel_error.max(e);
            worst = Some(*args);
        }
    }
    let mut lambda5_max = 0.0_f64;
    let mut lambda5_worst = None;
    for &(theta, x) in &grid.lambda5_points {
        let closed = lambda5(theta, x)?;
        let oracle = integrate(|t| t / (t * theta + (1.0 - t) * x).powi(2), 0.0, 1.0, ORACLE_TOL)?.value;
        let e = rel_err(closed, oracle);
        if e > lambda5_max || lambda5_worst.is_none() {
            lambda5_max = lambda5_max.max(e);
            lambda5_worst = Some((theta, x));
        }
    }
    Ok(ConsistencyReport {
        points: grid.points.len(),
        max_rel_error,
        worst,
        lambda5_points: grid.lambda5_points.len(),
        lambda5_max_rel_error: lambda5_max,
        lambda5_worst,
    })
}
