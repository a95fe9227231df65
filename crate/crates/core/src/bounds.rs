//! Closed-form right-hand sides: the λ coefficient family, the
//! Hermite–Hadamard triples, the classic Ostrowski bound and the five
//! Ostrowski-type bounds for functions whose `|f′|^q` is harmonically
//! s-convex.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::convexity::SExponent;
use crate::error::{Error, Result};
use crate::numeric::{derivative, integrate, uses_finite_difference, weighted_mean, FunctionSpec, Interval, QuadResult};
use crate::output::{csv_opt, fmt17, ser_f64, ser_opt_f64};
use crate::specfn::{beta, hyp2f1, Z_MAX};

/// Below this `|1 − θ/x|` the λ₅ closed form is replaced by its Taylor series.
pub const LAMBDA5_TAYLOR_BELOW: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaKind {
    One,
    Two,
    Three,
    Four,
}

impl LambdaKind {
    pub const ALL: [LambdaKind; 4] = [LambdaKind::One, LambdaKind::Two, LambdaKind::Three, LambdaKind::Four];

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(LambdaKind::One),
            2 => Ok(LambdaKind::Two),
            3 => Ok(LambdaKind::Three),
            4 => Ok(LambdaKind::Four),
            _ => Err(Error::usage(format!("lambda kind must be 1..4, got {k}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            LambdaKind::One => 1,
            LambdaKind::Two => 2,
            LambdaKind::Three => 3,
            LambdaKind::Four => 4,
        }
    }

    /// Kinds 1 and 2 sit on the `a` side (`θ ≤ x`), kinds 3 and 4 on the `b` side.
    pub fn is_left(self) -> bool {
        matches!(self, LambdaKind::One | LambdaKind::Two)
    }

    /// Kinds 2 and 4 carry the `(1−t)^s` weight; 1 and 3 carry `t^s`.
    fn carries_complement(self) -> bool {
        matches!(self, LambdaKind::Two | LambdaKind::Four)
    }
}

/// Arguments `(θ, x, s, ϑ, ρ)` of one λ coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaArgs {
    pub kind: LambdaKind,
    pub theta: f64,
    pub x: f64,
    pub s: f64,
    pub vartheta: f64,
    pub rho: f64,
}

impl LambdaArgs {
    pub fn new(kind: LambdaKind, theta: f64, x: f64, s: f64, vartheta: f64, rho: f64) -> Result<Self> {
        let args = LambdaArgs { kind, theta, x, s, vartheta, rho };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        let LambdaArgs { kind, theta, x, s, vartheta, rho } = *self;
        if !(theta > 0.0 && x > 0.0 && theta.is_finite() && x.is_finite()) {
            return Err(Error::domain(format!("lambda needs theta, x > 0, got ({theta}, {x})")));
        }
        if !(s >= 0.0 && s.is_finite() && rho >= 0.0 && rho.is_finite()) {
            return Err(Error::domain(format!("lambda needs s, rho >= 0, got ({s}, {rho})")));
        }
        if !(vartheta > 0.0 && vartheta.is_finite()) {
            return Err(Error::domain(format!("lambda needs vartheta > 0, got {vartheta}")));
        }
        if kind.is_left() && theta > x {
            return Err(Error::domain(format!(
                "lambda{} is an a-side coefficient and needs theta <= x, got ({theta}, {x})",
                kind.index()
            )));
        }
        if !kind.is_left() && x > theta {
            return Err(Error::domain(format!(
                "lambda{} is a b-side coefficient and needs x <= theta, got ({theta}, {x})",
                kind.index()
            )));
        }
        if self.z() >= Z_MAX {
            return Err(Error::domain(format!("lambda argument z = {} is too close to 1", self.z())));
        }
        Ok(())
    }

    /// The hypergeometric argument: `1 − θ/x` on the a-side, `1 − x/θ` on the b-side.
    pub fn z(&self) -> f64 {
        if self.kind.is_left() {
            1.0 - self.theta / self.x
        } else {
            1.0 - self.x / self.theta
        }
    }

    /// The defining integrand on `[0, 1]`.
    pub fn integrand(&self) -> impl Fn(f64) -> f64 {
        let LambdaArgs { kind, theta, x, s, vartheta, rho } = *self;
        move |t: f64| {
            let weight = if kind.carries_complement() {
                t.powf(rho) * (1.0 - t).powf(s)
            } else {
                t.powf(rho + s)
            };
            weight / (t * theta + (1.0 - t) * x).powf(2.0 * vartheta)
        }
    }
}

/// Which closed form to use for λ₂. `Printed` reproduces the published
/// display, `B(ρ+1, 1)·₂F₁(2ϑ, ρ+1; ρ+s+2; z)/x^{2ϑ}`, which disagrees with
/// the defining integral whenever `s > 0`; it exists to demonstrate that the
/// consistency check catches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lambda2Form {
    #[default]
    Integral,
    Printed,
}

/// The λ coefficient in closed form via Beta and ₂F₁.
pub fn lambda(args: &LambdaArgs) -> Result<f64> {
    lambda_with_form(args, Lambda2Form::Integral)
}

pub fn lambda_with_form(args: &LambdaArgs, form: Lambda2Form) -> Result<f64> {
    args.validate()?;
    let LambdaArgs { kind, theta, x, s, vartheta, rho } = *args;
    let z = args.z();
    let a = 2.0 * vartheta;
    let c = rho + s + 2.0;
    let value = match kind {
        LambdaKind::One => beta(rho + s + 1.0, 1.0)? * hyp2f1(a, rho + s + 1.0, c, z)? / x.powf(a),
        // With s = 0 the λ₂ integrand coincides with λ₁'s and the ₂F₁ would
        // have c = b.
        LambdaKind::Two if s == 0.0 => beta(rho + 1.0, 1.0)? * hyp2f1(a, rho + 1.0, rho + 2.0, z)? / x.powf(a),
        LambdaKind::Two => {
            let front = match form {
                Lambda2Form::Integral => beta(rho + 1.0, s + 1.0)?,
                Lambda2Form::Printed => beta(rho + 1.0, 1.0)?,
            };
            front * hyp2f1(a, rho + 1.0, c, z)? / x.powf(a)
        }
        LambdaKind::Three => beta(1.0, rho + s + 1.0)? * hyp2f1(a, 1.0, c, z)? / theta.powf(a),
        LambdaKind::Four => beta(s + 1.0, rho + 1.0)? * hyp2f1(a, s + 1.0, c, z)? / theta.powf(a),
    };
    Ok(value)
}

/// The λ coefficient by direct quadrature of its defining integral.
pub fn lambda_quadrature(args: &LambdaArgs, tol: f64) -> Result<QuadResult> {
    args.validate()?;
    integrate(args.integrand(), 0.0, 1.0, tol)
}

/// `λ₅(θ, x) = ∫₀¹ t/(tθ + (1−t)x)² dt`.
pub fn lambda5(theta: f64, x: f64) -> Result<f64> {
    check_lambda5(theta, x)?;
    if (1.0 - theta / x).abs() >= LAMBDA5_TAYLOR_BELOW {
        Ok(lambda5_closed(theta, x))
    } else {
        Ok(lambda5_taylor(theta, x))
    }
}

fn check_lambda5(theta: f64, x: f64) -> Result<()> {
    if theta > 0.0 && x > 0.0 && theta.is_finite() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("lambda5 needs positive arguments, got ({theta}, {x})")))
    }
}

/// `(1/(x−θ))·(1/θ − (ln x − ln θ)/(x−θ))`, rewritten with `u = (x−θ)/θ` as
/// `(u − ln(1+u))/(u²θ²)` so the logarithm keeps full relative accuracy.
pub fn lambda5_closed(theta: f64, x: f64) -> f64 {
    let u = (x - theta) / theta;
    (u - u.ln_1p()) / (u * u * theta * theta)
}

/// `θ⁻²·Σ_{n≥2} (−u)^{n−2}/n`, the expansion of the closed form about `θ = x`.
pub fn lambda5_taylor(theta: f64, x: f64) -> f64 {
    let u = (x - theta) / theta;
    let mut sum = 0.0;
    let mut power = 1.0;
    for n in 2..16 {
        sum += power / n as f64;
        power *= -u;
    }
    sum / (theta * theta)
}

/// `(left, middle, right)` of a Hermite–Hadamard chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HhTriple {
    #[serde(serialize_with = "ser_f64")]
    pub left: f64,
    #[serde(serialize_with = "ser_f64")]
    pub middle: f64,
    #[serde(serialize_with = "ser_f64")]
    pub right: f64,
}

impl HhTriple {
    /// `middle − left`
    pub fn left_slack(&self) -> f64 {
        self.middle - self.left
    }

    /// `right − middle`
    pub fn right_slack(&self) -> f64 {
        self.right - self.middle
    }
}

/// Harmonic chain: `2^{s−1} f(2ab/(a+b)) ≤ (ab/(b−a))∫ f/u² ≤ (f(a)+f(b))/(s+1)`.
/// With `s = 1` this is the harmonically convex case.
pub fn hh_harmonic_bounds(f: &FunctionSpec, iv: &Interval, s: SExponent, tol: f64) -> Result<HhTriple> {
    let (a, b, s) = (iv.a(), iv.b(), s.get());
    Ok(HhTriple {
        left: 2f64.powf(s - 1.0) * f.eval(2.0 * a * b / (a + b))?,
        middle: weighted_mean(f, iv, tol)?,
        right: (f.eval(a)? + f.eval(b)?) / (s + 1.0),
    })
}

/// s-convex chain: `2^{s−1} f((a+b)/2) ≤ (1/(b−a))∫ f ≤ (f(a)+f(b))/(s+1)` on
/// `[a, b] ⊆ [0, ∞)`.
pub fn hh_s_convex_bounds(f: &FunctionSpec, a: f64, b: f64, s: SExponent, tol: f64) -> Result<HhTriple> {
    if !(a >= 0.0 && a < b && b.is_finite()) {
        return Err(Error::domain(format!("s-convex chain needs 0 <= a < b, got [{a}, {b}]")));
    }
    if !f.covers(a, b) {
        return Err(Error::domain(format!("[{a}, {b}] is outside the domain of {}", f.id())));
    }
    let s = s.get();
    let integral = integrate(|u| f.eval_unchecked(u), a, b, tol * (b - a))?;
    Ok(HhTriple {
        left: 2f64.powf(s - 1.0) * f.eval(0.5 * (a + b))?,
        middle: integral.value / (b - a),
        right: (f.eval(a)? + f.eval(b)?) / (s + 1.0),
    })
}

/// Bound `M ≥ 0` on `|f′|`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DerivBound(f64);

impl DerivBound {
    pub fn new(m: f64) -> Result<Self> {
        if m >= 0.0 && m.is_finite() {
            Ok(DerivBound(m))
        } else {
            Err(Error::domain(format!("derivative bound M must be finite and >= 0, got {m}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `M(b−a)[1/4 + (x − (a+b)/2)²/(b−a)²]`.
pub fn classic_ostrowski_rhs(x: f64, a: f64, b: f64, m: DerivBound) -> Result<f64> {
    if !(a < b) {
        return Err(Error::domain(format!("classic Ostrowski bound needs a < b, got [{a}, {b}]")));
    }
    if !(a <= x && x <= b) {
        return Err(Error::domain(format!("x = {x} lies outside [{a}, {b}]")));
    }
    let w = b - a;
    let d = x - 0.5 * (a + b);
    Ok(m.get() * w * (0.25 + d * d / (w * w)))
}

/// `|f(x) − (ab/(b−a))∫ₐᵇ f(u)/u² du|`.
pub fn ostrowski_lhs(f: &FunctionSpec, x: f64, iv: &Interval, tol: f64) -> Result<f64> {
    if !iv.contains(x) {
        return Err(Error::domain(format!("x = {x} lies outside [{}, {}]", iv.a(), iv.b())));
    }
    Ok((f.eval(x)? - weighted_mean(f, iv, tol)?).abs())
}

/// Theorem identifiers accepted by the bound evaluators and the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    /// Hermite–Hadamard chain for harmonically s-convex `f`.
    T2_2,
    T2_3,
    T2_4,
    T2_5,
    T2_6,
    T2_7,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [Theorem::T2_2, Theorem::T2_3, Theorem::T2_4, Theorem::T2_5, Theorem::T2_6, Theorem::T2_7];
    pub const OSTROWSKI: [Theorem; 5] = [Theorem::T2_3, Theorem::T2_4, Theorem::T2_5, Theorem::T2_6, Theorem::T2_7];

    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::T2_2 => "T2_2",
            Theorem::T2_3 => "T2_3",
            Theorem::T2_4 => "T2_4",
            Theorem::T2_5 => "T2_5",
            Theorem::T2_6 => "T2_6",
            Theorem::T2_7 => "T2_7",
        }
    }

    /// T2_6 and T2_7 use a Hölder pair; the others a single power `q ≥ 1`.
    pub fn needs_conjugate_pair(&self) -> bool {
        matches!(self, Theorem::T2_6 | Theorem::T2_7)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown theorem `{s}` (expected T2_2..T2_7)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PowerParam(f64);

impl PowerParam {
    pub fn new(q: f64) -> Result<Self> {
        if q >= 1.0 && q.is_finite() {
            Ok(PowerParam(q))
        } else {
            Err(Error::domain(format!("q must be finite and >= 1, got {q}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Hölder exponents with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugatePair {
    p: f64,
    q: f64,
}

impl ConjugatePair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::domain(format!("conjugate exponents need p, q > 1, got ({p}, {q})")));
        }
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-14 {
            return Err(Error::domain(format!("1/p + 1/q must equal 1, got p = {p}, q = {q}")));
        }
        Ok(ConjugatePair { p, q })
    }

    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::domain(format!("q must exceed 1 for a conjugate pair, got {q}")));
        }
        Self::new(q / (q - 1.0), q)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// The exponent argument of a theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Power(PowerParam),
    Conjugate(ConjugatePair),
}

impl Exponent {
    pub fn q(&self) -> f64 {
        match self {
            Exponent::Power(q) => q.get(),
            Exponent::Conjugate(pair) => pair.q(),
        }
    }

    pub fn p(&self) -> Option<f64> {
        match self {
            Exponent::Power(_) => None,
            Exponent::Conjugate(pair) => Some(pair.p()),
        }
    }

    /// Builds the exponent a theorem expects from optional `q` and `p` flags.
    /// `q` defaults to 1 for power theorems; a pair needs at least one of them.
    pub fn for_theorem(theorem: Theorem, q: Option<f64>, p: Option<f64>) -> Result<Self> {
        if theorem.needs_conjugate_pair() {
            let pair = match (p, q) {
                (Some(p), Some(q)) => ConjugatePair::new(p, q)?,
                (None, Some(q)) => ConjugatePair::from_q(q)?,
                (Some(p), None) => ConjugatePair::from_q(p)
                    .map(|swapped| ConjugatePair { p: swapped.q, q: swapped.p })?,
                (None, None) => {
                    return Err(Error::usage(format!("{theorem} needs --q or --p (conjugate exponents)")))
                }
            };
            Ok(Exponent::Conjugate(pair))
        } else {
            if p.is_some() {
                return Err(Error::usage(format!("{theorem} takes --q only, not --p")));
            }
            Ok(Exponent::Power(PowerParam::new(q.unwrap_or(1.0))?))
        }
    }
}

/// `|f′|` at the three points an Ostrowski-type bound needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivMagnitudes {
    pub at_x: f64,
    pub at_a: f64,
    pub at_b: f64,
}

impl DerivMagnitudes {
    pub fn uniform(m: DerivBound) -> Self {
        DerivMagnitudes { at_x: m.get(), at_a: m.get(), at_b: m.get() }
    }

    pub fn of(f: &FunctionSpec, x: f64, iv: &Interval) -> Result<Self> {
        Ok(DerivMagnitudes {
            at_x: derivative(f, x)?.abs(),
            at_a: derivative(f, iv.a())?.abs(),
            at_b: derivative(f, iv.b())?.abs(),
        })
    }
}

fn lam(kind: LambdaKind, theta: f64, x: f64, s: f64, vartheta: f64, rho: f64) -> Result<f64> {
    lambda(&LambdaArgs::new(kind, theta, x, s, vartheta, rho)?)
}

/// Right-hand side of an Ostrowski-type bound from given derivative
/// magnitudes. Sides with a zero `(x−a)²` or `(b−x)²` factor are skipped.
pub fn ostrowski_rhs_from(
    theorem: Theorem,
    x: f64,
    iv: &Interval,
    s: SExponent,
    exponent: Exponent,
    d: DerivMagnitudes,
) -> Result<f64> {
    if !iv.contains(x) {
        return Err(Error::domain(format!("x = {x} lies outside [{}, {}]", iv.a(), iv.b())));
    }
    match (theorem.needs_conjugate_pair(), exponent) {
        (_, _) if theorem == Theorem::T2_2 => {
            return Err(Error::usage("T2_2 is a Hermite–Hadamard chain, not an Ostrowski bound"))
        }
        (true, Exponent::Power(_)) => {
            return Err(Error::usage(format!("{theorem} needs a conjugate pair (p, q)")))
        }
        (false, Exponent::Conjugate(_)) => {
            return Err(Error::usage(format!("{theorem} needs a single exponent q >= 1")))
        }
        _ => {}
    }
    let (a, b, s) = (iv.a(), iv.b(), s.get());
    let q = exponent.q();
    let (dx, da, db) = (d.at_x.powf(q), d.at_a.powf(q), d.at_b.powf(q));
    let left_w = (x - a) * (x - a);
    let right_w = (b - x) * (b - x);

    // Per side: prefactor × weight × (λ_t·|f′(x)|^q + λ_c·|f′(end)|^q)^{1/q}
    let pair_side = |left: bool, vartheta: f64, rho: f64| -> Result<f64> {
        let (theta, kinds, end) =
            if left { (a, (LambdaKind::One, LambdaKind::Two), da) } else { (b, (LambdaKind::Three, LambdaKind::Four), db) };
        let lt = lam(kinds.0, theta, x, s, vartheta, rho)?;
        let lc = lam(kinds.1, theta, x, s, vartheta, rho)?;
        Ok((lt * dx + lc * end).powf(1.0 / q))
    };

    let (left, right) = match theorem {
        Theorem::T2_3 | Theorem::T2_4 | Theorem::T2_6 => {
            let (vartheta, rho, pref) = match theorem {
                Theorem::T2_3 => (q, q, 1.0),
                Theorem::T2_4 => (q, 1.0, 0.5f64.powf(1.0 - 1.0 / q)),
                _ => {
                    let p = exponent.p().expect("pair checked above");
                    (q, 0.0, (1.0 / (p + 1.0)).powf(1.0 / p))
                }
            };
            let l = if left_w > 0.0 { pref * left_w * pair_side(true, vartheta, rho)? } else { 0.0 };
            let r = if right_w > 0.0 { pref * right_w * pair_side(false, vartheta, rho)? } else { 0.0 };
            (l, r)
        }
        Theorem::T2_5 => {
            let weight = |theta: f64| -> Result<f64> {
                if q == 1.0 {
                    Ok(1.0)
                } else {
                    Ok(lambda5(theta, x)?.powf(1.0 - 1.0 / q))
                }
            };
            let l = if left_w > 0.0 { weight(a)? * left_w * pair_side(true, 1.0, 1.0)? } else { 0.0 };
            let r = if right_w > 0.0 { weight(b)? * right_w * pair_side(false, 1.0, 1.0)? } else { 0.0 };
            (l, r)
        }
        Theorem::T2_7 => {
            let p = exponent.p().expect("pair checked above");
            let l = if left_w > 0.0 {
                lam(LambdaKind::One, a, x, 0.0, p, p)?.powf(1.0 / p) * left_w * ((dx + da) / (s + 1.0)).powf(1.0 / q)
            } else {
                0.0
            };
            let r = if right_w > 0.0 {
                lam(LambdaKind::Three, b, x, 0.0, p, p)?.powf(1.0 / p) * right_w * ((dx + db) / (s + 1.0)).powf(1.0 / q)
            } else {
                0.0
            };
            (l, r)
        }
        Theorem::T2_2 => unreachable!("rejected above"),
    };
    Ok(a * b / (b - a) * (left + right))
}

/// Right-hand side of an Ostrowski-type bound. Derivative magnitudes come from
/// `f` unless `m` is given, in which case every `|f′(·)|` is replaced by `M`
/// (the corollary form).
pub fn ostrowski_rhs(
    theorem: Theorem,
    f: &FunctionSpec,
    x: f64,
    iv: &Interval,
    s: SExponent,
    exponent: Exponent,
    m: Option<DerivBound>,
) -> Result<f64> {
    let d = match m {
        Some(m) => DerivMagnitudes::uniform(m),
        None => DerivMagnitudes::of(f, x, iv)?,
    };
    ostrowski_rhs_from(theorem, x, iv, s, exponent, d)
}

/// One evaluated inequality instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub theorem: String,
    #[serde(serialize_with = "ser_f64")]
    pub x: f64,
    #[serde(serialize_with = "ser_f64")]
    pub a: f64,
    #[serde(serialize_with = "ser_f64")]
    pub b: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub s: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub q: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub p: Option<f64>,
    #[serde(rename = "M", serialize_with = "ser_opt_f64")]
    pub m: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rhs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub slack: f64,
    pub hypothesis_ok: bool,
    /// Derivatives came from central differences rather than an analytic form.
    pub finite_difference: bool,
}

pub const CSV_HEADER: &str = "theorem,x,a,b,s,q,p,M,lhs,rhs,slack,hypothesis_ok";

impl BoundResult {
    pub fn csv_row(&self) -> String {
        [
            self.theorem.clone(),
            fmt17(self.x),
            fmt17(self.a),
            fmt17(self.b),
            csv_opt(self.s),
            csv_opt(self.q),
            csv_opt(self.p),
            csv_opt(self.m),
            fmt17(self.lhs),
            fmt17(self.rhs),
            fmt17(self.slack),
            self.hypothesis_ok.to_string(),
        ]
        .join(",")
    }
}

/// Evaluates both sides of an Ostrowski-type bound at `x`.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_ostrowski(
    theorem: Theorem,
    f: &FunctionSpec,
    x: f64,
    iv: &Interval,
    s: SExponent,
    exponent: Exponent,
    m: Option<DerivBound>,
    hypothesis_ok: bool,
    tol: f64,
) -> Result<BoundResult> {
    let lhs = ostrowski_lhs(f, x, iv, tol)?;
    let rhs = ostrowski_rhs(theorem, f, x, iv, s, exponent, m)?;
    Ok(BoundResult {
        theorem: theorem.to_string(),
        x,
        a: iv.a(),
        b: iv.b(),
        s: Some(s.get()),
        q: Some(exponent.q()),
        p: exponent.p(),
        m: m.map(DerivBound::get),
        lhs,
        rhs,
        slack: rhs - lhs,
        hypothesis_ok,
        finite_difference: m.is_none() && uses_finite_difference(f),
    })
}

/// Both sides of the classic Ostrowski inequality at `x`, using the plain
/// integral mean `(1/(b−a))∫ f`.
pub fn evaluate_classic_ostrowski(f: &FunctionSpec, x: f64, iv: &Interval, m: DerivBound, tol: f64) -> Result<BoundResult> {
    let (a, b) = (iv.a(), iv.b());
    if !f.covers(a, b) {
        return Err(Error::domain(format!("[{a}, {b}] is outside the domain of {}", f.id())));
    }
    let mean = integrate(|u| f.eval_unchecked(u), a, b, tol * (b - a))?.value / (b - a);
    let lhs = (f.eval(x)? - mean).abs();
    let rhs = classic_ostrowski_rhs(x, a, b, m)?;
    Ok(BoundResult {
        theorem: "classic".into(),
        x,
        a,
        b,
        s: None,
        q: None,
        p: None,
        m: Some(m.get()),
        lhs,
        rhs,
        slack: rhs - lhs,
        hypothesis_ok: true,
        finite_difference: false,
    })
}
