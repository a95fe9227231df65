//! Grid predicates for s-convexity in the second sense, harmonic convexity
//! and harmonic s-convexity, plus the harmonic/arithmetic mean comparison.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{uniform_grid, FunctionSpec, Interval};

/// Violations at or below this count as "holds": the defining inequalities
/// are tight at `t ∈ {0, 1}`.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Tolerance for the monotonicity gates.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityMode {
    SConvexSecondSense,
    HarmonicallyConvex,
    HarmonicallySConvex,
}

impl ConvexityMode {
    pub const ALL: [ConvexityMode; 3] = [
        ConvexityMode::SConvexSecondSense,
        ConvexityMode::HarmonicallyConvex,
        ConvexityMode::HarmonicallySConvex,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConvexityMode::SConvexSecondSense => "s_convex_second_sense",
            ConvexityMode::HarmonicallyConvex => "harmonically_convex",
            ConvexityMode::HarmonicallySConvex => "harmonically_s_convex",
        }
    }
}

impl fmt::Display for ConvexityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConvexityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown convexity mode `{s}`")))
    }
}

/// The exponent `s ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SExponent(f64);

impl SExponent {
    pub const ONE: SExponent = SExponent(1.0);

    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s <= 1.0 {
            Ok(SExponent(s))
        } else {
            Err(Error::domain(format!("s must lie in (0, 1], got {s}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Sample layout: `n_xy` uniform points for each of `x` and `y`, `n_t`
/// uniform points on `[0, 1]`, and optionally `random_samples` extra triples
/// drawn from a seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n_xy: usize,
    pub n_t: usize,
    pub seed: Option<u64>,
    pub random_samples: usize,
}

impl GridSpec {
    pub fn uniform(n: usize) -> Self {
        GridSpec { n_xy: n, n_t: n, seed: None, random_samples: 0 }
    }

    pub fn new(n_xy: usize, n_t: usize) -> Self {
        GridSpec { n_xy, n_t, seed: None, random_samples: 0 }
    }

    pub fn with_random(mut self, seed: u64, samples: usize) -> Self {
        self.seed = Some(seed);
        self.random_samples = samples;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_xy < 3 || self.n_t < 3 {
            return Err(Error::usage(format!(
                "convexity grids need at least 3 points per axis, got {}x{}",
                self.n_xy, self.n_t
            )));
        }
        Ok(())
    }

    /// Triples in evaluation order: the tensor grid, then the random sample.
    fn triples(&self, lo: f64, hi: f64) -> Vec<(f64, f64, f64)> {
        let xs = uniform_grid(lo, hi, self.n_xy);
        let ts = uniform_grid(0.0, 1.0, self.n_t);
        let mut out = Vec::with_capacity(xs.len() * xs.len() * ts.len() + self.random_samples);
        for &x in &xs {
            for &y in &xs {
                for &t in &ts {
                    out.push((x, y, t));
                }
            }
        }
        if let Some(seed) = self.seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..self.random_samples {
                let x = rng.gen_range(lo..=hi);
                let y = rng.gen_range(lo..=hi);
                let t = rng.gen_range(0.0..=1.0);
                out.push((x, y, t));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub mode: ConvexityMode,
    #[serde(serialize_with = "crate::output::ser_f64")]
    pub s: f64,
    /// Largest `lhs − rhs` of the defining inequality over the samples.
    #[serde(serialize_with = "crate::output::ser_f64")]
    pub max_violation: f64,
    #[serde(serialize_with = "crate::output::ser_triple")]
    pub witness: (f64, f64, f64),
    pub samples: usize,
    pub seed: Option<u64>,
}

impl ConvexityReport {
    pub fn holds(&self) -> bool {
        self.max_violation <= VIOLATION_TOL
    }
}

/// `xy / (tx + (1−t)y)`; equals `x` at `t = 0` and `y` at `t = 1`.
pub fn harmonic_combination(x: f64, y: f64, t: f64) -> f64 {
    x * y / (t * x + (1.0 - t) * y)
}

#[derive(Debug, Clone, Copy)]
struct MaxTracker {
    best: f64,
    witness: (f64, f64, f64),
    count: usize,
}

impl MaxTracker {
    fn new() -> Self {
        MaxTracker { best: f64::NEG_INFINITY, witness: (f64::NAN, f64::NAN, f64::NAN), count: 0 }
    }

    // Ties go to the lexicographically smallest witness.
    fn offer(&mut self, v: f64, w: (f64, f64, f64)) {
        self.count += 1;
        let better = v > self.best
            || (v == self.best && (w.0, w.1, w.2).partial_cmp(&self.witness) == Some(std::cmp::Ordering::Less));
        if better {
            self.best = v;
            self.witness = w;
        }
    }
}

/// Evaluates the defining inequality of `mode` at every sample and reports the
/// largest violation.
pub fn check_convexity(
    f: &FunctionSpec,
    lo: f64,
    hi: f64,
    mode: ConvexityMode,
    s: SExponent,
    grid: &GridSpec,
) -> Result<ConvexityReport> {
    grid.validate()?;
    if !(lo < hi) {
        return Err(Error::domain(format!("convexity range needs lo < hi, got [{lo}, {hi}]")));
    }
    let s_val = match mode {
        ConvexityMode::HarmonicallyConvex => 1.0,
        _ => s.get(),
    };
    match mode {
        ConvexityMode::SConvexSecondSense if lo < 0.0 => {
            return Err(Error::domain("s-convexity in the second sense is defined on [0, ∞)"));
        }
        ConvexityMode::HarmonicallyConvex | ConvexityMode::HarmonicallySConvex if lo <= 0.0 => {
            return Err(Error::domain("harmonic convexity needs a range inside (0, ∞)"));
        }
        _ => {}
    }
    let mut tracker = MaxTracker::new();
    for (x, y, t) in grid.triples(lo, hi) {
        let (ts, omts) = (t.powf(s_val), (1.0 - t).powf(s_val));
        let violation = match mode {
            ConvexityMode::SConvexSecondSense => {
                let point = t * x + (1.0 - t) * y;
                f.eval(point)? - (ts * f.eval(x)? + omts * f.eval(y)?)
            }
            ConvexityMode::HarmonicallyConvex | ConvexityMode::HarmonicallySConvex => {
                let point = harmonic_combination(x, y, t);
                f.eval(point)? - (ts * f.eval(y)? + omts * f.eval(x)?)
            }
        };
        tracker.offer(violation, (x, y, t));
    }
    Ok(ConvexityReport {
        mode,
        s: s_val,
        max_violation: tracker.best,
        witness: tracker.witness,
        samples: tracker.count,
        seed: grid.seed,
    })
}

/// [`check_convexity`] over an [`Interval`].
pub fn check_convexity_on(
    f: &FunctionSpec,
    iv: &Interval,
    mode: ConvexityMode,
    s: SExponent,
    grid: &GridSpec,
) -> Result<ConvexityReport> {
    check_convexity(f, iv.a(), iv.b(), mode, s, grid)
}

/// Harmonic versus arithmetic combination: `xy/(tx+(1−t)y) ≤ ty + (1−t)x`.
/// The reported mode is `harmonically_convex` since this is that inequality
/// for the identity function.
pub fn check_am_hm(iv: &Interval, grid: &GridSpec) -> Result<ConvexityReport> {
    grid.validate()?;
    let mut tracker = MaxTracker::new();
    for (x, y, t) in grid.triples(iv.a(), iv.b()) {
        let violation = harmonic_combination(x, y, t) - (t * y + (1.0 - t) * x);
        tracker.offer(violation, (x, y, t));
    }
    Ok(ConvexityReport {
        mode: ConvexityMode::HarmonicallyConvex,
        s: 1.0,
        max_violation: tracker.best,
        witness: tracker.witness,
        samples: tracker.count,
        seed: grid.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

/// Checks monotonicity on `n` consecutive uniform samples of `[lo, hi]`.
pub fn is_monotone(f: &FunctionSpec, lo: f64, hi: f64, n: usize, dir: Monotonicity) -> Result<bool> {
    let values = uniform_grid(lo, hi, n)
        .into_iter()
        .map(|u| f.eval(u))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.windows(2).all(|w| match dir {
        Monotonicity::Nondecreasing => w[1] >= w[0] - MONOTONE_TOL,
        Monotonicity::Nonincreasing => w[1] <= w[0] + MONOTONE_TOL,
    }))
}

/// Outcome of the two grid implications relating s-convexity and harmonic
/// s-convexity through monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionCheck {
    pub s_convex: bool,
    pub harmonically_s_convex: bool,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
}

impl PropositionCheck {
    /// s-convex and nondecreasing ⇒ harmonically s-convex.
    pub fn increasing_case_holds(&self) -> bool {
        !(self.s_convex && self.nondecreasing) || self.harmonically_s_convex
    }

    /// harmonically s-convex and nonincreasing ⇒ s-convex.
    pub fn decreasing_case_holds(&self) -> bool {
        !(self.harmonically_s_convex && self.nonincreasing) || self.s_convex
    }
}

pub fn check_proposition(
    f: &FunctionSpec,
    iv: &Interval,
    s: SExponent,
    grid: &GridSpec,
) -> Result<PropositionCheck> {
    let s_cvx = check_convexity_on(f, iv, ConvexityMode::SConvexSecondSense, s, grid)?;
    let h_cvx = check_convexity_on(f, iv, ConvexityMode::HarmonicallySConvex, s, grid)?;
    Ok(PropositionCheck {
        s_convex: s_cvx.holds(),
        harmonically_s_convex: h_cvx.holds(),
        nondecreasing: is_monotone(f, iv.a(), iv.b(), grid.n_xy, Monotonicity::Nondecreasing)?,
        nonincreasing: is_monotone(f, iv.a(), iv.b(), grid.n_xy, Monotonicity::Nonincreasing)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> SExponent {
        SExponent::new(v).unwrap()
    }

    #[test]
    fn harmonic_combination_examples() {
        assert_eq!(harmonic_combination(1.5, 4.0, 0.0), 1.5);
        assert_eq!(harmonic_combination(1.5, 4.0, 1.0), 4.0);
        assert!((harmonic_combination(1.0, 2.0, 0.5) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn s_exponent_range() {
        assert!(SExponent::new(0.0).is_err());
        assert!(SExponent::new(1.0 + 1e-12).is_err());
        assert!(SExponent::new(f64::NAN).is_err());
        assert_eq!(SExponent::new(1.0).unwrap(), SExponent::ONE);
    }

    #[test]
    fn sqrt_is_harmonically_half_convex() {
        let f = FunctionSpec::power(0.5).unwrap();
        let r = check_convexity(&f, 0.01, 1.0, ConvexityMode::HarmonicallySConvex, s(0.5), &GridSpec::uniform(21))
            .unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.max_violation <= VIOLATION_TOL);
    }

    #[test]
    fn constant_has_zero_violation_at_endpoints() {
        let f = FunctionSpec::constant(2.5);
        for sv in [0.25, 0.5, 1.0] {
            let r = check_convexity(&f, 1.0, 3.0, ConvexityMode::HarmonicallySConvex, s(sv), &GridSpec::uniform(7))
                .unwrap();
            assert_eq!(r.max_violation, 0.0);
            assert_eq!(r.witness, (1.0, 1.0, 0.0));
        }
    }

    #[test]
    fn negation_violates_harmonic_convexity() {
        let f = FunctionSpec::negated();
        let r = check_convexity(&f, 1.0, 2.0, ConvexityMode::HarmonicallyConvex, SExponent::ONE, &GridSpec::uniform(3))
            .unwrap();
        assert!((r.max_violation - 1.0 / 6.0).abs() < 1e-15, "{r:?}");
        assert_eq!(r.witness, (1.0, 2.0, 0.5));
        assert!(!r.holds());
    }

    #[test]
    fn harmonic_convex_mode_is_s_equal_one() {
        for f in FunctionSpec::registry() {
            let g = GridSpec::new(9, 5);
            let a = check_convexity(&f, 0.5, 3.0, ConvexityMode::HarmonicallyConvex, s(0.3), &g).unwrap();
            let b = check_convexity(&f, 0.5, 3.0, ConvexityMode::HarmonicallySConvex, SExponent::ONE, &g).unwrap();
            assert_eq!(a.max_violation.to_bits(), b.max_violation.to_bits(), "{}", f.id());
            assert_eq!(a.witness, b.witness);
            assert_eq!(a.samples, b.samples);
            assert_eq!(a.s, b.s);
        }
    }

    #[test]
    fn am_hm_examples() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let r = check_am_hm(&iv, &GridSpec::uniform(3)).unwrap();
        assert!(r.max_violation <= VIOLATION_TOL);
        let single = harmonic_combination(1.0, 2.0, 0.5) - (0.5 * 2.0 + 0.5 * 1.0);
        assert!((single + 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(harmonic_combination(1.7, 1.7, 0.3) - (0.3 * 1.7 + 0.7 * 1.7), 0.0);
        let wide = check_am_hm(&Interval::new(0.5, 4.0).unwrap(), &GridSpec::new(32, 17)).unwrap();
        assert!(wide.max_violation <= VIOLATION_TOL);
        assert_eq!(wide.samples, 32 * 32 * 17);
    }

    #[test]
    fn domain_errors() {
        let f = FunctionSpec::reciprocal();
        let g = GridSpec::uniform(5);
        assert!(check_convexity(&f, 0.0, 1.0, ConvexityMode::HarmonicallySConvex, s(0.5), &g).is_err());
        let narrow = FunctionSpec::new("narrow", |u| u, 1.0, 2.0).unwrap();
        assert!(matches!(
            check_convexity(&narrow, 1.0, 3.0, ConvexityMode::HarmonicallyConvex, s(1.0), &g),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            check_convexity(&narrow, 1.0, 2.0, ConvexityMode::HarmonicallyConvex, s(1.0), &GridSpec::uniform(2)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn random_samples_are_seeded() {
        let f = FunctionSpec::reciprocal();
        let g = GridSpec::uniform(5).with_random(42, 100);
        let a = check_convexity(&f, 0.5, 2.0, ConvexityMode::HarmonicallySConvex, s(0.5), &g).unwrap();
        let b = check_convexity(&f, 0.5, 2.0, ConvexityMode::HarmonicallySConvex, s(0.5), &g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 125 + 100);
        assert_eq!(a.seed, Some(42));
    }

    #[test]
    fn proposition_cases() {
        let g = GridSpec::new(16, 9);
        let iv = Interval::new(0.5, 4.0).unwrap();
        // 1/u is harmonically linear and decreasing, so it must be convex.
        let inv = check_proposition(&FunctionSpec::reciprocal(), &iv, SExponent::ONE, &g).unwrap();
        assert!(inv.harmonically_s_convex && inv.nonincreasing && inv.s_convex);
        // u² is convex and increasing.
        let sq = check_proposition(&FunctionSpec::power(2.0).unwrap(), &iv, s(0.5), &g).unwrap();
        assert!(sq.s_convex && sq.nondecreasing && sq.harmonically_s_convex);
        let neg = check_proposition(&FunctionSpec::negated(), &iv, SExponent::ONE, &g).unwrap();
        assert!(!neg.harmonically_s_convex && neg.s_convex);
        assert!(neg.increasing_case_holds() && neg.decreasing_case_holds());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in ConvexityMode::ALL {
            assert_eq!(m.as_str().parse::<ConvexityMode>().unwrap(), m);
        }
        assert!("convex".parse::<ConvexityMode>().is_err());
    }
}
