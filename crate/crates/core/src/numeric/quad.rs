//! Globally adaptive Gauss–Kronrod quadrature (7-point Gauss embedded in a
//! 15-point Kronrod rule).
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. Ties in the work queue are broken by position
//! and the final sum is taken left to right, so a given integrand always
//! produces the same bits.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Polynomial degree integrated exactly by the embedded Gauss rule, so the
/// error estimate vanishes (up to rounding) below it.
pub const EXACT_DEGREE: u32 = 13;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 50;

/// Relative accuracy floor: the summed estimate is accepted once it is below
/// this fraction of the integral, whatever absolute tolerance was requested.
pub const ROUNDOFF_REL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: DEFAULT_TOL,
            rel_tol: ROUNDOFF_REL,
            max_depth: DEFAULT_MAX_DEPTH,
            max_intervals: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Max-heap on error; among equal errors the leftmost segment wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("integrand is not finite at {t:e} (got {v})")))
    }
}

/// One application of the 7/15 pair on `[lo, hi]`: (Kronrod value, |K − G|).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = sample(f, centre)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = sample(f, centre - dx)? + sample(f, centre + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` with the default
/// depth limit.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_with(f, lo, hi, &QuadOptions::with_tol(tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!("integration limits must be finite, got [{lo}, {hi}]")));
    }
    if lo > hi {
        return Err(Error::domain(format!("integration limits reversed: [{lo}, {hi}]")));
    }
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    if lo == hi {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 0 });
    }

    let (value, err) = gk15(&f, lo, hi)?;
    let mut evals = 15;
    let mut open = BinaryHeap::new();
    let mut closed: Vec<Segment> = Vec::new();
    open.push(Segment { lo, hi, value, err, depth: 0 });
    let mut total_value = value;
    let mut total_err = err;

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total_value.abs());
        if total_err <= target {
            break;
        }
        let worst = match open.pop() {
            Some(seg) => seg,
            None => {
                return Err(numeric_failure("maximum bisection depth reached", &closed, &open, evals))
            }
        };
        if worst.depth >= opts.max_depth {
            closed.push(worst);
            continue;
        }
        if open.len() + closed.len() + 2 > opts.max_intervals {
            open.push(worst);
            return Err(numeric_failure("subinterval limit reached", &closed, &open, evals));
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            closed.push(worst);
            continue;
        }
        let (lv, le) = gk15(&f, worst.lo, mid)?;
        let (rv, re) = gk15(&f, mid, worst.hi)?;
        evals += 30;
        total_value += lv + rv - worst.value;
        total_err += le + re - worst.err;
        let depth = worst.depth + 1;
        open.push(Segment { lo: worst.lo, hi: mid, value: lv, err: le, depth });
        open.push(Segment { lo: mid, hi: worst.hi, value: rv, err: re, depth });
    }

    let (value, err_est) = resum(&closed, &open);
    Ok(QuadResult { value, err_est, evals })
}

fn resum(closed: &[Segment], open: &BinaryHeap<Segment>) -> (f64, f64) {
    let mut all: Vec<Segment> = closed.iter().chain(open.iter()).copied().collect();
    all.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let value = neumaier_sum(all.iter().map(|s| s.value));
    let err = neumaier_sum(all.iter().map(|s| s.err));
    (value, err)
}

fn numeric_failure(
    msg: &str,
    closed: &[Segment],
    open: &BinaryHeap<Segment>,
    evals: usize,
) -> Error {
    let (value, err_est) = resum(closed, open);
    Error::Numeric {
        msg: format!("{msg} after {evals} evaluations"),
        value,
        err_est,
    }
}
