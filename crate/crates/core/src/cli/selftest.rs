//! The end-to-end self-test: every property the library promises, run at its
//! stated tolerance, one row per suite.

use std::time::Instant;

use serde::Serialize;

use crate::bounds::{
    classic_ostrowski_rhs, evaluate_classic_ostrowski, hh_harmonic_bounds, ostrowski_rhs, DerivBound,
    Exponent, Lambda2Form, Theorem,
};
use crate::convexity::{check_am_hm, check_proposition, GridSpec, SExponent, VIOLATION_TOL};
use crate::error::Result;
use crate::numeric::{derivative, FunctionSpec, Interval};
use crate::output::{fmt17, ser_f64};
use crate::specfn::{beta, hyp2f1};
use crate::verify::{lambda_consistency, lemma_residual, verify_theorem, LambdaGrid, VerifyOptions};

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// metric ≤ threshold
    AtMost,
    /// metric ≥ threshold
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub suite: String,
    #[serde(serialize_with = "ser_f64")]
    pub metric: f64,
    pub comparison: Comparison,
    #[serde(serialize_with = "ser_f64")]
    pub threshold: f64,
    pub cases: usize,
    pub pass: bool,
    #[serde(serialize_with = "ser_f64")]
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SelftestOptions {
    /// Replaces every error threshold `τ` (and every slack floor `−τ`).
    pub tol_override: Option<f64>,
    pub lambda2_form: Lambda2Form,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub rows: Vec<SuiteRow>,
    pub pass: bool,
}

impl SelftestSummary {
    pub fn table(&self) -> String {
        let mut out = format!("{:<28} {:>24} {:>4} {:>24} {:>6}  {}\n", "suite", "metric", "", "threshold", "cases", "result");
        for r in &self.rows {
            let op = match r.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            out.push_str(&format!(
                "{:<28} {:>24} {:>4} {:>24} {:>6}  {}\n",
                r.suite,
                fmt17(r.metric),
                op,
                fmt17(r.threshold),
                r.cases,
                if r.pass { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(if self.pass { "overall: pass\n" } else { "overall: FAIL\n" });
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,metric,comparison,threshold,cases,pass,seconds\n");
        for r in &self.rows {
            let cmp = match r.comparison {
                Comparison::AtMost => "at_most",
                Comparison::AtLeast => "at_least",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.suite,
                fmt17(r.metric),
                cmp,
                fmt17(r.threshold),
                r.cases,
                r.pass,
                fmt17(r.seconds)
            ));
        }
        out
    }
}

struct Measured {
    metric: f64,
    cases: usize,
}

fn row(
    name: &str,
    cmp: Comparison,
    threshold: f64,
    opts: &SelftestOptions,
    body: impl FnOnce() -> Result<Measured>,
) -> SuiteRow {
    let threshold = match (opts.tol_override, cmp) {
        (Some(t), Comparison::AtMost) if threshold > 0.0 => t,
        (Some(t), Comparison::AtLeast) if threshold < 0.0 => -t,
        _ => threshold,
    };
    let started = Instant::now();
    let (metric, cases, ok) = match body() {
        Ok(m) => {
            let ok = match cmp {
                Comparison::AtMost => m.metric <= threshold,
                Comparison::AtLeast => m.metric >= threshold,
            };
            (m.metric, m.cases, ok)
        }
        Err(_) => (f64::NAN, 0, false),
    };
    SuiteRow {
        suite: name.to_owned(),
        metric,
        comparison: cmp,
        threshold,
        cases,
        pass: ok,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn s_set(values: &[f64]) -> Vec<SExponent> {
    values.iter().map(|&s| SExponent::new(s).expect("fixed s values are valid")).collect()
}

/// The Ostrowski verification matrix: registry × s ∈ {0.5, 1} × exponents ×
/// intervals {[1,2], [0.5,3]}.
pub fn ostrowski_matrix() -> Vec<(Theorem, FunctionSpec, Interval, SExponent, Exponent)> {
    let intervals = [Interval::new(1.0, 2.0).expect("valid"), Interval::new(0.5, 3.0).expect("valid")];
    let mut out = Vec::new();
    for theorem in Theorem::OSTROWSKI {
        let exponents: Vec<Exponent> = if theorem.needs_conjugate_pair() {
            vec![Exponent::for_theorem(theorem, Some(2.0), Some(2.0)).expect("valid pair")]
        } else {
            [1.0, 2.0].iter().map(|&q| Exponent::for_theorem(theorem, Some(q), None).expect("valid q")).collect()
        };
        for f in FunctionSpec::registry() {
            for s in s_set(&[0.5, 1.0]) {
                for &e in &exponents {
                    for iv in intervals {
                        out.push((theorem, f.clone(), iv, s, e));
                    }
                }
            }
        }
    }
    out
}

pub fn run_selftest(opts: &SelftestOptions) -> SelftestSummary {
    let mut rows = Vec::new();

    let mut lambda_report = None;
    rows.push(row("lambda_closed_vs_quadrature", Comparison::AtMost, 1e-8, opts, || {
        let rep = lambda_consistency(&LambdaGrid::default_grid().with_form(opts.lambda2_form))?;
        let m = Measured { metric: rep.max_rel_error, cases: rep.points };
        lambda_report = Some(rep);
        Ok(m)
    }));
    rows.push(row("lambda5_closed_vs_quadrature", Comparison::AtMost, 1e-10, opts, || {
        let rep = match lambda_report.take() {
            Some(r) => r,
            None => lambda_consistency(&LambdaGrid::default_grid())?,
        };
        Ok(Measured { metric: rep.lambda5_max_rel_error, cases: rep.lambda5_points })
    }));

    rows.push(row("lemma_identity_residual", Comparison::AtMost, 1e-7, opts, || {
        let mut worst = 0.0_f64;
        let mut cases = 0;
        for id in ["const:2", "id", "pow:2", "pow:0.5", "inv"] {
            let f = FunctionSpec::parse(id)?;
            for (a, b) in [(1.0, 2.0), (0.5, 3.0), (2.0, 2.5)] {
                let iv = Interval::new(a, b)?;
                for x in iv.grid(9) {
                    let r = lemma_residual(&f, x, &iv, QUAD_TOL)?;
                    worst = worst.max(r / (1.0 + f.eval(x)?.abs()));
                    cases += 1;
                }
            }
        }
        Ok(Measured { metric: worst, cases })
    }));

    rows.push(row("hermite_hadamard_chain", Comparison::AtLeast, -1e-12, opts, || {
        let mut min_slack = f64::INFINITY;
        let mut cases = 0;
        for s in s_set(&[0.25, 0.5, 0.75, 1.0]) {
            let f = FunctionSpec::power(s.get())?;
            for (a, b) in [(0.25, 1.0), (0.1, 0.9)] {
                let t = hh_harmonic_bounds(&f, &Interval::new(a, b)?, s, QUAD_TOL)?;
                min_slack = min_slack.min(t.left_slack()).min(t.right_slack());
                cases += 1;
            }
        }
        Ok(Measured { metric: min_slack, cases })
    }));
    rows.push(row("hermite_hadamard_s1_middle", Comparison::AtMost, 1e-10, opts, || {
        let t = hh_harmonic_bounds(&FunctionSpec::identity(), &Interval::new(1.0, 2.0)?, SExponent::ONE, QUAD_TOL)?;
        Ok(Measured { metric: (t.middle - 2.0 * 2f64.ln()).abs(), cases: 1 })
    }));

    let mut gated_combos = std::collections::BTreeSet::new();
    rows.push(row("ostrowski_min_slack", Comparison::AtLeast, -1e-9, opts, || {
        let vopts = VerifyOptions { quad_tol: QUAD_TOL, ..Default::default() };
        let mut min_slack = f64::INFINITY;
        let mut cases = 0;
        for (theorem, f, iv, s, e) in ostrowski_matrix() {
            let rep = verify_theorem(theorem, &f, &iv, s, Some(e), &vopts)?;
            if rep.hypothesis_ok {
                gated_combos.insert((theorem, f.id().to_owned()));
                min_slack = min_slack.min(rep.min_slack.unwrap_or(f64::INFINITY));
                cases += rep.results.len();
            }
        }
        Ok(Measured { metric: min_slack, cases })
    }));
    rows.push(row("ostrowski_gated_combinations", Comparison::AtLeast, 5.0, opts, || {
        Ok(Measured { metric: gated_combos.len() as f64, cases: gated_combos.len() })
    }));

    rows.push(row("corollary_dominates_theorem", Comparison::AtLeast, -1e-12, opts, || {
        let mut min_gap = f64::INFINITY;
        let mut cases = 0;
        for (theorem, f, iv, s, e) in ostrowski_matrix() {
            let xs = iv.grid(9);
            let max_d = xs.iter().map(|&x| derivative(&f, x).map(f64::abs)).collect::<Result<Vec<_>>>()?;
            let m = DerivBound::new(max_d.into_iter().fold(0.0, f64::max) + 0.1)?;
            for &x in &xs {
                let plain = ostrowski_rhs(theorem, &f, x, &iv, s, e, None)?;
                let cor = ostrowski_rhs(theorem, &f, x, &iv, s, e, Some(m))?;
                min_gap = min_gap.min(cor - plain);
                cases += 1;
            }
        }
        Ok(Measured { metric: min_gap, cases })
    }));

    rows.push(row("classic_ostrowski", Comparison::AtLeast, -1e-14, opts, || {
        let iv = Interval::new(1.0, 2.0)?;
        let m = DerivBound::new(1.0)?;
        let f = FunctionSpec::identity();
        let mut min_slack = f64::INFINITY;
        for x in iv.grid(33) {
            let r = evaluate_classic_ostrowski(&f, x, &iv, m, QUAD_TOL)?;
            debug_assert_eq!(r.rhs, classic_ostrowski_rhs(x, 1.0, 2.0, m)?);
            min_slack = min_slack.min(r.slack);
        }
        Ok(Measured { metric: min_slack, cases: 33 })
    }));

    rows.push(row("proposition_and_am_hm", Comparison::AtMost, 0.0, opts, || {
        let grid = GridSpec::new(32, 17);
        let mut failures = 0usize;
        let mut cases = 0;
        for (a, b) in [(0.5, 4.0), (1.0, 2.0), (0.05, 1.0)] {
            let iv = Interval::new(a, b)?;
            if check_am_hm(&iv, &grid)?.max_violation > VIOLATION_TOL {
                failures += 1;
            }
            cases += 1;
            for f in FunctionSpec::registry() {
                for s in s_set(&[0.25, 0.5, 0.75, 1.0]) {
                    let p = check_proposition(&f, &iv, s, &grid)?;
                    failures += usize::from(!p.increasing_case_holds()) + usize::from(!p.decreasing_case_holds());
                    cases += 1;
                }
            }
        }
        Ok(Measured { metric: failures as f64, cases })
    }));

    rows.push(row("hyp2f1_log_identity", Comparison::AtMost, 1e-10, opts, || {
        let mut worst = 0.0_f64;
        for k in 1..=9 {
            let z = k as f64 / 10.0;
            let want = -(-z).ln_1p() / z;
            worst = worst.max((hyp2f1(1.0, 1.0, 2.0, z)? - want).abs() / want);
        }
        Ok(Measured { metric: worst, cases: 9 })
    }));
    rows.push(row("beta_symmetry", Comparison::AtMost, 1e-13, opts, || {
        let mut worst = 0.0_f64;
        let mut cases = 0;
        let axis: Vec<f64> = (0..=20).map(|i| 0.5 + 2.475 * i as f64).collect();
        for &x in &axis {
            for &y in &axis {
                let (p, q) = (beta(x, y)?, beta(y, x)?);
                worst = worst.max((p - q).abs() / p);
                cases += 1;
            }
        }
        Ok(Measured { metric: worst, cases })
    }));

    let pass = rows.iter().all(|r| r.pass);
    SelftestSummary { rows, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shape() {
        // 3 single-exponent theorems × 2 q + 2 pair theorems × 1 pair, each × 6 f × 2 s × 2 intervals
        assert_eq!(ostrowski_matrix().len(), (3 * 2 + 2) * 6 * 2 * 2);
    }

    #[test]
    fn override_replaces_error_thresholds_and_slack_floors() {
        let opts = SelftestOptions { tol_override: Some(1e-3), ..Default::default() };
        let r = row("x", Comparison::AtMost, 1e-8, &opts, || Ok(Measured { metric: 1e-4, cases: 1 }));
        assert!(r.pass && r.threshold == 1e-3);
        let r = row("x", Comparison::AtLeast, -1e-12, &opts, || Ok(Measured { metric: -1e-4, cases: 1 }));
        assert!(r.pass && r.threshold == -1e-3);
        // count floors are not tolerances
        let r = row("x", Comparison::AtLeast, 5.0, &opts, || Ok(Measured { metric: 4.0, cases: 4 }));
        assert!(!r.pass && r.threshold == 5.0);
    }

    #[test]
    fn errors_fail_the_row() {
        let r = row("x", Comparison::AtMost, 1.0, &SelftestOptions::default(), || {
            Err(crate::Error::usage("boom"))
        });
        assert!(!r.pass && r.metric.is_nan());
    }

    #[test]
    fn table_and_csv_list_every_suite() {
        let summary = SelftestSummary {
            rows: vec![SuiteRow {
                suite: "demo".into(),
                metric: 0.5,
                comparison: Comparison::AtMost,
                threshold: 1.0,
                cases: 2,
                pass: true,
                seconds: 0.0,
            }],
            pass: true,
        };
        assert!(summary.table().contains("demo") && summary.table().ends_with("overall: pass\n"));
        assert_eq!(summary.to_csv().lines().count(), 2);
    }
}
