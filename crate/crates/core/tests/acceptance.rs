//! Acceptance suite. Each criterion prints one line with its measured value,
//! its pinned tolerance and pass/FAIL; the process fails if any line fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use hsconvex::bounds::{
    classic_ostrowski_rhs, hh_harmonic_bounds, lambda, lambda5, ostrowski_rhs, DerivBound,
};
use hsconvex::cli::selftest::ostrowski_matrix;
use hsconvex::convexity::{check_am_hm, check_proposition, GridSpec, SExponent, VIOLATION_TOL};
use hsconvex::numeric::{derivative, FunctionSpec, Interval};
use hsconvex::specfn::{beta, hyp2f1};
use hsconvex::verify::{lambda_consistency, verify_theorem, LambdaGrid, VerifyOptions};

struct Line {
    id: u8,
    name: &'static str,
    detail: String,
    pass: bool,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

fn s(v: f64) -> SExponent {
    SExponent::new(v).unwrap()
}

fn criterion_1() -> Line {
    let (res, dt) = timed(|| {
        let grid = LambdaGrid::default_grid();
        let mut worst = 0.0_f64;
        for p in &grid.points {
            let closed = lambda(p).unwrap();
            worst = worst.max(rel(closed, lambda_oracle(p.kind.index(), p.theta, p.x, p.s, p.vartheta, p.rho)));
        }
        let mut worst5 = 0.0_f64;
        let mut straddles = 0;
        for &(theta, x) in &grid.lambda5_points {
            worst5 = worst5.max(rel(lambda5(theta, x).unwrap(), lambda5_oracle(theta, x)));
            let r = (1.0 - theta / x).abs();
            straddles += usize::from(r > 0.0 && r < 1e-3);
        }
        // The library's own quadrature cross-check must agree as well.
        let internal = lambda_consistency(&grid).unwrap();
        (grid.points.len(), worst, worst5, straddles, internal)
    });
    let (n, worst, worst5, straddles, internal) = res;
    let pass = n >= 240
        && worst <= 1e-8
        && worst5 <= 1e-10
        && straddles >= 6
        && internal.max_rel_error <= 1e-8
        && internal.lambda5_max_rel_error <= 1e-10
        && dt < Duration::from_secs(10);
    Line {
        id: 1,
        name: "lambda closed forms vs quadrature",
        detail: format!(
            "{n} pts max rel {worst:.3e} (<=1e-8), lambda5 {worst5:.3e} (<=1e-10, {straddles} pts near the series handoff), {:.2}s (<10s)",
            dt.as_secs_f64()
        ),
        pass,
    }
}

fn criterion_2() -> Line {
    let (res, dt) = timed(|| {
        let mut worst = 0.0_f64;
        let mut cases = 0;
        for id in ["const:2", "id", "pow:2", "pow:0.5", "inv"] {
            let (f, df) = registry_closed(id);
            let spec = FunctionSpec::parse(id).unwrap();
            for (a, b) in [(1.0, 2.0), (0.5, 3.0), (2.0, 2.5)] {
                let iv = Interval::new(a, b).unwrap();
                for x in iv.grid(9) {
                    let lhs = f(x) - oracle_weighted_mean(f, a, b);
                    let side = |end: f64| {
                        (x - end).powi(2)
                            * tanh_sinh01(|t, omt| {
                                let den = t * end + omt * x;
                                t * df(end * x / den) / (den * den)
                            })
                    };
                    let rhs = a * b / (b - a) * (side(a) - side(b));
                    let lib = hsconvex::verify::lemma_residual(&spec, x, &iv, 1e-12).unwrap();
                    let scale = 1.0 + f(x).abs();
                    worst = worst.max((lhs - rhs).abs() / scale).max(lib / scale);
                    cases += 1;
                }
            }
        }
        (worst, cases)
    });
    let (worst, cases) = res;
    Line {
        id: 2,
        name: "integral identity residual",
        detail: format!("{cases} cases max scaled residual {worst:.3e} (<=1e-7), {:.2}s (<10s)", dt.as_secs_f64()),
        pass: cases == 135 && worst <= 1e-7 && dt < Duration::from_secs(10),
    }
}

fn criterion_3() -> Line {
    let mut min_slack = f64::INFINITY;
    let mut mid_err = 0.0_f64;
    for sv in [0.25, 0.5, 0.75, 1.0] {
        let f = FunctionSpec::power(sv).unwrap();
        for (a, b) in [(0.25, 1.0), (0.1, 0.9)] {
            let t = hh_harmonic_bounds(&f, &Interval::new(a, b).unwrap(), s(sv), 1e-12).unwrap();
            min_slack = min_slack.min(t.left_slack()).min(t.right_slack());
            mid_err = mid_err.max(rel(t.middle, oracle_weighted_mean(|u: f64| u.powf(sv), a, b)));
        }
    }
    let t = hh_harmonic_bounds(&FunctionSpec::identity(), &Interval::new(1.0, 2.0).unwrap(), s(1.0), 1e-12).unwrap();
    let ln_err = (t.middle - 2.0 * 2f64.ln()).abs();
    let chain_ok = t.left <= t.middle && t.middle <= t.right;
    Line {
        id: 3,
        name: "Hermite-Hadamard chain",
        detail: format!(
            "min slack {min_slack:.3e} (>=-1e-12), middle vs oracle {mid_err:.1e}, s=1 middle - 2ln2 = {ln_err:.1e} (<=1e-10)"
        ),
        pass: min_slack >= -1e-12 && mid_err <= 1e-10 && ln_err <= 1e-10 && chain_ok,
    }
}

fn criterion_4() -> Line {
    let (res, dt) = timed(|| {
        let opts = VerifyOptions { quad_tol: 1e-12, ..Default::default() };
        let mut min_slack = f64::INFINITY;
        let mut points = 0;
        let mut gated = BTreeSet::new();
        for (theorem, f, iv, sv, e) in ostrowski_matrix() {
            let rep = verify_theorem(theorem, &f, &iv, sv, Some(e), &opts).unwrap();
            if !rep.hypothesis_ok {
                continue;
            }
            gated.insert((theorem, f.id().to_owned()));
            let (fc, _) = registry_closed(f.id());
            let mean = oracle_weighted_mean(fc, iv.a(), iv.b());
            for r in &rep.results {
                // lhs from the oracle, rhs from the closed form under test
                min_slack = min_slack.min(r.rhs - (fc(r.x) - mean).abs()).min(r.slack);
                points += 1;
            }
        }
        (min_slack, points, gated.len())
    });
    let (min_slack, points, gated) = res;
    Line {
        id: 4,
        name: "Ostrowski-type bounds under the hypothesis gate",
        detail: format!(
            "{points} pts min slack {min_slack:.3e} (>=-1e-9), {gated} gated (theorem, f) (>=5), {:.2}s (<60s)",
            dt.as_secs_f64()
        ),
        pass: min_slack >= -1e-9 && gated >= 5 && dt < Duration::from_secs(60),
    }
}

fn criterion_5() -> Line {
    let mut min_gap = f64::INFINITY;
    let mut cases = 0;
    for (theorem, f, iv, sv, e) in ostrowski_matrix() {
        let xs = iv.grid(9);
        let m = xs.iter().map(|&x| derivative(&f, x).unwrap().abs()).fold(0.0, f64::max) + 0.1;
        let m = DerivBound::new(m).unwrap();
        for &x in &xs {
            let plain = ostrowski_rhs(theorem, &f, x, &iv, sv, e, None).unwrap();
            let cor = ostrowski_rhs(theorem, &f, x, &iv, sv, e, Some(m)).unwrap();
            min_gap = min_gap.min(cor - plain);
            cases += 1;
        }
    }
    Line {
        id: 5,
        name: "corollary rhs dominates theorem rhs",
        detail: format!("{cases} pts min(corollary - theorem) {min_gap:.3e} (>=-1e-12)"),
        pass: min_gap >= -1e-12,
    }
}

fn criterion_6() -> Line {
    let m = DerivBound::new(1.0).unwrap();
    let mut min_slack = f64::INFINITY;
    let iv = Interval::new(1.0, 2.0).unwrap();
    for x in iv.grid(33) {
        // plain mean of f(x) = x on [1, 2] is exactly 3/2
        let lhs = (x - 1.5_f64).abs();
        min_slack = min_slack.min(classic_ostrowski_rhs(x, 1.0, 2.0, m).unwrap() - lhs);
    }
    Line {
        id: 6,
        name: "classic Ostrowski",
        detail: format!("33 pts min slack {min_slack:.3e} (>=-1e-14)"),
        pass: min_slack >= -1e-14,
    }
}

fn criterion_7() -> Line {
    let grid = GridSpec::new(32, 17);
    let mut failures = 0;
    let mut implications = 0;
    let mut am_hm_worst = f64::NEG_INFINITY;
    for (a, b) in [(0.5, 4.0), (1.0, 2.0), (0.05, 1.0)] {
        let iv = Interval::new(a, b).unwrap();
        let rep = check_am_hm(&iv, &grid).unwrap();
        am_hm_worst = am_hm_worst.max(rep.max_violation);
        failures += usize::from(rep.max_violation > VIOLATION_TOL);
        for f in FunctionSpec::registry() {
            for sv in [0.25, 0.5, 0.75, 1.0] {
                let p = check_proposition(&f, &iv, s(sv), &grid).unwrap();
                failures += usize::from(!p.increasing_case_holds()) + usize::from(!p.decreasing_case_holds());
                implications += 2;
            }
        }
    }
    Line {
        id: 7,
        name: "proposition grid implications and AM-HM",
        detail: format!("{implications} implications, AM-HM max violation {am_hm_worst:.3e}, {failures} failures (==0)"),
        pass: failures == 0,
    }
}

fn criterion_8() -> Line {
    let mut f_err = 0.0_f64;
    for k in 1..=9 {
        let z = k as f64 / 10.0;
        f_err = f_err.max(rel(hyp2f1(1.0, 1.0, 2.0, z).unwrap(), -(-z).ln_1p() / z));
    }
    let mut b_err = 0.0_f64;
    for i in 0..=12 {
        for j in 0..=12 {
            let (x, y) = (0.3 + 1.7 * i as f64, 0.45 + 1.3 * j as f64);
            b_err = b_err.max(rel(beta(x, y).unwrap(), beta(y, x).unwrap()));
        }
    }
    let (out, dt) = timed(|| Command::new(env!("CARGO_BIN_EXE_hsconvex")).arg("selftest").output().unwrap());
    let code = out.status.code();
    Line {
        id: 8,
        name: "special functions and selftest",
        detail: format!(
            "2F1 log identity {f_err:.3e} (<=1e-10), beta symmetry {b_err:.3e} (<=1e-13), selftest exit {code:?} in {:.2}s (<60s)",
            dt.as_secs_f64()
        ),
        pass: f_err <= 1e-10 && b_err <= 1e-13 && code == Some(0) && dt < Duration::from_secs(60),
    }
}

fn main() {
    // The oracle must itself reproduce values known in closed form.
    let l1 = lambda_oracle(1, 1.0, 2.0, 1.0, 1.0, 1.0);
    assert!((l1 - (3.0 - 4.0 * 2f64.ln())).abs() < 1e-13, "oracle λ₁ = {l1}");
    assert!((lambda5_oracle(1.0, 1.0) - 0.5).abs() < 1e-14);

    let lines = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    let mut all = true;
    for l in &lines {
        println!("criterion {} {:<48} {}  {}", l.id, l.name, if l.pass { "pass" } else { "FAIL" }, l.detail);
        all &= l.pass;
    }
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILED" });
    if !all {
        std::process::exit(1);
    }
}
