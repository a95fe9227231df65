//! Command-line surface. `run` parses arguments, executes one command and
//! returns the process exit code: 0 success, 1 verification failure, 2 usage
//! or domain error.

pub mod selftest;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    evaluate_classic_ostrowski, evaluate_ostrowski, hh_harmonic_bounds, hh_s_convex_bounds, lambda5, lambda_quadrature,
    lambda_with_form, DerivBound, Exponent, Lambda2Form, LambdaArgs, LambdaKind, Theorem, CSV_HEADER,
};
use crate::convexity::{GridSpec, SExponent};
use crate::error::{Error, Result};
use crate::numeric::{derivative, integrate, FunctionSpec, Interval, DEFAULT_TOL};
use crate::output::{csv_opt, fmt17, ser_f64, ser_opt_f64, to_json};
use crate::verify::{hypothesis_gate, verify_theorem, VerifyOptions, SLACK_TOL};

use selftest::{run_selftest, SelftestOptions};

/// Extra seeded samples added to the hypothesis grid when `--seed` is given.
const RANDOM_HYPOTHESIS_SAMPLES: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "hsconvex", version, about = "Bounds and numerical checks for harmonically s-convex functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one of the λ₁..λ₅ coefficient functions.
    Lambda(LambdaCmd),
    /// Hermite–Hadamard chain for a registry function.
    Hh(HhCmd),
    /// One Ostrowski-type bound at a single point.
    Ostrowski(OstrowskiCmd),
    /// Hypothesis-gated slack scan for one theorem.
    Verify(VerifyCmd),
    /// Run every self-check and print a summary table.
    Selftest(SelftestCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LambdaCmd {
    /// 1..=5
    #[arg(long)]
    pub kind: u8,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub vartheta: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Also integrate numerically and report the discrepancy.
    #[arg(long)]
    pub check: bool,
    /// Quadrature tolerance for `--check`.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    /// Use the λ₂ formula exactly as printed (for diagnosis only).
    #[arg(long, hide = true)]
    pub lambda2_printed: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum HhMode {
    /// Harmonic s-convexity chain.
    #[default]
    Harmonic,
    /// s-convexity in the second sense.
    SConvex,
}

#[derive(Debug, Args)]
pub struct HhCmd {
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = HhMode::Harmonic)]
    pub mode: HhMode,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OstrowskiCmd {
    /// T2_3..T2_7, or `classic`.
    #[arg(long)]
    pub theorem: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Bound on |f′|; switches to the corollary form.
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// Points per axis of the hypothesis grid.
    #[arg(long, default_value_t = 17)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[arg(long)]
    pub theorem: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of x points.
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    /// Allowed negative slack.
    #[arg(long, default_value_t = SLACK_TOL)]
    pub tol: f64,
    /// Adds seeded random samples to the hypothesis grid.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestCmd {
    /// Replace every suite tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Inject the λ₂ formula as printed; the consistency suite should fail.
    #[arg(long, hide = true)]
    pub lambda2_printed: bool,
    /// Defaults to a plain-text table.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command produced and whether it counts as a pass.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let output = match &cli.command {
        Command::Lambda(c) => c.output.clone(),
        Command::Hh(c) => c.output.clone(),
        Command::Ostrowski(c) => c.output.clone(),
        Command::Verify(c) => c.output.clone(),
        Command::Selftest(c) => OutputArgs { format: c.format.unwrap_or_default(), out: c.out.clone() },
    };
    let result = match &cli.command {
        Command::Lambda(c) => cmd_lambda(c),
        Command::Hh(c) => cmd_hh(c),
        Command::Ostrowski(c) => cmd_ostrowski(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Selftest(c) => Ok(cmd_selftest(c)),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&output, &outcome.text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Usage and domain errors are the caller's fault (2); a numerical failure
/// means the check could not be completed (1).
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Usage(_) => 2,
        Error::Numeric { .. } => 1,
    }
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn s_exponent(s: f64) -> Result<SExponent> {
    SExponent::new(s)
}

#[derive(Serialize)]
struct LambdaOutput {
    kind: u8,
    #[serde(serialize_with = "ser_f64")]
    theta: f64,
    #[serde(serialize_with = "ser_f64")]
    x: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    s: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    vartheta: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    rho: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    value: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    quadrature: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    discrepancy: Option<f64>,
}

fn lambda5_integrand(theta: f64, x: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        let den = t * theta + (1.0 - t) * x;
        t / (den * den)
    }
}

pub fn cmd_lambda(c: &LambdaCmd) -> Result<Outcome> {
    let (value, quadrature, params) = if c.kind == 5 {
        if c.s.is_some() || c.vartheta.is_some() || c.rho.is_some() {
            return Err(Error::usage("λ₅ takes only --theta and --x"));
        }
        let v = lambda5(c.theta, c.x)?;
        let quad = if c.check {
            Some(integrate(lambda5_integrand(c.theta, c.x), 0.0, 1.0, c.tol * v.abs().max(f64::MIN_POSITIVE))?.value)
        } else {
            None
        };
        (v, quad, (None, None, None))
    } else {
        let kind = LambdaKind::from_index(c.kind)?;
        let (Some(s), Some(vt), Some(rho)) = (c.s, c.vartheta, c.rho) else {
            return Err(Error::usage(format!("λ{} needs --s, --vartheta and --rho", c.kind)));
        };
        let args = LambdaArgs::new(kind, c.theta, c.x, s, vt, rho)?;
        let form = if c.lambda2_printed { Lambda2Form::Printed } else { Lambda2Form::Integral };
        let v = lambda_with_form(&args, form)?;
        let quad = if c.check {
            Some(lambda_quadrature(&args, c.tol * v.abs().max(f64::MIN_POSITIVE))?.value)
        } else {
            None
        };
        (v, quad, (Some(s), Some(vt), Some(rho)))
    };
    let discrepancy = quadrature.map(|q| if q == 0.0 { (value - q).abs() } else { (value - q).abs() / q.abs() });
    let out = LambdaOutput {
        kind: c.kind,
        theta: c.theta,
        x: c.x,
        s: params.0,
        vartheta: params.1,
        rho: params.2,
        value,
        quadrature,
        discrepancy,
    };
    let text = match c.output.format {
        Format::Json => to_json(&out),
        Format::Csv => format!(
            "kind,theta,x,s,vartheta,rho,value,quadrature,discrepancy\n{},{},{},{},{},{},{},{},{}\n",
            out.kind,
            fmt17(out.theta),
            fmt17(out.x),
            csv_opt(out.s),
            csv_opt(out.vartheta),
            csv_opt(out.rho),
            fmt17(out.value),
            csv_opt(out.quadrature),
            csv_opt(out.discrepancy)
        ),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct HhOutput {
    function: String,
    mode: &'static str,
    #[serde(serialize_with = "ser_f64")]
    a: f64,
    #[serde(serialize_with = "ser_f64")]
    b: f64,
    #[serde(serialize_with = "ser_f64")]
    s: f64,
    #[serde(serialize_with = "ser_f64")]
    left: f64,
    #[serde(serialize_with = "ser_f64")]
    middle: f64,
    #[serde(serialize_with = "ser_f64")]
    right: f64,
    #[serde(serialize_with = "ser_f64")]
    left_slack: f64,
    #[serde(serialize_with = "ser_f64")]
    right_slack: f64,
}

pub fn cmd_hh(c: &HhCmd) -> Result<Outcome> {
    let f = FunctionSpec::parse(&c.function)?;
    let s = s_exponent(c.s)?;
    let (triple, mode) = match c.mode {
        HhMode::Harmonic => (hh_harmonic_bounds(&f, &Interval::new(c.a, c.b)?, s, c.tol)?, "harmonic"),
        HhMode::SConvex => (hh_s_convex_bounds(&f, c.a, c.b, s, c.tol)?, "s-convex"),
    };
    let out = HhOutput {
        function: f.id().to_owned(),
        mode,
        a: c.a,
        b: c.b,
        s: c.s,
        left: triple.left,
        middle: triple.middle,
        right: triple.right,
        left_slack: triple.left_slack(),
        right_slack: triple.right_slack(),
    };
    let text = match c.output.format {
        Format::Json => to_json(&out),
        Format::Csv => format!(
            "fn,mode,a,b,s,left,middle,right,left_slack,right_slack\n{},{},{},{},{},{},{},{},{},{}\n",
            out.function,
            out.mode,
            fmt17(out.a),
            fmt17(out.b),
            fmt17(out.s),
            fmt17(out.left),
            fmt17(out.middle),
            fmt17(out.right),
            fmt17(out.left_slack),
            fmt17(out.right_slack)
        ),
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_ostrowski(c: &OstrowskiCmd) -> Result<Outcome> {
    let f = FunctionSpec::parse(&c.function)?;
    let iv = Interval::new(c.a, c.b)?;
    let result = if c.theorem == "classic" {
        let m = DerivBound::new(c.m.ok_or_else(|| Error::usage("the classic bound needs --M"))?)?;
        let mut r = evaluate_classic_ostrowski(&f, c.x, &iv, m, c.tol)?;
        // The classic hypothesis is |f′| ≤ M on [a, b]; sampled on the grid.
        let mut ok = true;
        for u in iv.grid(c.grid.max(2)) {
            ok &= derivative(&f, u)?.abs() <= m.get();
        }
        r.hypothesis_ok = ok;
        r
    } else {
        let theorem: Theorem = c.theorem.parse()?;
        if theorem == Theorem::T2_2 {
            return Err(Error::usage("T2_2 is a chain, not a pointwise bound; use `hh` or `verify`"));
        }
        let s = s_exponent(c.s)?;
        let e = Exponent::for_theorem(theorem, c.q, c.p)?;
        let m = c.m.map(DerivBound::new).transpose()?;
        let mut grid = GridSpec::uniform(c.grid);
        if let Some(seed) = c.seed {
            grid = grid.with_random(seed, RANDOM_HYPOTHESIS_SAMPLES);
        }
        let ok = hypothesis_gate(theorem, &f, &iv, s, Some(e), &grid)?.holds();
        evaluate_ostrowski(theorem, &f, c.x, &iv, s, e, m, ok, c.tol)?
    };
    let text = match c.output.format {
        Format::Json => to_json(&result),
        Format::Csv => format!("{CSV_HEADER}\n{}\n", result.csv_row()),
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_verify(c: &VerifyCmd) -> Result<Outcome> {
    let theorem: Theorem = c.theorem.parse()?;
    let f = FunctionSpec::parse(&c.function)?;
    let iv = Interval::new(c.a, c.b)?;
    let s = s_exponent(c.s)?;
    let exponent = match theorem {
        Theorem::T2_2 => None,
        t => Some(Exponent::for_theorem(t, c.q, c.p)?),
    };
    if !(c.tol >= 0.0 && c.tol.is_finite()) {
        return Err(Error::usage(format!("--tol must be a finite nonnegative number, got {}", c.tol)));
    }
    let mut opts = VerifyOptions { x_grid: c.grid, slack_tol: c.tol, ..Default::default() };
    if let Some(seed) = c.seed {
        opts.hypothesis_grid = opts.hypothesis_grid.with_random(seed, RANDOM_HYPOTHESIS_SAMPLES);
    }
    let report = verify_theorem(theorem, &f, &iv, s, exponent, &opts)?;
    let text = match c.output.format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
    };
    Ok(Outcome { text, pass: report.pass })
}

pub fn cmd_selftest(c: &SelftestCmd) -> Outcome {
    let opts = SelftestOptions {
        tol_override: c.tol,
        lambda2_form: if c.lambda2_printed { Lambda2Form::Printed } else { Lambda2Form::Integral },
    };
    let summary = run_selftest(&opts);
    let text = match c.format {
        None => summary.table(),
        Some(Format::Json) => to_json(&summary),
        Some(Format::Csv) => summary.to_csv(),
    };
    Outcome { text, pass: summary.pass }
}
