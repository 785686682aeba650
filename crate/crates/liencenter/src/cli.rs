//! Command-line front end.
//!
//! Exit codes: 0 the system has a global center, 1 it does not, 2 the
//! decision is numerically inconclusive, 3 usage or parse error, 4 numeric
//! failure during an oracle run.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::criteria::{
    family_membership, odd_family_system, quintic_normal_form, LienardSystem, QuinticNormalForm,
    ToleranceOptions, VerdictKind,
};
use crate::flow::IntegratorConfig;
use crate::poly::{parse_polynomial, Polynomial, Rational};
use crate::render::{render_portrait, PortraitSpec};
use crate::report::{analyze, analyze_with_oracle};

pub const EXIT_GLOBAL_CENTER: i32 = 0;
pub const EXIT_NOT_GLOBAL_CENTER: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Parser)]
#[command(
    name = "liencenter",
    version,
    about = "Decide whether x' = y, y' = -g(x) - f(x) y has a global center at the origin"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the decision pipeline and print the full report.
    Check(CheckArgs),
    /// Classify the equilibria at infinity on the Poincare disc boundary.
    ClassifyInfinity(SysArgs),
    /// Render a Poincare-disc phase portrait as SVG.
    Portrait(PortraitArgs),
    /// Run the decision pipeline, then cross-validate with the return-map
    /// oracle (closure at each seed, escape probes when applicable).
    Verify(VerifyArgs),
    /// Membership tests for the two studied families.
    #[command(subcommand)]
    Family(FamilyCmd),
}

#[derive(Args)]
struct SysArgs {
    /// Damping polynomial f(x), e.g. "x + 2x^3" or "1/2x".
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Restoring polynomial g(x).
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Human-readable text instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    sys: SysArgs,
    /// Sample count for the level-matching scan of condition (iv).
    #[arg(long)]
    samples: Option<usize>,
    /// Relative tolerance for flagging a numeric (iv) violation.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    check: CheckArgs,
    /// Comma-separated probe amplitudes on the positive y axis.
    #[arg(long, value_delimiter = ',', default_value = "0.5,5,50")]
    seeds: Vec<f64>,
}

#[derive(Args)]
struct PortraitArgs {
    #[command(flatten)]
    sys: SysArgs,
    /// Comma-separated orbit seed radii (positive, increasing).
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    seeds: Vec<f64>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Reduce a quintic system to its one- or two-parameter normal form.
    Quintic(SysArgs),
    /// Membership of g = x + a x^(2k+1), f = x + b x^l in the four
    /// global-center parameter spaces (b = 0 variants take f = x).
    Odd(OddArgs),
}

#[derive(Args)]
struct OddArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    l: u32,
    /// Rational, e.g. "3" or "5/2".
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Rational; 0 selects the undamped variants.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    text: bool,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    if let Ok(threads) = std::env::var("LIENCENTER_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            // Ignore failure: the global pool can only be set once.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print its rich message (help/version go to stdout and
            // are not errors).
            use clap::error::ErrorKind::*;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, DisplayHelp | DisplayVersion) { 0 } else { EXIT_USAGE };
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32, Failure> {
    match cmd {
        Cmd::Check(args) => cmd_check(args),
        Cmd::ClassifyInfinity(args) => cmd_classify(args),
        Cmd::Portrait(args) => cmd_portrait(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Family(FamilyCmd::Quintic(args)) => cmd_family_quintic(args),
        Cmd::Family(FamilyCmd::Odd(args)) => cmd_family_odd(args),
    }
}

fn parse_poly_arg(name: &str, text: &str) -> Result<Polynomial, Failure> {
    parse_polynomial(text).map_err(|e| fail(EXIT_USAGE, format!("--{name} {text:?}: {e}")))
}

fn build_system(args: &SysArgs) -> Result<LienardSystem, Failure> {
    let f = parse_poly_arg("f", &args.f)?;
    let g = parse_poly_arg("g", &args.g)?;
    LienardSystem::new(f, g).map_err(|e| fail(EXIT_USAGE, e.to_string()))
}

fn tolerance_options(samples: Option<usize>, tol: Option<f64>) -> ToleranceOptions {
    let mut opts = ToleranceOptions::default();
    if let Some(s) = samples {
        opts.samples = s;
    }
    if let Some(t) = tol {
        opts.tol_rel = t;
    }
    opts
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| fail(EXIT_NUMERIC, format!("stdout: {e}")))
        }
    }
}

fn verdict_exit(kind: &VerdictKind) -> i32 {
    match kind {
        VerdictKind::GlobalCenterLinear | VerdictKind::GlobalCenterNilpotent => {
            EXIT_GLOBAL_CENTER
        }
        VerdictKind::NotGlobalCenter => EXIT_NOT_GLOBAL_CENTER,
        VerdictKind::NumericInconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_check(args: CheckArgs) -> Result<i32, Failure> {
    let sys = build_system(&args.sys)?;
    let opts = tolerance_options(args.samples, args.tol);
    let rep = analyze(&sys, &opts);
    let text = if args.sys.text {
        rep.to_text()
    } else {
        format!("{:#}\n", rep.to_json())
    };
    emit(&args.sys.out, &text)?;
    Ok(verdict_exit(&rep.verdict.kind))
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let sys = build_system(&args.check.sys)?;
    let opts = tolerance_options(args.check.samples, args.check.tol);
    for &s in &args.seeds {
        if !(s > 0.0) {
            return Err(fail(EXIT_USAGE, format!("seed {s} must be positive")));
        }
    }
    let rep = analyze_with_oracle(&sys, &opts, &args.seeds, &IntegratorConfig::default(), 8)
        .map_err(|e| fail(EXIT_NUMERIC, e.to_string()))?;
    let text = if args.check.sys.text {
        rep.to_text()
    } else {
        format!("{:#}\n", rep.to_json())
    };
    emit(&args.check.sys.out, &text)?;
    Ok(verdict_exit(&rep.verdict.kind))
}

fn cmd_classify(args: SysArgs) -> Result<i32, Failure> {
    let sys = build_system(&args)?;
    let idx = crate::infinity::normalize(&sys);
    let class = crate::infinity::classify_infinity(&idx)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let text = if args.text {
        let mut t = format!(
            "{} (regime {}, epsilon = {}), connection_at_infinity = {}\n",
            class.figure_ref,
            idx.regime.as_str(),
            idx.epsilon,
            class.connection_at_infinity
        );
        for e in &class.equilibria {
            t.push_str(&format!("  {}: {}\n", e.name, crate::report::describe_equilibrium(e)));
        }
        t
    } else {
        let j = serde_json::json!({
            "regime": idx.regime.as_str(),
            "m": idx.m,
            "n": idx.n,
            "epsilon": idx.epsilon.to_string(),
            "figure_ref": class.figure_ref,
            "connection_at_infinity": class.connection_at_infinity,
            "equilibria": class.equilibria.iter().map(|e| serde_json::json!({
                "name": e.name, "kind": e.kind, "sectors": e.sectors,
            })).collect::<Vec<_>>(),
        });
        format!("{j:#}\n")
    };
    emit(&args.out, &text)?;
    Ok(0)
}

const PORTRAIT_PX: u32 = 600;

fn cmd_portrait(args: PortraitArgs) -> Result<i32, Failure> {
    let sys = build_system(&args.sys)?;
    let spec = PortraitSpec::new(sys, args.seeds, PORTRAIT_PX, true)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let svg = render_portrait(&spec);
    emit(&args.sys.out, &svg)?;
    Ok(0)
}

fn cmd_family_quintic(args: SysArgs) -> Result<i32, Failure> {
    let sys = build_system(&args)?;
    let nf = quintic_normal_form(&sys).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let verdict = analyze(&sys, &ToleranceOptions::default()).verdict;
    let (text, json);
    match &nf {
        Some(QuinticNormalForm::Linear { a, b }) => {
            json = serde_json::json!({
                "family": "quintic",
                "normal_form": {"type": "linear", "a": a, "b": b},
                "verdict": verdict.kind.as_str(),
            });
            text = format!(
                "quintic normal form: linear, a = {a:.16e}, b = {b:.16e}\nverdict: {}\n",
                verdict.kind.as_str()
            );
        }
        Some(QuinticNormalForm::Nilpotent { c }) => {
            json = serde_json::json!({
                "family": "quintic",
                "normal_form": {"type": "nilpotent", "c": c},
                "verdict": verdict.kind.as_str(),
            });
            text = format!(
                "quintic normal form: nilpotent, c = {c:.16e}\nverdict: {}\n",
                verdict.kind.as_str()
            );
        }
        None => {
            json = serde_json::json!({
                "family": "quintic",
                "normal_form": serde_json::Value::Null,
                "verdict": verdict.kind.as_str(),
            });
            text = format!(
                "not in the quintic family shape\nverdict: {}\n",
                verdict.kind.as_str()
            );
        }
    }
    emit(&args.out, &if args.text { text } else { format!("{json:#}\n") })?;
    Ok(verdict_exit(&verdict.kind))
}

fn parse_rational_arg(name: &str, text: &str) -> Result<Rational, Failure> {
    let p = parse_poly_arg(name, text)?;
    if p.degree().map_or(false, |d| d > 0) {
        return Err(fail(EXIT_USAGE, format!("--{name} {text:?}: expected a number")));
    }
    Ok(p.coeff(0))
}

fn cmd_family_odd(args: OddArgs) -> Result<i32, Failure> {
    if args.k < 1 || args.l < 1 {
        return Err(fail(EXIT_USAGE, "k and l must be at least 1"));
    }
    let a = parse_rational_arg("a", &args.a)?;
    let b = parse_rational_arg("b", &args.b)?;
    let space = family_membership(args.k, args.l, &a, &b);
    let sys = odd_family_system(args.k, args.l, &a, &b)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let verdict = analyze(&sys, &ToleranceOptions::default()).verdict;
    let member = space.is_some();
    let is_center = matches!(
        verdict.kind,
        VerdictKind::GlobalCenterLinear | VerdictKind::GlobalCenterNilpotent
    );
    let json = serde_json::json!({
        "family": "odd",
        "k": args.k, "l": args.l,
        "a": a.to_string(), "b": b.to_string(),
        "space": space.map(|s| s.as_str()),
        "verdict": verdict.kind.as_str(),
        "consistent": member == is_center,
    });
    let text = format!(
        "space: {}\nverdict: {}\nconsistent: {}\n",
        space.map_or("none", |s| s.as_str()),
        verdict.kind.as_str(),
        member == is_center
    );
    emit(&args.out, &if args.text { text } else { format!("{json:#}\n") })?;
    Ok(verdict_exit(&verdict.kind))
}
