//! `ineq`: identity checks, bound evaluation, sweeps and special means.
//!
//! Exit codes: 0 success, 1 verification failure or bound violation,
//! 2 usage error, 3 numeric failure, 4 convexity gate failed.

mod config;
mod output;
mod spec;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ineq_core::analysis::{errata_report, sweep_all, write_csv, write_json, SweepOutput};
use ineq_core::bounds::NUMERIC_TOL;
use ineq_core::corpus::{corpus, load_corpus, CorpusEntry};
use ineq_core::identity::verify_identity;
use ineq_core::means::{
    arithmetic_mean, generalized_log_mean_pow, logarithmic_mean, proposition1_bound,
    proposition2_bound, MeanPair,
};
use ineq_core::{
    BoundRequest, Error, Evaluator, ExprFunction, Family, Interval, RuleForm, Variant,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_CONVEXITY: u8 = 4;

const DEFAULT_VERIFY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "ineq",
    version,
    about = "Ostrowski-type quadrature remainder bounds"
)]
struct Cli {
    /// Print a text table instead of JSON
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the kernel identity for one function, order and rule
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Evaluate one bound against the quadrature oracle
    #[command(allow_negative_numbers = true)]
    Bound(BoundArgs),
    /// Evaluate a grid of bounds and write a CSV or JSON report
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Arithmetic, logarithmic and power means and the mean inequalities
    #[command(allow_negative_numbers = true)]
    Means(MeansArgs),
    /// List the reference functions
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct Target {
    /// Expression in t, e.g. "exp(t)" or "t^3 - 2*t"
    #[arg(long = "fn", allow_hyphen_values = true)]
    function: String,
    #[arg(long = "a")]
    a: f64,
    #[arg(long = "b")]
    b: f64,
    /// Order of the rule
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormArgs {
    /// Rule point in [a, b]
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    midpoint: bool,
    #[arg(long)]
    trapezoid: bool,
}

impl FormArgs {
    fn form(&self) -> RuleForm {
        match (self.x, self.midpoint) {
            (Some(x), _) => RuleForm::PointX(x),
            (None, true) => RuleForm::Midpoint,
            _ => RuleForm::Trapezoid,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    form: FormArgs,
    /// Residual tolerance (default 1e-9, or INEQ_TOL)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value = "corrected")]
    variant: Variant,
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    form: FormArgs,
    /// Hölder exponent (holder, alt-holder)
    #[arg(long)]
    p: Option<f64>,
    /// Power-mean exponent (power-mean)
    #[arg(long)]
    q: Option<f64>,
    /// Extra slack allowed on top of the oracle error (default 1e-10, or INEQ_TOL)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep description file (key = value)
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Report path; the report goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    name: Option<String>,
    #[arg(long = "fn", allow_hyphen_values = true)]
    function: Option<String>,
    #[arg(long = "a")]
    a: Option<f64>,
    #[arg(long = "b")]
    b: Option<f64>,
    /// Corpus entry to sweep (repeatable): a name, "positive" or "all"
    #[arg(long)]
    corpus: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Explicit rule points
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    /// Number of equispaced rule points
    #[arg(long)]
    x_count: Option<usize>,
    #[arg(long)]
    trapezoid: bool,
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<Variant>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeanOp {
    A,
    L,
    Ln,
    Prop1,
    Prop2,
}

#[derive(Args)]
struct MeansArgs {
    #[arg(long, value_enum)]
    op: MeanOp,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    n: Option<i32>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Load entries from a `name; expression; a; b; max_n` file
    #[arg(long)]
    file: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::MaxSubdivisions { .. } | Error::NonFiniteSample { .. } => {
                EXIT_NUMERIC
            }
            Error::EmptyGroup(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn env_tolerance() -> Result<Option<f64>, Failure> {
    match std::env::var("INEQ_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .map(Some)
            .ok_or_else(|| {
                Failure::usage(format!("INEQ_TOL must be a positive number, got {s:?}"))
            }),
        Err(_) => Ok(None),
    }
}

fn tolerance(flag: Option<f64>, default: f64) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => env_tolerance()?.unwrap_or(default),
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

fn target(t: &Target) -> Result<(ExprFunction, Interval), Failure> {
    let f = ExprFunction::parse(&t.function)?;
    let iv = Interval::new(t.a, t.b)?;
    Ok((f, iv))
}

fn cmd_verify(args: &VerifyArgs, pretty: bool) -> CmdResult {
    let tol = tolerance(args.tol, DEFAULT_VERIFY_TOL)?;
    let (f, iv) = target(&args.target)?;
    let form = args.form.form();
    form.validate(&iv)?;
    let report = verify_identity(&f, args.target.n, &iv, form, tol)?;
    let mut payload = json!({
        "fn": f.source(),
        "a": iv.a(),
        "b": iv.b(),
        "n": args.target.n,
        "form": form,
    });
    merge(
        &mut payload,
        serde_json::to_value(report).expect("serializable"),
    );
    output::emit(&payload, pretty);
    Ok(if report.holds { 0 } else { EXIT_FAILURE })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn bound_request(args: &BoundArgs) -> Result<BoundRequest, Failure> {
    let family = args.family;
    let takes_p = matches!(family, Family::Holder | Family::AltHolder);
    if args.p.is_some() && !takes_p {
        return Err(Failure::usage(format!("--p does not apply to {family}")));
    }
    if args.q.is_some() && family != Family::PowerMean {
        return Err(Failure::usage(format!("--q does not apply to {family}")));
    }
    if args.variant != Variant::Corrected && !family.has_variants() {
        return Err(Failure::usage(format!("{family} has no printed variant")));
    }
    if takes_p && args.p.is_none() {
        return Err(Failure::usage(format!("{family} needs --p")));
    }
    if family == Family::PowerMean && args.q.is_none() {
        return Err(Failure::usage("power-mean needs --q"));
    }
    let req = BoundRequest {
        family,
        n: args.target.n,
        form: args.form.form(),
        p: args.p,
        q: args.q,
        variant: args.variant,
    };
    req.exponents()?;
    Ok(req)
}

fn cmd_bound(args: &BoundArgs, pretty: bool) -> CmdResult {
    let tol = tolerance(args.tol, NUMERIC_TOL)?;
    let req = bound_request(args)?;
    let (f, iv) = target(&args.target)?;
    req.form.validate(&iv)?;
    let mut report = Evaluator::new(&f, iv).evaluate(&req)?;
    report.valid = report.convexity.convex && report.slack >= -(report.lhs_err + tol);
    let mut payload = json!({
        "fn": f.source(),
        "a": iv.a(),
        "b": iv.b(),
        "request": req,
    });
    merge(
        &mut payload,
        serde_json::to_value(report).expect("serializable"),
    );
    output::emit(&payload, pretty);
    Ok(if !report.convexity.convex {
        EXIT_CONVEXITY
    } else if !report.valid {
        EXIT_FAILURE
    } else {
        0
    })
}

fn sweep_plan(args: &SweepArgs) -> Result<spec::Plan, Failure> {
    let file = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read spec {}: {e}", path.display())))?;
            spec::Plan::parse_file(&text).map_err(Failure::usage)?
        }
        None => spec::Plan::default(),
    };
    let flags = spec::Plan {
        name: args.name.clone(),
        function: args.function.clone(),
        a: args.a,
        b: args.b,
        corpus: args.corpus.clone(),
        n: args.n.clone(),
        x: args.x.clone(),
        x_count: args.x_count,
        trapezoid: args.trapezoid.then_some(true),
        families: args.families.clone(),
        q: args.q.clone(),
        p: args.p.clone(),
        variants: args.variants.clone(),
    };
    Ok(file.overridden_by(flags))
}

fn findings_path(out: &Path) -> PathBuf {
    out.with_extension("findings.json")
}

fn write_report(result: &SweepOutput, format: Format, w: impl Write) -> Result<(), Failure> {
    match format {
        Format::Csv => write_csv(&result.records, w)?,
        Format::Json => write_json(&result.records, w)?,
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, pretty: bool) -> CmdResult {
    let specs = sweep_plan(args)?.build()?;
    let result = sweep_all(&specs);
    for s in &result.skips {
        eprintln!(
            "skip: {} n={} {} x={} {} {} p={} q={}: {}",
            s.function,
            s.n,
            s.form,
            s.x.map_or("-".into(), |v| v.to_string()),
            s.family,
            s.variant,
            s.p.map_or("-".into(), |v| v.to_string()),
            s.q.map_or("-".into(), |v| v.to_string()),
            s.reason
        );
    }
    let findings = errata_report(&result.records);
    let invalid = result.records.iter().filter(|r| !r.valid).count();
    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_report(&result, args.format, &mut w)?;
            w.flush().map_err(|e| Failure::usage(e.to_string()))?;
            let mut summary = json!({
                "out": path,
                "records": result.records.len(),
                "skips": result.skips.len(),
                "invalid": invalid,
            });
            if !findings.is_empty() {
                let fpath = findings_path(path);
                let file = File::create(&fpath).map_err(|e| {
                    Failure::usage(format!("cannot write {}: {e}", fpath.display()))
                })?;
                write_json(&findings, BufWriter::new(file))?;
                summary["findings"] = json!(fpath);
                summary["finding_count"] = json!(findings.len());
            }
            output::emit(&summary, pretty);
        }
        None => {
            let stdout = io::stdout();
            write_report(&result, args.format, stdout.lock())?;
            eprintln!(
                "{} records, {} skipped, {invalid} invalid, {} errata findings",
                result.records.len(),
                result.skips.len(),
                findings.len()
            );
        }
    }
    Ok(if invalid == 0 { 0 } else { EXIT_FAILURE })
}

fn cmd_means(args: &MeansArgs, pretty: bool) -> CmdResult {
    let need_n = || {
        args.n
            .ok_or_else(|| Failure::usage("this operation needs --n"))
    };
    let need_x = || {
        args.x
            .ok_or_else(|| Failure::usage("this operation needs --x"))
    };
    if args.q.is_some() && args.op != MeanOp::Prop2 {
        return Err(Failure::usage("--q applies only to prop2"));
    }
    // non-positive arguments are a usage problem here, not a numeric failure
    let pair = MeanPair::new(args.alpha, args.beta).map_err(|e| Failure::usage(e.to_string()))?;
    let mut payload = json!({"alpha": args.alpha, "beta": args.beta});
    let value = match args.op {
        MeanOp::A => json!({"op": "a", "value": arithmetic_mean(&pair)}),
        MeanOp::L => json!({"op": "l", "value": logarithmic_mean(&pair)?}),
        MeanOp::Ln => {
            let n = need_n()?;
            json!({"op": "ln", "n": n, "value": generalized_log_mean_pow(&pair, n)?})
        }
        MeanOp::Prop1 | MeanOp::Prop2 => {
            let (n, x) = (need_n()?, need_x()?);
            let rhs = match args.op {
                MeanOp::Prop1 => proposition1_bound(&pair, n, x)?,
                _ => proposition2_bound(
                    &pair,
                    n,
                    x,
                    args.q.ok_or_else(|| Failure::usage("prop2 needs --q"))?,
                )?,
            };
            let lhs = (generalized_log_mean_pow(&pair, n)? - x.powi(n)).abs();
            let op = if args.op == MeanOp::Prop1 {
                "prop1"
            } else {
                "prop2"
            };
            json!({"op": op, "n": n, "x": x, "q": args.q, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "holds": rhs >= lhs})
        }
    };
    merge(&mut payload, value);
    output::emit(&payload, pretty);
    Ok(0)
}

fn corpus_row(e: &CorpusEntry) -> Value {
    json!({
        "name": e.name,
        "expression": e.expression,
        "a": e.interval.a(),
        "b": e.interval.b(),
        "max_n": e.max_n,
        "positive": e.is_positive(),
        "integral": e.integral,
    })
}

fn cmd_corpus(args: &CorpusArgs, pretty: bool) -> CmdResult {
    let entries = match &args.file {
        Some(path) => load_corpus(path)?,
        None => corpus(),
    };
    let rows: Vec<Value> = entries.iter().map(corpus_row).collect();
    output::emit(&Value::Array(rows), pretty);
    Ok(0)
}

fn prepare_args() -> Result<Vec<String>, Failure> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::take_config_path(&mut args).map_err(Failure::usage)? {
        let entries = config::load(&path).map_err(Failure::usage)?;
        config::merge(&mut args, &entries, &Cli::command()).map_err(Failure::usage)?;
    }
    Ok(args)
}

fn run() -> CmdResult {
    let args = prepare_args()?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, cli.pretty),
        Command::Bound(a) => cmd_bound(a, cli.pretty),
        Command::Sweep(a) => cmd_sweep(a, cli.pretty),
        Command::Means(a) => cmd_means(a, cli.pretty),
        Command::Corpus(a) => cmd_corpus(a, cli.pretty),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
