//! Command-line front end. `run` is the whole program minus the process
//! exit, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 internal or numerical failure (or a failed
//! check), 2 out-of-scope input, 64 malformed input or usage.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checks::{run_suite, CheckConfig};
use crate::coleman::ColemanContext;
use crate::curve::{CurvePoint, Divisor, HyperellipticCurve, ThirdKindForm};
use crate::error::{Error, Result};
use crate::heights::{global_height, validate_character, HeightJson, IdeleCharacter};
use crate::padic::{LogBranch, PadicJson, PadicNumber};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::rigidcoh::{unit_root_subspace, within_weil_bounds, FrobeniusData, Subspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SCOPE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "coleman-gross", version, about = "p-adic heights on odd-degree hyperelliptic curves over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coleman-Gross height pairing h(D1, D2).
    Height(HeightArgs),
    /// Frobenius matrix on H^1_dR and its characteristic polynomial.
    Frobenius(FrobeniusArgs),
    /// Coleman integral of a differential between two points.
    Integrate(IntegrateArgs),
    /// Randomised self-check suite.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// f(x) with y^2 = f(x), e.g. "x^3 - x + 1".
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    /// Requested absolute p-adic precision.
    #[arg(long, default_value_t = 10)]
    prec: i64,
}

impl CurveArgs {
    fn resolve(&self) -> Result<(HyperellipticCurve, u64)> {
        let curve = self.curve.as_deref().ok_or_else(|| Error::Parse("--curve is required".into()))?;
        let p = self.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
        Ok((HyperellipticCurve::parse(curve)?, p))
    }
}

#[derive(Args, Debug)]
struct HeightArgs {
    /// JSON job file ("-" for stdin); replaces the other flags.
    #[arg(long)]
    job: Option<String>,
    #[command(flatten)]
    curve: CurveArgs,
    /// Divisor as JSON: [{"point": {"x": "1", "y": "1"}, "mult": 1}, ...].
    #[arg(long = "divisor-y")]
    divisor_y: Option<String>,
    #[arg(long = "divisor-z")]
    divisor_z: Option<String>,
    /// "unit-root" or a JSON list of g basis vectors of rationals.
    #[arg(long, default_value = "unit-root")]
    w: String,
    /// Scale of the character at p, a rational p-adic unit or integer.
    #[arg(long, default_value = "1")]
    t: String,
    /// Value of log(p) fixing the branch; 0 is the Iwasawa branch.
    #[arg(long, default_value = "0")]
    branch: String,
    /// Away component override q=value, with value a rational.
    #[arg(long = "override", value_name = "Q=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct FrobeniusArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Start point: JSON, "x,y" or "infinity".
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// Index i of the basis form x^i dx/2y.
    #[arg(long, conflicts_with = "form")]
    basis: Option<usize>,
    /// JSON form {"odd": ["c0", ...], "residue_divisor": [...]}.
    #[arg(long)]
    form: Option<String>,
    #[arg(long, default_value = "0")]
    branch: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// reciprocity, symmetry, principal-vanishing, weil or axioms.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 10)]
    prec: i64,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long)]
    json: bool,
}

/// Character part of a height job. Override values are rationals or
/// serialised p-adic numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    #[serde(default = "one")]
    pub t: String,
    #[serde(default = "zero")]
    pub branch: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, Value>,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

impl Default for CharacterSpec {
    fn default() -> Self {
        CharacterSpec { t: one(), branch: zero(), overrides: BTreeMap::new() }
    }
}

/// A complete height computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeightJob {
    pub curve: String,
    pub p: u64,
    pub precision: i64,
    pub divisor_y: Value,
    pub divisor_z: Value,
    #[serde(rename = "W", default = "unit_root")]
    pub w: Value,
    #[serde(default)]
    pub character: CharacterSpec,
}

fn unit_root() -> Value {
    Value::String("unit-root".into())
}

/// Output of `height --json`: the normalised job and its result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightOutput {
    pub job: HeightJob,
    pub height: HeightJson,
}

impl HeightJob {
    /// Rewrites every field in canonical form so that equal jobs serialise
    /// identically.
    pub fn normalized(&self) -> Result<HeightJob> {
        let curve = HyperellipticCurve::parse(&self.curve)?;
        let mut job = self.clone();
        job.curve = curve.f().to_string();
        job.divisor_y = Divisor::from_json(&self.divisor_y)?.to_json();
        job.divisor_z = Divisor::from_json(&self.divisor_z)?.to_json();
        job.character.t = format_rational(&parse_rational(&self.character.t)?);
        job.character.branch = format_rational(&parse_rational(&self.character.branch)?);
        Ok(job)
    }

    pub fn run(&self) -> Result<HeightOutput> {
        let job = self.normalized()?;
        let curve = HyperellipticCurve::parse(&job.curve)?;
        let p = job.p;
        let fd = FrobeniusData::new(&curve, p, job.precision)?;
        let nw = fd.working_precision();
        let branch = branch_from(&job.character.branch, p, nw)?;
        let chi = character_from(&job.character, p, nw, branch)?;
        validate_character(&chi)?;
        let w = subspace_from(&job.w, &fd)?;
        let ctx = ColemanContext::new(fd, branch)?;
        let y = Divisor::from_json(&job.divisor_y)?;
        let z = Divisor::from_json(&job.divisor_z)?;
        for pt in y.support().chain(z.support()) {
            curve.check_point(pt)?;
        }
        let h = global_height(&y, &z, &w, &chi, &ctx)?;
        Ok(HeightOutput { job, height: h.to_json() })
    }
}

fn padic_from_rational(s: &str, p: u64, prec: i64) -> Result<PadicNumber> {
    Ok(PadicNumber::from_rational(p, &parse_rational(s)?, prec))
}

fn branch_from(s: &str, p: u64, prec: i64) -> Result<LogBranch> {
    Ok(LogBranch::new(padic_from_rational(s, p, prec)?))
}

fn character_from(spec: &CharacterSpec, p: u64, prec: i64, branch: LogBranch) -> Result<IdeleCharacter> {
    let mut chi = IdeleCharacter::canonical(p, prec);
    chi.t = padic_from_rational(&spec.t, p, prec)?;
    chi.branch = branch;
    for (q, v) in &spec.overrides {
        let q: u64 = q.parse().map_err(|_| Error::Parse(format!("override key {q:?} is not a prime")))?;
        let value = match v {
            Value::String(s) => padic_from_rational(s, p, prec)?,
            other => serde_json::from_value::<PadicJson>(other.clone())
                .map_err(|e| Error::Parse(format!("override for {q}: {e}")))?
                .to_padic(p)?,
        };
        chi.away_values.insert(q, value);
    }
    Ok(chi)
}

fn subspace_from(v: &Value, fd: &FrobeniusData) -> Result<Subspace> {
    match v {
        Value::String(s) if s == "unit-root" => unit_root_subspace(fd),
        Value::Array(rows) => {
            let mut basis = Vec::new();
            for row in rows {
                let row = row.as_array().ok_or_else(|| Error::Parse("W rows must be lists".into()))?;
                let parsed: Result<Vec<Rational>> = row
                    .iter()
                    .map(|c| match c {
                        Value::String(s) => parse_rational(s),
                        Value::Number(n) => parse_rational(&n.to_string()),
                        _ => Err(Error::Parse(format!("bad W entry {c}"))),
                    })
                    .collect();
                basis.push(parsed?);
            }
            let g = fd.genus();
            if basis.len() != g || basis.iter().any(|r| r.len() != 2 * g) {
                return Err(Error::Parse(format!("W needs {g} vectors of length {}", 2 * g)));
            }
            let w = Subspace::from_rational(&basis, fd.p(), fd.working_precision());
            if !w.is_complementary() {
                return Err(Error::DegenerateInput("W is not complementary to the holomorphic forms".into()));
            }
            Ok(w)
        }
        other => Err(Error::Parse(format!("W must be \"unit-root\" or a list of vectors, got {other}"))),
    }
}

/// Parses a point as JSON, `x,y` or `infinity`.
pub fn parse_point(s: &str) -> Result<CurvePoint> {
    let t = s.trim();
    if t == "infinity" || t == "inf" {
        return Ok(CurvePoint::Infinity);
    }
    if let Ok(v) = serde_json::from_str::<Value>(t) {
        if v.is_object() || v.is_string() {
            return CurvePoint::from_json(&v);
        }
    }
    let (x, y) = t.split_once(',').ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
    Ok(CurvePoint::Affine { x: parse_rational(x.trim())?, y: parse_rational(y.trim())? })
}

fn parse_json(s: &str, what: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable value")
}

fn read_job(path: &str) -> Result<HeightJob> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("job: {e}")))
}

fn height(args: &HeightArgs, out: &mut dyn Write) -> Result<()> {
    let job = match &args.job {
        Some(path) => read_job(path)?,
        None => {
            let (curve, p) = args.curve.resolve()?;
            let need = |d: &Option<String>, flag: &str| -> Result<Value> {
                parse_json(d.as_deref().ok_or_else(|| Error::Parse(format!("{flag} is required")))?, flag)
            };
            let mut overrides = BTreeMap::new();
            for o in &args.overrides {
                let (q, v) = o.split_once('=').ok_or_else(|| Error::Parse(format!("bad override {o:?}")))?;
                overrides.insert(q.trim().to_string(), Value::String(v.trim().to_string()));
            }
            HeightJob {
                curve: curve.f().to_string(),
                p,
                precision: args.curve.prec,
                divisor_y: need(&args.divisor_y, "--divisor-y")?,
                divisor_z: need(&args.divisor_z, "--divisor-z")?,
                w: if args.w == "unit-root" { unit_root() } else { parse_json(&args.w, "--w")? },
                character: CharacterSpec { t: args.t.clone(), branch: args.branch.clone(), overrides },
            }
        }
    };
    let res = job.run()?;
    if args.json {
        writeln!(out, "{}", to_json_string(&res)).ok();
    } else {
        let h = &res.height;
        writeln!(out, "curve: y^2 = {}   p = {}", res.job.curve, res.job.p).ok();
        for (q, v) in &h.local_terms {
            writeln!(out, "h_{q:<6} = {}", v.digits).ok();
        }
        writeln!(out, "h        = {}", h.total.digits).ok();
        let pr = &h.precision_report;
        writeln!(
            out,
            "precision: requested {}, working {}, frobenius loss {}, achieved {}",
            pr.requested, pr.working, pr.frobenius_loss, pr.achieved
        )
        .ok();
    }
    Ok(())
}

/// Output of `frobenius --json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusOutput {
    pub curve: String,
    pub p: u64,
    pub precision: i64,
    pub working_precision: i64,
    pub loss: i64,
    /// Row i holds the coordinates of Frobenius applied to x^i dx/2y.
    pub matrix: Vec<Vec<PadicJson>>,
    /// Integer characteristic polynomial, constant term first.
    pub char_poly: Vec<String>,
    pub weil_bounds: bool,
    pub ordinary: bool,
}

fn frobenius(args: &FrobeniusArgs, out: &mut dyn Write) -> Result<()> {
    let (curve, p) = args.curve.resolve()?;
    let fd = FrobeniusData::new(&curve, p, args.curve.prec)?;
    let m = fd.matrix();
    let n = 2 * fd.genus();
    let chi = fd.char_poly_integers()?;
    let res = FrobeniusOutput {
        curve: curve.f().to_string(),
        p,
        precision: fd.precision(),
        working_precision: fd.working_precision(),
        loss: fd.loss(),
        matrix: (0..n).map(|i| (0..n).map(|j| PadicJson::from(&m[i][j])).collect()).collect(),
        char_poly: chi.iter().map(|c| c.to_string()).collect(),
        weil_bounds: within_weil_bounds(&chi, p),
        ordinary: unit_root_subspace(&fd).is_ok(),
    };
    if args.json {
        writeln!(out, "{}", to_json_string(&res)).ok();
    } else {
        writeln!(out, "curve: y^2 = {}   p = {}   precision {} (working {}, loss {})", res.curve, p, res.precision, res.working_precision, res.loss).ok();
        for row in &res.matrix {
            let cells: Vec<&str> = row.iter().map(|c| c.digits.as_str()).collect();
            writeln!(out, "  [{}]", cells.join(", ")).ok();
        }
        writeln!(out, "char poly (ascending): {}", res.char_poly.join(" ")).ok();
        writeln!(out, "weil bounds: {}   ordinary: {}", res.weil_bounds, res.ordinary).ok();
    }
    Ok(())
}

/// JSON shape accepted by `integrate --form`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormSpec {
    #[serde(default)]
    odd: Vec<Value>,
    #[serde(default)]
    residue_divisor: Option<Value>,
}

/// Output of `integrate --json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralOutput {
    pub curve: String,
    pub p: u64,
    pub from: Value,
    pub to: Value,
    pub value: PadicJson,
}

fn form_from(args: &IntegrateArgs, curve: &HyperellipticCurve) -> Result<ThirdKindForm<Rational>> {
    let g = curve.genus();
    let zero = Rational::from_integer(0.into());
    if let Some(i) = args.basis {
        if i >= 2 * g {
            return Err(Error::Parse(format!("basis index {i} out of range 0..{}", 2 * g)));
        }
        return Ok(ThirdKindForm::basis(g, i, zero));
    }
    let text = args.form.as_deref().ok_or_else(|| Error::Parse("--basis or --form is required".into()))?;
    let spec: FormSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("--form: {e}")))?;
    let odd: Result<Vec<Rational>> = spec
        .odd
        .iter()
        .map(|c| match c {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            _ => Err(Error::Parse(format!("bad coefficient {c}"))),
        })
        .collect();
    let mut w = ThirdKindForm::holomorphic(g, odd?, zero);
    if let Some(d) = spec.residue_divisor {
        w = w.add(&curve.third_kind_with_residue(&Divisor::from_json(&d)?)?);
    }
    Ok(w)
}

fn integrate(args: &IntegrateArgs, out: &mut dyn Write) -> Result<()> {
    let (curve, p) = args.curve.resolve()?;
    let w = form_from(args, &curve)?;
    let (a, b) = (parse_point(&args.from)?, parse_point(&args.to)?);
    curve.check_point(&a)?;
    curve.check_point(&b)?;
    let fd = FrobeniusData::new(&curve, p, args.curve.prec)?;
    let nw = fd.working_precision();
    let ctx = ColemanContext::new(fd, branch_from(&args.branch, p, nw)?)?;
    let v = ctx.coleman_integral(&w.to_padic(p, nw), &a, &b)?;
    let res = IntegralOutput { curve: curve.f().to_string(), p, from: a.to_json(), to: b.to_json(), value: PadicJson::from(&v) };
    if args.json {
        writeln!(out, "{}", to_json_string(&res)).ok();
    } else {
        writeln!(out, "integral from {a} to {b} = {}", res.value.digits).ok();
    }
    Ok(())
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = CheckConfig { seed: args.seed, p: args.p, precision: args.prec, instances: args.instances };
    let report = run_suite(&args.suite, &cfg)?;
    if args.json {
        writeln!(out, "{}", to_json_string(&report)).ok();
    } else {
        for i in &report.instances {
            let tag = if i.passed { "ok  " } else { "FAIL" };
            writeln!(out, "{tag} {} (residual valuation {} >= {})", i.label, i.residual_valuation, i.threshold).ok();
        }
        for s in &report.skipped {
            writeln!(out, "skip {s}").ok();
        }
        let passed = report.instances.iter().filter(|i| i.passed).count();
        writeln!(out, "{}: {passed}/{} passed", report.suite, report.instances.len()).ok();
    }
    Ok(report.passed)
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        e if e.is_scope() => EXIT_SCOPE,
        _ => EXIT_FAILURE,
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                write!(out, "{text}").ok();
            } else {
                write!(err, "{text}").ok();
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Height(a) => height(a, out).map(|()| true),
        Command::Frobenius(a) => frobenius(a, out).map(|()| true),
        Command::Integrate(a) => integrate(a, out).map(|()| true),
        Command::Check(a) => check(a, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let report = serde_json::json!({"error": e.kind(), "message": e.to_string()});
            writeln!(err, "{report}").ok();
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("coleman-gross").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn points_parse_in_three_spellings() {
        let want = CurvePoint::Affine { x: parse_rational("1/4").unwrap(), y: parse_rational("-3").unwrap() };
        assert_eq!(parse_point("1/4, -3").unwrap(), want);
        assert_eq!(parse_point(r#"{"x": "1/4", "y": "-3"}"#).unwrap(), want);
        assert_eq!(parse_point("infinity").unwrap(), CurvePoint::Infinity);
        assert!(parse_point("1/4").is_err());
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_str(&["height", "--p", "7"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["check", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bad_reduction_is_out_of_scope() {
        // disc(x^3 - x + 1) = -23
        let (code, _, err) = run_str(&["frobenius", "--curve", "x^3 - x + 1", "--p", "23", "--prec", "4"]);
        assert_eq!(code, EXIT_SCOPE, "{err}");
        assert!(err.contains("BadReduction"));
    }

    #[test]
    fn integrate_exact_form() {
        // ∫ d(xy) from (1, 1) to (3, 5) on y^2 = x^3 - x + 1 is 14
        let form = r#"{"odd": ["2", "-3", "0", "5"]}"#;
        let (code, out, err) = run_str(&[
            "integrate", "--curve", "x^3 - x + 1", "--p", "7", "--prec", "6", "--from", "1,1", "--to", "3,5", "--form", form, "--json",
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let v: IntegralOutput = serde_json::from_str(&out).unwrap();
        let got = v.value.to_padic(7).unwrap();
        assert!((got - PadicNumber::from_int(7, 14, 20)).valuation() >= 5);
    }
}
