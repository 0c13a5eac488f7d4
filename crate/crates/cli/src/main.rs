//! `finhyper`: evaluate finite hypergeometric sums, their p-adic analogues,
//! and run the verification suite.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finhyper::charsums::{gauss_sum, to_rational, MultChar};
use finhyper::ff::{make_field, FqElem, FqField};
use finhyper::hq::{hq_algebra_direct, hq_classic, orbit_instance, split_instance};
use finhyper::padic::{g_p_direct, g_p_via_algebra, gross_koblitz};
use finhyper::params::HGParams;
use finhyper::verify::{run_suite, CheckReport, SuiteConfig, CHECK_NAMES};
use finhyper::{arith, CycloNum, Error};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "finhyper/1";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "finhyper", version, about = "Finite and p-adic hypergeometric sums")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// Comma-separated rationals, e.g. 1/2,1/2.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Comma-separated rationals, e.g. 0,0.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
}

impl ParamArgs {
    fn parse(&self) -> Result<HGParams, Error> {
        HGParams::parse(&self.alpha, &self.beta)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraKind {
    Split,
    #[value(alias = "section3")]
    Orbit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Algebra,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Exact finite hypergeometric sum.
    Hq {
        #[command(flatten)]
        params: ParamArgs,
        /// Field size (classical sum and split algebra).
        #[arg(long, conflicts_with = "p")]
        q: Option<u64>,
        /// Prime for the orbit-algebra instance.
        #[arg(long)]
        p: Option<u64>,
        /// Argument as an integer code: base-p digits are polynomial coefficients.
        #[arg(long, conflicts_with = "all_t", required_unless_present = "all_t")]
        t: Option<u64>,
        /// Evaluate at every nonzero t.
        #[arg(long)]
        all_t: bool,
        /// Evaluate through an algebra instance instead of the classical sum.
        #[arg(long, value_enum)]
        algebra: Option<AlgebraKind>,
    },
    /// p-adic hypergeometric function.
    Gp {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        /// p-adic precision N.
        #[arg(long, env = "FHYPER_PREC", default_value_t = 8)]
        prec: u32,
        #[arg(long, value_enum, default_value = "direct")]
        route: Route,
    },
    /// Gauss sum of omega^m over F_(p^f), exact and via Gross-Koblitz.
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, env = "FHYPER_PREC", default_value_t = 8)]
        prec: u32,
    },
    /// Defect, Lambda table, stabilizer and p-orbits.
    Delta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Run verification checks.
    Verify {
        /// Check name, comma-separated list, or "all".
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 9)]
        max_q: u64,
        #[arg(long, default_value_t = 13)]
        max_p: u64,
        /// Precisions; the first is the working precision.
        #[arg(long, value_delimiter = ',')]
        prec_list: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Omit timings so output is byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Internal(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_bound() {
            Failure::Resource(e.to_string())
        } else if matches!(e, Error::InternalInconsistency(_)) {
            Failure::Internal(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        print!("{text}");
    }
}

fn prime_power(q: u64) -> Result<(u64, u32), Failure> {
    match arith::factor(q).as_slice() {
        [(p, f)] => Ok((*p, *f)),
        _ => Err(Failure::Usage(format!("{q} is not a prime power"))),
    }
}

fn field_element(field: &FqField, t: u64) -> Result<FqElem, Failure> {
    match u32::try_from(t).ok().and_then(|c| field.elem(c)) {
        Some(x) if x != field.zero() => Ok(x),
        Some(_) => Err(Error::ZeroArgument.into()),
        None => Err(Failure::Usage(format!("t = {t} is not an element code below {}", field.order()))),
    }
}

/// Express a value in the smallest of the candidate cyclotomic fields.
fn descend(v: CycloNum, candidates: &[u64]) -> CycloNum {
    for &m in candidates {
        if let Ok(Some(w)) = v.in_subfield(m) {
            return w;
        }
    }
    v
}

#[derive(Serialize)]
struct ValueOut {
    t: String,
    value: CycloNum,
    rational: Option<String>,
}

fn render_value(t: String, v: CycloNum) -> ValueOut {
    let rational = v.to_rational().map(|r| r.to_string());
    ValueOut { t, value: v, rational }
}

fn cmd_hq(json: bool, params: &ParamArgs, q: Option<u64>, p: Option<u64>, t: Option<u64>, algebra: Option<AlgebraKind>) -> CmdResult {
    let params = params.parse()?;
    let dd = params.common_denominator();
    let (field, eval): (Arc<FqField>, Box<dyn Fn(FqElem) -> Result<CycloNum, Error>>) = match algebra {
        Some(AlgebraKind::Orbit) => {
            let p = p.ok_or_else(|| Failure::Usage("--algebra orbit needs --p".into()))?;
            let inst = orbit_instance(&params, p)?;
            (inst.base().clone(), Box::new(move |t| hq_algebra_direct(&inst, t)))
        }
        kind => {
            let q = q.ok_or_else(|| Failure::Usage("--q is required unless --algebra orbit".into()))?;
            let (p, f) = prime_power(q)?;
            let field = make_field(p, f)?;
            if matches!(kind, Some(AlgebraKind::Split)) {
                let inst = split_instance(&params, &field)?;
                (field, Box::new(move |t| hq_algebra_direct(&inst, t)))
            } else {
                let (pr, fl) = (params.clone(), field.clone());
                (field, Box::new(move |t| hq_classic(&pr, &fl, t)))
            }
        }
    };
    let ts: Vec<FqElem> = match t {
        Some(t) => vec![field_element(&field, t)?],
        None => {
            let mut all: Vec<FqElem> = field.units().collect();
            all.sort();
            all
        }
    };
    let candidates = [dd, field.order() - 1];
    let mut rows = Vec::new();
    for t in ts {
        rows.push(render_value(field.format(t), descend(eval(t)?, &candidates)));
    }
    let mut text = String::new();
    for r in &rows {
        let shown = r.rational.clone().unwrap_or_else(|| r.value.to_string());
        text.push_str(&format!("H_{}({params} | {}) = {shown}\n", field.order(), r.t));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "hq",
        "alpha": params.alpha().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "beta": params.beta().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "q": field.order(),
        "values": rows,
    });
    emit(json, value, text);
    Ok(())
}

fn cmd_gp(json: bool, params: &ParamArgs, p: u64, t: i64, n: u32, route: Route) -> CmdResult {
    let params = params.parse()?;
    let direct = if route != Route::Algebra { Some(g_p_direct(&params, p, t, n)?) } else { None };
    let algebra = if route != Route::Direct { Some(g_p_via_algebra(&params, p, t, n)?) } else { None };
    let k = n as i64 - params.delta();
    let agree = match (&direct, &algebra) {
        (Some(a), Some(b)) => Some(a.congruent(b, k)),
        _ => None,
    };
    let mut text = String::new();
    for (name, v) in [("direct", &direct), ("algebra", &algebra)] {
        if let Some(v) = v {
            text.push_str(&format!("G_{p}({params} | {t}) [{name}] = {v}\n"));
        }
    }
    if let Some(a) = agree {
        text.push_str(&format!("routes agree mod {p}^{k}: {a}\n"));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "gp",
        "p": p,
        "t": t,
        "N": n,
        "delta": params.delta(),
        "direct": direct,
        "algebra": algebra,
        "agree": agree,
    });
    emit(json, value, text);
    match agree {
        Some(false) => Err(Failure::Check),
        _ => Ok(()),
    }
}

fn cmd_gauss(json: bool, p: u64, f: u32, m: i64, n: u32) -> CmdResult {
    let field = make_field(p, f)?;
    let chi = MultChar::omega(field.clone()).pow(m);
    let exact = descend(to_rational(&gauss_sum(&chi, 1)), &[chi.order() * p]);
    let gk = gross_koblitz(p, f, m, n)?;
    let text = format!(
        "g(omega^{m}) over F_{} = {exact}\nGross-Koblitz: pi^({}) * ({})\n",
        field.order(),
        gk.e,
        gk.unit
    );
    let value = json!({
        "schema": SCHEMA,
        "command": "gauss",
        "q": field.order(),
        "m": m,
        "exact": exact,
        "pi_exponent": gk.e.to_string(),
        "unit": gk.unit,
    });
    emit(json, value, text);
    Ok(())
}

fn cmd_delta(json: bool, params: &ParamArgs, p: Option<u64>) -> CmdResult {
    let params = params.parse()?;
    let mut text = format!(
        "{params}\ndelta = {}\nDelta = {}\nstabilizer = {:?}\ndefined over Q: {}\n",
        params.delta(),
        params.big_delta(),
        params.galois_stabilizer(),
        params.is_defined_over_q()
    );
    let mut value = json!({
        "schema": SCHEMA,
        "command": "delta",
        "delta": params.delta(),
        "Delta": params.big_delta(),
        "stabilizer": params.galois_stabilizer(),
        "defined_over_q": params.is_defined_over_q(),
    });
    if let Some(p) = p {
        if !arith::is_prime(p) || p == 2 {
            return Err(Error::BadPrime { p, reason: "an odd prime is required" }.into());
        }
        if params.common_denominator() % p == 0 {
            return Err(Error::BadPrime { p, reason: "p divides the common denominator" }.into());
        }
        let lambda: Vec<i64> = (0..p as i64 - 1).map(|m| params.lambda(p, m)).collect();
        text.push_str(&format!("Lambda(m), m = 0..{}: {lambda:?}\n", p - 2));
        value["p"] = json!(p);
        value["lambda"] = json!(lambda);
        match params.p_orbits(p) {
            Ok(orbits) => {
                let show = |os: &[finhyper::params::Orbit]| {
                    os.iter().map(|o| format!("{:?}", o.members.iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect::<Vec<_>>().join(" ")
                };
                text.push_str(&format!("p-orbits: alpha {} beta {}\n", show(&orbits.alpha), show(&orbits.beta)));
                value["p_orbits"] = json!(orbits);
            }
            Err(Error::DoesNotSplit { .. }) => {
                text.push_str("p-orbits: p does not permute the parameters\n");
                value["p_orbits"] = Value::Null;
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(json, value, text);
    Ok(())
}

#[derive(Serialize)]
struct ReportLine<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a CheckReport,
}

fn cmd_verify(json: bool, check: &str, max_q: u64, max_p: u64, precs: Option<Vec<u32>>, seed: u64, no_timing: bool) -> CmdResult {
    let checks: Vec<String> = if check == "all" {
        Vec::new()
    } else {
        check.split(',').map(|s| s.trim().to_string()).collect()
    };
    if let Some(bad) = checks.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
        return Err(Failure::Usage(format!("unknown check {bad:?}; expected one of {} or all", CHECK_NAMES.join(", "))));
    }
    let precs = match precs {
        Some(v) if !v.is_empty() => v,
        _ => vec![default_prec()?],
    };
    if precs.iter().any(|&n| n == 0) {
        return Err(Failure::Usage("precisions must be positive".into()));
    }
    let cfg = SuiteConfig { checks, max_q, max_p, precs, seed };
    let mut reports = run_suite(&cfg)?;
    if no_timing {
        reports = reports.into_iter().map(CheckReport::without_timing).collect();
    }
    for r in &reports {
        if json {
            println!("{}", serde_json::to_string(&ReportLine { schema: SCHEMA, report: r }).expect("serializable"));
        } else {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let timing = r.millis.map(|ms| format!(" ({ms} ms)")).unwrap_or_default();
            println!("{verdict} {} {}{timing}", r.check, r.instance);
            if let Some(w) = &r.witness {
                println!("    witness: {w}");
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if !json {
        println!("{} checks, {failed} failed", reports.len());
    }
    if failed > 0 {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn default_prec() -> Result<u32, Failure> {
    match std::env::var("FHYPER_PREC") {
        Ok(s) => s.parse().map_err(|_| Failure::Usage(format!("FHYPER_PREC={s:?} is not a precision"))),
        Err(_) => Ok(8),
    }
}

fn run(cli: Cli) -> CmdResult {
    let json = cli.json;
    match cli.cmd {
        Command::Hq { params, q, p, t, all_t: _, algebra } => cmd_hq(json, &params, q, p, t, algebra),
        Command::Gp { params, p, t, prec, route } => cmd_gp(json, &params, p, t, prec, route),
        Command::Gauss { p, f, m, prec } => cmd_gauss(json, p, f, m, prec),
        Command::Delta { params, p } => cmd_delta(json, &params, p),
        Command::Verify { check, max_q, max_p, prec_list, seed, no_timing } => {
            cmd_verify(json, &check, max_q, max_p, prec_list, seed, no_timing)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
