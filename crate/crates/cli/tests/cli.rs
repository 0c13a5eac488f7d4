use std::f64::consts::TAU;
use std::process::{Command, Output};

use finhyper::CycloNum;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finhyper")).args(args).env_remove("FHYPER_PREC").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

/// The defining sum over `F_p` in floating point: Gauss sums from
/// `omega(g) = exp(2 pi i/(p-1))` with `g` the smallest primitive root.
fn hq_float(alpha: &[(i64, i64)], beta: &[(i64, i64)], p: i64, t: i64) -> (f64, f64) {
    let qm1 = p - 1;
    let g = (2..p).find(|&g| (1..qm1).all(|e| (0..e).fold(1, |x, _| x * g % p) != 1)).unwrap();
    let mut log = vec![0i64; p as usize];
    let mut x = 1;
    for e in 0..qm1 {
        log[x as usize] = e;
        x = x * g % p;
    }
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    let gauss = |j: i64| {
        (1..p).fold((0.0, 0.0), |acc, x| {
            let ang = TAU * ((j * log[x as usize]) as f64 / qm1 as f64 + x as f64 / p as f64);
            (acc.0 + ang.cos(), acc.1 + ang.sin())
        })
    };
    let d = alpha.len() as i64;
    let arg = (if d % 2 == 0 { t } else { -t }).rem_euclid(p);
    let mut total = (0.0, 0.0);
    for m in 0..qm1 {
        let mut term = (1.0, 0.0);
        for (&(an, ad), &(bn, bd)) in alpha.iter().zip(beta) {
            let a = an * qm1 / ad;
            let b = bn * qm1 / bd;
            term = cmul(term, cdiv(cmul(gauss(m + a), gauss(-m - b)), cmul(gauss(a), gauss(-b))));
        }
        let ang = TAU * (m * log[arg as usize]) as f64 / qm1 as f64;
        let z = cmul(term, (ang.cos(), ang.sin()));
        total = (total.0 + z.0, total.1 + z.1);
    }
    (total.0 / (1 - p) as f64, total.1 / (1 - p) as f64)
}

#[test]
fn hq_example_prints_a_fraction() {
    let out = run(&["hq", "--alpha", "1/2,1/2", "--beta", "0,0", "--q", "13", "--t", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let shown = text.trim().rsplit(" = ").next().unwrap();
    let (re, im) = hq_float(&[(1, 2), (1, 2)], &[(0, 1), (0, 1)], 13, 2);
    assert!(im.abs() < 1e-9);
    assert_eq!(shown, format!("{}", re.round() as i64));
    assert!((re - re.round()).abs() < 1e-9);
}

#[test]
fn hq_all_t_matches_float_oracle_off_q() {
    let v = json(&["hq", "--alpha", "1/4,1/2", "--beta", "0,1/3", "--q", "13", "--all-t"]);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 12);
    for row in values {
        let t: i64 = row["t"].as_str().unwrap().parse().unwrap();
        let c: CycloNum = serde_json::from_value(row["value"].clone()).unwrap();
        let z = c.to_complex::<f64>();
        let (re, im) = hq_float(&[(1, 4), (1, 2)], &[(0, 1), (1, 3)], 13, t);
        assert!((z.re - re).abs() < 1e-9 && (z.im - im).abs() < 1e-9, "t={t}: {z} vs {re}+{im}i");
    }
}

#[test]
fn json_values_round_trip() {
    let v = json(&["hq", "--alpha", "1/5,4/5", "--beta", "0,0", "--p", "11", "--algebra", "section3", "--all-t"]);
    assert_eq!(v["schema"], "finhyper/1");
    for row in v["values"].as_array().unwrap() {
        let c: CycloNum = serde_json::from_value(row["value"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&c).unwrap(), row["value"]);
    }
}

#[test]
fn gp_routes_agree() {
    let args = ["gp", "--alpha", "1/5,2/5,3/5,4/5", "--beta", "0,0,0,0", "--p", "7", "--t", "1", "--prec", "6", "--route", "both"];
    let out = run(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    let expansions: Vec<&str> = text.lines().filter(|l| l.contains("] = ")).map(|l| l.rsplit("] = ").next().unwrap()).collect();
    assert_eq!(expansions.len(), 2);
    assert_eq!(expansions[0], expansions[1]);
    let v = json(&args);
    assert_eq!(v["agree"], true);
    assert_eq!(v["direct"], v["algebra"]);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_finhyper"))
        .args(["--json", "gp", "--alpha", "1/2", "--beta", "0", "--p", "5", "--t", "2"])
        .env("FHYPER_PREC", "5")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], 5);
}

#[test]
fn verify_example_passes_and_is_deterministic() {
    let out = run(&["verify", "--check", "all", "--max-q", "9", "--prec-list", "6,8", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let args = ["--json", "verify", "--max-q", "9", "--prec-list", "6,8", "--seed", "3", "--no-timing"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], "finhyper/1");
        assert_eq!(v["verdict"], "pass");
        assert!(v.get("millis").is_none());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hq", "--alpha", "1/2", "--beta", "1/2", "--q", "5", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["hq", "--alpha", "1/2", "--beta", "0", "--q", "12", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["hq", "--alpha", "1/2", "--beta", "0", "--q", "5", "--t", "1", "--all-t"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--check", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["gp", "--alpha", "1/2", "--beta", "0", "--p", "2", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["hq", "--alpha", "1/2", "--beta", "0", "--q", "1000003", "--t", "1"]).status.code(), Some(3));
}

#[test]
fn delta_and_gauss_render() {
    let v = json(&["delta", "--alpha", "1/4,1/2", "--beta", "0,1/3", "--p", "13"]);
    assert_eq!(v["delta"], 0);
    assert_eq!(v["Delta"], 1);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 12);
    let g = json(&["gauss", "--p", "5", "--f", "1", "--m", "2", "--prec", "4"]);
    // omega^2 is the quadratic character of F_5; its Gauss sum is sqrt(5).
    let c: CycloNum = serde_json::from_value(g["exact"].clone()).unwrap();
    let z = c.to_complex::<f64>();
    assert!((z.re - 5f64.sqrt()).abs() < 1e-9 && z.im.abs() < 1e-9);
    assert_eq!(g["pi_exponent"], "2");
}
