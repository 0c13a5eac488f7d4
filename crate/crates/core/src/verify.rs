//! Executable checks. Each check evaluates two independent sides of an
//! identity on explicit instances and returns a [`CheckReport`]; a failed
//! identity is a verdict, not an error.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::units_mod;
use crate::charsums::{expected_norm_exponent, gauss_norm_exponent, AlgebraChar, SemisimpleAlgebra};
use crate::error::{Error, Result};
use crate::ff::{make_field, make_field_with, FqField, GeneratorChoice, DEFAULT_MAX_FIELD};
use crate::hq::{
    hq_algebra_direct_all, hq_algebra_fourier_all, hq_classic_all, orbit_instance, split_instance,
    HGAlgebraInstance,
};
use crate::padic::{embed_value, g_p_direct, g_p_via_algebra, PadicNum};
use crate::params::{HGParams, Rat};
use crate::CycloNum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckReport {
    fn new(check: &str, instance: String, start: Instant, failure: Option<String>) -> Self {
        CheckReport {
            check: check.to_string(),
            instance,
            verdict: if failure.is_none() { Verdict::Pass } else { Verdict::Fail },
            witness: failure,
            millis: Some(start.elapsed().as_millis() as u64),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn without_timing(mut self) -> Self {
        self.millis = None;
        self
    }
}

/// Short description of an algebra instance.
pub fn describe(inst: &HGAlgebraInstance) -> String {
    let side = |chi: &AlgebraChar| {
        let degs: Vec<u32> = chi.algebra().components().iter().map(|c| c.degree()).collect();
        format!("degrees {:?} exponents {:?}", degs, chi.exponents())
    };
    format!("q={} A: {}; B: {}; a={}", inst.base().order(), side(inst.chi_a()), side(inst.chi_b()), inst.twist())
}

fn first_mismatch<T: PartialEq + std::fmt::Display>(
    left: &[(crate::ff::FqElem, T)],
    right: &[(crate::ff::FqElem, T)],
    field: &FqField,
) -> Option<String> {
    left.iter().zip(right).find(|((_, a), (_, b))| a != b).map(|((t, a), (_, b))| {
        format!("t={}: {} != {}", field.format(*t), a, b)
    })
}

/// Direct double sum against the Fourier expansion, for every `t`.
pub fn check_fourier(inst: &HGAlgebraInstance) -> Result<CheckReport> {
    let start = Instant::now();
    let direct = hq_algebra_direct_all(inst)?;
    let fourier = hq_algebra_fourier_all(inst)?;
    let failure = first_mismatch(&direct, &fourier, inst.base());
    Ok(CheckReport::new("fourier", describe(inst), start, failure))
}

/// The split instance `F_q^d` reproduces the classical sum for every `t`.
pub fn check_example_recovery(params: &HGParams, field: &Arc<FqField>) -> Result<CheckReport> {
    let start = Instant::now();
    let inst = split_instance(params, field)?;
    let classic = hq_classic_all(params, field)?;
    let failure = first_mismatch(&hq_algebra_direct_all(&inst)?, &classic, field)
        .map(|w| format!("direct: {w}"))
        .or_else(|| first_mismatch(&hq_algebra_fourier_all(&inst).ok()?, &classic, field).map(|w| format!("fourier: {w}")));
    Ok(CheckReport::new("example_recovery", format!("{params} q={}", field.order()), start, failure))
}

/// `g_A conj(g_A) = q^f` with `f` the degree carried by nontrivial characters.
pub fn check_gauss_norm(chi: &AlgebraChar) -> Result<CheckReport> {
    let start = Instant::now();
    let expected = expected_norm_exponent(chi);
    let failure = match gauss_norm_exponent(chi) {
        Ok(f) if f == expected => None,
        Ok(f) => Some(format!("exponent {f}, expected {expected}")),
        Err(Error::InternalInconsistency(w)) => Some(w),
        Err(e) => return Err(e),
    };
    let degs: Vec<u32> = chi.algebra().components().iter().map(|c| c.degree()).collect();
    let instance = format!("q={} degrees {:?} exponents {:?}", chi.algebra().base().order(), degs, chi.exponents());
    Ok(CheckReport::new("gauss_norm", instance, start, failure))
}

/// Every twist `zeta_p -> zeta_p^a` leaves all values unchanged.
pub fn check_zeta_p_independence(inst: &HGAlgebraInstance) -> Result<CheckReport> {
    if !inst.is_equidimensional() {
        return Err(Error::NotEquidimensional { dim_a: inst.algebra_a().dimension(), dim_b: inst.algebra_b().dimension() });
    }
    let start = Instant::now();
    let p = inst.base().characteristic();
    let reference = hq_algebra_direct_all(inst)?;
    let mut failure = None;
    for a in 2..p {
        let other = hq_algebra_direct_all(&inst.with_twist(a)?)?;
        if let Some(w) = first_mismatch(&reference, &other, inst.base()) {
            failure = Some(format!("a={a}: {w}"));
            break;
        }
    }
    Ok(CheckReport::new("zeta_p_independence", describe(inst), start, failure))
}

/// Recompute the classical sum with the second smallest generator
/// `g' = g^k` of `F_q^x`. This replaces every exponent by `k` times itself,
/// so the values must move by `sigma_k` acting on `zeta_(q-1)` (fixing
/// `zeta_p`), and stay unchanged when `k` stabilizes the parameters, in
/// particular for every set defined over Q. Needs `q > 3`.
pub fn check_omega_independence(params: &HGParams, p: u64, f: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let first = make_field(p, f)?;
    let second = make_field_with(p, f, GeneratorChoice::Lex(1), DEFAULT_MAX_FIELD)?;
    let qm1 = first.order() - 1;
    let k = first.dlog(second.generator())?;
    let mut a = hq_classic_all(params, &first)?;
    let mut b = hq_classic_all(params, &second)?;
    // Both lists are indexed by powers of different generators; align by element.
    a.sort_by_key(|(t, _)| *t);
    b.sort_by_key(|(t, _)| *t);
    // sigma_k on Q(zeta_((q-1)p)): k mod q-1 and 1 mod p.
    let n = qm1 * p;
    let kk = (0..p).map(|j| k + j * qm1).find(|x| x % p == 1).expect("q-1 is a unit mod p") % n;
    let moved: Vec<_> = a.iter().map(|(t, v)| Ok((*t, v.galois(kk as i64)?))).collect::<Result<_>>()?;
    let fixed = params.common_denominator() == 1 || params.galois_stabilizer().contains(&(k % params.common_denominator()));
    let failure = first_mismatch(&moved, &b, &first)
        .map(|w| format!("sigma_{k}: {w}"))
        .or_else(|| if fixed { first_mismatch(&a, &b, &first).map(|w| format!("unchanged: {w}")) } else { None });
    let instance = format!(
        "{params} q={} generators {} and {} = g^{k}{}",
        first.order(),
        first.format(first.generator()),
        second.format(second.generator()),
        if fixed { " (stabilizing)" } else { "" }
    );
    Ok(CheckReport::new("omega_independence", instance, start, failure))
}

/// Galois behaviour of the orbit-algebra values.
///
/// Values are brought down to `Q(zeta_D)` (which must succeed). For every
/// unit `k` mod `D`, `sigma_k` applied to the values must equal the values
/// of the instance with characters raised to the `k`-th power. Elements of
/// the stabilizer must fix every value; when `K != Q` every other `k` must
/// move at least one value.
pub fn check_fixed_field(params: &HGParams, p: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let inst = orbit_instance(params, p)?;
    let dd = params.common_denominator();
    let stabilizer = params.galois_stabilizer();
    let instance = format!("{params} p={p} H={stabilizer:?}");
    let descend = |inst: &HGAlgebraInstance| -> Result<std::result::Result<Vec<CycloNum>, String>> {
        let mut out = Vec::new();
        for (t, v) in hq_algebra_direct_all(inst)? {
            match v.in_subfield(dd)? {
                Some(w) => out.push(w),
                None => return Ok(Err(format!("value at t={} is not in Q(zeta_{dd}): {v}", inst.base().format(t)))),
            }
        }
        Ok(Ok(out))
    };
    let values = match descend(&inst)? {
        Ok(v) => v,
        Err(w) => return Ok(CheckReport::new("fixed_field", instance, start, Some(w))),
    };
    let mut failure = None;
    for k in units_mod(dd) {
        let moved: Vec<CycloNum> = values.iter().map(|v| v.galois(k as i64)).collect::<Result<_>>()?;
        let conj = match descend(&inst.pow(k as i64))? {
            Ok(v) => v,
            Err(w) => {
                failure = Some(format!("k={k}: {w}"));
                break;
            }
        };
        if let Some(j) = (0..values.len()).find(|&j| moved[j] != conj[j]) {
            failure = Some(format!("k={k}, t=g^{j}: sigma_k(H) = {} but H(chi^k) = {}", moved[j], conj[j]));
            break;
        }
        let fixed = moved == values;
        if stabilizer.contains(&k) && !fixed {
            failure = Some(format!("stabilizer element k={k} moves a value"));
            break;
        }
        if !stabilizer.contains(&k) && fixed {
            failure = Some(format!("k={k} lies outside the stabilizer but fixes every value"));
            break;
        }
    }
    if failure.is_none() && params.is_defined_over_q() {
        if let Some(v) = values.iter().find(|v| v.to_rational().is_none()) {
            failure = Some(format!("parameters are defined over Q but {v} is not rational"));
        }
    }
    Ok(CheckReport::new("fixed_field", instance, start, failure))
}

/// `G_p` against an independent evaluation, modulo `p^(N - delta)`: the
/// Teichmüller image of the exact classical sum when `(p-1)` clears every
/// denominator, otherwise the orbit-algebra Gross-Koblitz route.
pub fn check_gp_equals_hp(params: &HGParams, p: u64, n: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let k = n as i64 - params.delta();
    let mut failure = None;
    let route;
    if params.satisfies_division_assumption(p) {
        route = "teichmuller image of H_p";
        let field = make_field(p, 1)?;
        for (t, h) in hq_classic_all(params, &field)? {
            let h = h
                .in_subfield(p - 1)?
                .ok_or_else(|| Error::InternalInconsistency(format!("H_p value {h} is not in Q(zeta_(p-1))")))?;
            // Coefficients may carry powers of p in their denominators even
            // when the embedded value is integral; embed with headroom.
            let left = embed_value(&h, p, n + denominator_valuation(&h, p))?;
            let right = g_p_direct(params, p, t.code() as i64, n)?;
            if !left.congruent(&right, k) {
                failure = Some(format!("t={}: {left} vs {right}", t.code()));
                break;
            }
        }
    } else {
        route = "orbit algebra via Gross-Koblitz";
        for t in 1..p as i64 {
            let left = g_p_via_algebra(params, p, t, n)?;
            let right = g_p_direct(params, p, t, n)?;
            if !left.congruent(&right, k) {
                failure = Some(format!("t={t}: {left} vs {right}"));
                break;
            }
        }
    }
    Ok(CheckReport::new("gp_equals_hp", format!("{params} p={p} N={n} ({route})"), start, failure))
}

/// Largest power of `p` dividing a coefficient denominator.
fn denominator_valuation(v: &CycloNum, p: u64) -> u32 {
    let p = BigInt::from(p);
    v.coeffs()
        .iter()
        .map(|c| {
            let (mut d, mut e) = (c.denom().clone(), 0);
            while (&d % &p).is_zero() {
                d /= &p;
                e += 1;
            }
            e
        })
        .max()
        .unwrap_or(0)
}

/// `v(G_p) >= -delta` for every `t`, and `Lambda(m)` integral with both of
/// its forms agreeing for every `m`.
pub fn check_integrality_delta(params: &HGParams, p: u64, n: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let delta = params.delta();
    let mut failure = None;
    for m in 0..p as i64 - 1 {
        let frac_form = params.lambda_fractional(p, m);
        if !frac_form.is_integer() || frac_form.to_integer() != params.lambda(p, m) {
            failure = Some(format!("Lambda({m}): floor form {} vs {frac_form}", params.lambda(p, m)));
            break;
        }
        if -params.lambda(p, m) > delta {
            failure = Some(format!("-Lambda({m}) = {} exceeds delta = {delta}", -params.lambda(p, m)));
            break;
        }
    }
    if failure.is_none() {
        for t in 1..p as i64 {
            let v = g_p_direct(params, p, t, n)?;
            if !v.is_zero() && v.valuation() < -delta {
                failure = Some(format!("t={t}: valuation {} < -{delta}", v.valuation()));
                break;
            }
        }
    }
    Ok(CheckReport::new("integrality_delta", format!("{params} p={p} N={n} delta={delta}"), start, failure))
}

/// Coefficients of `prod_k (X - p^Delta G_p(k alpha, k beta | t))` over
/// coset representatives `k` of the stabilizer, lowest degree first.
pub fn conjugate_polynomial(params: &HGParams, p: u64, t: i64, n: u32) -> Result<Vec<PadicNum>> {
    if !params.splits_in_k(p) {
        return Err(Error::DoesNotSplit { p });
    }
    let scale = PadicNum::from_int(p, p as i64, n)?.pow(params.big_delta())?;
    let mut poly = vec![PadicNum::one(p, n)?];
    for k in params.coset_representatives() {
        let c = g_p_direct(&params.conjugate(k as i64)?, p, t, n)?.mul(&scale);
        let mut next = vec![PadicNum::zero(p); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(&c));
        }
        poly = next;
    }
    Ok(poly)
}

/// Centered lifts of the conjugate polynomial's coefficients at working
/// precision `min(N, absolute precision)`.
pub fn conjugate_polynomial_lifts(params: &HGParams, p: u64, t: i64, n: u32) -> Result<std::result::Result<Vec<BigInt>, String>> {
    let poly = conjugate_polynomial(params, p, t, n)?;
    let prec = poly.iter().map(|c| c.absolute_precision()).min().unwrap().min(n as i64);
    if prec <= 0 {
        return Ok(Err(format!("no integral precision left at N={n}")));
    }
    let mut lifts = Vec::new();
    for (i, c) in poly.iter().enumerate() {
        match c.centered_lift(prec as u32) {
            Some(x) => lifts.push(x),
            None => return Ok(Err(format!("coefficient of X^{i} is not integral at N={n}: {c}"))),
        }
    }
    Ok(Ok(lifts))
}

/// The conjugate polynomial has coefficients whose centered lifts are the
/// same at every precision in `precs`.
pub fn check_main_theorem(params: &HGParams, p: u64, t: i64, precs: &[u32]) -> Result<CheckReport> {
    let start = Instant::now();
    let mut failure = None;
    let mut seen: Option<(u32, Vec<BigInt>)> = None;
    for &n in precs {
        match conjugate_polynomial_lifts(params, p, t, n)? {
            Err(w) => {
                failure = Some(w);
                break;
            }
            Ok(lifts) => {
                if let Some((n0, prev)) = &seen {
                    if *prev != lifts {
                        failure = Some(format!("lifts at N={n0}: {prev:?}; at N={n}: {lifts:?}"));
                        break;
                    }
                } else {
                    seen = Some((n, lifts));
                }
            }
        }
    }
    let coeffs = seen.map(|(_, l)| format!(" coefficients {l:?}")).unwrap_or_default();
    let instance = format!("{params} p={p} t={t} N={precs:?} Delta={}{coeffs}", params.big_delta());
    Ok(CheckReport::new("main_theorem", instance, start, failure))
}

/// Every check name accepted by [`run_suite`].
pub const CHECK_NAMES: &[&str] = &[
    "fourier",
    "example_recovery",
    "gauss_norm",
    "zeta_p_independence",
    "omega_independence",
    "fixed_field",
    "gp_equals_hp",
    "integrality_delta",
    "main_theorem",
];

/// A fixed list of ten parameter sets used across the suite.
pub fn standard_parameter_sets() -> Vec<HGParams> {
    [
        ("1/2", "0"),
        ("1/2,1/2", "0,0"),
        ("1/4,3/4", "0,0"),
        ("1/3,2/3", "0,0"),
        ("1/6,5/6", "0,0"),
        ("1/4,3/4", "1/3,2/3"),
        ("1/4,1/2", "0,1/3"),
        ("1/3,2/3", "0,1/2"),
        ("1/6,1/2,5/6", "0,1/3,2/3"),
        ("1/12,5/12,7/12,11/12", "0,0,1/2,1/2"),
    ]
    .iter()
    .map(|(a, b)| HGParams::parse(a, b).expect("valid parameter set"))
    .collect()
}

/// Parameter sets and primes for the Galois check: `p` splits in each.
pub fn fixed_field_cases() -> Vec<(HGParams, u64)> {
    [
        ("1/5,4/5", "0,0", 11),
        ("1/3", "0", 7),
        ("1/4", "1/2", 5),
        ("1/5,4/5", "0,1/2", 11),
        ("1/8,3/8", "0,1/2", 17),
        ("1/3,2/3", "0,0", 5),
    ]
    .iter()
    .map(|&(a, b, p)| (HGParams::parse(a, b).expect("valid parameter set"), p))
    .collect()
}

/// Prime powers `q <= max_q` with `q` odd, in increasing order.
fn base_fields(max_q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in 3..=max_q {
        let fac = crate::arith::factor(q);
        if fac.len() == 1 && fac[0].0 != 2 {
            out.push((fac[0].0, fac[0].1));
        }
    }
    out
}

/// A random composition of `dim` into positive parts.
fn random_degrees(rng: &mut impl Rng, dim: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut left = dim;
    while left > 0 {
        let d = rng.random_range(1..=left);
        out.push(d);
        left -= d;
    }
    out
}

/// A random character on a random algebra of the given dimension.
pub fn random_algebra_char(rng: &mut impl Rng, base: &Arc<FqField>, dim: u32) -> Result<AlgebraChar> {
    let alg = Arc::new(SemisimpleAlgebra::new(base.clone(), &random_degrees(rng, dim))?);
    let exps: Vec<i64> = alg.components().iter().map(|c| rng.random_range(0..c.field().order() - 1) as i64).collect();
    AlgebraChar::new(alg, &exps)
}

/// Largest dimension with `q^dim <= max_size`.
fn max_dim(q: u64, max_size: u64) -> u32 {
    let mut d = 0;
    while q.pow(d + 1) <= max_size {
        d += 1;
    }
    d
}

/// A random instance with `|A|, |B| <= max_size`.
pub fn random_instance(rng: &mut impl Rng, base: &Arc<FqField>, max_size: u64, equidimensional: bool) -> Result<HGAlgebraInstance> {
    let top = max_dim(base.order(), max_size).max(1);
    let da = rng.random_range(1..=top);
    let db = if equidimensional { da } else { rng.random_range(1..=top) };
    HGAlgebraInstance::new(random_algebra_char(rng, base, da)?, random_algebra_char(rng, base, db)?)
}

/// Random parameters with `d <= 3` and denominators up to 6.
pub fn random_params(rng: &mut impl Rng) -> HGParams {
    loop {
        let d = rng.random_range(1..=3);
        let mut draw = || -> Vec<Rat> {
            (0..d)
                .map(|_| {
                    let den = rng.random_range(1..=6i64);
                    Rat::new(rng.random_range(0..den), den)
                })
                .collect()
        };
        let (a, b) = (draw(), draw());
        if let Ok(pr) = HGParams::new(&a, &b) {
            return pr;
        }
    }
}

/// Options for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Check names to run; empty means all.
    pub checks: Vec<String>,
    /// Largest base field for complex-side checks.
    pub max_q: u64,
    /// Largest prime for p-adic and orbit-algebra checks.
    pub max_p: u64,
    /// Precisions; the first is the working precision.
    pub precs: Vec<u32>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { checks: Vec::new(), max_q: 9, max_p: 13, precs: vec![6, 8], seed: 1 }
    }
}

/// Run the selected checks on deterministic instances derived from the seed.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    for name in &cfg.checks {
        if !CHECK_NAMES.contains(&name.as_str()) {
            return Err(Error::Parse(format!("unknown check {name}")));
        }
    }
    let wanted = |name: &str| cfg.checks.is_empty() || cfg.checks.iter().any(|c| c == name);
    let n = *cfg.precs.first().unwrap_or(&6);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let fields = base_fields(cfg.max_q);

    if wanted("fourier") {
        for &(p, f) in &fields {
            let base = make_field(p, f)?;
            for _ in 0..3 {
                out.push(check_fourier(&random_instance(&mut rng, &base, 81, false)?)?);
            }
        }
    }
    let sets = standard_parameter_sets();
    if wanted("example_recovery") || wanted("omega_independence") {
        for &(p, f) in &fields {
            let q = p.pow(f);
            let field = make_field(p, f)?;
            for pr in sets.iter().filter(|pr| pr.satisfies_division_assumption(q)) {
                if wanted("example_recovery") {
                    out.push(check_example_recovery(pr, &field)?);
                }
                if wanted("omega_independence") && q > 3 {
                    out.push(check_omega_independence(pr, p, f)?);
                }
            }
        }
    }
    if wanted("gauss_norm") {
        for &(p, f) in &fields {
            let base = make_field(p, f)?;
            for _ in 0..3 {
                let dim = rng.random_range(1..=max_dim(base.order(), 81).max(1));
                out.push(check_gauss_norm(&random_algebra_char(&mut rng, &base, dim)?)?);
            }
        }
    }
    if wanted("zeta_p_independence") {
        for &(p, f) in &fields {
            let base = make_field(p, f)?;
            for _ in 0..2 {
                out.push(check_zeta_p_independence(&random_instance(&mut rng, &base, 81, true)?)?);
            }
        }
    }
    if wanted("fixed_field") {
        for (pr, p) in fixed_field_cases().into_iter().filter(|(_, p)| *p <= cfg.max_p) {
            out.push(check_fixed_field(&pr, p)?);
        }
    }
    let primes: Vec<u64> = (3..=cfg.max_p).filter(|&p| crate::arith::is_prime(p)).collect();
    if wanted("gp_equals_hp") {
        for &p in &primes {
            for pr in sets.iter().filter(|pr| pr.common_denominator() % p != 0 && pr.satisfies_division_assumption(p)) {
                out.push(check_gp_equals_hp(pr, p, n)?);
            }
        }
        let quartic = HGParams::parse("1/5,2/5,3/5,4/5", "0,0,0,0")?;
        if cfg.max_p >= 7 {
            out.push(check_gp_equals_hp(&quartic, 7, n)?);
        }
    }
    if wanted("integrality_delta") && !primes.is_empty() {
        for _ in 0..5 {
            let pr = random_params(&mut rng);
            let admissible: Vec<u64> = primes.iter().copied().filter(|&p| pr.common_denominator() % p != 0).collect();
            if admissible.is_empty() {
                continue;
            }
            let p = admissible[rng.random_range(0..admissible.len())];
            out.push(check_integrality_delta(&pr, p, n)?);
        }
    }
    if wanted("main_theorem") {
        let cases = [("1/5,4/5", "0,0", 11), ("1/2,1/2", "0,0", 13)];
        for (a, b, p) in cases.into_iter().filter(|c| c.2 <= cfg.max_p) {
            out.push(check_main_theorem(&HGParams::parse(a, b)?, p, 1, &cfg.precs)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_on_mixed_algebras() {
        let f3 = make_field(3, 1).unwrap();
        let a = Arc::new(SemisimpleAlgebra::new(f3.clone(), &[1, 2]).unwrap());
        let b = Arc::new(SemisimpleAlgebra::new(f3.clone(), &[1, 1, 1]).unwrap());
        for (ea, eb) in [([1, 3], [1, 0, 1]), ([0, 5], [1, 1, 1]), ([1, 0], [0, 0, 0])] {
            let inst = HGAlgebraInstance::new(AlgebraChar::new(a.clone(), &ea).unwrap(), AlgebraChar::new(b.clone(), &eb).unwrap()).unwrap();
            assert!(check_fourier(&inst).unwrap().passed());
        }
    }

    #[test]
    fn fixed_field_and_negative_control() {
        let (pr, p) = (HGParams::parse("1/5,4/5", "0,0").unwrap(), 11);
        let r = check_fixed_field(&pr, p).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn main_theorem_small() {
        let r = check_main_theorem(&HGParams::parse("1/2,1/2", "0,0").unwrap(), 13, 1, &[6, 8]).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn zeta_p_check_requires_equal_dimensions() {
        let f5 = make_field(5, 1).unwrap();
        let a = Arc::new(SemisimpleAlgebra::new(f5.clone(), &[1]).unwrap());
        let b = Arc::new(SemisimpleAlgebra::new(f5.clone(), &[1, 1]).unwrap());
        let inst = HGAlgebraInstance::new(AlgebraChar::new(a, &[1]).unwrap(), AlgebraChar::new(b, &[0, 2]).unwrap()).unwrap();
        assert!(matches!(check_zeta_p_independence(&inst), Err(Error::NotEquidimensional { .. })));
    }

    #[test]
    fn reports_serialize_without_timing() {
        let r = check_integrality_delta(&HGParams::parse("1/2", "0").unwrap(), 13, 4).unwrap().without_timing();
        assert!(r.passed());
        assert_eq!(r.millis, None);
    }

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = SuiteConfig { max_q: 5, max_p: 7, precs: vec![4, 5], ..SuiteConfig::default() };
        let a: Vec<_> = run_suite(&cfg).unwrap().into_iter().map(CheckReport::without_timing).collect();
        let b: Vec<_> = run_suite(&cfg).unwrap().into_iter().map(CheckReport::without_timing).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(CheckReport::passed), "{a:#?}");
        assert!(matches!(run_suite(&SuiteConfig { checks: vec!["nope".into()], ..cfg }), Err(Error::Parse(_))));
    }
}
