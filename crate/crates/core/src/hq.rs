//! Finite hypergeometric sums with exact cyclotomic values.
//!
//! Two families are provided: the classical sum `H_q(alpha, beta | t)` built
//! from Gauss sums on `F_q`, and the algebra sum `H_q(A, B | t)` attached to
//! characters of two semisimple algebras over a common base field. The
//! algebra sum is evaluated both directly, as a sum over unit pairs with
//! `t N_A(x) = N_B(y)`, and through its Fourier expansion in `t`.
//!
//! The normalizing denominator is `chi_B(-1) g_A(chi_A) g_B(conj chi_B)`.
//! With it the `m = 0` Fourier coefficient is 1 and the split instance
//! reproduces the classical sum exactly.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::charsums::{
    algebra_gauss_sum, check_same_base, gauss_sum, to_rational, AlgebraChar, MultChar, SemisimpleAlgebra,
};
use crate::error::{Error, Result};
use crate::ff::{FqElem, FqField};
use crate::params::HGParams;
use crate::{CycloInt, CycloNum};

/// Two semisimple algebras over one base field with a character on each,
/// plus the twist `a` selecting the additive character `zeta_p^(a Tr)`.
#[derive(Clone, Debug)]
pub struct HGAlgebraInstance {
    chi_a: AlgebraChar,
    chi_b: AlgebraChar,
    twist: u64,
}

impl HGAlgebraInstance {
    pub fn new(chi_a: AlgebraChar, chi_b: AlgebraChar) -> Result<Self> {
        check_same_base(chi_a.algebra(), chi_b.algebra())?;
        Ok(HGAlgebraInstance { chi_a, chi_b, twist: 1 })
    }

    /// The same instance with additive character `zeta_p^(a Tr)`.
    pub fn with_twist(&self, a: u64) -> Result<Self> {
        let p = self.base().characteristic();
        if a % p == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(HGAlgebraInstance { twist: a % p, ..self.clone() })
    }

    /// Both characters raised to the `k`-th power.
    pub fn pow(&self, k: i64) -> Self {
        HGAlgebraInstance { chi_a: self.chi_a.pow(k), chi_b: self.chi_b.pow(k), twist: self.twist }
    }

    pub fn algebra_a(&self) -> &Arc<SemisimpleAlgebra> {
        self.chi_a.algebra()
    }

    pub fn algebra_b(&self) -> &Arc<SemisimpleAlgebra> {
        self.chi_b.algebra()
    }

    pub fn chi_a(&self) -> &AlgebraChar {
        &self.chi_a
    }

    pub fn chi_b(&self) -> &AlgebraChar {
        &self.chi_b
    }

    pub fn twist(&self) -> u64 {
        self.twist
    }

    pub fn base(&self) -> &Arc<FqField> {
        self.chi_a.algebra().base()
    }

    /// `dim A = dim B` over the base, the hypothesis for independence of the
    /// additive character.
    pub fn is_equidimensional(&self) -> bool {
        self.algebra_a().dimension() == self.algebra_b().dimension()
    }

    /// Conductor holding every value of the instance.
    pub fn value_conductor(&self) -> u64 {
        self.algebra_a().value_conductor().lcm(&self.algebra_b().value_conductor())
    }
}

/// `g(chi)^-1 = num / den` with `num` integral: `-1` for trivial chi and
/// `chi(-1) g(conj chi) / q` otherwise.
fn gauss_inverse_parts(chars: &[MultChar], a: u64, p: u64) -> (CycloInt, BigInt) {
    let mut num = CycloInt::one(p);
    let mut den = BigInt::from(1);
    for chi in chars {
        if chi.is_trivial() {
            num = -num;
        } else {
            num = num * gauss_sum(&chi.conj(), a).scale(&BigInt::from(chi.sign_at_minus_one()));
            den *= chi.field().order();
        }
    }
    (num, den)
}

fn check_unit(t: FqElem) -> Result<()> {
    if t.code() == 0 {
        Err(Error::ZeroArgument)
    } else {
        Ok(())
    }
}

/// A Fourier series `scale * inv * sum_m num[m] zeta_(q-1)^(m (shift + log t))`.
struct Series {
    num: Vec<CycloInt>,
    inv: CycloInt,
    scale: BigRational,
    shift: u64,
}

impl Series {
    fn eval(&self, log_t: u64) -> CycloNum {
        let n = self.num.len() as u64;
        let s = (self.shift + log_t) % n;
        let conductor = self.num.iter().fold(self.inv.conductor(), |acc, c| acc.lcm(&c.conductor()));
        let mut acc = CycloInt::zero(conductor);
        for (m, c) in self.num.iter().enumerate() {
            let k = (m as u64 * s % n) * (conductor / n);
            acc = acc + c.embed(conductor).expect("divides lcm").mul_zeta(k as i64);
        }
        to_rational(&(acc * &self.inv)).scale(&self.scale)
    }

    /// Normalized coefficients `num[m] * inv * (1 - q) * scale`.
    fn coefficients(&self) -> Vec<CycloNum> {
        let q_minus_1 = BigRational::from_integer(BigInt::from(self.num.len()));
        let factor = -(&self.scale * q_minus_1);
        self.num.iter().map(|c| to_rational(&(c * &self.inv)).scale(&factor)).collect()
    }
}

fn classic_series(params: &HGParams, field: &Arc<FqField>, a: u64) -> Result<Series> {
    let q = field.order();
    let p = field.characteristic();
    let n = q - 1;
    let err = || Error::AssumptionFails { q_minus_1: n };
    let ea = HGParams::exponents(params.alpha(), q).ok_or_else(err)?;
    let eb = HGParams::exponents(params.beta(), q).ok_or_else(err)?;
    let g = |m: i64| gauss_sum(&MultChar::new(field.clone(), m), a);
    let num = (0..n as i64)
        .map(|m| {
            ea.iter().zip(&eb).fold(CycloInt::one(n * p), |acc, (&ai, &bi)| {
                acc * g(m + ai as i64) * g(-m - bi as i64)
            })
        })
        .collect();
    let mut den_chars = Vec::new();
    for (&ai, &bi) in ea.iter().zip(&eb) {
        den_chars.push(MultChar::new(field.clone(), ai as i64));
        den_chars.push(MultChar::new(field.clone(), -(bi as i64)));
    }
    let (inv, den) = gauss_inverse_parts(&den_chars, a, p);
    let minus_one = field.neg(field.one());
    let sign = if params.d() % 2 == 0 { field.one() } else { minus_one };
    Ok(Series {
        num,
        inv,
        scale: BigRational::new(1.into(), den * (1 - q as i64)),
        shift: field.dlog(sign)?,
    })
}

/// The classical finite hypergeometric sum over `field`, whose fixed
/// generator defines `omega`. Requires `(q-1) alpha_i, (q-1) beta_j` integral.
pub fn hq_classic(params: &HGParams, field: &Arc<FqField>, t: FqElem) -> Result<CycloNum> {
    hq_classic_twisted(params, field, t, 1)
}

/// [`hq_classic`] with the additive character `zeta_p^(a Tr)`.
pub fn hq_classic_twisted(params: &HGParams, field: &Arc<FqField>, t: FqElem, a: u64) -> Result<CycloNum> {
    check_unit(t)?;
    let series = classic_series(params, field, a)?;
    Ok(series.eval(field.dlog(t)?))
}

/// Classical values at every `t = g^j`, in order of `j`.
pub fn hq_classic_all(params: &HGParams, field: &Arc<FqField>) -> Result<Vec<(FqElem, CycloNum)>> {
    let series = classic_series(params, field, 1)?;
    Ok(field.units().enumerate().map(|(j, t)| (t, series.eval(j as u64))).collect())
}

/// The unnormalized sum `(1/(1-q)) sum_m prod_i g(m + alpha_i q') g(-m - beta_i q') omega((-1)^d t)^m`.
pub fn katz_unnormalized(params: &HGParams, field: &Arc<FqField>, t: FqElem) -> Result<CycloNum> {
    check_unit(t)?;
    let mut series = classic_series(params, field, 1)?;
    series.inv = CycloInt::one(series.inv.conductor());
    series.scale = BigRational::new(1.into(), (1 - field.order() as i64).into());
    Ok(series.eval(field.dlog(t)?))
}

/// The prefactor turning the classical sum into Greene's normalization:
/// `omega(-1)^(|beta| q') q^(-d) prod_i g(alpha_i q') g(-beta_i q') / g(alpha_i q' - beta_i q')`,
/// with `|beta|` summed over representatives in `[0, 1)`.
pub fn greene_factor(params: &HGParams, field: &Arc<FqField>) -> Result<CycloNum> {
    let q = field.order();
    let p = field.characteristic();
    let n = q - 1;
    let err = || Error::AssumptionFails { q_minus_1: n };
    let ea = HGParams::exponents(params.alpha(), q).ok_or_else(err)?;
    let eb = HGParams::exponents(params.beta(), q).ok_or_else(err)?;
    let chi = |e: i64| MultChar::new(field.clone(), e);
    let mut num = CycloInt::one(n * p);
    let mut den_chars = Vec::new();
    for (&ai, &bi) in ea.iter().zip(&eb) {
        num = num * gauss_sum(&chi(ai as i64), 1) * gauss_sum(&chi(-(bi as i64)), 1);
        den_chars.push(chi(ai as i64 - bi as i64));
    }
    let (inv, den) = gauss_inverse_parts(&den_chars, 1, p);
    let beta_total: u64 = eb.iter().sum();
    let sign = if beta_total % 2 == 1 { MultChar::omega(field.clone()).sign_at_minus_one() } else { 1 };
    let scale = BigRational::new(BigInt::from(sign), den * BigInt::from(q).pow(params.d() as u32));
    Ok(to_rational(&(num * inv)).scale(&scale))
}

fn algebra_series(inst: &HGAlgebraInstance) -> Result<Series> {
    let a = inst.twist;
    let base = inst.base();
    let n = base.order() - 1;
    let chi_b_bar = inst.chi_b.conj();
    let num = (0..n as i64)
        .map(|m| algebra_gauss_sum(&inst.chi_a.shift_by_norm(m), a) * algebra_gauss_sum(&chi_b_bar.shift_by_norm(-m), a))
        .collect();
    let (inv, den) = normalizer_inverse(inst);
    let b = inst.algebra_b();
    let shift = b.norm_log(&b.scalar(-1))?;
    Ok(Series { num, inv, scale: BigRational::new(1.into(), den * (1 - base.order() as i64)), shift })
}

/// `(g_A(chi_A) g_B(conj chi_B))^-1 = inv / den`.
fn normalizer_inverse(inst: &HGAlgebraInstance) -> (CycloInt, BigInt) {
    let p = inst.base().characteristic();
    let mut chars: Vec<MultChar> = inst.chi_a.chars().to_vec();
    chars.extend(inst.chi_b.conj().chars().iter().cloned());
    gauss_inverse_parts(&chars, inst.twist, p)
}

/// The algebra sum from its definition:
/// `-1/(chi_B(-1) g_A(chi_A) g_B(conj chi_B)) sum_{t N_A(x) = N_B(y)} psi_A(x) psi_B(-y) chi_A(x) conj chi_B(y)`.
pub fn hq_algebra_direct(inst: &HGAlgebraInstance, t: FqElem) -> Result<CycloNum> {
    check_unit(t)?;
    let base = inst.base();
    let log_t = base.dlog(t)?;
    Ok(direct_all(inst, Some(log_t))?.remove(0))
}

/// Direct values for one `log t`, or for every `t = g^j` when `None`.
fn direct_all(inst: &HGAlgebraInstance, only: Option<u64>) -> Result<Vec<CycloNum>> {
    let base = inst.base();
    let p = base.characteristic();
    let n = base.order() - 1;
    let l = inst.value_conductor();
    let a = inst.twist;
    let (alg_a, alg_b) = (inst.algebra_a(), inst.algebra_b());
    let psi = |tr: u64| a * tr % p * (l / p);

    // Units of B bucketed by the discrete log of their norm, each stored as
    // the zeta_L exponent of psi_B(-y) conj chi_B(y).
    let chi_b_bar = inst.chi_b.conj();
    let mut ys: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
    for y in alg_b.units() {
        let e = psi((p - alg_b.trace(&y)) % p) + chi_b_bar.eval_exponent(&y, l)?;
        ys[alg_b.norm_log(&y)? as usize].push(e % l);
    }
    let mut xs: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
    for x in alg_a.units() {
        let e = psi(alg_a.trace(&x)) + inst.chi_a.eval_exponent(&x, l)?;
        xs[alg_a.norm_log(&x)? as usize].push(e % l);
    }
    let (inv, den) = normalizer_inverse(inst);
    let sign = -inst.chi_b.sign_at_minus_one();
    let scale = BigRational::new(sign.into(), den);
    let logs: Vec<u64> = match only {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    Ok(logs
        .into_iter()
        .map(|log_t| {
            let mut counts = vec![0i64; l as usize];
            for (s, bucket) in xs.iter().enumerate() {
                let target = &ys[((s as u64 + log_t) % n) as usize];
                for &ex in bucket {
                    for &ey in target {
                        counts[((ex + ey) % l) as usize] += 1;
                    }
                }
            }
            let sum = CycloInt::from_exponent_counts(l, &counts);
            to_rational(&(sum * &inv)).scale(&scale)
        })
        .collect())
}

/// Direct values at every `t = g^j`, in order of `j`.
pub fn hq_algebra_direct_all(inst: &HGAlgebraInstance) -> Result<Vec<(FqElem, CycloNum)>> {
    let base = inst.base();
    Ok(base.units().zip(direct_all(inst, None)?).collect())
}

/// The algebra sum through its Fourier expansion
/// `(1/(1-q)) sum_m c_m omega(N_B(-1) t)^m`.
pub fn hq_algebra_fourier(inst: &HGAlgebraInstance, t: FqElem) -> Result<CycloNum> {
    check_unit(t)?;
    let series = algebra_series(inst)?;
    Ok(series.eval(inst.base().dlog(t)?))
}

/// Fourier values at every `t = g^j`, in order of `j`.
pub fn hq_algebra_fourier_all(inst: &HGAlgebraInstance) -> Result<Vec<(FqElem, CycloNum)>> {
    let series = algebra_series(inst)?;
    Ok(inst.base().units().enumerate().map(|(j, t)| (t, series.eval(j as u64))).collect())
}

/// `c_m = g_A(chi_A omega_N^m) g_B(conj chi_B omega_N^-m) / (g_A(chi_A) g_B(conj chi_B))`.
pub fn fourier_coefficients(inst: &HGAlgebraInstance) -> Result<Vec<CycloNum>> {
    Ok(algebra_series(inst)?.coefficients())
}

/// `A = B = F_q^d` with `chi_A = prod omega(x_i)^((q-1) alpha_i)` and
/// `chi_B = prod omega(y_j)^((q-1) beta_j)`.
pub fn split_instance(params: &HGParams, field: &Arc<FqField>) -> Result<HGAlgebraInstance> {
    let q = field.order();
    let err = || Error::AssumptionFails { q_minus_1: q - 1 };
    let ea = HGParams::exponents(params.alpha(), q).ok_or_else(err)?;
    let eb = HGParams::exponents(params.beta(), q).ok_or_else(err)?;
    let alg = Arc::new(SemisimpleAlgebra::split(field.clone(), params.d())?);
    let as_i64 = |v: Vec<u64>| v.into_iter().map(|e| e as i64).collect::<Vec<_>>();
    HGAlgebraInstance::new(AlgebraChar::new(alg.clone(), &as_i64(ea))?, AlgebraChar::new(alg, &as_i64(eb))?)
}

/// The instance over `F_p` built from the p-orbits: one component
/// `F_(p^l)` per orbit of length `l`, with character `omega^(r (p^l - 1))`
/// for the orbit representative `r`.
pub fn orbit_instance(params: &HGParams, p: u64) -> Result<HGAlgebraInstance> {
    orbit_instance_with(params, p, false)
}

/// Like [`orbit_instance`], but representing each orbit by `p r` instead
/// of `r`. The characters differ by a Frobenius twist.
pub fn orbit_instance_rotated(params: &HGParams, p: u64) -> Result<HGAlgebraInstance> {
    orbit_instance_with(params, p, true)
}

fn orbit_instance_with(params: &HGParams, p: u64, rotate: bool) -> Result<HGAlgebraInstance> {
    let orbits = params.p_orbits(p)?;
    let base = crate::ff::make_field(p, 1)?;
    let build = |orbits: &[crate::params::Orbit]| -> Result<AlgebraChar> {
        let degrees: Vec<u32> = orbits.iter().map(|o| o.len() as u32).collect();
        let alg = Arc::new(SemisimpleAlgebra::new(base.clone(), &degrees)?);
        let exps = orbits
            .iter()
            .zip(alg.components())
            .map(|(o, c)| {
                let r = if rotate { o.members[1 % o.len()] } else { o.representative };
                let e = r * crate::params::Rat::from_integer(c.field().order() as i64 - 1);
                if !e.is_integer() {
                    return Err(Error::ExponentNotIntegral(format!("{r} * (q_i - 1)")));
                }
                Ok(e.to_integer())
            })
            .collect::<Result<Vec<i64>>>()?;
        AlgebraChar::new(alg, &exps)
    };
    HGAlgebraInstance::new(build(&orbits.alpha)?, build(&orbits.beta)?)
}
