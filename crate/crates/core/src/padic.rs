//! Fixed-precision p-adic numbers, Teichmüller lifts, Morita's `Gamma_p`,
//! the Gross-Koblitz evaluation of Gauss sums and the p-adic
//! hypergeometric function `G_p`.
//!
//! On the p-adic side `omega` is the inverse of the Teichmüller character.
//! Complex values in `Q(zeta_(p-1))` are carried over by
//! `zeta_(p-1) -> teichmuller(g)^-1` with `g` the fixed generator of `F_p`,
//! which matches the complex convention `omega(g) = zeta_(p-1)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod, rem};
use crate::error::{Error, Result};
use crate::ff::make_field;
use crate::params::{frac, HGParams, Rat};
use crate::CycloNum;

/// Largest `p^N` used as a working modulus; keeps products inside `u128`.
pub const MAX_MODULUS: u128 = 1 << 62;

/// Valuation used for an exactly known zero.
const EXACT_ZERO: i64 = 1 << 40;

fn modulus(p: u64, n: u32) -> Result<u64> {
    let size = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if size >= MAX_MODULUS {
        return Err(Error::PrecisionTooLarge { size, bound: MAX_MODULUS });
    }
    Ok(size as u64)
}

fn ppow(p: u64, k: i64) -> u64 {
    p.pow(k as u32)
}

/// `p^v u` with the unit `u` known modulo `p^N`.
///
/// A zero carries its absolute precision in `val`; an exact zero uses a
/// huge sentinel so that it never limits precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNum {
    p: u64,
    val: i64,
    rel: u32,
    unit: u64,
}

impl PadicNum {
    pub fn zero(p: u64) -> Self {
        PadicNum { p, val: EXACT_ZERO, rel: 0, unit: 0 }
    }

    /// Zero modulo `p^abs`.
    pub fn zero_mod(p: u64, abs: i64) -> Self {
        PadicNum { p, val: abs.min(EXACT_ZERO), rel: 0, unit: 0 }
    }

    pub fn one(p: u64, n: u32) -> Result<Self> {
        Self::from_int(p, 1, n)
    }

    /// An integer, with its unit part kept to relative precision `n`.
    pub fn from_int(p: u64, x: i64, n: u32) -> Result<Self> {
        Self::from_bigint(p, &BigInt::from(x), n)
    }

    pub fn from_bigint(p: u64, x: &BigInt, n: u32) -> Result<Self> {
        let m = modulus(p, n)?;
        if x.is_zero() {
            return Ok(Self::zero(p));
        }
        let mut x = x.clone();
        let mut val = 0;
        let pb = BigInt::from(p);
        while (&x % &pb).is_zero() {
            x /= &pb;
            val += 1;
        }
        let unit = x.mod_floor(&BigInt::from(m)).to_u64().expect("reduced below modulus");
        Ok(PadicNum { p, val, rel: n, unit })
    }

    pub fn from_rational(p: u64, x: &BigRational, n: u32) -> Result<Self> {
        let num = Self::from_bigint(p, x.numer(), n)?;
        if num.is_zero() {
            return Ok(num);
        }
        Ok(num.mul(&Self::from_bigint(p, x.denom(), n)?.inverse()?))
    }

    pub fn from_rat(p: u64, x: Rat, n: u32) -> Result<Self> {
        Self::from_rational(p, &BigRational::new((*x.numer()).into(), (*x.denom()).into()), n)
    }

    /// A unit given by its residue modulo `p^n`.
    fn from_unit(p: u64, unit: u64, n: u32) -> Self {
        PadicNum { p, val: 0, rel: n, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Relative precision `N`: the unit is known modulo `p^N`.
    pub fn precision(&self) -> u32 {
        self.rel
    }

    /// Valuation; for a zero, the power of `p` it is known to be divisible by.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// The value is known modulo `p^absolute_precision`.
    pub fn absolute_precision(&self) -> i64 {
        self.val.saturating_add(self.rel as i64)
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.val >= EXACT_ZERO
    }

    fn normalize(p: u64, mut val: i64, mut rel: i64, mut x: u64, abs: i64) -> Self {
        if rel <= 0 || x == 0 {
            return Self::zero_mod(p, abs);
        }
        while x % p == 0 {
            x /= p;
            val += 1;
            rel -= 1;
        }
        if rel <= 0 {
            return Self::zero_mod(p, abs);
        }
        let m = ppow(p, rel);
        PadicNum { p, val, rel: rel as u32, unit: x % m }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
        let p = self.p;
        let abs = self.absolute_precision().min(other.absolute_precision());
        let v0 = self.val.min(other.val);
        if v0 >= abs {
            return Self::zero_mod(p, abs);
        }
        let k = abs - v0;
        let m = ppow(p, k);
        let term = |x: &Self| -> u64 {
            if x.is_zero() || x.val - v0 >= k {
                0
            } else {
                mul_mod(x.unit % m, ppow(p, x.val - v0), m)
            }
        };
        let s = (term(self) as u128 + term(other) as u128) % m as u128;
        Self::normalize(p, v0, k, s as u64, abs)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.rel as i64);
        PadicNum { unit: (m - self.unit) % m, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
        if self.is_zero() || other.is_zero() {
            let abs = self.val.saturating_add(other.absolute_precision()).min(other.val.saturating_add(self.absolute_precision()));
            return Self::zero_mod(self.p, abs);
        }
        let rel = self.rel.min(other.rel);
        let m = ppow(self.p, rel as i64);
        PadicNum { p: self.p, val: self.val + other.val, rel, unit: mul_mod(self.unit % m, other.unit % m, m) }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = ppow(self.p, self.rel as i64);
        let unit = inv_mod(self.unit, m).expect("units are invertible");
        Ok(PadicNum { p: self.p, val: -self.val, rel: self.rel, unit })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 { PadicNum { p: self.p, val: 0, rel: self.rel.max(1), unit: 1 } } else { self.clone() });
        }
        let m = ppow(self.p, self.rel as i64);
        Ok(PadicNum { p: self.p, val: self.val * e, rel: self.rel, unit: pow_mod(self.unit, e as u64, m) })
    }

    /// Whether `self - other` is divisible by `p^k`, with both known that far.
    pub fn congruent(&self, other: &Self, k: i64) -> bool {
        if self.absolute_precision() < k || other.absolute_precision() < k {
            return false;
        }
        let d = self.sub(other);
        d.val >= k
    }

    /// The value modulo `p^k` as the residue in `(-p^k/2, p^k/2]`; `None`
    /// unless the value is integral and known modulo `p^k`.
    pub fn centered_lift(&self, k: u32) -> Option<BigInt> {
        if self.absolute_precision() < k as i64 || (!self.is_zero() && self.val < 0) {
            return None;
        }
        let m = BigInt::from(self.p).pow(k);
        let x = if self.is_zero() || self.val >= k as i64 {
            BigInt::zero()
        } else {
            (BigInt::from(self.unit) * BigInt::from(self.p).pow(self.val as u32)).mod_floor(&m)
        };
        Some(if &x * 2 > m { x - m } else { x })
    }

    /// Base-`p` digits of the unit, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut x = self.unit;
        (0..self.rel)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// The rational number in `[-p^k/2, p^k/2]`-balanced form `a/b` with
    /// small `a, b` congruent to this value, when one exists.
    pub fn rational_reconstruction(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let m = BigInt::from(self.p).pow(self.rel);
        let bound = m.sqrt() / 2;
        let (mut r0, mut r1) = (m.clone(), BigInt::from(self.unit));
        let (mut s0, mut s1) = (BigInt::zero(), BigInt::from(1));
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let s2 = &s0 - &q * &s1;
            (r0, r1, s0, s1) = (r1, r2, s1, s2);
        }
        if s1.is_zero() || s1.abs() > bound || s1.gcd(&BigInt::from(self.p)) != BigInt::from(1) {
            return None;
        }
        let scale = if self.val >= 0 {
            BigRational::from_integer(BigInt::from(self.p).pow(self.val as u32))
        } else {
            BigRational::new(1.into(), BigInt::from(self.p).pow((-self.val) as u32))
        };
        Some(BigRational::new(r1, s1) * scale)
    }
}

impl fmt::Display for PadicNum {
    /// `d_0 p^v + d_1 p^(v+1) + .. + O(p^(v+N))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let k = self.val + i as i64;
            terms.push(match k {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{k}"),
            });
        }
        terms.push(format!("O({p}^{})", self.absolute_precision()));
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for PadicNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PadicNum", 5)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("N", &self.rel)?;
        st.serialize_field("valuation", &if self.is_exact_zero() { None } else { Some(self.val) })?;
        st.serialize_field("absolute_precision", &if self.is_exact_zero() { None } else { Some(self.absolute_precision()) })?;
        st.serialize_field("digits", &self.digits())?;
        st.end()
    }
}

/// `pi^e u` with `pi^(p-1) = -p`, `e` rational and `u` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiExp {
    pub e: Rat,
    pub unit: PadicNum,
}

impl PiExp {
    pub fn mul(&self, other: &Self) -> Self {
        PiExp { e: self.e + other.e, unit: self.unit.mul(&other.unit) }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(PiExp { e: self.e - other.e, unit: self.unit.div(&other.unit)? })
    }

    /// `(-p)^(e/(p-1)) u`, defined when `(p-1) | e`.
    pub fn to_padic(&self) -> Result<PadicNum> {
        let p = self.unit.prime();
        let k = self.e / Rat::from_integer(p as i64 - 1);
        if !k.is_integer() {
            return Err(Error::ExponentNotIntegral(self.e.to_string()));
        }
        let minus_p = PadicNum::from_int(p, -(p as i64), self.unit.precision().max(1))?;
        Ok(minus_p.pow(k.to_integer())?.mul(&self.unit))
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::BadPrime { p, reason: "p = 2 is not supported on the p-adic side" });
    }
    Ok(())
}

/// The Teichmüller lift of `a mod p`: the `(p-1)`-st root of unity
/// congruent to `a`, modulo `p^n`.
pub fn teichmuller(a: i64, p: u64, n: u32) -> Result<PadicNum> {
    let m = modulus(p, n)?;
    let a = rem(a, p);
    if a == 0 {
        return Err(Error::ZeroElement);
    }
    let mut x = a % m;
    for _ in 1..n {
        x = pow_mod(x, p, m);
    }
    Ok(PadicNum::from_unit(p, x, n))
}

/// `x` as an integer in `[1, p^n]` congruent to it modulo `p^n`.
fn integer_representative(x: Rat, p: u64, n: u32) -> Result<u64> {
    let m = modulus(p, n)?;
    let den = *x.denom() as u64;
    if den % p == 0 {
        return Err(Error::NotPAdicInteger(x.to_string()));
    }
    let inv = inv_mod(den % m, m).expect("denominator is a unit");
    let r = mul_mod(rem(*x.numer(), m), inv, m);
    Ok(if r == 0 { m } else { r })
}

/// Truncated polynomials in `Z = p Y` over `Z/p^N`: terms of degree `>= N`
/// vanish at every multiple of `p`, so products and shifts keep `N` terms.
struct BlockTables {
    n: u32,
    m: u64,
    p: u64,
    /// `M_(2^e)(Z) = prod_(k < 2^e) prod_(i=1..p-1) (Z + k p + i)`.
    levels: Vec<Vec<u64>>,
}

impl BlockTables {
    fn new(p: u64, n: u32) -> Self {
        let m = p.pow(n);
        let mut t = BlockTables { n, m, p, levels: Vec::new() };
        let mut block = vec![0u64; n as usize];
        block[0] = 1;
        for i in 1..p {
            block = t.mul_linear(&block, i % m);
        }
        // Blocks beyond p^(n-1) are never needed: the argument is at most p^n.
        let max_blocks = p.pow(n - 1);
        let mut len = 1u64;
        t.levels.push(block);
        while len * 2 <= max_blocks {
            let last = t.levels.last().unwrap();
            let shifted = t.shift(last, mul_mod(len % m, p, m));
            let next = t.mul(last, &shifted);
            t.levels.push(next);
            len *= 2;
        }
        t
    }

    /// `a(Z) (Z + c)`.
    fn mul_linear(&self, a: &[u64], c: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len()];
        for i in 0..a.len() {
            let mut v = mul_mod(a[i], c, self.m);
            if i > 0 {
                v = (v + a[i - 1]) % self.m;
            }
            out[i] = v;
        }
        out
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n as usize;
        let mut out = vec![0u128; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                out[i + j] = (out[i + j] + a[i] as u128 * b[j] as u128) % self.m as u128;
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }

    /// `a(Z + c)` by Horner's rule.
    fn shift(&self, a: &[u64], c: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len()];
        for &coef in a.iter().rev() {
            out = self.mul_linear(&out, c);
            out[0] = (out[0] + coef) % self.m;
        }
        out
    }

    fn eval(&self, a: &[u64], z: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, z, self.m) + c) % self.m)
    }

    /// `prod_(0 < j < x, p does not divide j) j mod p^N`.
    fn unit_factorial(&self, x: u64) -> u64 {
        let top = x - 1;
        let blocks = top / self.p;
        let mut acc = 1u64;
        let mut offset = 0u64;
        for e in (0..self.levels.len()).rev() {
            if blocks & (1 << e) != 0 {
                let z = mul_mod(offset % self.m, self.p, self.m);
                acc = mul_mod(acc, self.eval(&self.levels[e], z), self.m);
                offset += 1 << e;
            }
        }
        debug_assert_eq!(offset, blocks);
        for j in blocks * self.p + 1..=top {
            acc = mul_mod(acc, j % self.m, self.m);
        }
        acc
    }
}

fn tables(p: u64, n: u32) -> Arc<BlockTables> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u32), Arc<BlockTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&(p, n)) {
        return t.clone();
    }
    let t = Arc::new(BlockTables::new(p, n));
    cache.write().unwrap().entry((p, n)).or_insert(t).clone()
}

fn gamma_cache() -> &'static RwLock<HashMap<(u64, u32, u64), u64>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u32, u64), u64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Morita's `Gamma_p(x)` modulo `p^n` for `x` in `Z_p` given as a rational
/// with denominator prime to `p`.
///
/// Uses `Gamma_p(x) = Gamma_p(x_N) = (-1)^(x_N) prod_(0 < j < x_N, p does not divide j) j`
/// with `x_N` in `[1, p^N]`, `x_N = x mod p^N`. The product runs over
/// blocks of `p - 1` consecutive units, combined through truncated
/// polynomial products, so the cost is polynomial in `N log p`.
pub fn gamma_p(x: Rat, p: u64, n: u32) -> Result<PadicNum> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let xn = integer_representative(x, p, n)?;
    let key = (p, n, xn);
    if let Some(&u) = gamma_cache().read().unwrap().get(&key) {
        return Ok(PadicNum::from_unit(p, u, n));
    }
    let t = tables(p, n);
    let mut u = t.unit_factorial(xn);
    if xn % 2 == 1 {
        u = (t.m - u) % t.m;
    }
    gamma_cache().write().unwrap().insert(key, u);
    Ok(PadicNum::from_unit(p, u, n))
}

/// `Gamma_p` by the plain factorial product; cost `O(p^N)`.
pub fn gamma_p_naive(x: Rat, p: u64, n: u32) -> Result<PadicNum> {
    let xn = integer_representative(x, p, n)?;
    let m = modulus(p, n)?;
    let mut u = 1u64;
    for j in 1..xn {
        if j % p != 0 {
            u = mul_mod(u, j, m);
        }
    }
    if xn % 2 == 1 {
        u = (m - u) % m;
    }
    Ok(PadicNum::from_unit(p, u, n))
}

/// Gross-Koblitz: the Gauss sum over `F_(p^f)` of `omega^m`,
/// `-prod_i pi^((p-1){p^i m/(q-1)}) Gamma_p({p^i m/(q-1)})`.
pub fn gross_koblitz(p: u64, f: u32, m: i64, n: u32) -> Result<PiExp> {
    check_odd_prime(p)?;
    let q = (p as i64).checked_pow(f).ok_or(Error::PrecisionTooLarge { size: u128::MAX, bound: MAX_MODULUS })?;
    let mut e = Rat::from_integer(0);
    let mut unit = PadicNum::from_int(p, -1, n)?;
    let mut pi = 1i64;
    for _ in 0..f {
        let x = frac(Rat::new(rem(pi as i64 * (m % (q - 1)), (q - 1) as u64) as i64, q - 1));
        e += x * Rat::from_integer(p as i64 - 1);
        unit = unit.mul(&gamma_p(x, p, n)?);
        pi = pi * p as i64 % (q - 1);
    }
    Ok(PiExp { e, unit })
}

fn check_gp_inputs(params: &HGParams, p: u64, t: i64) -> Result<()> {
    check_odd_prime(p)?;
    if params.common_denominator() % p == 0 {
        return Err(Error::BadPrime { p, reason: "p divides the common denominator" });
    }
    if rem(t, p) == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(())
}

/// `omega((-1)^d t)^m` with `omega` the inverse Teichmüller character.
fn omega_powers(params: &HGParams, p: u64, t: i64, n: u32) -> Result<PadicNum> {
    let sign = if params.d() % 2 == 0 { 1 } else { -1 };
    teichmuller(sign * rem(t, p) as i64, p, n)?.inverse()
}

/// `G_p(alpha, beta | t)` from its defining sum over `m = 0..p-2`.
pub fn g_p_direct(params: &HGParams, p: u64, t: i64, n: u32) -> Result<PadicNum> {
    check_gp_inputs(params, p, t)?;
    let w = omega_powers(params, p, t, n)?;
    let minus_p = PadicNum::from_int(p, -(p as i64), n)?;
    let s = |m: i64| Rat::new(m, p as i64 - 1);
    let g = |x: Rat| gamma_p(frac(x), p, n);
    let mut den = PadicNum::one(p, n)?;
    for (&a, &b) in params.alpha().iter().zip(params.beta()) {
        den = den.mul(&g(a)?).mul(&g(-b)?);
    }
    let den_inv = den.inverse()?;
    let mut total = PadicNum::zero(p);
    let mut wm = PadicNum::one(p, n)?;
    for m in 0..p as i64 - 1 {
        let mut term = wm.mul(&minus_p.pow(params.lambda(p, m))?).mul(&den_inv);
        for (&a, &b) in params.alpha().iter().zip(params.beta()) {
            term = term.mul(&g(a + s(m))?).mul(&g(-b - s(m))?);
        }
        total = total.add(&term);
        wm = wm.mul(&w);
    }
    total.div(&PadicNum::from_int(p, 1 - p as i64, n)?)
}

/// The `m`-th Fourier coefficient of the orbit-algebra sum, as a ratio of
/// Gross-Koblitz products. Also returns the combined pi-exponent.
pub fn algebra_coefficient(params: &HGParams, p: u64, m: i64, n: u32) -> Result<(PadicNum, Rat)> {
    let orbits = params.p_orbits(p)?;
    let mut ratio = PiExp { e: Rat::from_integer(0), unit: PadicNum::one(p, n)? };
    let sides = [(&orbits.alpha, 1i64), (&orbits.beta, -1i64)];
    for (side, sign) in sides {
        for orbit in side.iter() {
            let l = orbit.len() as u32;
            let ql = (p as i64).pow(l) - 1;
            let base = orbit.representative * Rat::from_integer(ql);
            if !base.is_integer() {
                return Err(Error::ExponentNotIntegral(format!("{} * {ql}", orbit.representative)));
            }
            let base = sign * base.to_integer();
            let step = ql / (p as i64 - 1);
            let num = gross_koblitz(p, l, base + sign * m * step, n)?;
            let den = gross_koblitz(p, l, base, n)?;
            ratio = ratio.mul(&num.div(&den)?);
        }
    }
    let e = ratio.e;
    Ok((ratio.to_padic()?, e))
}

/// `G_p` through the p-orbit algebra and Gross-Koblitz. Checks on every
/// coefficient that the pi-exponent difference equals `(p - 1) Lambda(m)`.
pub fn g_p_via_algebra(params: &HGParams, p: u64, t: i64, n: u32) -> Result<PadicNum> {
    check_gp_inputs(params, p, t)?;
    if !params.splits_in_k(p) {
        return Err(Error::DoesNotSplit { p });
    }
    let w = omega_powers(params, p, t, n)?;
    let mut total = PadicNum::zero(p);
    let mut wm = PadicNum::one(p, n)?;
    for m in 0..p as i64 - 1 {
        let (c, e) = algebra_coefficient(params, p, m, n)?;
        let expected = Rat::from_integer((p as i64 - 1) * params.lambda(p, m));
        if e != expected {
            return Err(Error::InternalInconsistency(format!("pi-exponent {e} differs from (p-1) Lambda({m}) = {expected}")));
        }
        total = total.add(&wm.mul(&c));
        wm = wm.mul(&w);
    }
    total.div(&PadicNum::from_int(p, 1 - p as i64, n)?)
}

/// Image of `v` in `Z_p`-adic numbers under `zeta_(p-1) -> teichmuller(g)^-1`,
/// `g` the fixed generator of `F_p`.
pub fn embed_value(v: &CycloNum, p: u64, n: u32) -> Result<PadicNum> {
    check_odd_prime(p)?;
    let g = make_field(p, 1)?.generator().code() as i64;
    embed_value_with_generator(v, p, g, n)
}

/// [`embed_value`] for an explicit generator `g` of `F_p^x`.
pub fn embed_value_with_generator(v: &CycloNum, p: u64, g: i64, n: u32) -> Result<PadicNum> {
    let c = v.conductor();
    if (p - 1) % c != 0 {
        return Err(Error::ConductorNotDividing { conductor: c, p_minus_1: p - 1 });
    }
    let zeta = teichmuller(g, p, n)?.inverse()?.pow(((p - 1) / c) as i64)?;
    let mut total = PadicNum::zero(p);
    let mut power = PadicNum::one(p, n)?;
    for coef in v.coeffs() {
        if !coef.is_zero() {
            total = total.add(&PadicNum::from_rational(p, coef, n)?.mul(&power));
        }
        power = power.mul(&zeta);
    }
    Ok(total)
}
