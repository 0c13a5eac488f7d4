//! Explicit finite fields `F_(p^f)` with a fixed generator and full
//! discrete-logarithm tables.
//!
//! Elements are packed into a `u32` code `c_0 + c_1 p + .. + c_(f-1) p^(f-1)`
//! for the residue `c_0 + c_1 a + ..` of `F_p[a]/(modulus)`. Multiplication,
//! inversion and powers go through the log/exp tables; addition is digitwise.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{factor, is_prime};
use crate::error::{Error, Result};
use crate::fp_poly;

/// Largest field built unless a caller raises the bound.
pub const DEFAULT_MAX_FIELD: u64 = 1 << 16;

/// An element of some [`FqField`]. Carries no field reference; operations
/// are methods on the owning field.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub fn code(self) -> u32 {
        self.0
    }
}

/// How the fixed generator of the unit group is chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorChoice {
    /// The `rank`-th primitive element in lexicographic order (0 = smallest).
    Lex(u32),
    /// The smallest primitive element whose norm to the subfield of degree
    /// `base_f` is the fixed generator of that subfield.
    NormCompatible { base_f: u32 },
}

#[derive(Debug)]
pub struct FqField {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FqElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    abs_trace: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus && self.generator == other.generator
    }
}

impl Eq for FqField {}

type FieldKey = (u64, u32, GeneratorChoice);

fn field_cache() -> &'static RwLock<HashMap<FieldKey, Arc<FqField>>> {
    static CACHE: OnceLock<RwLock<HashMap<FieldKey, Arc<FqField>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `F_(p^f)` with the smallest irreducible modulus and smallest generator.
pub fn make_field(p: u64, f: u32) -> Result<Arc<FqField>> {
    make_field_with(p, f, GeneratorChoice::Lex(0), DEFAULT_MAX_FIELD)
}

/// Like [`make_field`] with an explicit generator choice and size bound.
/// Fields are cached, so equal requests return the same `Arc`.
pub fn make_field_with(p: u64, f: u32, choice: GeneratorChoice, bound: u64) -> Result<Arc<FqField>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::NotSubfield { e: 0, f: 0 });
    }
    let size = p.checked_pow(f).filter(|&q| q <= bound).ok_or(Error::FieldTooLarge {
        size: p.saturating_pow(f),
        bound,
    })?;
    let key = (p, f, choice);
    if let Some(field) = field_cache().read().unwrap().get(&key) {
        return Ok(field.clone());
    }
    let field = Arc::new(FqField::build(p, f, size, choice)?);
    Ok(field_cache().write().unwrap().entry(key).or_insert(field).clone())
}

/// Codes of all field elements in lexicographic order of their coefficient
/// vectors, the constant coefficient most significant.
fn lex_codes(p: u64, f: u32) -> impl Iterator<Item = u32> {
    let q = p.pow(f);
    (0..q).map(move |i| {
        let mut code = 0u64;
        let mut rest = i;
        for k in (0..f).rev() {
            code += (rest % p) * p.pow(k);
            rest /= p;
        }
        // digit k of i (from the top) becomes coefficient k
        code as u32
    })
}

impl FqField {
    fn build(p: u64, f: u32, q: u64, choice: GeneratorChoice) -> Result<FqField> {
        let modulus = Self::smallest_irreducible(p, f);
        let mut field = FqField {
            p,
            f,
            q,
            modulus,
            generator: FqElem(0),
            exp: Vec::new(),
            log: Vec::new(),
            abs_trace: Vec::new(),
        };
        let generator = match choice {
            GeneratorChoice::Lex(rank) => field
                .primitive_elements_lex()
                .nth(rank as usize)
                .ok_or_else(|| Error::InternalInconsistency(format!("F_{q} has fewer than {} generators", rank + 1)))?,
            GeneratorChoice::NormCompatible { base_f } => field.norm_compatible_generator(base_f)?,
        };
        field.install_generator(generator);
        Ok(field)
    }

    /// Lexicographically smallest monic irreducible of degree f (low degree first).
    fn smallest_irreducible(p: u64, f: u32) -> Vec<u64> {
        for code in lex_codes(p, f) {
            let mut poly = field_digits(code, p, f);
            poly.push(1);
            if fp_poly::is_irreducible(&poly, p) {
                return poly;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn primitive_elements_lex(&self) -> impl Iterator<Item = FqElem> + '_ {
        let order = self.q - 1;
        let primes = factor(order);
        lex_codes(self.p, self.f).map(FqElem).filter(move |&x| {
            x.0 != 0 && self.pow_raw(x, order) == self.one_raw() && primes.iter().all(|&(r, _)| self.pow_raw(x, order / r) != self.one_raw())
        })
    }

    fn norm_compatible_generator(&self, base_f: u32) -> Result<FqElem> {
        if base_f == 0 || self.f % base_f != 0 {
            return Err(Error::NotSubfield { e: base_f, f: self.f });
        }
        let base = make_field(self.p, base_f)?;
        let embedding = self.find_embedding(&base);
        let target = embedding[base.generator.0 as usize];
        let cofactor = (self.q - 1) / (base.q - 1);
        self.primitive_elements_lex()
            .find(|&x| self.pow_raw(x, cofactor) == target)
            .ok_or_else(|| Error::InternalInconsistency("no norm-compatible generator".into()))
    }

    fn install_generator(&mut self, g: FqElem) {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![NO_LOG; self.q as usize];
        let mut x = self.one_raw();
        for j in 0..n {
            exp.push(x.0);
            log[x.0 as usize] = j as u32;
            x = self.mul_raw(x, g);
        }
        debug_assert_eq!(x, self.one_raw(), "generator order must be q - 1");
        self.generator = g;
        self.exp = exp;
        self.log = log;
        let abs_trace = (0..self.q as u32)
            .map(|c| {
                let t = self.trace_rel(FqElem(c), self.f, 1);
                t.0
            })
            .collect();
        self.abs_trace = abs_trace;
    }

    /// Images of the elements of `sub` (indexed by code) under a field
    /// embedding `sub -> self`, sending the residue class `a` of `sub` to the
    /// smallest root of `sub`'s modulus in `self`.
    pub fn find_embedding(&self, sub: &FqField) -> Vec<FqElem> {
        assert_eq!(self.p, sub.p);
        assert_eq!(self.f % sub.f, 0, "not a subfield");
        let root = (0..self.q as u32)
            .map(FqElem)
            .find(|&r| {
                let mut acc = FqElem(0);
                for &c in sub.modulus.iter().rev() {
                    acc = self.add(self.mul_raw(acc, r), self.from_int(c as i64));
                }
                acc == FqElem(0)
            })
            .expect("modulus of a subfield has a root");
        (0..sub.q as u32)
            .map(|code| {
                let digits = field_digits(code, sub.p, sub.f);
                let mut acc = FqElem(0);
                for &c in digits.iter().rev() {
                    acc = self.add(self.mul_raw(acc, root), self.from_int(c as i64));
                }
                acc
            })
            .collect()
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus, lowest degree first (length f + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        self.one_raw()
    }

    fn one_raw(&self) -> FqElem {
        FqElem(1)
    }

    pub fn from_int(&self, a: i64) -> FqElem {
        FqElem(a.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        let mut code = 0u64;
        let mut pw = 1u64;
        for k in 0..self.f as usize {
            code += (coeffs.get(k).copied().unwrap_or(0) % self.p) * pw;
            pw *= self.p;
        }
        FqElem(code as u32)
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u64> {
        field_digits(x.0, self.p, self.f)
    }

    /// Element from its code, if in range.
    pub fn elem(&self, code: u32) -> Option<FqElem> {
        ((code as u64) < self.q).then_some(FqElem(code))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q as u32).map(FqElem)
    }

    /// Units in the order `g^0, g^1, .., g^(q-2)`.
    pub fn units(&self) -> impl Iterator<Item = FqElem> + '_ {
        self.exp.iter().map(|&c| FqElem(c))
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        if self.f == 1 {
            return FqElem(((x.0 as u64 + y.0 as u64) % self.p) as u32);
        }
        let (mut a, mut b) = (x.0 as u64, y.0 as u64);
        let (mut code, mut pw) = (0u64, 1u64);
        for _ in 0..self.f {
            code += ((a % self.p + b % self.p) % self.p) * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        FqElem(code as u32)
    }

    pub fn neg(&self, x: FqElem) -> FqElem {
        let digits: Vec<u64> = self.coeffs(x).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.from_coeffs(&digits)
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        if x.0 == 0 || y.0 == 0 {
            return FqElem(0);
        }
        let j = (self.log[x.0 as usize] as u64 + self.log[y.0 as usize] as u64) % (self.q - 1);
        FqElem(self.exp[j as usize])
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem> {
        let j = self.dlog(x)?;
        Ok(self.exp_gen(-(j as i64)))
    }

    /// `x^e` for any integer `e` (negative powers require a unit).
    pub fn pow(&self, x: FqElem, e: i64) -> Result<FqElem> {
        if x.0 == 0 {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(FqElem(0)),
                _ => Err(Error::ZeroElement),
            };
        }
        let j = self.log[x.0 as usize] as i128 * e as i128;
        Ok(FqElem(self.exp[j.rem_euclid((self.q - 1) as i128) as usize]))
    }

    /// `g^j` for the fixed generator.
    pub fn exp_gen(&self, j: i64) -> FqElem {
        FqElem(self.exp[j.rem_euclid((self.q - 1) as i64) as usize])
    }

    /// Discrete logarithm to the fixed generator, in `[0, q - 2]`.
    pub fn dlog(&self, x: FqElem) -> Result<u64> {
        match self.log.get(x.0 as usize) {
            Some(&j) if j != NO_LOG => Ok(j as u64),
            _ => Err(Error::ZeroElement),
        }
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, x: FqElem) -> FqElem {
        self.pow_raw(x, self.p)
    }

    /// Whether `x` lies in the subfield `F_(p^e)`.
    pub fn in_subfield(&self, x: FqElem, e: u32) -> bool {
        self.f % e == 0 && self.pow_raw(x, self.p.pow(e)) == x
    }

    /// Trace from `F_(p^top)` down to `F_(p^bottom)` of an element of the
    /// subfield `F_(p^top)`: `sum_i x^(p^(bottom*i))`, `i < top/bottom`.
    pub fn trace_rel(&self, x: FqElem, top: u32, bottom: u32) -> FqElem {
        let step = self.p.pow(bottom);
        let mut acc = FqElem(0);
        let mut y = x;
        for _ in 0..top / bottom {
            acc = self.add(acc, y);
            y = self.pow_raw(y, step);
        }
        acc
    }

    /// Norm from `F_(p^top)` down to `F_(p^bottom)`, same conventions as [`Self::trace_rel`].
    pub fn norm_rel(&self, x: FqElem, top: u32, bottom: u32) -> FqElem {
        let step = self.p.pow(bottom);
        let mut acc = self.one();
        let mut y = x;
        for _ in 0..top / bottom {
            acc = self.mul_raw(acc, y);
            y = self.pow_raw(y, step);
        }
        acc
    }

    /// Trace to the subfield `F_(p^e)`; the result is an element of this field lying in it.
    pub fn trace(&self, x: FqElem, e: u32) -> Result<FqElem> {
        if e == 0 || self.f % e != 0 {
            return Err(Error::NotSubfield { e, f: self.f });
        }
        Ok(self.trace_rel(x, self.f, e))
    }

    /// Norm to the subfield `F_(p^e)`.
    pub fn norm(&self, x: FqElem, e: u32) -> Result<FqElem> {
        if e == 0 || self.f % e != 0 {
            return Err(Error::NotSubfield { e, f: self.f });
        }
        Ok(self.norm_rel(x, self.f, e))
    }

    /// Absolute trace to `F_p`, as an integer in `[0, p)`.
    pub fn abs_trace(&self, x: FqElem) -> u64 {
        self.abs_trace[x.0 as usize] as u64
    }

    /// Absolute norm to `F_p`, as an integer in `[0, p)`.
    pub fn abs_norm(&self, x: FqElem) -> u64 {
        self.norm_rel(x, self.f, 1).0 as u64
    }

    /// Polynomial notation in the formal variable `a`, e.g. `2*a^2 + a + 1`.
    pub fn format(&self, x: FqElem) -> String {
        let digits = self.coeffs(x);
        let mut out = String::new();
        for (k, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match (k, c) {
                (0, c) => write!(out, "{c}").unwrap(),
                (1, 1) => out.push('a'),
                (1, c) => write!(out, "{c}*a").unwrap(),
                (k, 1) => write!(out, "a^{k}").unwrap(),
                (k, c) => write!(out, "{c}*a^{k}").unwrap(),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    // Table-free arithmetic, used while the tables are being built.

    fn mul_raw(&self, x: FqElem, y: FqElem) -> FqElem {
        if !self.log.is_empty() {
            return self.mul(x, y);
        }
        let a = field_digits(x.0, self.p, self.f);
        let b = field_digits(y.0, self.p, self.f);
        let prod = fp_poly::rem(&fp_poly::mul(&a, &b, self.p), &self.modulus, self.p);
        self.from_coeffs(&prod)
    }

    fn pow_raw(&self, x: FqElem, mut e: u64) -> FqElem {
        if !self.log.is_empty() {
            if x.0 == 0 {
                return if e == 0 { self.one_raw() } else { x };
            }
            let n = self.q - 1;
            let j = (self.log[x.0 as usize] as u64 * (e % n)) % n;
            return FqElem(self.exp[j as usize]);
        }
        let mut acc = self.one_raw();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            b = self.mul_raw(b, b);
            e >>= 1;
        }
        acc
    }
}

fn field_digits(code: u32, p: u64, f: u32) -> Vec<u64> {
    let mut c = code as u64;
    (0..f)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pow_mod;
    use proptest::prelude::*;

    #[test]
    fn prime_field_five() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.generator(), f5.from_int(2));
        // oracle: 2^4 = 16 = 1, 2^2 = 4 != 1
        assert_eq!(pow_mod(2, 4, 5), 1);
        assert_ne!(pow_mod(2, 2, 5), 1);
        assert_eq!(f5.modulus(), &[0, 1]);
    }

    #[test]
    fn four_elements() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.order(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(make_field_with(2, 17, GeneratorChoice::Lex(0), 1 << 17).is_ok());
    }

    #[test]
    fn dlog_basics() {
        let f = make_field(3, 3).unwrap();
        assert_eq!(f.dlog(f.one()).unwrap(), 0);
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
        assert_eq!(f.dlog(f.zero()), Err(Error::ZeroElement));
        for j in 0..f.order() - 1 {
            assert_eq!(f.dlog(f.exp_gen(j as i64)).unwrap(), j);
        }
    }

    #[test]
    fn trace_of_one() {
        for (p, deg) in [(3u64, 2u32), (5, 3), (2, 4), (7, 2)] {
            let f = make_field(p, deg).unwrap();
            assert_eq!(f.abs_trace(f.one()), deg as u64 % p);
        }
    }

    #[test]
    fn norm_of_generator_generates_prime_field() {
        for (p, deg) in [(3u64, 4u32), (5, 2), (7, 2), (2, 5)] {
            let f = make_field(p, deg).unwrap();
            let n = f.abs_norm(f.generator());
            let order = (1..p).find(|&k| pow_mod(n, k, p) == 1).unwrap();
            assert_eq!(order, p - 1);
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = make_field(3, 4).unwrap();
        let fixed: Vec<_> = f.elements().filter(|&x| f.frobenius(x) == x).collect();
        assert_eq!(fixed, vec![f.from_int(0), f.from_int(1), f.from_int(2)]);
    }

    #[test]
    fn trace_and_norm_transitive() {
        let f = make_field(3, 4).unwrap();
        for x in f.elements() {
            let t2 = f.trace(x, 2).unwrap();
            assert!(f.in_subfield(t2, 2));
            assert_eq!(f.trace_rel(t2, 2, 1), f.trace(x, 1).unwrap());
            let n2 = f.norm(x, 2).unwrap();
            assert_eq!(f.norm_rel(n2, 2, 1), f.norm(x, 1).unwrap());
        }
        assert_eq!(f.trace(f.one(), 3), Err(Error::NotSubfield { e: 3, f: 4 }));
    }

    #[test]
    fn norm_compatible_generator() {
        let base = make_field(3, 2).unwrap();
        let ext = make_field_with(3, 4, GeneratorChoice::NormCompatible { base_f: 2 }, DEFAULT_MAX_FIELD).unwrap();
        let emb = ext.find_embedding(&base);
        let n = ext.norm(ext.generator(), 2).unwrap();
        assert_eq!(n, emb[base.generator().code() as usize]);
        // The embedding is a ring homomorphism.
        for x in base.elements() {
            for y in base.elements() {
                assert_eq!(emb[base.mul(x, y).code() as usize], ext.mul(emb[x.code() as usize], emb[y.code() as usize]));
                assert_eq!(emb[base.add(x, y).code() as usize], ext.add(emb[x.code() as usize], emb[y.code() as usize]));
            }
        }
    }

    #[test]
    fn second_generator_differs() {
        let a = make_field_with(7, 1, GeneratorChoice::Lex(0), DEFAULT_MAX_FIELD).unwrap();
        let b = make_field_with(7, 1, GeneratorChoice::Lex(1), DEFAULT_MAX_FIELD).unwrap();
        assert_eq!(a.generator(), a.from_int(3));
        assert_eq!(b.generator(), b.from_int(5));
    }

    #[test]
    fn formatting() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.format(f.from_coeffs(&[1, 2])), "2*a + 1");
        assert_eq!(f.format(f.zero()), "0");
    }

    proptest! {
        #[test]
        fn field_laws(a in 0u32..81, b in 0u32..81, c in 0u32..81) {
            let f = make_field(3, 4).unwrap();
            let (a, b, c) = (FqElem(a), FqElem(b), FqElem(c));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            prop_assert_eq!(f.abs_trace(f.add(a, b)), (f.abs_trace(a) + f.abs_trace(b)) % 3);
            if a.0 != 0 && b.0 != 0 {
                prop_assert_eq!(f.pow(a, 80).unwrap(), f.one());
                prop_assert_eq!(f.dlog(f.mul(a, b)).unwrap(), (f.dlog(a).unwrap() + f.dlog(b).unwrap()) % 80);
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }
}
