//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, z, .., z^(phi(N)-1)` modulo the
//! N-th cyclotomic polynomial, which makes the representation unique for a
//! fixed conductor. Binary operations on different conductors promote both
//! operands into `Q(zeta_lcm)`; equality is decided after the same promotion.
//!
//! The coefficient type is generic: [`crate::CycloInt`] (big integers) is the
//! ring `Z[zeta_N]` where Gauss sums live, [`crate::CycloNum`] (big rationals)
//! is the field itself.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{euler_phi, factor};
use crate::error::{Error, Result};
use crate::scalar::{from_i64, FieldScalar, Scalar};

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let poly = Arc::new(compute_cyclotomic(n));
    cache.write().unwrap().insert(n, poly.clone());
    poly
}

fn compute_cyclotomic(n: u64) -> Vec<i64> {
    assert!(n >= 1, "conductor must be positive");
    // Squarefree kernel first: Phi_{rp}(x) = Phi_r(x^p) / Phi_r(x) for p not dividing r.
    let primes = factor(n);
    let mut phi = vec![-1i64, 1];
    let mut radical = 1u64;
    for &(p, _) in &primes {
        let stretched = substitute_power(&phi, p as usize);
        phi = exact_div_monic(&stretched, &phi);
        radical *= p;
    }
    substitute_power(&phi, (n / radical) as usize)
}

fn substitute_power(poly: &[i64], k: usize) -> Vec<i64> {
    let mut out = vec![0i64; (poly.len() - 1) * k + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// An element of `Q(zeta_N)` with coefficients in `T`.
#[derive(Clone, Debug)]
pub struct Cyclotomic<T> {
    conductor: u64,
    coeffs: Vec<T>,
}

impl<T: Scalar> Cyclotomic<T> {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let deg = euler_phi(n) as usize;
        Cyclotomic { conductor: n, coeffs: vec![T::zero(); deg] }
    }

    pub fn one(n: u64) -> Self {
        Self::from_scalar(n, T::one())
    }

    pub fn from_scalar(n: u64, c: T) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c;
        z
    }

    pub fn from_int(n: u64, c: i64) -> Self {
        Self::from_scalar(n, from_i64(c))
    }

    /// `zeta_N^k`, for any integer `k`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![T::zero(); n as usize];
        v[e] = T::one();
        Self::reduce_from(n, v)
    }

    /// Build from an arbitrary-length coefficient vector in powers of zeta_N.
    pub fn from_coeffs(n: u64, coeffs: Vec<T>) -> Self {
        Self::reduce_from(n, coeffs)
    }

    /// Reduce `sum c_i zeta^i` modulo Phi_N.
    fn reduce_from(n: u64, mut v: Vec<T>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        if v.len() > deg {
            let terms: Vec<(usize, i64)> = phi[..deg]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (k, c))
                .collect();
            for i in (deg..v.len()).rev() {
                if v[i].is_zero() {
                    continue;
                }
                let c = std::mem::replace(&mut v[i], T::zero());
                let base = i - deg;
                for &(k, pk) in &terms {
                    match pk {
                        1 => v[base + k] -= &c,
                        -1 => v[base + k] += &c,
                        _ => v[base + k] -= c.clone() * from_i64::<T>(pk),
                    }
                }
            }
        }
        v.resize(deg, T::zero());
        Cyclotomic { conductor: n, coeffs: v }
    }

    /// Sum of `counts[j] * zeta_N^j`; the fast path for character sums.
    pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, n, "one count per power of zeta_N");
        Self::reduce_from(n, counts.iter().map(|&c| from_i64(c)).collect())
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Power-basis coefficients, length `phi(N)`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element is a constant in its power basis.
    /// Constants are exactly the elements of Q (the basis contains 1).
    pub fn as_scalar(&self) -> Option<&T> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Cyclotomic<U> {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Image under the ring embedding `Q(zeta_M) -> Q(zeta_N)`, `zeta_M -> zeta_N^(N/M)`.
    pub fn embed(&self, n: u64) -> Result<Self> {
        if n % self.conductor != 0 {
            return Err(Error::NotDivisor { m: self.conductor, n });
        }
        if n == self.conductor {
            return Ok(self.clone());
        }
        let step = (n / self.conductor) as usize;
        let mut v = vec![T::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::reduce_from(n, v))
    }

    /// The automorphism `zeta_N -> zeta_N^k`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.conductor;
        let k = k.rem_euclid(n as i64) as u64;
        if k.gcd(&n) != 1 {
            return Err(Error::NotCoprime { k: k as i64, modulus: n });
        }
        let mut v = vec![T::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * k % n) as usize] += c;
            }
        }
        Ok(Self::reduce_from(n, v))
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Floating-point value for diagnostics.
    pub fn to_complex<F: Float>(&self) -> Complex<F> {
        let n = F::from(self.conductor).unwrap();
        let tau = F::from(std::f64::consts::TAU).unwrap();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Complex::new(F::zero(), F::zero()), |acc, (i, c)| {
                let angle = tau * F::from(i).unwrap() / n;
                let c = F::from(c.to_f64().unwrap_or(f64::NAN)).unwrap();
                acc + Complex::from_polar(c, angle)
            })
    }

    /// Product with `zeta_N^k`, without a full multiplication.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let n = self.conductor;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut v = vec![T::zero(); shift + self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[shift + i] = c.clone();
        }
        Self::reduce_from(n, v)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.conductor);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn promote_pair(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.conductor.lcm(&b.conductor);
        (a.embed(n).unwrap(), b.embed(n).unwrap())
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Cyclotomic { conductor: self.conductor, coeffs }
    }

    fn sub_same(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Cyclotomic { conductor: self.conductor, coeffs }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let deg = self.coeffs.len();
        let mut v = vec![T::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a.clone() * b.clone();
                }
            }
        }
        Self::reduce_from(self.conductor, v)
    }
}

impl<T: FieldScalar> Cyclotomic<T> {
    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_N.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.conductor;
        let modulus: Vec<T> = cyclotomic_polynomial(n).iter().map(|&c| from_i64(c)).collect();
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<T> = vec![];
        let mut s1: Vec<T> = vec![T::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_N is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<T> = s0.into_iter().map(|x| x / c.clone()).collect();
        Ok(Self::reduce_from(n, inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Re-express this element over `Q(zeta_M)` if it lies in that subfield.
    ///
    /// Solves the linear system against the embedded power basis of
    /// `Q(zeta_M)`; `None` when the system is inconsistent.
    pub fn in_subfield(&self, m: u64) -> Result<Option<Self>> {
        let n = self.conductor;
        if n % m != 0 {
            return Err(Error::NotDivisor { m, n });
        }
        if m == n {
            return Ok(Some(self.clone()));
        }
        let rows = self.coeffs.len();
        let cols = euler_phi(m) as usize;
        // Augmented matrix, row-major: rows x (cols + 1).
        let mut mat: Vec<Vec<T>> = vec![vec![T::zero(); cols + 1]; rows];
        for j in 0..cols {
            let col = Self::root_of_unity(n, (j as u64 * (n / m)) as i64);
            for (i, c) in col.coeffs.into_iter().enumerate() {
                mat[i][j] = c;
            }
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            mat[i][cols] = c.clone();
        }
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(cols);
        for j in 0..cols {
            let Some(r) = (pivot_row..rows).find(|&r| !mat[r][j].is_zero()) else {
                continue;
            };
            mat.swap(pivot_row, r);
            let inv = T::one() / mat[pivot_row][j].clone();
            for x in mat[pivot_row].iter_mut() {
                *x *= &inv;
            }
            let prow = mat[pivot_row].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r != pivot_row && !row[j].is_zero() {
                    let f = row[j].clone();
                    for (x, p) in row.iter_mut().zip(&prow) {
                        if !p.is_zero() {
                            *x -= f.clone() * p.clone();
                        }
                    }
                }
            }
            pivots.push(j);
            pivot_row += 1;
        }
        if mat[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
            return Ok(None);
        }
        let mut out = vec![T::zero(); cols];
        for (r, &j) in pivots.iter().enumerate() {
            out[j] = mat[r][cols].clone();
        }
        Ok(Some(Cyclotomic { conductor: m, coeffs: out }))
    }

    /// The rational value of this element, if it is rational.
    pub fn to_rational(&self) -> Option<T> {
        self.as_scalar().cloned()
    }
}

fn trim<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x.clone() * y.clone();
        }
    }
    trim(out)
}

fn poly_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem<T: FieldScalar>(a: &[T], b: &[T]) -> (Vec<T>, Vec<T>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut q = vec![T::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone() / lead.clone();
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                rem[i + j] -= c.clone() * y.clone();
            }
        }
        q[i] = c;
    }
    rem.truncate(db);
    (trim(q), trim(rem))
}

impl<T: Scalar> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::promote_pair(self, other);
        a.coeffs == b.coeffs
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $same:ident) => {
        impl<T: Scalar> $trait<&Cyclotomic<T>> for &Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                if self.conductor == rhs.conductor {
                    self.$same(rhs)
                } else {
                    let (a, b) = Cyclotomic::promote_pair(self, rhs);
                    a.$same(&b)
                }
            }
        }
        impl<T: Scalar> $trait<Cyclotomic<T>> for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $trait<&Cyclotomic<T>> for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add_same);
binop!(Sub, sub, sub_same);
binop!(Mul, mul, mul_same);

impl<T: Scalar> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<T: Scalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -self.clone()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "z{}^{i}", self.conductor)?,
                _ => write!(f, "({c})*z{}^{i}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    #[serde(rename = "N")]
    n: u64,
    coeffs: Vec<String>,
}

impl<T: Scalar + fmt::Display> Serialize for Cyclotomic<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr { n: self.conductor, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de, T: Scalar + FromStr> Deserialize<'de> for Cyclotomic<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.n == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let deg = euler_phi(repr.n) as usize;
        if repr.coeffs.len() != deg {
            return Err(D::Error::custom(format!(
                "expected {deg} coefficients for conductor {}, got {}",
                repr.n,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<T>().map_err(|_| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        Ok(Cyclotomic { conductor: repr.n, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CycloInt, CycloNum};
    use num_rational::BigRational;

    fn z(n: u64, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient -2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
        assert_eq!(cyclotomic_polynomial(342).len() - 1, 108);
    }

    #[test]
    fn i_squared() {
        let i = z(4, 1);
        assert_eq!(&i * &i, CycloNum::from_int(4, -1));
    }

    #[test]
    fn geometric_sum_vanishes() {
        for n in [2u64, 3, 6, 10, 12, 15] {
            let s = (0..n as i64).fold(CycloInt::zero(n), |acc, k| acc + CycloInt::root_of_unity(n, k));
            assert!(s.is_zero(), "n = {n}");
        }
        assert_eq!(CycloInt::root_of_unity(1, 0), CycloInt::one(1));
    }

    #[test]
    fn inverse_of_root() {
        for n in [5u64, 7, 12] {
            for k in 0..n as i64 {
                assert_eq!(z(n, k).inverse().unwrap(), z(n, n as i64 - k));
            }
        }
        assert_eq!(CycloNum::zero(5).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn galois_and_conj() {
        assert_eq!(z(5, 1).galois(2).unwrap(), z(5, 2));
        assert_eq!(z(9, 2).conj(), z(9, -2));
        assert!(matches!(z(6, 1).galois(2), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn embedding() {
        assert_eq!(z(3, 1).embed(12).unwrap(), z(12, 4));
        assert!(matches!(z(3, 1).embed(10), Err(Error::NotDivisor { .. })));
        // Mixed conductors promote.
        assert_eq!(z(3, 1) * z(4, 1), z(12, 7));
    }

    #[test]
    fn subfield_membership() {
        assert_eq!(z(15, 5).in_subfield(3).unwrap(), Some(z(3, 1)));
        assert_eq!(z(15, 1).in_subfield(3).unwrap(), None);
        let real5 = z(5, 1) + z(5, 4);
        let lifted = real5.embed(15).unwrap();
        assert_eq!(lifted.in_subfield(5).unwrap().unwrap(), real5);
        let half = CycloNum::from_scalar(20, BigRational::new(1.into(), 2.into()));
        assert_eq!(half.in_subfield(1).unwrap().unwrap().to_rational(), Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn serde_roundtrip() {
        let a = z(7, 3) + CycloNum::from_scalar(7, BigRational::new(3.into(), 4.into()));
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"N\":7"));
        let b: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<CycloNum>(r#"{"N":7,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn float_diagnostics() {
        let v = z(8, 1).to_complex::<f64>();
        assert!((v.re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((v.im - 0.5f64.sqrt()).abs() < 1e-12);
        let w = z(8, 1).to_complex::<f32>();
        assert!((w.re - 0.5f32.sqrt()).abs() < 1e-6);
    }
}
