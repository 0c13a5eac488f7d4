//! Multiplicative and additive characters on finite fields and on
//! semisimple algebras, and their Gauss sums as exact cyclotomic integers.
//!
//! A multiplicative character is an exponent relative to the field's fixed
//! generator: `chi(g^j) = zeta_(q-1)^(e j)`. The additive character is always
//! the trace character `x -> zeta_p^(a Tr(x))` with an explicit twist `a`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ff::{make_field_with, FqElem, FqField, GeneratorChoice, DEFAULT_MAX_FIELD};
use crate::{CycloInt, CycloNum};

/// A multiplicative character of `F_q^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultChar {
    field: Arc<FqField>,
    e: u64,
}

impl MultChar {
    pub fn new(field: Arc<FqField>, e: i64) -> Self {
        let n = field.order() - 1;
        MultChar { e: e.rem_euclid(n as i64) as u64, field }
    }

    pub fn trivial(field: Arc<FqField>) -> Self {
        Self::new(field, 0)
    }

    /// The generator `omega` of the character group, `omega(g) = zeta_(q-1)`.
    pub fn omega(field: Arc<FqField>) -> Self {
        Self::new(field, 1)
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    /// `q - 1`, the conductor of the character values.
    pub fn value_conductor(&self) -> u64 {
        self.field.order() - 1
    }

    pub fn order(&self) -> u64 {
        let n = self.value_conductor();
        n / self.e.gcd(&n)
    }

    pub fn pow(&self, k: i64) -> Self {
        let n = self.value_conductor() as i128;
        Self::new(self.field.clone(), (self.e as i128 * k as i128).rem_euclid(n) as i64)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// Product with `omega^m`.
    pub fn shift(&self, m: i64) -> Self {
        Self::new(self.field.clone(), self.e as i64 + m)
    }

    /// `j` such that `chi(x) = zeta_(q-1)^j`.
    pub fn eval_exponent(&self, x: FqElem) -> Result<u64> {
        let n = self.value_conductor();
        let l = self.field.dlog(x)?;
        Ok(((self.e as u128 * l as u128) % n as u128) as u64)
    }

    pub fn eval(&self, x: FqElem) -> Result<CycloInt> {
        Ok(CycloInt::root_of_unity(self.value_conductor(), self.eval_exponent(x)? as i64))
    }

    /// `chi(-1)` as a sign.
    pub fn sign_at_minus_one(&self) -> i64 {
        let minus_one = self.field.neg(self.field.one());
        let j = self.eval_exponent(minus_one).expect("-1 is a unit");
        if j == 0 {
            1
        } else {
            debug_assert_eq!(2 * j, self.value_conductor());
            -1
        }
    }
}

/// `zeta_p^(a Tr(x))`.
pub fn add_char(field: &FqField, x: FqElem, a: u64) -> CycloInt {
    let p = field.characteristic();
    CycloInt::root_of_unity(p, ((a % p) * field.abs_trace(x) % p) as i64)
}

type GaussKey = (u64, u32, u32, u64, u64);

fn gauss_cache() -> &'static RwLock<HashMap<GaussKey, CycloInt>> {
    static CACHE: OnceLock<RwLock<HashMap<GaussKey, CycloInt>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `g(chi) = sum_{x in F_q^x} chi(x) zeta_p^(a Tr(x))`, in `Z[zeta_((q-1)p)]`.
/// Results are cached per field, exponent and twist.
pub fn gauss_sum(chi: &MultChar, a: u64) -> CycloInt {
    let field = &chi.field;
    let p = field.characteristic();
    let a = a % p;
    let key = (p, field.degree(), field.generator().code(), chi.e, a);
    if let Some(g) = gauss_cache().read().unwrap().get(&key) {
        return g.clone();
    }
    let g = gauss_sum_uncached(chi, a);
    gauss_cache().write().unwrap().entry(key).or_insert(g).clone()
}

fn gauss_sum_uncached(chi: &MultChar, a: u64) -> CycloInt {
    let field = &chi.field;
    let p = field.characteristic();
    let n = field.order() - 1;
    let conductor = n * p;
    let mut counts = vec![0i64; conductor as usize];
    for (j, x) in field.units().enumerate() {
        let chi_part = (chi.e as u128 * j as u128 % n as u128) as u64 * p;
        let psi_part = a * field.abs_trace(x) % p * n;
        counts[((chi_part + psi_part) % conductor) as usize] += 1;
    }
    CycloInt::from_exponent_counts(conductor, &counts)
}

/// `g(chi)^-1`, exact: `-1` for trivial chi, else `chi(-1) g(conj chi) / q`.
pub fn gauss_sum_inverse(chi: &MultChar, a: u64) -> CycloNum {
    let g = if chi.is_trivial() {
        CycloInt::from_int(chi.value_conductor() * chi.field.characteristic(), -1)
    } else {
        gauss_sum(&chi.conj(), a).scale(&BigInt::from(chi.sign_at_minus_one()))
    };
    let q = if chi.is_trivial() { 1 } else { chi.field.order() };
    to_rational(&g).scale(&BigRational::new(1.into(), q.into()))
}

pub fn to_rational(x: &CycloInt) -> CycloNum {
    x.map(|c| BigRational::from_integer(c.clone()))
}

/// One summand `F_(q^l)` of a semisimple algebra over `F_q`.
#[derive(Clone, Debug)]
pub struct Component {
    field: Arc<FqField>,
    degree: u32,
}

impl Component {
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// Degree over the base field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(q^l - 1)/(q - 1)`: the power realizing the norm to the base.
    pub fn norm_cofactor(&self, base_q: u64) -> u64 {
        (self.field.order() - 1) / (base_q - 1)
    }
}

/// A finite direct sum of field extensions of a base field `F_q`.
///
/// Each component of degree `l > 1` is `F_(q^l)` with its generator chosen
/// so that its norm to `F_q` is the base generator. The norm to the base of
/// `g_i^s` is then `g^s`, and `omega(N(x))` is a pure exponent shift.
#[derive(Clone, Debug)]
pub struct SemisimpleAlgebra {
    base: Arc<FqField>,
    components: Vec<Component>,
}

impl SemisimpleAlgebra {
    pub fn new(base: Arc<FqField>, degrees: &[u32]) -> Result<Self> {
        Self::with_bound(base, degrees, DEFAULT_MAX_FIELD)
    }

    pub fn with_bound(base: Arc<FqField>, degrees: &[u32], bound: u64) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::InternalInconsistency("an algebra needs components of positive degree".into()));
        }
        let (p, f) = (base.characteristic(), base.degree());
        let components = degrees
            .iter()
            .map(|&l| {
                let field = if l == 1 {
                    base.clone()
                } else {
                    make_field_with(p, f * l, GeneratorChoice::NormCompatible { base_f: f }, bound)?
                };
                Ok(Component { field, degree: l })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SemisimpleAlgebra { base, components })
    }

    /// `F_q^d`.
    pub fn split(base: Arc<FqField>, d: usize) -> Result<Self> {
        Self::new(base, &vec![1; d])
    }

    pub fn base(&self) -> &Arc<FqField> {
        &self.base
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Dimension over the base field.
    pub fn dimension(&self) -> u32 {
        self.components.iter().map(|c| c.degree).sum()
    }

    /// Number of elements, `q^dim`.
    pub fn size(&self) -> u64 {
        self.components.iter().map(|c| c.field.order()).product()
    }

    pub fn unit_count(&self) -> u64 {
        self.components.iter().map(|c| c.field.order() - 1).product()
    }

    /// Lcm of `p` and every component's `q_i - 1`: the conductor holding all
    /// additive and multiplicative character values.
    pub fn value_conductor(&self) -> u64 {
        self.components
            .iter()
            .fold(self.base.characteristic(), |acc, c| acc.lcm(&(c.field.order() - 1)))
    }

    fn same_base(&self, other: &SemisimpleAlgebra) -> bool {
        *self.base == *other.base
    }

    /// Scalar of `F_p` embedded diagonally.
    pub fn scalar(&self, a: i64) -> AlgebraElem {
        AlgebraElem { comps: self.components.iter().map(|c| c.field.from_int(a)).collect() }
    }

    pub fn elem(&self, comps: Vec<FqElem>) -> Result<AlgebraElem> {
        if comps.len() != self.components.len() {
            return Err(Error::FieldMismatch);
        }
        for (x, c) in comps.iter().zip(&self.components) {
            if c.field.elem(x.code()).is_none() {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(AlgebraElem { comps })
    }

    /// Every unit, as tuples of component elements (brute-force use only).
    pub fn units(&self) -> Vec<AlgebraElem> {
        let mut out = vec![Vec::new()];
        for c in &self.components {
            let mut next = Vec::with_capacity(out.len() * (c.field.order() as usize - 1));
            for prefix in &out {
                for u in c.field.units() {
                    let mut v = prefix.clone();
                    v.push(u);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(|comps| AlgebraElem { comps }).collect()
    }

    /// Absolute trace `sum_i Tr_i(x_i)` to `F_p`.
    pub fn trace(&self, x: &AlgebraElem) -> u64 {
        let p = self.base.characteristic();
        x.comps.iter().zip(&self.components).map(|(&xi, c)| c.field.abs_trace(xi)).sum::<u64>() % p
    }

    /// Norm of the `F_p`-linear multiplication map: `prod_i N_i(x_i)` in `F_p`.
    pub fn norm_to_prime_field(&self, x: &AlgebraElem) -> u64 {
        let p = self.base.characteristic();
        x.comps.iter().zip(&self.components).fold(1, |acc, (&xi, c)| acc * c.field.abs_norm(xi) % p)
    }

    /// Norm to the base field `F_q`: product of the component norms.
    pub fn norm_to_base(&self, x: &AlgebraElem) -> FqElem {
        let mut log = 0u64;
        let n = self.base.order() - 1;
        for (&xi, c) in x.comps.iter().zip(&self.components) {
            match c.field.dlog(xi) {
                Ok(s) => log = (log + s) % n,
                Err(_) => return self.base.zero(),
            }
        }
        self.base.exp_gen(log as i64)
    }

    /// Base-field discrete log of the norm of a unit.
    pub(crate) fn norm_log(&self, x: &AlgebraElem) -> Result<u64> {
        let n = self.base.order() - 1;
        x.comps.iter().zip(&self.components).try_fold(0u64, |acc, (&xi, c)| Ok((acc + c.field.dlog(xi)?) % n))
    }

    pub fn is_unit(&self, x: &AlgebraElem) -> bool {
        x.comps.iter().all(|c| c.code() != 0)
    }
}

/// An element `(x_1, .., x_r)` of a semisimple algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElem {
    pub comps: Vec<FqElem>,
}

/// `chi(x_1, .., x_r) = chi_1(x_1) .. chi_r(x_r)`.
#[derive(Clone, Debug)]
pub struct AlgebraChar {
    algebra: Arc<SemisimpleAlgebra>,
    chars: Vec<MultChar>,
}

impl AlgebraChar {
    /// From per-component exponents relative to each component's generator.
    pub fn new(algebra: Arc<SemisimpleAlgebra>, exponents: &[i64]) -> Result<Self> {
        if exponents.len() != algebra.components.len() {
            return Err(Error::FieldMismatch);
        }
        let chars = exponents
            .iter()
            .zip(&algebra.components)
            .map(|(&e, c)| MultChar::new(c.field.clone(), e))
            .collect();
        Ok(AlgebraChar { algebra, chars })
    }

    pub fn algebra(&self) -> &Arc<SemisimpleAlgebra> {
        &self.algebra
    }

    pub fn chars(&self) -> &[MultChar] {
        &self.chars
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.chars.iter().map(|c| c.e).collect()
    }

    pub fn pow(&self, k: i64) -> Self {
        AlgebraChar { algebra: self.algebra.clone(), chars: self.chars.iter().map(|c| c.pow(k)).collect() }
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// Product with `omega(N(x))^m`: on a component of degree l the exponent
    /// shifts by `m (q^l - 1)/(q - 1)`.
    pub fn shift_by_norm(&self, m: i64) -> Self {
        let q = self.algebra.base.order();
        let chars = self
            .chars
            .iter()
            .zip(&self.algebra.components)
            .map(|(chi, c)| {
                let step = c.norm_cofactor(q) as i128;
                let n = c.field.order() as i128 - 1;
                MultChar::new(c.field.clone(), (chi.e as i128 + m as i128 * step).rem_euclid(n) as i64)
            })
            .collect();
        AlgebraChar { algebra: self.algebra.clone(), chars }
    }

    /// Value exponent in `zeta_L`, `L` the algebra's value conductor.
    pub(crate) fn eval_exponent(&self, x: &AlgebraElem, conductor: u64) -> Result<u64> {
        let mut acc = 0u64;
        for (chi, &xi) in self.chars.iter().zip(&x.comps) {
            let j = chi.eval_exponent(xi)?;
            acc = (acc + j * (conductor / chi.value_conductor())) % conductor;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &AlgebraElem) -> Result<CycloInt> {
        if !self.algebra.is_unit(x) {
            return Err(Error::NotUnit);
        }
        let l = self.algebra.value_conductor();
        Ok(CycloInt::root_of_unity(l, self.eval_exponent(x, l)? as i64))
    }

    /// `chi(-1)` as a sign.
    pub fn sign_at_minus_one(&self) -> i64 {
        self.chars.iter().map(MultChar::sign_at_minus_one).product()
    }
}

/// `g_A(chi)` by the component product formula `prod_i g(chi_i)`.
pub fn algebra_gauss_sum(chi: &AlgebraChar, a: u64) -> CycloInt {
    let p = chi.algebra.base.characteristic();
    chi.chars.iter().fold(CycloInt::one(p), |acc, c| acc * gauss_sum(c, a))
}

/// `g_A(chi)^-1` as a product of exact component inverses.
pub fn algebra_gauss_sum_inverse(chi: &AlgebraChar, a: u64) -> CycloNum {
    let p = chi.algebra.base.characteristic();
    chi.chars.iter().fold(CycloNum::one(p), |acc, c| acc * gauss_sum_inverse(c, a))
}

/// `g_A(chi) = sum_{x in A^x} psi(x) chi(x)` by enumerating every unit.
pub fn algebra_gauss_sum_brute(chi: &AlgebraChar, a: u64) -> CycloInt {
    let alg = &chi.algebra;
    let p = alg.base.characteristic();
    let l = alg.value_conductor();
    let mut counts = vec![0i64; l as usize];
    for x in alg.units() {
        let psi = a % p * alg.trace(&x) % p * (l / p);
        let c = chi.eval_exponent(&x, l).expect("units only");
        counts[((psi + c) % l) as usize] += 1;
    }
    CycloInt::from_exponent_counts(l, &counts)
}

/// The integer f with `g_A(chi) conj(g_A(chi)) = q^f`.
pub fn gauss_norm_exponent(chi: &AlgebraChar) -> Result<u32> {
    let g = algebra_gauss_sum(chi, 1);
    let norm = &g * &g.conj();
    let value = norm
        .as_scalar()
        .cloned()
        .ok_or_else(|| Error::InternalInconsistency("g_A conj(g_A) is not rational".into()))?;
    let q = BigInt::from(chi.algebra.base.order());
    let mut f = 0u32;
    let mut rest = value.clone();
    while rest > BigInt::from(1) && (&rest % &q) == BigInt::from(0) {
        rest /= &q;
        f += 1;
    }
    if rest != BigInt::from(1) {
        return Err(Error::InternalInconsistency(format!("g_A conj(g_A) = {value} is not a power of q = {q}")));
    }
    Ok(f)
}

/// Sum of component degrees carrying a nontrivial character.
pub fn expected_norm_exponent(chi: &AlgebraChar) -> u32 {
    chi.chars
        .iter()
        .zip(&chi.algebra.components)
        .filter(|(c, _)| !c.is_trivial())
        .map(|(_, comp)| comp.degree)
        .sum()
}

pub(crate) fn check_same_base(a: &SemisimpleAlgebra, b: &SemisimpleAlgebra) -> Result<()> {
    if a.same_base(b) {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}
