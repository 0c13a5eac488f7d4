//! Hypergeometric parameter multisets and the combinatorics derived from
//! them: common denominator, Galois stabilizer, p-orbits, the exponent
//! `Lambda(m)`, the defects `delta` / `Delta`, and the defining polynomials.
//!
//! Every entry is stored as its representative in `[0, 1)`, so a parameter
//! written `1` is stored as `0`. All floor and fractional-part formulas below
//! use these representatives.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::units_mod;
use crate::error::{Error, Result};
use crate::fp_poly;
use crate::CycloNum;

/// Exact rational parameter.
pub type Rat = Ratio<i64>;

pub fn frac(x: Rat) -> Rat {
    x - x.floor()
}

fn floor_i64(x: Rat) -> i64 {
    x.floor().to_integer()
}

/// The multisets alpha and beta, reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HGParams {
    alpha: Vec<Rat>,
    beta: Vec<Rat>,
}

/// One p-orbit of a parameter multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Chosen representative (the smallest member).
    #[serde(serialize_with = "ser_rat")]
    pub representative: Rat,
    /// Members in the order `r, p r, p^2 r, ..` (mod 1).
    #[serde(serialize_with = "ser_rats")]
    pub members: Vec<Rat>,
    /// Indices into the parameter list, one per member.
    pub indices: Vec<usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct POrbits {
    pub alpha: Vec<Orbit>,
    pub beta: Vec<Orbit>,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rats<S: serde::Serializer>(xs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

fn sorted(v: &[Rat]) -> Vec<Rat> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Parse a comma-separated list such as `1/5,2/5,3/5,4/5` or `1,1`.
pub fn parse_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || Error::Parse(t.to_string());
            match t.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    if d == 0 {
                        return Err(bad());
                    }
                    Ok(Rat::new(n, d))
                }
                None => t.parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
            }
        })
        .collect()
}

impl HGParams {
    pub fn new(alpha: &[Rat], beta: &[Rat]) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::LengthMismatch { alpha: alpha.len(), beta: beta.len() });
        }
        let alpha: Vec<Rat> = alpha.iter().map(|&a| frac(a)).collect();
        let beta: Vec<Rat> = beta.iter().map(|&b| frac(b)).collect();
        for a in &alpha {
            if let Some(b) = beta.iter().find(|&b| b == a) {
                return Err(Error::NotDisjointModZ { alpha: a.to_string(), beta: b.to_string() });
            }
        }
        Ok(HGParams { alpha, beta })
    }

    /// Parse both lists from comma-separated fraction strings.
    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Self::new(&parse_list(alpha)?, &parse_list(beta)?)
    }

    pub fn alpha(&self) -> &[Rat] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rat] {
        &self.beta
    }

    pub fn d(&self) -> usize {
        self.alpha.len()
    }

    /// `D`: lcm of all denominators.
    pub fn common_denominator(&self) -> u64 {
        self.alpha.iter().chain(&self.beta).fold(1i64, |acc, x| acc.lcm(x.denom())) as u64
    }

    /// `(k alpha, k beta)` mod Z.
    pub fn conjugate(&self, k: i64) -> Result<HGParams> {
        let dd = self.common_denominator();
        if k.gcd(&(dd as i64)) != 1 {
            return Err(Error::NotCoprime { k, modulus: dd });
        }
        let kk = Rat::from_integer(k);
        Ok(HGParams {
            alpha: self.alpha.iter().map(|&a| frac(a * kk)).collect(),
            beta: self.beta.iter().map(|&b| frac(b * kk)).collect(),
        })
    }

    /// Equality as multisets.
    pub fn same_multisets(&self, other: &HGParams) -> bool {
        sorted(&self.alpha) == sorted(&other.alpha) && sorted(&self.beta) == sorted(&other.beta)
    }

    /// Whether multiplication by `k` permutes both multisets mod Z.
    fn fixed_by(&self, k: i64) -> bool {
        let kk = Rat::from_integer(k);
        let ka: Vec<Rat> = self.alpha.iter().map(|&a| frac(a * kk)).collect();
        let kb: Vec<Rat> = self.beta.iter().map(|&b| frac(b * kk)).collect();
        sorted(&ka) == sorted(&self.alpha) && sorted(&kb) == sorted(&self.beta)
    }

    /// `H = { k in (Z/DZ)^x : k alpha = alpha, k beta = beta }`, sorted.
    pub fn galois_stabilizer(&self) -> Vec<u64> {
        let dd = self.common_denominator();
        units_mod(dd).into_iter().filter(|&k| self.fixed_by(k as i64)).collect()
    }

    pub fn is_defined_over_q(&self) -> bool {
        let dd = self.common_denominator();
        self.galois_stabilizer().len() == units_mod(dd).len()
    }

    /// Representatives of `(Z/DZ)^x / H`, the smallest element of each coset.
    pub fn coset_representatives(&self) -> Vec<u64> {
        let dd = self.common_denominator();
        let h = self.galois_stabilizer();
        let mut seen = std::collections::BTreeSet::new();
        let mut reps = Vec::new();
        for k in units_mod(dd) {
            if seen.contains(&k) {
                continue;
            }
            reps.push(k);
            for &s in &h {
                seen.insert(k * s % dd.max(1));
            }
        }
        reps
    }

    /// `p mod D` lies in the stabilizer, i.e. p splits in the field of definition.
    pub fn splits_in_k(&self, p: u64) -> bool {
        let dd = self.common_denominator();
        p.gcd(&dd) == 1 && self.fixed_by((p % dd) as i64)
    }

    /// `Lambda(m)` in floor form:
    /// `sum_i -floor(a_i + m/(p-1)) + floor(a_i) - floor(-b_i - m/(p-1)) + floor(-b_i)`.
    pub fn lambda(&self, p: u64, m: i64) -> i64 {
        let s = Rat::new(m, p as i64 - 1);
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| -floor_i64(a + s) + floor_i64(a) - floor_i64(-b - s) + floor_i64(-b))
            .sum()
    }

    /// `Lambda(m)` in fractional-part form, kept exact.
    pub fn lambda_fractional(&self, p: u64, m: i64) -> Rat {
        let s = Rat::new(m, p as i64 - 1);
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| frac(a + s) - frac(a) + frac(-b - s) - frac(-b))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// The step function `sum_i floor(x + a_i) - floor(a_i) + floor(-x - b_i) - floor(-b_i)`.
    pub fn defect(&self, x: Rat) -> i64 {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| floor_i64(x + a) - floor_i64(a) + floor_i64(-x - b) - floor_i64(-b))
            .sum()
    }

    /// Points where the defect can change, with 0 and 1, sorted and deduplicated.
    fn defect_candidates(&self) -> Vec<Rat> {
        let mut pts: Vec<Rat> = vec![Rat::zero(), Rat::one()];
        pts.extend(self.alpha.iter().chain(&self.beta).map(|&x| frac(-x)));
        pts.sort();
        pts.dedup();
        let mids: Vec<Rat> = pts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
        pts.extend(mids);
        pts
    }

    /// `delta = max_{x in [0,1]}` of [`Self::defect`].
    pub fn delta(&self) -> i64 {
        self.defect_candidates().into_iter().map(|x| self.defect(x)).max().unwrap()
    }

    /// `Delta = max_k delta(k alpha, k beta)` over all units k mod D.
    pub fn big_delta(&self) -> i64 {
        let dd = self.common_denominator();
        units_mod(dd)
            .into_iter()
            .map(|k| self.conjugate(k as i64).expect("unit").delta())
            .max()
            .unwrap()
    }

    fn orbits_of(list: &[Rat], p: u64) -> Vec<Orbit> {
        let pp = Rat::from_integer(p as i64);
        let mut used = vec![false; list.len()];
        let mut order: Vec<usize> = (0..list.len()).collect();
        order.sort_by_key(|&i| list[i]);
        let mut out = Vec::new();
        for &start in &order {
            if used[start] {
                continue;
            }
            let rep = list[start];
            let mut members = vec![];
            let mut indices = vec![];
            let mut x = rep;
            loop {
                let idx = (0..list.len()).find(|&i| !used[i] && list[i] == x).expect("p permutes the multiset");
                used[idx] = true;
                members.push(x);
                indices.push(idx);
                x = frac(x * pp);
                if x == rep {
                    break;
                }
            }
            out.push(Orbit { representative: rep, members, indices });
        }
        out
    }

    /// Orbits of `x -> p x mod Z` on alpha and on beta.
    pub fn p_orbits(&self, p: u64) -> Result<POrbits> {
        if !self.splits_in_k(p) {
            return Err(Error::DoesNotSplit { p });
        }
        Ok(POrbits { alpha: Self::orbits_of(&self.alpha, p), beta: Self::orbits_of(&self.beta, p) })
    }

    fn expand_roots(list: &[Rat], dd: u64) -> Vec<CycloNum> {
        // prod_j (x - zeta_D^(D a_j)), coefficients lowest degree first
        let mut poly = vec![CycloNum::one(dd)];
        for &a in list {
            let k = (a * Rat::from_integer(dd as i64)).to_integer();
            let root = CycloNum::root_of_unity(dd, k);
            let mut next = vec![CycloNum::zero(dd); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &root);
            }
            poly = next;
        }
        poly
    }

    /// `A(x) = prod (x - e^(2 pi i a_j))` and `B(x)` over `Q(zeta_D)`, lowest degree first.
    pub fn defining_polys(&self) -> (Vec<CycloNum>, Vec<CycloNum>) {
        let dd = self.common_denominator();
        (Self::expand_roots(&self.alpha, dd), Self::expand_roots(&self.beta, dd))
    }

    /// `A` and `B` as integer polynomials, when every coefficient is a rational integer.
    pub fn integer_polys(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let to_int = |poly: Vec<CycloNum>| -> Option<Vec<BigInt>> {
            poly.iter()
                .map(|c| c.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer()))
                .collect()
        };
        let (a, b) = self.defining_polys();
        Some((to_int(a)?, to_int(b)?))
    }

    /// Degrees of the irreducible factors of `A(x)` and `B(x)` modulo p, for
    /// parameters defined over Q.
    pub fn factor_degrees_mod_p(&self, p: u64) -> Option<(Vec<usize>, Vec<usize>)> {
        let (a, b) = self.integer_polys()?;
        let reduce = |poly: &[BigInt]| -> Vec<u64> {
            poly.iter()
                .map(|c| {
                    let r = c.mod_floor(&BigInt::from(p));
                    r.to_u64().unwrap()
                })
                .collect()
        };
        Some((fp_poly::factor_degrees(&reduce(&a), p), fp_poly::factor_degrees(&reduce(&b), p)))
    }

    /// `(q - 1) a` and `(q - 1) b` are all integers.
    pub fn satisfies_division_assumption(&self, q: u64) -> bool {
        (q - 1) % self.common_denominator() == 0
    }

    /// Exponents `(q - 1) a_i` (mod q - 1); `None` when the division assumption fails.
    pub fn exponents(list: &[Rat], q: u64) -> Option<Vec<u64>> {
        list.iter()
            .map(|&a| {
                let e = a * Rat::from_integer(q as i64 - 1);
                e.is_integer().then(|| e.to_integer().rem_euclid(q as i64 - 1) as u64)
            })
            .collect()
    }

    /// `|beta| = sum b_j` with the `[0, 1)` representatives.
    pub fn beta_sum(&self) -> Rat {
        self.beta.iter().fold(Rat::zero(), |acc, &b| acc + b)
    }
}

impl fmt::Display for HGParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rat]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "alpha=({}) beta=({})", join(&self.alpha), join(&self.beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn params(a: &str, b: &str) -> HGParams {
        HGParams::parse(a, b).unwrap()
    }

    /// Independent oracle: the maximum of the defect over a fine grid.
    fn delta_by_grid(p: &HGParams) -> i64 {
        let steps = 2 * p.common_denominator().lcm(&2) as i64 * p.d() as i64;
        (0..=steps).map(|j| p.defect(r(j, steps))).max().unwrap()
    }

    #[test]
    fn construction() {
        let p = params("1/2,1/2", "1,1");
        assert_eq!(p.alpha(), &[r(1, 2), r(1, 2)]);
        assert_eq!(p.beta(), &[r(0, 1), r(0, 1)]);
        assert!(matches!(HGParams::parse("1/3", "1/3"), Err(Error::NotDisjointModZ { .. })));
        assert!(matches!(HGParams::parse("1/3", "4/3"), Err(Error::NotDisjointModZ { .. })));
        assert!(matches!(HGParams::parse("1/3,1/2", "0"), Err(Error::LengthMismatch { .. })));
        assert!(matches!(HGParams::parse("", ""), Err(Error::LengthMismatch { .. })));
        assert!(matches!(parse_list("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse_list("x"), Err(Error::Parse(_))));
        assert_eq!(params("1/5,2/5,3/5,4/5", "1,1,1,1").d(), 4);
        assert_eq!(params("-1/3", "0").alpha(), &[r(2, 3)]);
    }

    #[test]
    fn denominators() {
        assert_eq!(params("1/2,1/2", "0,0").common_denominator(), 2);
        assert_eq!(params("1/5,4/5", "0,0").common_denominator(), 5);
        assert_eq!(params("1/3", "1/4").common_denominator(), 12);
    }

    #[test]
    fn conjugates() {
        let p = params("1/5,4/5", "0,0");
        assert_eq!(sorted(p.conjugate(2).unwrap().alpha()), vec![r(2, 5), r(3, 5)]);
        let h = params("1/2,1/2", "0,0");
        assert_eq!(h.conjugate(3).unwrap(), h);
        assert_eq!(p.conjugate(1).unwrap(), p);
        assert!(matches!(p.conjugate(5), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn stabilizers() {
        let full = params("1/5,2/5,3/5,4/5", "0,0,0,0");
        assert_eq!(full.galois_stabilizer(), vec![1, 2, 3, 4]);
        assert!(full.is_defined_over_q());
        let half = params("1/5,4/5", "0,0");
        assert_eq!(half.galois_stabilizer(), vec![1, 4]);
        assert!(!half.is_defined_over_q());
        assert!(half.splits_in_k(11));
        assert!(!half.splits_in_k(2));
        assert!(half.splits_in_k(19));
        assert_eq!(half.coset_representatives(), vec![1, 2]);
        let two = params("1/2,1/2", "0,0");
        assert_eq!(two.galois_stabilizer(), vec![1]);
        assert!(two.is_defined_over_q());
    }

    #[test]
    fn lambda_values() {
        let p = params("1/2,1/2", "0,0");
        for prime in [3u64, 5, 7, 11, 13] {
            assert_eq!(p.lambda(prime, 0), 0);
        }
        // hand evaluation: -floor(1) * 2 + 0 - floor(-1/2) * 2 + 0 = -2 + 2
        assert_eq!(p.lambda(5, 2), 0);
        assert_eq!(p.lambda_fractional(5, 2), Rat::zero());
    }

    #[test]
    fn lambda_forms_agree_and_bounded() {
        let sets = [("1/2", "0"), ("1/5,4/5", "0,0"), ("1/3,1/2", "1/4,0"), ("1/5,2/5,3/5,4/5", "0,0,0,0"), ("1/7,2/7,4/7", "0,1/3,2/3")];
        for (a, b) in sets {
            let p = params(a, b);
            let delta = p.delta();
            for prime in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
                if prime.gcd(&p.common_denominator()) != 1 {
                    continue;
                }
                for m in 0..=(prime as i64 - 2) {
                    let frac_form = p.lambda_fractional(prime, m);
                    assert!(frac_form.is_integer());
                    assert_eq!(frac_form.to_integer(), p.lambda(prime, m));
                    assert!(-p.lambda(prime, m) <= delta);
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let p = params("1/2", "0");
        assert_eq!(p.delta(), 0);
        assert_eq!(delta_by_grid(&p), 0);
        let q = params("1/2,1/2", "0,0");
        assert_eq!(q.big_delta(), q.delta());
        for (a, b) in [("1/5,4/5", "0,0"), ("1/3,1/2", "1/4,0"), ("1/7,2/7,4/7", "0,1/3,2/3")] {
            let p = params(a, b);
            assert_eq!(p.delta(), delta_by_grid(&p));
            let deltas: Vec<i64> = units_mod(p.common_denominator()).into_iter().map(|k| p.conjugate(k as i64).unwrap().delta()).collect();
            assert!(deltas.iter().all(|&x| x <= p.big_delta()));
            assert!(deltas.contains(&p.big_delta()));
        }
    }

    #[test]
    fn orbits() {
        let p = params("1/5,2/5,3/5,4/5", "0,0,0,0");
        let o = p.p_orbits(7).unwrap();
        assert_eq!(o.alpha.len(), 1);
        assert_eq!(o.alpha[0].members, vec![r(1, 5), r(2, 5), r(4, 5), r(3, 5)]);
        assert_eq!(o.beta.len(), 4);
        let h = params("1/5,4/5", "0,0");
        let o = h.p_orbits(11).unwrap();
        assert_eq!(o.alpha.iter().map(Orbit::len).collect::<Vec<_>>(), vec![1, 1]);
        assert!(matches!(h.p_orbits(2), Err(Error::DoesNotSplit { p: 2 })));
        let two = params("1/2,1/2", "0,0");
        assert_eq!(two.p_orbits(13).unwrap().alpha.len(), 2);
    }

    #[test]
    fn polynomials() {
        let two = params("1/2,1/2", "0,0");
        let (a, b) = two.integer_polys().unwrap();
        assert_eq!(a, vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)]);
        assert_eq!(b, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
        let five = params("1/5,2/5,3/5,4/5", "0,0,0,0");
        assert_eq!(five.integer_polys().unwrap().0, vec![BigInt::from(1); 5]);
        let half = params("1/5,4/5", "0,0");
        assert!(half.integer_polys().is_none());
        let (a, _) = half.defining_polys();
        let expected = -(CycloNum::root_of_unity(5, 1) + CycloNum::root_of_unity(5, 4));
        assert_eq!(a[1], expected);
        assert!(a[1].to_rational().is_none());
    }

    #[test]
    fn mod_p_factors_match_orbits() {
        for (a, b) in [("1/5,2/5,3/5,4/5", "0,0,0,0"), ("1/2,1/2", "0,0"), ("1/3,2/3", "1/4,3/4"), ("1/8,3/8,5/8,7/8", "0,0,1/2,1/2")] {
            let p = params(a, b);
            for prime in [3u64, 5, 7, 11, 13, 17, 19] {
                if prime.gcd(&p.common_denominator()) != 1 {
                    continue;
                }
                let orbits = p.p_orbits(prime).unwrap();
                let mut la: Vec<usize> = orbits.alpha.iter().map(Orbit::len).collect();
                let mut lb: Vec<usize> = orbits.beta.iter().map(Orbit::len).collect();
                la.sort();
                lb.sort();
                assert_eq!(p.factor_degrees_mod_p(prime).unwrap(), (la, lb), "{p} at {prime}");
            }
        }
    }

    proptest! {
        #[test]
        fn stabilizer_is_subgroup_and_conjugation_keeps_disjointness(
            na in proptest::collection::vec(0i64..12, 1..4),
            shift in 1i64..12,
            k in 1i64..60,
        ) {
            let alpha: Vec<Rat> = na.iter().map(|&n| r(n, 12)).collect();
            let beta: Vec<Rat> = na.iter().map(|&n| r(2 * n + shift, 24)).collect();
            prop_assume!(alpha.iter().all(|a| beta.iter().all(|b| frac(*a) != frac(*b))));
            let p = HGParams::new(&alpha, &beta).unwrap();
            let dd = p.common_denominator();
            let h = p.galois_stabilizer();
            prop_assert!(h.contains(&1));
            for &x in &h {
                for &y in &h {
                    prop_assert!(h.contains(&(x * y % dd)));
                }
            }
            if k.gcd(&(dd as i64)) == 1 {
                let c = p.conjugate(k).unwrap();
                prop_assert!(HGParams::new(c.alpha(), c.beta()).is_ok());
                prop_assert!(c.delta() <= p.big_delta());
            }
            prop_assert_eq!(p.delta(), delta_by_grid(&p));
            prop_assert_eq!(p.is_defined_over_q(), p.integer_polys().is_some());
        }
    }
}
