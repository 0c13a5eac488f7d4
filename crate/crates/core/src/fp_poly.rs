//! Dense polynomials over a prime field `F_p`, lowest degree first.
//!
//! Used for irreducibility testing of field moduli and for factoring the
//! defining polynomials of a parameter set modulo `p`.

use crate::arith::inv_mod;

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient must be a unit");
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut q = vec![0u64; rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db] * lead_inv % p;
        q[i] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - c * y % p) % p;
            }
        }
    }
    rem.truncate(db);
    (trim(q), trim(rem))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = inv_mod(lead, p).expect("nonzero leading coefficient");
            a.into_iter().map(|c| c * inv % p).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    monic(&x, p)
}

/// `base^e mod m`.
pub fn pow_mod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod m` by repeated p-th powering.
fn frobenius_power_of_x(k: u32, m: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[0, 1], m, p);
    for _ in 0..k {
        acc = pow_mod_poly(&acc, p, m, p);
    }
    acc
}

/// Irreducibility over `F_p` (Ben-Or): no factor of degree `<= deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(n) = degree(f) else { return false };
    if n == 0 {
        return false;
    }
    let mut xp = rem(&[0, 1], f, p);
    for _ in 1..=n / 2 {
        xp = pow_mod_poly(&xp, p, f, p);
        let g = gcd(&sub(&xp, &[0, 1], p), f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Degrees of the irreducible factors of `f`, with multiplicity, sorted.
///
/// Distinct-degree factorization on `f` itself, peeling repeated factors by
/// dividing out the degree-k part until it no longer divides.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let mut k = 1u32;
    while degree(&f).is_some_and(|d| d > 0) {
        let d = degree(&f).unwrap();
        if (k as usize) > d {
            break;
        }
        let xpk = frobenius_power_of_x(k, &f, p);
        let mut g = gcd(&sub(&xpk, &[0, 1], p), &f, p);
        // g collects every distinct irreducible factor of degree dividing k;
        // smaller degrees were removed already, so all have degree exactly k.
        while degree(&g).is_some_and(|d| d > 0) {
            let dg = degree(&g).unwrap();
            out.extend(std::iter::repeat_n(k as usize, dg / k as usize));
            f = divrem(&f, &g, p).0;
            g = gcd(&f, &g, p);
        }
        k += 1;
    }
    if let Some(d) = degree(&f) {
        if d > 0 {
            out.push(d);
        }
    }
    out.sort_unstable();
    out
}
