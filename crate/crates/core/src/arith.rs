//! Small number-theoretic helpers on machine integers.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
pub fn rem(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// The units of `Z/nZ`, in increasing order.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

/// Multiplicative order of `a` modulo `n`; `a` must be a unit.
pub fn mult_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, n);
        k += 1;
    }
    k
}

/// Chinese remainder for coprime moduli.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let inv = inv_mod(m % n, n).expect("moduli must be coprime");
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u64;
    let t = mul_mod(diff, inv, n);
    a + m * t
}

pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}
