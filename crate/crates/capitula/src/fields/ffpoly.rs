//! Dense polynomials over F_q, ascending coefficients, q < 2^63.

use crate::arith::{inv_mod, mul_mod};

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], q).unwrap();
    while r.len() > db {
        let k = r.len() - 1;
        let c = mul_mod(r[k], inv, q);
        for (i, &bi) in b.iter().enumerate() {
            let j = k - db + i;
            r[j] = (r[j] + q - mul_mod(c, bi, q)) % q;
        }
        trim(&mut r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    rem(&out, m, q)
}

fn gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// X^(q^k) mod m.
fn frobenius_power(m: &[u64], q: u64, k: u32) -> Vec<u64> {
    let mut x = rem(&[0, 1], m, q);
    for _ in 0..k {
        // x <- x^q
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_rem(&acc, &base, m, q);
            }
            base = mul_rem(&base, &base, m, q);
            e >>= 1;
        }
        x = acc;
    }
    x
}

fn sub_x(a: &[u64], q: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + q - 1) % q;
    trim(&mut a);
    a
}

/// Rabin's test: a monic f of degree n is irreducible over F_q iff
/// X^(q^n) ≡ X and gcd(X^(q^(n/r)) − X, f) = 1 for each prime r | n.
pub(crate) fn is_irreducible(f: &[u64], q: u64) -> bool {
    let n = f.len() as u32 - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if !sub_x(&frobenius_power(f, q, n), q).is_empty() {
        return false;
    }
    let primes: Vec<u64> = crate::arith::factor(n as u64).primes().collect();
    primes.iter().all(|&r| {
        let h = sub_x(&frobenius_power(f, q, n / r as u32), q);
        gcd(f, &h, q).len() == 1
    })
}

/// Number of distinct roots in F_q: deg gcd(f, X^q − X).
pub(crate) fn root_count(f: &[u64], q: u64) -> usize {
    let h = sub_x(&frobenius_power(f, q, 1), q);
    gcd(f, &h, q).len() - 1
}

pub(crate) fn reduce(coeffs: &[num_bigint::BigInt], q: u64) -> Vec<u64> {
    use num_traits::ToPrimitive;
    let qb = num_bigint::BigInt::from(q);
    let mut v: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let r = ((c % &qb) + &qb) % &qb;
            r.to_u64().unwrap()
        })
        .collect();
    trim(&mut v);
    v
}
