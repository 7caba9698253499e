//! Integer and residue-ring utilities: primality, factorization, Jacobi
//! symbols, discrete logarithms in prime fields and Howell forms over Z/p^N.

mod dlog;
mod howell;

pub use dlog::{discrete_log, discrete_log_p_power, least_primitive_root};
pub use howell::{howell_form, ResidueMatrix, Submodule};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{g} does not generate the multiplicative group mod {q}")]
    NotAGenerator { g: u64, q: u64 },
    #[error("{y} is not a unit mod {q}")]
    NotUnit { y: u64, q: u64 },
    #[error("{0} is not in the subgroup generated by the base")]
    NotInSubgroup(u64),
    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut m: u64, p: u64) -> u32 {
    debug_assert!(m != 0 && p > 1);
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// If `m = p^e` with `p` prime and `e ≥ 1`, returns `(p, e)`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let f = factor(m);
    if f.factors.len() == 1 {
        Some(f.factors[0])
    } else {
        None
    }
}

// Deterministic for all 64-bit inputs.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Euler's totient of the factored value.
    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

const TRIAL_BOUND: u64 = 1 << 20;

pub fn factor(m: u64) -> Factorization {
    assert!(m >= 1, "factor needs a positive integer");
    let value = m;
    let mut rest = m;
    let mut primes: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5] {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d <= TRIAL_BOUND && d.saturating_mul(d) <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += STEPS[i];
        i = (i + 1) % 8;
    }
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { value, factors }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = (n as f64).sqrt() as u64;
    for s in r.saturating_sub(1)..=r + 1 {
        if s * s == n {
            split_large(s, out);
            split_large(s, out);
            return;
        }
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// A nontrivial divisor of the odd composite `n`. Brent's cycle search with
/// constants derived from `n`, so the result is reproducible.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1 + n % 7;
    let mut y0 = 2 + (n >> 3) % 13;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q, mut g) = (y0, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
        y0 += 1;
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Primes in `[lo, hi)` by a simple sieve.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= 2 {
        return Vec::new();
    }
    let hi = hi as usize;
    let mut sieve = vec![true; hi];
    sieve[0] = false;
    if hi > 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i < hi {
        if sieve[i] {
            let mut j = i * i;
            while j < hi {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo as usize..hi)
        .filter(|&k| sieve[k])
        .map(|k| k as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert!(factor(1).factors.is_empty());
        assert_eq!(factor(60).factors, vec![(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factor(7489).factors, vec![(7489, 1)]);
        let semi = 4294967291u64 * 4294967279u64;
        assert_eq!(factor(semi).factors, vec![(4294967279, 1), (4294967291, 1)]);
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in 1..p {
                let e = pow_mod(a, (p - 1) / 2, p);
                let want = if e == 1 { 1 } else { -1 };
                assert_eq!(jacobi(a as i64, p), want);
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let ps = primes_between(0, 20000);
        for n in 0..20000u64 {
            assert_eq!(is_prime(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        assert!(!is_prime(3215031751));
        assert!(is_prime(18446744073709551557));
    }
}
