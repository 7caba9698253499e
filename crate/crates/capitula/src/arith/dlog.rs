use std::collections::HashMap;

use super::{factor, inv_mod, is_prime, mul_mod, pow_mod, ArithError};

/// Least primitive root modulo the prime `q`.
pub fn least_primitive_root(q: u64) -> Result<u64, ArithError> {
    if !is_prime(q) {
        return Err(ArithError::NotPrime(q));
    }
    if q == 2 {
        return Ok(1);
    }
    let primes: Vec<u64> = factor(q - 1).primes().collect();
    (2..q)
        .find(|&g| primes.iter().all(|&r| pow_mod(g, (q - 1) / r, q) != 1))
        .ok_or(ArithError::NotPrime(q))
}

/// Exponent `x` in `[0, q-1)` with `g^x = y (mod q)`, `g` a generator of F_q^×.
pub fn discrete_log(q: u64, g: u64, y: u64) -> Result<u64, ArithError> {
    if !is_prime(q) {
        return Err(ArithError::NotPrime(q));
    }
    let y = y % q;
    if y == 0 {
        return Err(ArithError::NotUnit { y, q });
    }
    let g = g % q;
    let fact = factor(q - 1);
    if g == 0 || fact.primes().any(|r| pow_mod(g, (q - 1) / r, q) == 1) {
        return Err(ArithError::NotAGenerator { g, q });
    }
    if q == 2 {
        return Ok(0);
    }
    // Pohlig–Hellman, recombined by CRT.
    let order = q - 1;
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(r, e) in &fact.factors {
        let re = r.pow(e);
        let h = pow_mod(g, order / re, q);
        let t = pow_mod(y, order / re, q);
        let xi = prime_power_log(q, h, r, e, t)? as u128;
        // combine x mod modulus with xi mod re
        let m1 = modulus;
        let m2 = re as u128;
        let k = ((xi + m2 - x % m2) % m2) as u64;
        let inv = inv_mod((m1 % m2) as u64, re).expect("coprime moduli");
        let k = mul_mod(k, inv, re) as u128;
        x += m1 * k;
        modulus = m1 * m2;
    }
    Ok((x % modulus) as u64)
}

/// Logarithm of `y` to the base `h`, where `h` has order exactly `p^e` mod `q`.
pub fn discrete_log_p_power(q: u64, h: u64, p: u64, e: u32, y: u64) -> Result<u64, ArithError> {
    let pe = p.pow(e);
    if pow_mod(h, pe, q) != 1 || (e > 0 && pow_mod(h, pe / p, q) == 1) {
        return Err(ArithError::NotAGenerator { g: h, q });
    }
    if pow_mod(y, pe, q) != 1 {
        return Err(ArithError::NotInSubgroup(y));
    }
    prime_power_log(q, h, p, e, y % q)
}

// h of order r^e, t in <h>.
fn prime_power_log(q: u64, h: u64, r: u64, e: u32, t: u64) -> Result<u64, ArithError> {
    if e == 0 {
        return Ok(0);
    }
    let gamma = pow_mod(h, r.pow(e - 1), q); // order r
    let h_inv = inv_mod(h, q).ok_or(ArithError::NotUnit { y: h, q })?;
    let mut x = 0u64;
    let mut rk = 1u64;
    for k in 0..e {
        // (h^{-x} t)^{r^{e-1-k}} lies in <gamma>
        let hk = mul_mod(pow_mod(h_inv, x, q), t, q);
        let target = pow_mod(hk, r.pow(e - 1 - k), q);
        let d = prime_order_log(q, gamma, r, target)?;
        x += d * rk;
        rk = rk.saturating_mul(r);
    }
    Ok(x)
}

const BSGS_LIMIT: u64 = 1 << 40;

fn prime_order_log(q: u64, b: u64, r: u64, t: u64) -> Result<u64, ArithError> {
    if t == 1 {
        return Ok(0);
    }
    if r <= 64 {
        let mut acc = 1;
        for k in 0..r {
            if acc == t {
                return Ok(k);
            }
            acc = mul_mod(acc, b, q);
        }
        return Err(ArithError::NotInSubgroup(t));
    }
    if r < BSGS_LIMIT {
        bsgs(q, b, r, t)
    } else {
        rho(q, b, r, t)
    }
}

fn bsgs(q: u64, b: u64, r: u64, t: u64) -> Result<u64, ArithError> {
    let m = (r as f64).sqrt().ceil() as u64 + 1;
    let mut table = HashMap::with_capacity(m as usize);
    let mut acc = 1u64;
    for j in 0..m {
        table.entry(acc).or_insert(j);
        acc = mul_mod(acc, b, q);
    }
    let giant = inv_mod(pow_mod(b, m, q), q).ok_or(ArithError::NotUnit { y: b, q })?;
    let mut g = t;
    for i in 0..=m {
        if let Some(&j) = table.get(&g) {
            return Ok((i * m + j) % r);
        }
        g = mul_mod(g, giant, q);
    }
    Err(ArithError::NotInSubgroup(t))
}

// Pollard rho in a subgroup of prime order r, Floyd cycle finding, fixed
// start points so reruns are identical.
fn rho(q: u64, b: u64, r: u64, t: u64) -> Result<u64, ArithError> {
    let step = |x: u64, a: u64, c: u64| -> (u64, u64, u64) {
        match x % 3 {
            0 => (mul_mod(x, x, q), mul_mod(a, 2, r), mul_mod(c, 2, r)),
            1 => (mul_mod(x, b, q), (a + 1) % r, c),
            _ => (mul_mod(x, t, q), a, (c + 1) % r),
        }
    };
    for seed in 1..64u64 {
        let a0 = seed % r;
        let c0 = (seed * 7 + 1) % r;
        let x0 = mul_mod(pow_mod(b, a0, q), pow_mod(t, c0, q), q);
        let (mut x, mut a, mut c) = (x0, a0, c0);
        let (mut y, mut ay, mut cy) = (x0, a0, c0);
        loop {
            (x, a, c) = step(x, a, c);
            let s = step(y, ay, cy);
            (y, ay, cy) = step(s.0, s.1, s.2);
            if x == y {
                break;
            }
        }
        // b^a t^c = b^ay t^cy  =>  (c - cy) k = ay - a
        let dc = (c + r - cy) % r;
        if dc == 0 {
            continue;
        }
        let da = (ay + r - a) % r;
        let k = mul_mod(da, inv_mod(dc, r).expect("r prime"), r);
        if pow_mod(b, k, q) == t {
            return Ok(k);
        }
    }
    Err(ArithError::NotInSubgroup(t))
}
