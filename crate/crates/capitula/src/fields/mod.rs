//! Defining polynomials of subfields of Q(ζ_ℓ): Gaussian-period minimal
//! polynomials, and the compositum of an odd-degree subfield with the
//! quadratic one.

mod ffpoly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{is_prime, least_primitive_root, mul_mod, pow_mod};

pub const MAX_DEGREE: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldsError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree {0} exceeds {MAX_DEGREE}")]
    DegreeTooLarge(u64),
    #[error("{m} does not divide {ell} - 1")]
    NotDividing { ell: u64, m: u64 },
    #[error("compositum needs an odd degree, got {0}")]
    NotCoprimeDegrees(u64),
    #[error("no prime found certifying irreducibility of {0}")]
    IrreducibilityUnverified(String),
    #[error("discriminant {disc} is not {ell}^{e} times a square")]
    BadDiscriminant { ell: u64, e: u64, disc: String },
    #[error("numeric periods disagree with the exact polynomial at X^{k}")]
    NumericMismatch { k: usize },
}

/// Monic integer polynomial in X, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub coefficients: Vec<BigInt>,
}

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Polynomial { coefficients: c.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Number of distinct roots modulo the prime q.
    pub fn root_count_mod(&self, q: u64) -> usize {
        ffpoly::root_count(&ffpoly::reduce(&self.coefficients, q), q)
    }

    pub fn is_irreducible_mod(&self, q: u64) -> bool {
        let f = ffpoly::reduce(&self.coefficients, q);
        f.len() == self.coefficients.len() && ffpoly::is_irreducible(&f, q)
    }

    /// Disc = (−1)^{n(n−1)/2} Res(f, f′), via a Bareiss determinant.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::one();
        }
        let f: Vec<BigInt> = self.coefficients.iter().rev().cloned().collect();
        let df: Vec<BigInt> = (0..n).map(|i| &f[i] * BigInt::from((n - i) as i64)).collect();
        let size = 2 * n - 1;
        let mut m = vec![vec![BigInt::zero(); size]; size];
        for r in 0..n - 1 {
            for (j, c) in f.iter().enumerate() {
                m[r][r + j] = c.clone();
            }
        }
        for r in 0..n {
            for (j, c) in df.iter().enumerate() {
                m[n - 1 + r][r + j] = c.clone();
            }
        }
        let res = bareiss(m);
        if (n * (n - 1) / 2) % 2 == 1 {
            -res
        } else {
            res
        }
    }
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let show = !mag.is_one() || k == 0;
            match (show, k) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}*X")?,
                (true, _) => write!(f, "{mag}*X^{k}")?,
                (false, 1) => write!(f, "X")?,
                (false, _) => write!(f, "X^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Minimal polynomial of the Gaussian periods η_i = Σ_j ζ^{g^{i+mj}}, g the
/// least primitive root mod ℓ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPolynomial {
    pub ell: u64,
    pub m: u64,
    pub poly: Polynomial,
}

/// The ring spanned by 1, η_0, …, η_{m−1}, with η_0 η_j tabulated.
struct Periods {
    m: usize,
    // table[j] = η_0 η_j as (constant, coefficients of η_k)
    table: Vec<(BigInt, Vec<BigInt>)>,
}

type Elt = (BigInt, Vec<BigInt>);

impl Periods {
    fn new(ell: u64, m: u64) -> Self {
        let g = least_primitive_root(ell).unwrap();
        let f = (ell - 1) / m;
        let mu = m as usize;
        let mut index = vec![0usize; ell as usize];
        let mut x = 1u64;
        for k in 0..ell - 1 {
            index[x as usize] = (k % m) as usize;
            x = mul_mod(x, g, ell);
        }
        let step = pow_mod(g, m, ell);
        let table = (0..mu)
            .map(|j| {
                let mut c = BigInt::zero();
                let mut v = vec![BigInt::zero(); mu];
                let mut e = pow_mod(g, j as u64, ell);
                for _ in 0..f {
                    let s = (1 + e) % ell;
                    if s == 0 {
                        c += f;
                    } else {
                        v[index[s as usize]] += 1;
                    }
                    e = mul_mod(e, step, ell);
                }
                (c, v)
            })
            .collect();
        Periods { m: mu, table }
    }

    fn eta(&self, i: usize) -> Elt {
        let mut v = vec![BigInt::zero(); self.m];
        v[i] = BigInt::one();
        (BigInt::zero(), v)
    }

    // η_i η_j = σ^i(η_0 η_{j−i})
    fn eta_eta(&self, i: usize, j: usize) -> Elt {
        let (c, v) = &self.table[(j + self.m - i) % self.m];
        let mut w = vec![BigInt::zero(); self.m];
        for (k, x) in v.iter().enumerate() {
            w[(k + i) % self.m] = x.clone();
        }
        (c.clone(), w)
    }

    fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let mut c = &a.0 * &b.0;
        let mut v: Vec<BigInt> = (0..self.m).map(|k| &a.0 * &b.1[k] + &b.0 * &a.1[k]).collect();
        for (i, x) in a.1.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.1.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                let (pc, pv) = self.eta_eta(i, j);
                c += &xy * pc;
                for (k, z) in pv.iter().enumerate() {
                    if !z.is_zero() {
                        v[k] += &xy * z;
                    }
                }
            }
        }
        (c, v)
    }

    fn sub(a: &Elt, b: &Elt) -> Elt {
        (&a.0 - &b.0, a.1.iter().zip(&b.1).map(|(x, y)| x - y).collect())
    }

    /// A Galois-invariant element as an integer, using Σ η_i = −1.
    fn rational(a: &Elt) -> BigInt {
        debug_assert!(a.1.iter().all(|x| *x == a.1[0]), "element is not rational");
        &a.0 - &a.1[0]
    }
}

fn check_args(ell: u64, m: u64) -> Result<(), FieldsError> {
    if !is_prime(ell) {
        return Err(FieldsError::NotPrime(ell));
    }
    if m > MAX_DEGREE {
        return Err(FieldsError::DegreeTooLarge(m));
    }
    if m == 0 || (ell - 1) % m != 0 {
        return Err(FieldsError::NotDividing { ell, m });
    }
    Ok(())
}

fn exact_period_polynomial(ell: u64, m: u64) -> (Polynomial, BigInt) {
    let r = Periods::new(ell, m);
    let mu = m as usize;
    let zero = (BigInt::zero(), vec![BigInt::zero(); mu]);
    let one = (BigInt::one(), vec![BigInt::zero(); mu]);
    // coefficients of Π (X − η_i), ascending
    let mut poly: Vec<Elt> = vec![one.clone()];
    for i in 0..mu {
        let eta = r.eta(i);
        let mut next = vec![zero.clone(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = (&next[k + 1].0 + &c.0, next[k + 1].1.iter().zip(&c.1).map(|(x, y)| x + y).collect());
            next[k] = Periods::sub(&next[k], &r.mul(&eta, c));
        }
        poly = next;
    }
    let coefficients: Vec<BigInt> = poly.iter().map(Periods::rational).collect();
    // Π_{i<j} (η_i − η_j)², an integer
    let mut d = one;
    for i in 0..mu {
        for j in i + 1..mu {
            d = r.mul(&d, &Periods::sub(&r.eta(i), &r.eta(j)));
        }
    }
    let disc = Periods::rational(&r.mul(&d, &d));
    (Polynomial { coefficients }, disc)
}

/// Period polynomial coefficients in floating point, with an error bound.
pub fn numeric_period_polynomial(ell: u64, m: u64) -> Result<(Vec<f64>, f64), FieldsError> {
    check_args(ell, m)?;
    let g = least_primitive_root(ell).unwrap();
    let f = (ell - 1) / m;
    let tau = std::f64::consts::TAU;
    let periods: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let mut e = pow_mod(g, i, ell);
            let step = pow_mod(g, m, ell);
            let (mut re, mut im) = (0.0, 0.0);
            for _ in 0..f {
                let t = tau * e as f64 / ell as f64;
                re += t.cos();
                im += t.sin();
                e = mul_mod(e, step, ell);
            }
            (re, im)
        })
        .collect();
    let mut poly: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    for &(a, b) in &periods {
        let mut next = vec![(0.0, 0.0); poly.len() + 1];
        for (k, &(x, y)) in poly.iter().enumerate() {
            next[k + 1].0 += x;
            next[k + 1].1 += y;
            next[k].0 -= a * x - b * y;
            next[k].1 -= a * y + b * x;
        }
        poly = next;
    }
    let scale: f64 = periods.iter().map(|(a, b)| 1.0 + a.hypot(*b)).product();
    let bound = 8.0 * f64::EPSILON * (f + m) as f64 * m as f64 * scale;
    Ok((poly.iter().map(|c| c.0).collect(), bound))
}

/// Primes q ≠ ℓ tried for the irreducibility certificate.
fn certify_irreducible(p: &Polynomial, ell: u64) -> Result<u64, FieldsError> {
    let mut tried = 0;
    let mut q = 2u64;
    while tried < 400 {
        if is_prime(q) && q != ell {
            tried += 1;
            if p.is_irreducible_mod(q) {
                return Ok(q);
            }
        }
        q += 1;
    }
    Err(FieldsError::IrreducibilityUnverified(p.to_string()))
}

/// The minimal polynomial of the periods of the degree-m subfield of Q(ζ_ℓ).
/// Irreducibility is certified mod a prime, the discriminant is checked to
/// be ±ℓ^{m−1} times a square (negative exactly when the field is complex
/// with m/2 odd), and for small cases the exact coefficients
/// are compared with floating-point periods.
pub fn period_polynomial(ell: u64, m: u64) -> Result<PeriodPolynomial, FieldsError> {
    check_args(ell, m)?;
    let (poly, disc) = exact_period_polynomial(ell, m);
    debug_assert_eq!(disc, poly.discriminant());
    let ellb = BigInt::from(ell);
    let mut rest = disc.clone();
    for _ in 0..m - 1 {
        if !(&rest % &ellb).is_zero() {
            return Err(FieldsError::BadDiscriminant { ell, e: m - 1, disc: disc.to_string() });
        }
        rest /= &ellb;
    }
    // complex iff (ℓ−1)/m is odd; then r₂ = m/2
    let negative = (ell - 1) / m % 2 == 1 && m % 4 == 2;
    if rest.is_negative() != negative {
        return Err(FieldsError::BadDiscriminant { ell, e: m - 1, disc: disc.to_string() });
    }
    let rest = rest.abs();
    let s = rest.sqrt();
    if &s * &s != rest {
        return Err(FieldsError::BadDiscriminant { ell, e: m - 1, disc: disc.to_string() });
    }
    if m > 1 {
        certify_irreducible(&poly, ell)?;
    }
    let (num, bound) = numeric_period_polynomial(ell, m)?;
    if bound < 1e-3 {
        for (k, (x, c)) in num.iter().zip(&poly.coefficients).enumerate() {
            if (x - c.to_f64().unwrap()).abs() > 0.5 {
                return Err(FieldsError::NumericMismatch { k });
            }
        }
    }
    Ok(PeriodPolynomial { ell, m, poly })
}

/// P(X + u)·P(X − u) with u² = ℓ* = (−1)^{(ℓ−1)/2} ℓ, for P of odd degree:
/// a defining polynomial of the degree-2m subfield of Q(ζ_ℓ).
pub fn compositum_polynomial(p: &PeriodPolynomial, ell: u64) -> Result<Polynomial, FieldsError> {
    if p.m % 2 == 0 {
        return Err(FieldsError::NotCoprimeDegrees(p.m));
    }
    let star = if ell % 4 == 1 { ell as i64 } else { -(ell as i64) };
    let star = BigInt::from(star);
    type Q = (BigInt, BigInt); // a + b·u
    let zero = || (BigInt::zero(), BigInt::zero());
    // Horner: A(X) = P(X + u)
    let mut a: Vec<Q> = Vec::new();
    for c in p.poly.coefficients.iter().rev() {
        let mut next: Vec<Q> = vec![zero(); a.len() + 1];
        for (k, (x, y)) in a.iter().enumerate() {
            next[k + 1].0 += x;
            next[k + 1].1 += y;
            // (x + y u)·u = y ℓ* + x u
            next[k].0 += y * &star;
            next[k].1 += x;
        }
        next[0].0 += c;
        a = next;
    }
    let mut prod: Vec<Q> = vec![zero(); 2 * a.len() - 1];
    for (i, (x1, y1)) in a.iter().enumerate() {
        for (j, (x2, y2)) in a.iter().enumerate() {
            // (x1 + y1 u)(x2 − y2 u)
            prod[i + j].0 += x1 * x2 - y1 * y2 * &star;
            prod[i + j].1 += y1 * x2 - x1 * y2;
        }
    }
    assert!(prod.iter().all(|(_, y)| y.is_zero()), "product is not symmetric in u");
    let poly = Polynomial { coefficients: prod.into_iter().map(|(x, _)| x).collect() };
    certify_irreducible(&poly, ell)?;
    Ok(poly)
}

/// Whether P has deg P distinct roots mod q.
pub fn split_completely_mod(p: &Polynomial, q: u64) -> bool {
    p.root_count_mod(q) == p.degree()
}
