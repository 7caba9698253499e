use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use super::{class_group, is_fundamental, BinaryQuadraticForm, QuadError};
use crate::arith::{gcd, isqrt};

/// ε = (x + y√d₁)/2 > 1, the fundamental unit of Q(√d₁).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub d1: i64,
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i32,
}

/// x + 2 = r·w².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Decomposition {
    pub r: i64,
    pub w: BigInt,
}

/// Continued fraction of ω = (δ + √d)/2; the first convergent p/q with
/// N(p − qω) = ±1 gives ε = p − qω̄.
pub fn fundamental_unit(d1: i64) -> Result<FundamentalUnit, QuadError> {
    if d1 <= 0 || !is_fundamental(d1) {
        return Err(QuadError::NotFundamental(d1));
    }
    let delta = d1.rem_euclid(2);
    let r = isqrt(d1 as u64) as i64;
    let (mut pp, mut qq) = (delta, 2i64);
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    let c = BigInt::from((delta * delta - d1) / 4);
    let dl = BigInt::from(delta);
    loop {
        let a = (pp + r).div_euclid(qq);
        let ab = BigInt::from(a);
        let p2 = &ab * &p1 + &p0;
        let q2 = &ab * &q1 + &q0;
        (p0, p1) = (p1, p2);
        (q0, q1) = (q1, q2);
        let norm = &p1 * &p1 - &dl * &p1 * &q1 + &c * &q1 * &q1;
        if norm == BigInt::one() || norm == -BigInt::one() {
            let x = BigInt::from(2) * &p1 - &dl * &q1;
            return Ok(FundamentalUnit {
                d1,
                x,
                y: q1,
                norm: if norm.is_one() { 1 } else { -1 },
            });
        }
        pp = a * qq - pp;
        qq = (d1 - pp * pp) / qq;
    }
}

/// Split x + 2 = r·w² with r | 2d₁ and neither r nor 4d₁/r a square.
pub fn lemma1_decompose(u: &FundamentalUnit) -> Result<Lemma1Decomposition, QuadError> {
    if u.norm != 1 {
        return Err(QuadError::NormMinusOne { d1: u.d1 });
    }
    let n: BigInt = &u.x + 2;
    let two_d = 2 * u.d1 as u64;
    let square = |m: u64| {
        let s = isqrt(m);
        s * s == m
    };
    let mut divs: Vec<u64> = (1..=two_d).filter(|k| two_d % k == 0).collect();
    divs.sort();
    for r in divs {
        if square(r) || square(4 * u.d1 as u64 / r) || (4 * u.d1 as u64) % r != 0 {
            continue;
        }
        let rb = BigInt::from(r);
        if (&n % &rb).is_zero() {
            let q: BigInt = &n / &rb;
            let w = Roots::sqrt(&q);
            if &w * &w == q {
                return Ok(Lemma1Decomposition { r: r as i64, w });
            }
        }
    }
    unreachable!("x + 2 = r w^2 always has a solution for a norm +1 unit")
}

/// The class of discriminant d carried by r from [`lemma1_decompose`]
/// for the fundamental unit of Q(√d₁), with its order in the class group.
/// It capitulates in the compositum with Q(√d₁).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibleClass {
    pub form: BinaryQuadraticForm,
    pub order: u64,
    pub r: i64,
}

pub fn visible_class(d: i64, d1: i64) -> Result<VisibleClass, QuadError> {
    if !is_fundamental(d) {
        return Err(QuadError::NotFundamental(d));
    }
    let ok = d1 > 1 && d1 < d.abs() && d % d1 == 0 && is_fundamental(d / d1) && is_fundamental(d1);
    if !ok {
        return Err(QuadError::BadDivisor { d, d1 });
    }
    let u = fundamental_unit(d1)?;
    let r = lemma1_decompose(&u)?.r;
    // (r, b, c) with the least |b|, then b ≥ 0
    let mut best = None;
    for k in 0..=r {
        for b in [k, -k] {
            if (b * b - d).rem_euclid(4 * r) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * r);
            if gcd(gcd(r as u64, b.unsigned_abs()), c.unsigned_abs()) == 1 {
                best = Some(BinaryQuadraticForm { a: r, b, c });
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    let form = best.ok_or(QuadError::NoFormFound { d, r })?;
    let order = class_group(d)?.order_of(&form);
    Ok(VisibleClass { form, order, r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_units() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (1.into(), 1.into(), -1));
        let u = fundamental_unit(12).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (4.into(), 1.into(), 1));
        let u = fundamental_unit(8).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (2.into(), 1.into(), -1));
        assert!(matches!(lemma1_decompose(&u), Err(QuadError::NormMinusOne { d1: 8 })));
        let l = lemma1_decompose(&fundamental_unit(12).unwrap()).unwrap();
        assert_eq!((l.r, l.w), (6, 1.into()));
    }

    #[test]
    fn visible_60_12() {
        let v = visible_class(60, 12).unwrap();
        assert_eq!(v.form, BinaryQuadraticForm { a: 6, b: 6, c: -1 });
        assert!(matches!(visible_class(-39, 13), Err(QuadError::NormMinusOne { d1: 13 })));
    }
}
