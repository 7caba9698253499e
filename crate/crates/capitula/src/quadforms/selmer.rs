use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    class_group, compose, fundamental_unit, gcd, normalize_indefinite, BinaryQuadraticForm,
    FormClassGroup, QuadError,
};
use crate::arith::factor;

/// An element of K^× modulo squares, as used in a basis of S₂(K).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelmerElement {
    /// A unit (x + y√d)/2; −1 is (−2, 0).
    Unit { x: BigInt, y: BigInt },
    /// A squarefree integer r > 0 with (r) = 𝔞² for the ambiguous ideal 𝔞.
    Rational(i64),
    /// (x + y√d)/2 generating I² for a class of order 2 with no ambiguous
    /// ideal in it.
    Quadratic { x: BigInt, y: BigInt },
}

/// 2-torsion coordinates (bit per even invariant) of a class of order ≤ 2.
fn two_bits(g: &FormClassGroup, f: &BinaryQuadraticForm) -> Vec<bool> {
    g.dlog(f)
        .iter()
        .zip(&g.invariants)
        .filter(|(_, &n)| n % 2 == 0)
        .map(|(&x, _)| x != 0)
        .collect()
}

// Gaussian elimination over F_2; returns true if v was independent.
fn insert(basis: &mut Vec<Vec<bool>>, mut v: Vec<bool>) -> bool {
    for b in basis.iter() {
        let lead = b.iter().position(|&x| x).unwrap();
        if v[lead] {
            for (x, y) in v.iter_mut().zip(b) {
                *x ^= *y;
            }
        }
    }
    if v.iter().all(|&x| !x) {
        return false;
    }
    let lead = v.iter().position(|&x| x).unwrap();
    for b in basis.iter_mut() {
        if b[lead] {
            for (x, y) in b.iter_mut().zip(&v) {
                *x ^= *y;
            }
        }
    }
    basis.push(v);
    true
}

/// The form (m, b, c) of the ambiguous ideal of norm m | d.
pub(crate) fn ambiguous_ideal_form(d: i64, m: i64) -> Option<BinaryQuadraticForm> {
    (0..2 * m).find_map(|b| {
        ((b * b - d).rem_euclid(4 * m) == 0).then(|| BinaryQuadraticForm {
            a: m,
            b,
            c: (b * b - d) / (4 * m),
        })
    })
}

struct Mat {
    m: [[BigInt; 2]; 2],
}

impl Mat {
    fn id() -> Self {
        Mat { m: [[1.into(), 0.into()], [0.into(), 1.into()]] }
    }
    // M <- M·[[p, q], [r, s]]
    fn right(&mut self, p: i64, q: i64, r: i64, s: i64) {
        let m = &self.m;
        let n = [
            [&m[0][0] * p + &m[0][1] * r, &m[0][0] * q + &m[0][1] * s],
            [&m[1][0] * p + &m[1][1] * r, &m[1][0] * q + &m[1][1] * s],
        ];
        self.m = n;
    }
}

/// (x, y) with F(x, y) = ±1, for F in the principal class of the field.
fn represent_one(f: BinaryQuadraticForm) -> (BigInt, BigInt) {
    let d = f.discriminant();
    let mut m = Mat::id();
    let mut g = f;
    // translation keeps a, S swaps a and c
    let translate = |g: &BinaryQuadraticForm, nb: i64, m: &mut Mat| {
        let k = (nb - g.b) / (2 * g.a);
        m.right(1, k, 0, 1);
    };
    if d < 0 {
        loop {
            let two_a = 2 * g.a;
            let mut nb = g.b.rem_euclid(two_a);
            if nb > g.a {
                nb -= two_a;
            }
            translate(&g, nb, &mut m);
            g = BinaryQuadraticForm { a: g.a, b: nb, c: (nb * nb - d) / (4 * g.a) };
            if g.a > g.c || (g.a == g.c && g.b < 0) {
                m.right(0, -1, 1, 0);
                g = BinaryQuadraticForm { a: g.c, b: -g.b, c: g.a };
                continue;
            }
            break;
        }
        assert_eq!(g.a, 1, "form is not principal");
    } else {
        let n = normalize_indefinite(g);
        translate(&g, n.b, &mut m);
        g = n;
        let mut steps = 0usize;
        while !(g.is_reduced() && g.a.abs() == 1) {
            m.right(0, -1, 1, 0);
            let s = BinaryQuadraticForm { a: g.c, b: -g.b, c: g.a };
            let n = normalize_indefinite(s);
            translate(&s, n.b, &mut m);
            g = n;
            steps += 1;
            assert!(steps < 100_000_000, "form is not principal");
        }
    }
    let [[x, _], [y, _]] = m.m;
    (x, y)
}

pub(crate) fn squarefree_divisors(d: i64) -> Vec<i64> {
    let primes: Vec<i64> = factor(d.unsigned_abs()).primes().map(|p| p as i64).collect();
    let mut out = vec![1i64];
    for p in primes {
        let more: Vec<i64> = out.iter().map(|x| x * p).collect();
        out.extend(more);
    }
    out.sort();
    out
}

/// A basis of S₂(K) modulo squares: generators of E/E², then one element
/// for each basis class of C[2]; rational ones are preferred and sorted by
/// absolute value.
pub fn selmer2_basis(d: i64) -> Result<Vec<SelmerElement>, QuadError> {
    let g = class_group(d)?;
    let mut out = Vec::new();
    let minus_one = SelmerElement::Unit { x: BigInt::from(-2), y: BigInt::zero() };
    match d {
        -4 => out.push(SelmerElement::Unit { x: BigInt::zero(), y: BigInt::from(1) }),
        _ if d < 0 => out.push(minus_one),
        _ => {
            let u = fundamental_unit(d)?;
            out.push(minus_one);
            out.push(SelmerElement::Unit { x: u.x, y: u.y });
        }
    }
    let rank = g.invariants.iter().filter(|&&n| n % 2 == 0).count();
    let mut basis: Vec<Vec<bool>> = Vec::new();
    for m in squarefree_divisors(d) {
        if basis.len() == rank {
            break;
        }
        let Some(f) = ambiguous_ideal_form(d, m) else { continue };
        if insert(&mut basis, two_bits(&g, &f)) {
            out.push(SelmerElement::Rational(m));
        }
    }
    // classes of order 2 without ambiguous ideals: I² = (γ)
    let mut j_even = 0;
    for (j, &n) in g.invariants.iter().enumerate() {
        if n % 2 != 0 {
            continue;
        }
        let mut v = vec![false; rank];
        v[j_even] = true;
        j_even += 1;
        if !insert(&mut basis, v) {
            continue;
        }
        let f = power(&g.generators[j], n / 2).reduce();
        let f = if f.a < 0 { flip_sign(&g, f) } else { f };
        out.push(quadratic_generator(f));
    }
    Ok(out)
}

fn power(f: &BinaryQuadraticForm, mut e: u64) -> BinaryQuadraticForm {
    let d = f.discriminant();
    let mut acc = BinaryQuadraticForm::principal(d);
    let mut base = *f;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base).reduce();
        }
        base = compose(&base, &base).reduce();
        e >>= 1;
    }
    acc
}

/// A form with a > 0 in the same class of the field as f (d > 0).
fn flip_sign(g: &FormClassGroup, f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    let mut h = f;
    loop {
        h = super::rho(h);
        if h.a > 0 {
            return h;
        }
        if h == f {
            // the whole cycle is negative: use (−1, b, c)·f
            let p = BinaryQuadraticForm::principal(g.discriminant);
            let j = BinaryQuadraticForm { a: -1, b: p.b, c: -p.c };
            return compose(&j, &f).reduce();
        }
    }
}

/// γ with (γ) = I², I the ideal [a, (b + √d)/2] of a form of order 2.
fn quadratic_generator(f: BinaryQuadraticForm) -> SelmerElement {
    let e = gcd(f.a.unsigned_abs(), f.b.unsigned_abs()) as i64;
    let sq = compose(&f, &f);
    let (x0, y0) = represent_one(sq);
    // θ = x0·A + y0·(B + √d)/2, γ = e·θ
    let x = (BigInt::from(2 * sq.a) * &x0 + BigInt::from(sq.b) * &y0) * e;
    let y = y0 * e;
    SelmerElement::Quadratic { x, y }
}

/// One form per ambiguous class (class of order ≤ 2) of the narrow group.
pub fn ambiguous_classes(d: i64) -> Result<Vec<BinaryQuadraticForm>, QuadError> {
    let g = class_group(d)?;
    Ok(g
        .narrow_representatives()
        .iter()
        .filter(|f| {
            g.narrow_dlog(f)
                .iter()
                .zip(&g.narrow_invariants)
                .all(|(&x, &n)| (2 * x) % n == 0)
        })
        .copied()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selmer() {
        let s = selmer2_basis(-39).unwrap();
        assert_eq!(
            s,
            vec![SelmerElement::Unit { x: (-2).into(), y: 0.into() }, SelmerElement::Rational(3)]
        );
        assert_eq!(selmer2_basis(5).unwrap().len(), 2);
        assert_eq!(selmer2_basis(-4).unwrap().len(), 1);
    }

    #[test]
    fn ambiguous() {
        assert_eq!(
            ambiguous_classes(-39).unwrap(),
            vec![BinaryQuadraticForm { a: 1, b: 1, c: 10 }, BinaryQuadraticForm { a: 3, b: 3, c: 4 }]
        );
        assert_eq!(ambiguous_classes(5).unwrap().len(), 1);
        assert_eq!(ambiguous_classes(-420).unwrap().len(), 8);
    }
}
