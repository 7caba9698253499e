use std::collections::BTreeSet;

use capitula::arith::{factor, gcd, is_prime, isqrt};
use capitula::cycunits::{compute_fitting_ideal, Budget};
use capitula::iwasawa::eigenspace_class_order;
use capitula::quadforms::*;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn fundamentals(lo: i64, hi: i64) -> Vec<i64> {
    (lo..hi).filter(|&d| d != 0 && d != 1 && is_fundamental(d)).collect()
}

// independent enumeration of reduced primitive positive definite forms
fn brute_class_number(d: i64) -> u64 {
    let mut n = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                n += 1;
            }
        }
        a += 1;
    }
    n
}

fn omega(d: i64) -> u32 {
    factor(d.unsigned_abs()).primes().count() as u32
}

#[test]
fn imaginary_class_numbers_match_enumeration() {
    for d in fundamentals(-5000, 0) {
        let g = class_group(d).unwrap();
        assert_eq!(g.order, brute_class_number(d), "d = {d}");
        assert_eq!(g.order, g.invariants.iter().product::<u64>().max(1));
    }
}

#[test]
fn genus_theory() {
    for d in fundamentals(-5000, 5000) {
        let amb = ambiguous_classes(d).unwrap();
        assert_eq!(amb.len() as u64, 1 << (omega(d) - 1), "d = {d}");
        let g = class_group(d).unwrap();
        assert_eq!(g.ambiguous_count, 1 << (omega(d) - 1), "d = {d}");
    }
}

#[test]
fn narrow_versus_wide() {
    for d in fundamentals(2, 3000) {
        let g = class_group(d).unwrap();
        let u = fundamental_unit(d).unwrap();
        let factor = if u.norm == 1 { 2 } else { 1 };
        assert_eq!(g.narrow_order, factor * g.order, "d = {d}");
    }
}

#[test]
fn known_structures() {
    let inv = |d| class_group(d).unwrap().invariants;
    assert_eq!(inv(-3299), vec![3, 9]);
    assert_eq!(inv(-4027), vec![3, 3]);
    assert_eq!(inv(-420), vec![2, 2, 2]);
    assert_eq!(inv(-84), vec![2, 2]);
    assert_eq!(inv(-47), vec![5]);
    assert_eq!(inv(229), vec![3]);
    assert_eq!(inv(-3), Vec::<u64>::new());
    assert_eq!(class_group(1).unwrap_err(), QuadError::NotFundamental(1));
}

fn unit_ok(d: i64, x: &BigInt, y: &BigInt, norm: i32) -> bool {
    x * x - BigInt::from(d) * y * y == BigInt::from(4 * norm)
}

#[test]
fn fundamental_units_oracle() {
    for d in fundamentals(2, 1000) {
        let u = fundamental_unit(d).unwrap();
        assert!(unit_ok(d, &u.x, &u.y, u.norm), "d = {d}");
        assert!(u.x.is_positive() && u.y.is_positive());
        // nothing with a smaller y (scan capped for huge units)
        let cap = u.y.to_i128().map_or(200_000, |y| y.min(200_000));
        for y in 1..cap {
            let dy = d as i128 * y * y;
            for s in [4i128, -4] {
                let t = dy + s;
                if t >= 0 {
                    let r = isqrt(t as u64) as i128;
                    assert!(r * r != t, "d = {d}: smaller unit at y = {y}");
                }
            }
        }
    }
}

#[test]
fn unit_decomposition_for_small_fields() {
    for d in fundamentals(2, 1000) {
        let u = fundamental_unit(d).unwrap();
        if u.norm != 1 {
            assert!(lemma1_decompose(&u).is_err());
            continue;
        }
        let l = lemma1_decompose(&u).unwrap();
        assert_eq!(BigInt::from(l.r) * &l.w * &l.w, &u.x + 2, "d = {d}");
        assert_eq!((2 * d) % l.r, 0);
        let sq = |m: i64| (isqrt(m as u64) as i64).pow(2) == m;
        assert!(!sq(l.r) && !sq(4 * d / l.r), "d = {d}");
    }
}

#[test]
fn visible_classes_have_order_at_most_two() {
    let mut seen = 0;
    for d in fundamentals(-3000, 3000) {
        for d1 in fundamentals(5, d.abs()) {
            if d % d1 != 0 || !is_fundamental(d / d1) {
                continue;
            }
            match visible_class(d, d1) {
                Ok(v) => {
                    seen += 1;
                    assert!(v.order <= 2, "d = {d}, d1 = {d1}: {v:?}");
                    assert_eq!(v.form.discriminant(), d);
                    assert_eq!(v.form.a, v.r);
                }
                Err(QuadError::NormMinusOne { .. }) => {}
                Err(e) => panic!("d = {d}, d1 = {d1}: {e}"),
            }
        }
    }
    assert!(seen > 100);
}

#[test]
fn selmer_bases() {
    for d in fundamentals(-2000, 2000) {
        let g = class_group(d).unwrap();
        let b = selmer2_basis(d).unwrap();
        let rank2 = g.invariants.iter().filter(|&&n| n % 2 == 0).count();
        let units = if d > 0 { 2 } else { 1 };
        assert_eq!(b.len(), units + rank2, "d = {d}");
        for e in &b {
            match e {
                SelmerElement::Rational(m) => assert_eq!(d % m, 0),
                SelmerElement::Quadratic { x, y } | SelmerElement::Unit { x, y } => {
                    // N((x + y√d)/2) is ± a square
                    let n: BigInt = (x * x - BigInt::from(d) * y * y) / 4;
                    let n = n.abs();
                    let r = n.sqrt();
                    assert_eq!(&r * &r, n, "d = {d}: {e:?}");
                    assert_eq!((x * x - BigInt::from(d) * y * y) % 4, BigInt::from(0));
                }
            }
        }
    }
    let b = selmer2_basis(-39).unwrap();
    assert_eq!(b[1], SelmerElement::Rational(3));
}

#[test]
fn quadratic_eigenspace_matches_class_group() {
    let budget = Budget::default();
    for ell in (5..3000u64).filter(|&l| l % 4 == 1 && is_prime(l)) {
        for p in [3u64, 5] {
            if p == 5 && ell > 1500 {
                continue;
            }
            let want: u64 = p_part(&class_group(ell as i64).unwrap(), p).iter().product();
            let rec = compute_fitting_ideal(ell, p, 2, 1, None, &budget).unwrap();
            let got = eigenspace_class_order(&rec.ideal().unwrap()).unwrap();
            assert_eq!(got, want as u128, "ell = {ell}, p = {p}");
        }
    }
}

fn form_strategy() -> impl Strategy<Value = (i64, [usize; 3])> {
    (prop::sample::select(fundamentals(-3000, 3000)), [any::<usize>(), any::<usize>(), any::<usize>()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_laws((d, ix) in form_strategy()) {
        let g = class_group(d).unwrap();
        let reps = g.narrow_representatives();
        let [f, h, k] = ix.map(|i| reps[i % reps.len()]);
        let fh = compose(&f, &h);
        prop_assert_eq!(fh.discriminant(), d);
        prop_assert!(g.same_class(&fh, &compose(&h, &f)));
        prop_assert!(g.same_class(&compose(&fh, &k), &compose(&f, &compose(&h, &k))));
        prop_assert!(g.is_principal(&compose(&f, &f.inverse())));
        prop_assert!(g.same_class(&compose(&f, &BinaryQuadraticForm::principal(d)), &f));
        // dlog is a homomorphism onto the invariants
        let (a, b, c) = (g.dlog(&f), g.dlog(&h), g.dlog(&fh));
        for j in 0..g.invariants.len() {
            prop_assert_eq!((a[j] + b[j]) % g.invariants[j], c[j]);
        }
        let ord = g.order_of(&f);
        prop_assert_eq!(g.order % ord, 0);
    }
}

#[test]
fn dlog_is_a_bijection() {
    for d in [-3299, -420, -4027, 229, 4 * 2379, 4 * 1155] {
        let g = class_group(d).unwrap();
        let coords: BTreeSet<Vec<u64>> = g.narrow_representatives().iter().map(|f| g.narrow_dlog(f)).collect();
        assert_eq!(coords.len() as u64, g.narrow_order, "d = {d}");
    }
}
