use capitula::arith::{is_prime, pow_mod, primes_between};
use capitula::fields::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Conductors ℓ < 200 with m | ℓ − 1, m in 2..=8.
fn cases() -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for ell in primes_between(3, 200) {
        for m in 2..=8u64 {
            if (ell - 1) % m == 0 {
                v.push((ell, m));
            }
        }
    }
    v
}

#[test]
fn septic_cubic() {
    let p = period_polynomial(7, 3).unwrap();
    assert_eq!(p.poly, Polynomial::from_i64(&[-1, -2, 1, 1]));
    assert_eq!(p.poly.to_string(), "X^3+X^2-2*X-1");
    let (numeric, err) = numeric_period_polynomial(7, 3).unwrap();
    assert!(err < 1e-9);
    for (a, b) in numeric.iter().zip(&p.poly.coefficients) {
        assert!((a - b.to_f64().unwrap()).abs() < 1e-6);
    }
    assert_eq!(p.poly.discriminant(), BigInt::from(49));
}

#[test]
fn exact_against_numeric() {
    for (ell, m) in cases() {
        let p = period_polynomial(ell, m).unwrap();
        assert_eq!(p.poly.degree() as u64, m);
        assert_eq!(p.poly.coefficients[m as usize], BigInt::from(1));
        let (numeric, err) = numeric_period_polynomial(ell, m).unwrap();
        if err < 1e-3 {
            for (a, b) in numeric.iter().zip(&p.poly.coefficients) {
                assert!((a - b.to_f64().unwrap()).abs() < 0.5, "ℓ={ell} m={m}");
            }
        }
    }
}

#[test]
fn splitting_follows_the_residue_degree() {
    // q splits completely in the degree-m subfield iff q^((ℓ−1)/m) ≡ 1 mod ℓ
    for (ell, m) in cases() {
        let p = period_polynomial(ell, m).unwrap();
        let mut split = 0;
        for q in primes_between(3, 2000).into_iter().filter(|&q| q != ell) {
            let expect = pow_mod(q, (ell - 1) / m, ell) == 1;
            if p.poly.discriminant() % BigInt::from(q) != BigInt::from(0) {
                assert_eq!(split_completely_mod(&p.poly, q), expect, "ℓ={ell} m={m} q={q}");
            }
            split += expect as usize;
            if split >= 5 && q > 500 {
                break;
            }
        }
    }
}

#[test]
fn compositum_13() {
    let p = period_polynomial(13, 3).unwrap();
    let c = compositum_polynomial(&p, 13).unwrap();
    assert_eq!(c.degree(), 6);
    let disc = c.discriminant();
    for q in primes_between(3, 400).into_iter().filter(|&q| q != 13) {
        if disc.clone() % BigInt::from(q) == BigInt::from(0) {
            continue;
        }
        // K(√13) is the sextic subfield: q splits iff q ≡ ±1 mod 13
        let expect = q % 13 == 1 || q % 13 == 12;
        assert_eq!(split_completely_mod(&c, q), expect, "q={q}");
    }
}

#[test]
fn rejects_bad_input() {
    assert!(period_polynomial(15, 2).is_err());
    assert!(period_polynomial(13, 5).is_err());
    assert!(period_polynomial(97, MAX_DEGREE * 2).is_err());
    let p = period_polynomial(13, 4).unwrap();
    assert!(compositum_polynomial(&p, 13).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn discriminant_is_power_of_ell_times_square(ell in 5u64..400, m in 2u64..7) {
        prop_assume!(is_prime(ell) && (ell - 1) % m == 0);
        let p = period_polynomial(ell, m).unwrap();
        let mut d = p.poly.discriminant();
        let l = BigInt::from(ell);
        for _ in 0..m - 1 {
            prop_assert_eq!(d.clone() % &l, BigInt::from(0));
            d /= &l;
        }
        let negative = (ell - 1) / m % 2 == 1 && m % 4 == 2;
        prop_assert_eq!(d < BigInt::from(0), negative);
        let d = if negative { -d } else { d };
        let r = d.sqrt();
        prop_assert_eq!(&r * &r, d);
    }
}
