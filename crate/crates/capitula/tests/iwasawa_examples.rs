use capitula::iwasawa::*;

fn ideal(p: u64, n: u32, c: u64, prec: u32, gens: &[&str]) -> RingIdeal {
    let r = ring_make(p, n, c, prec).unwrap();
    let g: Vec<IntPoly> = gens.iter().map(|s| IntPoly::parse(s).unwrap()).collect();
    ideal_make(&r, &g).unwrap()
}

#[test]
fn quadratic_2089() {
    let i = ideal(3, 2, 2, 3, &["T-3", "27"]);
    assert!(i.is_dominated());
    assert_eq!(eigenspace_class_order(&i).unwrap(), 3);
    assert!(capitulation_module(&i).unwrap().is_trivial());
    assert!(!maximal_capitulation(&i).unwrap());
    let r = i.ring();
    // ω_2/T ≡ (4^9-1)/3 = 87381 mod I, which is 9 mod 27
    let res = i.residue(&r.omega_over_t());
    assert_eq!(res, i.residue(&r.constant((4i128.pow(9) - 1) / 3)));
    assert_eq!(r.render(&res), "9");
    // Tf ∈ I iff 9 | f(3): index 9
    assert_eq!(i.index_log() - i.t_kernel_log().unwrap(), 2);
    assert_eq!(i.index_log(), 3);
    assert_eq!(
        i.canonical_int_polys().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        vec!["T-3", "27"]
    );
}

#[test]
fn cubic_7489() {
    let i = ideal(2, 5, 3, 3, &["T+2+4*z", "8"]);
    assert_eq!(eigenspace_class_order(&i).unwrap(), 4);
    assert!(maximal_capitulation(&i).unwrap());
    let m = capitulation_module(&i).unwrap();
    assert_eq!(m.order(), 4);
    assert_eq!(m.factor_orders(), vec![2, 2]);
    assert_eq!(
        i.canonical_int_polys().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        vec!["T+2+4*z", "8"]
    );
}

#[test]
fn cubic_9337() {
    let i = ideal(2, 2, 3, 3, &["T+4-2*z", "8"]);
    assert_eq!(eigenspace_class_order(&i).unwrap(), 4);
    assert!(!maximal_capitulation(&i).unwrap());
    assert!(capitulation_module(&i).unwrap().is_trivial());
    let r = i.ring();
    // ((-3+2z)^4-1)/(-4+2z) = 4+4z = -4z^2 mod 8, nonzero
    let res = i.residue(&r.omega_over_t());
    assert_eq!(res, i.residue(&r.scalar_mul(&r.mul(&r.zeta(), &r.zeta()), -4)));
    assert_eq!(r.render(&res), "4+4*z");
    // {f : Tf ∈ I} has index 16 in R
    assert_eq!(i.index_log() - i.t_kernel_log().unwrap(), 4);
}

#[test]
fn levels_and_units() {
    let i = ideal(3, 2, 2, 3, &["T-3", "27"]);
    assert_eq!(level_class_order(&i, 0).unwrap(), 3);
    assert_eq!(level_class_order(&i, 2).unwrap(), 27);
    let u = ideal(3, 2, 2, 3, &["1"]);
    assert!(u.is_unit());
    assert_eq!(eigenspace_class_order(&u).unwrap(), 1);
    assert!(maximal_capitulation(&u).unwrap());
}

#[test]
fn undominated_ideal_is_rejected() {
    // R/(T) is Z_3, so no power of 3 lies in (T)
    let i = ideal(3, 2, 2, 3, &["T"]);
    assert!(!i.is_dominated());
    assert!(matches!(
        eigenspace_class_order(&i),
        Err(IwasawaError::PrecisionTooLow { .. })
    ));
}

#[test]
fn howell_matrix_matches_generic_form() {
    use capitula::arith::{howell_form, ResidueMatrix};
    let i = ideal(2, 2, 3, 3, &["T+4-2*z", "8"]);
    let r = i.ring();
    let h = i.howell();
    // span of all ζ^i T^j g, reversed column order, through the generic routine
    let rank = r.rank();
    let mut rows = Vec::new();
    for g in i.generators() {
        let mut x = g.clone();
        for _ in 0..r.tower_order() {
            let mut y = x.clone();
            for _ in 0..r.degree() {
                rows.push(y.coords().iter().rev().map(|&c| c as i64).collect::<Vec<_>>());
                y = r.mul(&y, &r.zeta());
            }
            x = r.mul(&x, &r.t());
        }
    }
    let generic = howell_form(&ResidueMatrix::new(r.modulus(), rank, &rows).unwrap());
    assert_eq!(h, generic);
}
