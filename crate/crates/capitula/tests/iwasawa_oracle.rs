// Exhaustive checks on rings small enough to enumerate.

use std::collections::HashSet;

use capitula::iwasawa::*;
use proptest::prelude::*;

type V = Vec<u64>;

struct Brute {
    r: EigenRing,
    all: Vec<RingElement>,
}

impl Brute {
    fn new(r: EigenRing) -> Self {
        let m = r.modulus();
        let rank = r.rank();
        let mut all = Vec::new();
        let mut c = vec![0u64; rank];
        loop {
            all.push(r.from_coords(&c).unwrap());
            let mut k = 0;
            while k < rank {
                c[k] += 1;
                if c[k] < m {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
        }
        Brute { r, all }
    }

    fn basis(&self) -> Vec<RingElement> {
        (0..self.r.rank())
            .map(|k| {
                let mut c = vec![0u64; self.r.rank()];
                c[k] = 1;
                self.r.from_coords(&c).unwrap()
            })
            .collect()
    }

    /// Additive span of `gens`.
    fn span(&self, gens: &[RingElement]) -> HashSet<V> {
        let mut set: HashSet<V> = HashSet::from([self.r.zero().coords().to_vec()]);
        for g in gens {
            if set.contains(g.coords()) {
                continue;
            }
            let mut multiples = vec![self.r.zero()];
            let mut x = g.clone();
            while !x.is_zero() {
                multiples.push(x.clone());
                x = self.r.add(&x, g);
            }
            let old: Vec<V> = set.iter().cloned().collect();
            for s in &old {
                let s = self.r.from_coords(s).unwrap();
                for mlt in &multiples {
                    set.insert(self.r.add(&s, mlt).coords().to_vec());
                }
            }
        }
        set
    }

    /// The ideal generated by `gens`.
    fn ideal(&self, gens: &[RingElement]) -> HashSet<V> {
        let basis = self.basis();
        let prods: Vec<RingElement> =
            gens.iter().flat_map(|g| basis.iter().map(|b| self.r.mul(b, g))).collect();
        self.span(&prods)
    }

    fn log(&self, n: usize) -> u32 {
        let p = self.r.p() as usize;
        let mut k = 0;
        let mut x = 1usize;
        while x < n {
            x *= p;
            k += 1;
        }
        assert_eq!(x, n, "not a p-power");
        k
    }

    fn elems(&self, set: &HashSet<V>) -> Vec<RingElement> {
        set.iter().map(|c| self.r.from_coords(c).unwrap()).collect()
    }

    /// p-exponents of the cyclic factors of K/L, descending.
    fn invariants(&self, k: &HashSet<V>, l: &HashSet<V>) -> Vec<u32> {
        let mut counts = vec![0u32];
        let mut j = 1;
        loop {
            let pj = (self.r.p() as i128).pow(j);
            let torsion = self
                .elems(k)
                .iter()
                .filter(|x| l.contains(self.r.scalar_mul(x, pj).coords()))
                .count();
            let c = self.log(torsion) - self.log(l.len());
            if c == *counts.last().unwrap() {
                break;
            }
            counts.push(c);
            j += 1;
        }
        // counts[j] - counts[j-1] factors have exponent >= j
        let mut out = Vec::new();
        for j in (1..counts.len()).rev() {
            let ge = counts[j] - counts[j - 1];
            let gt = if j + 1 < counts.len() { counts[j + 1] - counts[j] } else { 0 };
            out.extend(std::iter::repeat(j as u32).take((ge - gt) as usize));
        }
        out
    }
}

fn check_against_oracle(b: &Brute, gens: &[IntPoly]) {
    let r = &b.r;
    let ideal = ideal_make(r, gens).unwrap();
    let elems: Vec<RingElement> = gens.iter().map(|g| r.from_int_poly(g)).collect();
    let i = b.ideal(&elems);
    let size = b.all.len();
    assert_eq!(ideal.index_log(), b.log(size / i.len()), "index of {gens:?}");
    for x in &b.all {
        assert_eq!(ideal.contains(x), i.contains(x.coords()));
    }
    // residues are constant exactly on cosets
    let sample: Vec<&RingElement> = b.all.iter().step_by(size / 64 + 1).collect();
    for x in &sample {
        for y in &sample {
            let same = ideal.residue(x) == ideal.residue(y);
            assert_eq!(same, i.contains(r.sub(x, y).coords()));
        }
    }
    let canon: Vec<RingElement> = ideal.canonical_generators();
    assert_eq!(b.ideal(&canon), i, "canonical generators span a different ideal");
    if !ideal.is_dominated() {
        return;
    }
    let with = |extra: RingElement| {
        let mut g = elems.clone();
        g.push(extra);
        b.ideal(&g)
    };
    let it = with(r.t());
    assert_eq!(ideal.eigenspace_class_order_log().unwrap(), b.log(size / it.len()));
    for m in 0..=r.n() {
        let im = with(r.omega(m));
        assert_eq!(ideal.level_class_order_log(m).unwrap(), b.log(size / im.len()));
    }
    let t = r.t();
    let kset: HashSet<V> = b
        .all
        .iter()
        .filter(|f| i.contains(r.mul(&t, f).coords()))
        .map(|f| f.coords().to_vec())
        .collect();
    assert_eq!(ideal.t_kernel_log().unwrap(), b.log(kset.len() / i.len()));
    let lset = with(r.omega_over_t());
    let module = ideal.capitulation_module().unwrap();
    assert_eq!(module.invariants, b.invariants(&kset, &lset));
    assert_eq!(ideal.maximal_capitulation().unwrap(), i.contains(r.omega_over_t().coords()));
    let class = ideal.class_invariants().unwrap();
    let rset: HashSet<V> = b.all.iter().map(|x| x.coords().to_vec()).collect();
    assert_eq!(class, b.invariants(&rset, &it));
}

fn poly(terms: &[(i128, u32, u32)]) -> IntPoly {
    IntPoly { terms: terms.iter().map(|&(coeff, z, t)| Term { coeff, z, t }).collect() }
}

#[test]
fn worked_example_ideal_by_enumeration() {
    // the (T-3, 27) ideal at the smaller tower n = 1
    let b = Brute::new(ring_make(3, 1, 2, 3).unwrap());
    check_against_oracle(&b, &[IntPoly::parse("T-3").unwrap(), IntPoly::parse("27").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("T^2+3*T+9").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("T").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("9").unwrap(), IntPoly::parse("3*T").unwrap()]);
}

#[test]
fn level_one_matches_enumeration_at_27() {
    // R/(I + ω_1) for the first worked ideal, enumerated in Z/27[T]/ω_1
    let r = ring_make(3, 1, 2, 3).unwrap();
    let b = Brute::new(r.clone());
    let i = ideal_make(&r, &[IntPoly::parse("T-3").unwrap(), IntPoly::parse("27").unwrap()])
        .unwrap();
    let set = b.ideal(&[r.from_int_poly(&IntPoly::parse("T-3").unwrap()), r.omega(1)]);
    // ω_1(3) = 4^3 - 1 = 63 = 9·7
    assert_eq!(b.all.len() / set.len(), 9);
    assert_eq!(i.level_class_order_log(1).unwrap(), 2);
}

#[test]
fn cubic_small_ring_by_enumeration() {
    let b = Brute::new(ring_make(2, 1, 3, 2).unwrap());
    check_against_oracle(&b, &[IntPoly::parse("T+2*z").unwrap(), IntPoly::parse("4").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("T-z").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("2").unwrap()]);
    let b = Brute::new(ring_make(2, 1, 3, 3).unwrap());
    check_against_oracle(&b, &[IntPoly::parse("T+2+4*z").unwrap(), IntPoly::parse("8").unwrap()]);
    check_against_oracle(&b, &[IntPoly::parse("T+4-2*z").unwrap(), IntPoly::parse("8").unwrap()]);
}

fn small_ring() -> impl Strategy<Value = (u64, u32, u64, u32)> {
    prop::sample::select(vec![
        (3, 1, 1, 2),
        (3, 1, 2, 2),
        (2, 1, 1, 3),
        (2, 1, 3, 2),
        (2, 1, 3, 3),
        (2, 2, 1, 3),
        (2, 2, 1, 2),
        (3, 1, 2, 3),
    ])
}

fn gens_strategy() -> impl Strategy<Value = (Vec<Vec<(i128, u32, u32)>>, u32)> {
    let term = (-30i128..30, 0u32..3, 0u32..5);
    (prop::collection::vec(prop::collection::vec(term, 1..4), 1..3), 1u32..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_ideals_match_enumeration(ring in small_ring(), (gens, k) in gens_strategy()) {
        let r = ring_make(ring.0, ring.1, ring.2, ring.3).unwrap();
        let b = Brute::new(r);
        let mut g: Vec<IntPoly> = gens.iter().map(|t| poly(t)).collect();
        check_against_oracle(&b, &g);
        // with a power of p thrown in the ideal is dominated
        g.push(IntPoly::constant((ring.0 as i128).pow(k.min(ring.3))));
        check_against_oracle(&b, &g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_and_cokernel_of_t_have_equal_order(
        ring in small_ring(), (gens, k) in gens_strategy()
    ) {
        let r = ring_make(ring.0, ring.1, ring.2, ring.3).unwrap();
        let mut g: Vec<IntPoly> = gens.iter().map(|t| poly(t)).collect();
        g.push(IntPoly::constant((ring.0 as i128).pow(k.min(ring.3))));
        let i = ideal_make(&r, &g).unwrap();
        prop_assert!(i.is_dominated());
        prop_assert_eq!(i.t_kernel_log().unwrap(), i.eigenspace_class_order_log().unwrap());
    }

    #[test]
    fn generator_order_does_not_matter(
        ring in small_ring(), (gens, _k) in gens_strategy(), seed in any::<u64>()
    ) {
        let r = ring_make(ring.0, ring.1, ring.2, ring.3).unwrap();
        let g: Vec<IntPoly> = gens.iter().map(|t| poly(t)).collect();
        let mut h = g.clone();
        // deterministic shuffle plus a redundant generator
        let n = h.len();
        for a in 0..n {
            h.swap(a, (seed as usize).wrapping_add(a * 7) % n);
        }
        h.push(g[0].clone());
        let a = ideal_make(&r, &g).unwrap();
        let b = ideal_make(&r, &h).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.canonical_int_polys(), b.canonical_int_polys());
        prop_assert_eq!(a.howell(), b.howell());
    }
}
