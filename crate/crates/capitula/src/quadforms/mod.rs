//! Binary quadratic forms, class groups of quadratic fields, fundamental
//! units and the capitulating classes built from them.
//!
//! For d > 0 the forms describe the narrow class group; the class group of
//! the field is its quotient by the class of (−1, b, c).

pub(crate) mod selmer;
mod snf;
mod unit;

pub use selmer::{ambiguous_classes, selmer2_basis, SelmerElement};
pub use unit::{
    fundamental_unit, lemma1_decompose, visible_class, FundamentalUnit, Lemma1Decomposition,
    VisibleClass,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{factor, gcd, isqrt};
use snf::smith;

/// Largest |d| accepted by [`class_group`].
pub const MAX_DISCRIMINANT: i64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("|d| = {0} exceeds the supported bound")]
    Overflow(i64),
    #[error("({a},{b},{c}) is not a primitive form of nonsquare discriminant")]
    NotAForm { a: i64, b: i64, c: i64 },
    #[error("fundamental unit of Q(√{d1}) has norm −1")]
    NormMinusOne { d1: i64 },
    #[error("{d1} is not a proper fundamental divisor of {d}")]
    BadDivisor { d: i64, d1: i64 },
    #[error("no form of discriminant {d} represents {r}")]
    NoFormFound { d: i64, r: i64 },
}

/// ax² + bxy + cy².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: i64| m != 0 && factor(m.unsigned_abs()).factors.iter().all(|&(_, e)| e == 1);
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

fn is_square_i64(d: i64) -> bool {
    d >= 0 && {
        let r = isqrt(d as u64) as i64;
        r * r == d
    }
}

pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, QuadError> {
        let f = BinaryQuadraticForm { a, b, c };
        let d = f.disc128();
        let bad = || QuadError::NotAForm { a, b, c };
        if d == 0 || d.rem_euclid(4) > 1 || d.abs() > i64::MAX as i128 {
            return Err(bad());
        }
        if is_square_i64(d as i64) || (d < 0 && a <= 0) {
            return Err(bad());
        }
        if gcd(gcd(a.unsigned_abs(), b.unsigned_abs()), c.unsigned_abs()) != 1 {
            return Err(bad());
        }
        Ok(f)
    }

    fn disc128(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    pub fn discriminant(&self) -> i64 {
        self.disc128() as i64
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// (1, δ, (δ − d)/4) with δ ∈ {0, 1}, reduced for d > 0 as well.
    pub fn principal(d: i64) -> Self {
        if d < 0 {
            let b = d.rem_euclid(2);
            return BinaryQuadraticForm { a: 1, b, c: (b * b - d) / 4 };
        }
        let r = isqrt(d as u64) as i64;
        let b = if (r - d) % 2 == 0 { r } else { r - 1 };
        BinaryQuadraticForm { a: 1, b, c: (b * b - d) / 4 }
    }

    pub fn inverse(&self) -> Self {
        BinaryQuadraticForm { a: self.a, b: -self.b, c: self.c }
    }

    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || (self.a != 0 && self.b % self.a == 0) || self.a == self.c
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.disc128();
        if d < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
        } else {
            let (a, b) = (self.a.unsigned_abs() as i128, self.b as i128);
            let lt = |x: i128| x < 0 || x * x < d;
            b > 0 && lt(b) && (2 * a + b) * (2 * a + b) > d && lt(2 * a - b)
        }
    }

    /// A reduced form in the same proper class. For d < 0 it is the unique
    /// one; for d > 0 it lies on the cycle of the class.
    pub fn reduce(&self) -> Self {
        if self.disc128() < 0 {
            reduce_definite(*self)
        } else {
            let mut f = normalize_indefinite(*self);
            let mut steps = 0u32;
            while !f.is_reduced() {
                f = rho(f);
                steps += 1;
                debug_assert!(steps < 10_000, "reduction did not terminate on {self}");
            }
            f
        }
    }
}

fn reduce_definite(mut f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    let d = f.disc128();
    loop {
        let two_a = 2 * f.a as i128;
        let mut b = (f.b as i128).rem_euclid(two_a);
        if b > f.a as i128 {
            b -= two_a;
        }
        let c = (b * b - d) / (2 * two_a);
        f = BinaryQuadraticForm { a: f.a, b: b as i64, c: c as i64 };
        if f.a > f.c {
            f = BinaryQuadraticForm { a: f.c, b: -f.b, c: f.a };
            continue;
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        return f;
    }
}

pub(crate) fn normalize_indefinite(f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    let d = f.disc128();
    let a = f.a as i128;
    let aa = a.abs();
    let b = f.b as i128;
    let nb = if aa * aa > d {
        let mut x = b.rem_euclid(2 * aa);
        if x > aa {
            x -= 2 * aa;
        }
        x
    } else {
        let r = isqrt(d as u64) as i128;
        r - (r - b).rem_euclid(2 * aa)
    };
    let c = (nb * nb - d) / (4 * a);
    BinaryQuadraticForm { a: f.a, b: nb as i64, c: c as i64 }
}

pub(crate) fn rho(f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    normalize_indefinite(BinaryQuadraticForm { a: f.c, b: -f.b, c: f.a })
}

/// Gauss composition; the result is primitive but not reduced.
pub fn compose(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> BinaryQuadraticForm {
    let d = f.disc128();
    debug_assert_eq!(d, g.disc128());
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let s = (b1 + b2) / 2;
    let (g1, u1, v1) = xgcd(a1, a2);
    let (e, x, w) = xgcd(g1, s);
    let (u, v) = (x * u1, x * v1);
    let a3 = a1 * a2 / (e * e);
    let m = 2 * a3.abs();
    let bb = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2) / e;
    let b3 = bb.rem_euclid(m);
    let c3 = (b3 * b3 - d) / (4 * a3);
    debug_assert_eq!((b3 * b3 - d) % (4 * a3), 0);
    BinaryQuadraticForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }
}

/// All reduced forms of discriminant d (primitive only), sorted.
pub fn reduced_forms(d: i64) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    let prim = |a: i64, b: i64, c: i64| gcd(gcd(a.unsigned_abs(), b.unsigned_abs()), c.unsigned_abs()) == 1;
    if d < 0 {
        let amax = isqrt((-d / 3) as u64) as i64;
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - d) / (4 * a);
                let f = BinaryQuadraticForm { a, b, c };
                if c >= a && f.is_reduced() && prim(a, b, c) {
                    out.push(f);
                }
            }
        }
    } else {
        let r = isqrt(d as u64) as i64;
        let mut b = if (r - d) % 2 == 0 { r } else { r - 1 };
        while b > 0 {
            let n = (d - b * b) / 4;
            for a in 1..=(r + b) / 2 + 1 {
                if n % a != 0 {
                    continue;
                }
                for sa in [a, -a] {
                    let f = BinaryQuadraticForm { a: sa, b, c: -n / sa };
                    if f.is_reduced() && prim(f.a, f.b, f.c) {
                        out.push(f);
                    }
                }
            }
            b -= 2;
        }
    }
    out.sort();
    out
}

struct Tables {
    reps: Vec<BinaryQuadraticForm>,
    index: HashMap<BinaryQuadraticForm, usize>,
    // class -> exponents over the incremental generators
    pre: Vec<Vec<i64>>,
    // pre-coordinates -> coordinates over the (wide) SNF generators
    wide_v: Vec<Vec<i128>>,
    wide_diag: Vec<i128>,
    narrow_v: Vec<Vec<i128>>,
    narrow_diag: Vec<i128>,
}

impl Tables {
    fn id(&self, f: &BinaryQuadraticForm) -> usize {
        self.index[&f.reduce()]
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        self.id(&compose(&self.reps[i], &self.reps[j]))
    }

    fn pow(&self, i: usize, mut e: u64) -> usize {
        let mut acc = 0usize;
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn coords(&self, class: usize, v: &[Vec<i128>], diag: &[i128]) -> Vec<u64> {
        let x = &self.pre[class];
        (0..diag.len())
            .filter(|&j| diag[j] != 1)
            .map(|j| {
                let s: i128 = x.iter().enumerate().map(|(k, &xk)| xk as i128 * v[k][j]).sum();
                s.rem_euclid(diag[j]) as u64
            })
            .collect()
    }
}

/// The class group of a quadratic field as an abstract abelian group with
/// form representatives. `invariants` are those of the class group of the
/// field (wide sense); the narrow ones are kept separately.
#[derive(Clone)]
pub struct FormClassGroup {
    pub discriminant: i64,
    pub order: u64,
    /// d₁ | d₂ | …, all > 1.
    pub invariants: Vec<u64>,
    pub generators: Vec<BinaryQuadraticForm>,
    /// Number of ambiguous narrow classes, 2^{s−1}.
    pub ambiguous_count: u64,
    pub narrow_order: u64,
    pub narrow_invariants: Vec<u64>,
    tables: Arc<Tables>,
}

impl fmt::Debug for FormClassGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormClassGroup")
            .field("discriminant", &self.discriminant)
            .field("order", &self.order)
            .field("invariants", &self.invariants)
            .field("generators", &self.generators)
            .field("narrow_invariants", &self.narrow_invariants)
            .finish()
    }
}

impl PartialEq for FormClassGroup {
    fn eq(&self, o: &Self) -> bool {
        self.discriminant == o.discriminant
            && self.invariants == o.invariants
            && self.generators == o.generators
            && self.narrow_invariants == o.narrow_invariants
    }
}

pub fn class_group(d: i64) -> Result<FormClassGroup, QuadError> {
    if d.abs() > MAX_DISCRIMINANT {
        return Err(QuadError::Overflow(d));
    }
    if !is_fundamental(d) {
        return Err(QuadError::NotFundamental(d));
    }
    let reduced = reduced_forms(d);
    let mut index = HashMap::new();
    let mut reps = Vec::new();
    if d < 0 {
        for (i, f) in reduced.iter().enumerate() {
            index.insert(*f, i);
        }
        reps = reduced.clone();
    } else {
        // one class per ρ-cycle, represented by its least (|a|, a<0, b) form
        let mut seen: HashMap<BinaryQuadraticForm, usize> = HashMap::new();
        let key = |f: &BinaryQuadraticForm| (f.a.abs(), f.a < 0, f.b);
        let principal = BinaryQuadraticForm::principal(d);
        let mut starts = vec![principal];
        starts.extend(reduced.iter().copied());
        for f in starts {
            if seen.contains_key(&f) {
                continue;
            }
            let id = reps.len();
            let mut cycle = vec![f];
            let mut g = rho(f);
            while g != f {
                cycle.push(g);
                g = rho(g);
            }
            for g in &cycle {
                seen.insert(*g, id);
            }
            reps.push(*cycle.iter().min_by_key(|g| key(g)).unwrap());
        }
        index = seen;
    }
    let h = reps.len();
    let mut t = Tables {
        reps,
        index,
        pre: Vec::new(),
        wide_v: Vec::new(),
        wide_diag: Vec::new(),
        narrow_v: Vec::new(),
        narrow_diag: Vec::new(),
    };
    debug_assert_eq!(t.id(&BinaryQuadraticForm::principal(d)), 0);

    // subgroup built one generator at a time; relations e·g_new = word
    let mut pre: Vec<Option<Vec<i64>>> = vec![None; h];
    pre[0] = Some(Vec::new());
    let mut members = vec![0usize];
    let mut gens: Vec<usize> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for x in 0..h {
        if pre[x].is_some() {
            continue;
        }
        let k = gens.len();
        gens.push(x);
        for r in relations.iter_mut() {
            r.push(0);
        }
        for v in pre.iter_mut().flatten() {
            v.push(0);
        }
        let mut e = 1i64;
        let mut y = x;
        while pre[y].is_none() {
            y = t.mul(y, x);
            e += 1;
        }
        let mut rel: Vec<i64> = pre[y].clone().unwrap().iter().map(|c| -c).collect();
        rel[k] += e;
        relations.push(rel);
        let old = members.clone();
        let mut xi = 0usize;
        for i in 1..e {
            xi = t.mul(xi, x);
            for &m in &old {
                let z = t.mul(m, xi);
                if pre[z].is_none() {
                    let mut v = pre[m].clone().unwrap();
                    v[k] += i;
                    pre[z] = Some(v);
                    members.push(z);
                }
            }
        }
    }
    let k = gens.len();
    t.pre = pre.into_iter().map(|v| v.unwrap()).collect();

    let to128 = |rows: &[Vec<i64>]| -> Vec<Vec<i128>> {
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    };
    let narrow = smith(&to128(&relations), k);
    let mut wide_rel = relations.clone();
    if d > 0 {
        let j = t.id(&BinaryQuadraticForm {
            a: -1,
            b: BinaryQuadraticForm::principal(d).b,
            c: -BinaryQuadraticForm::principal(d).c,
        });
        wide_rel.push(t.pre[j].clone());
    }
    let wide = smith(&to128(&wide_rel), k);

    let gens_of = |s: &snf::Smith| -> Vec<usize> {
        (0..k)
            .filter(|&j| s.diag[j] != 1)
            .map(|j| {
                (0..k).fold(0usize, |acc, i| {
                    let e = s.v_inv[j][i].rem_euclid(h as i128) as u64;
                    t.mul(acc, t.pow(gens[i], e))
                })
            })
            .collect()
    };
    let generators = gens_of(&wide).into_iter().map(|i| t.reps[i]).collect();
    let inv = |s: &snf::Smith| -> Vec<u64> {
        s.diag.iter().filter(|&&x| x != 1).map(|&x| x as u64).collect()
    };
    let invariants = inv(&wide);
    let narrow_invariants = inv(&narrow);
    t.wide_v = wide.v;
    t.wide_diag = wide.diag;
    t.narrow_v = narrow.v;
    t.narrow_diag = narrow.diag;
    let ambiguous_count = narrow_invariants.iter().map(|&x| gcd(x, 2)).product();
    Ok(FormClassGroup {
        discriminant: d,
        order: invariants.iter().product(),
        invariants,
        generators,
        ambiguous_count,
        narrow_order: h as u64,
        narrow_invariants,
        tables: Arc::new(t),
    })
}

impl FormClassGroup {
    /// Coordinates of the class of f over `generators`, reduced mod `invariants`.
    pub fn dlog(&self, f: &BinaryQuadraticForm) -> Vec<u64> {
        let t = &self.tables;
        t.coords(t.id(f), &t.wide_v, &t.wide_diag)
    }

    /// Coordinates in the narrow class group.
    pub fn narrow_dlog(&self, f: &BinaryQuadraticForm) -> Vec<u64> {
        let t = &self.tables;
        t.coords(t.id(f), &t.narrow_v, &t.narrow_diag)
    }

    /// Order of the class of f in the class group of the field.
    pub fn order_of(&self, f: &BinaryQuadraticForm) -> u64 {
        self.dlog(f)
            .iter()
            .zip(&self.invariants)
            .map(|(&x, &n)| n / gcd(x, n))
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    pub fn is_principal(&self, f: &BinaryQuadraticForm) -> bool {
        self.dlog(f).iter().all(|&x| x == 0)
    }

    pub fn same_class(&self, f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> bool {
        self.is_principal(&compose(f, &g.inverse()))
    }

    /// One reduced representative per narrow class.
    pub fn narrow_representatives(&self) -> &[BinaryQuadraticForm] {
        &self.tables.reps
    }

    /// |A[m]| for the class group A.
    pub fn torsion_order(&self, m: u64) -> u64 {
        self.invariants.iter().map(|&n| gcd(n, m)).product()
    }

    /// Exponent of the group (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants.len() <= 1
    }
}

/// The p-primary part of a finite abelian group given by invariants,
/// as ascending cyclic orders.
pub fn p_part_of(invariants: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = invariants
        .iter()
        .map(|&n| {
            let mut q = 1;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            q
        })
        .filter(|&q| q > 1)
        .collect();
    out.sort();
    out
}

pub fn p_part(g: &FormClassGroup, p: u64) -> Vec<u64> {
    p_part_of(&g.invariants, p)
}
