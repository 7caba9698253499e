use std::sync::Arc;

use super::expr::{IntPoly, Term};
use super::IwasawaError;
use crate::arith::{inv_mod, is_prime, valuation};

/// Largest p^f for which the factor of the cyclotomic polynomial is found by
/// enumeration.
const FACTOR_SEARCH_LIMIT: u64 = 1 << 20;

/// The ring O_χ[T]/(ω_n(T), p^N) with O_χ = Z_p[ζ] for ζ of order `chi_order`.
///
/// Elements are coordinate vectors over the basis ζ^i T^j, stored with index
/// `j*d + i`, entries in `[0, p^N)`.
#[derive(Debug, Clone)]
pub struct EigenRing {
    p: u64,
    n: u32,
    chi_order: u64,
    prec: u32,
    modulus: u64,
    d: usize,
    pn: usize,
    // zeta satisfies z^d = -sum zeta_min[i] z^i; reduction mod p fixed per (p, chi_order)
    zeta_min: Arc<Vec<u64>>,
    // monic ω_n as a polynomial over Z: coefficients of T^0..T^pn
    omega: Arc<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    pub(crate) coords: Vec<u64>,
}

impl RingElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl PartialEq for EigenRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.chi_order == other.chi_order
            && self.prec == other.prec
    }
}
impl Eq for EigenRing {}

pub fn ring_make(p: u64, n: u32, chi_order: u64, prec: u32) -> Result<EigenRing, IwasawaError> {
    EigenRing::new(p, n, chi_order, prec)
}

impl EigenRing {
    pub fn new(p: u64, n: u32, chi_order: u64, prec: u32) -> Result<Self, IwasawaError> {
        if !is_prime(p) {
            return Err(IwasawaError::NotPrime(p));
        }
        if chi_order == 0 || chi_order % p == 0 {
            return Err(IwasawaError::ChiOrderNotCoprime { p, chi_order });
        }
        if prec == 0 {
            return Err(IwasawaError::BadPrecision(prec));
        }
        let modulus = p
            .checked_pow(prec)
            .filter(|&m| m < (1 << 62))
            .ok_or(IwasawaError::BadPrecision(prec))?;
        let pn = p
            .checked_pow(n)
            .filter(|&m| m <= 1 << 16)
            .ok_or(IwasawaError::TowerTooDeep(n))? as usize;
        let gbar = least_cyclotomic_factor(p, chi_order)?;
        let zeta_min = lift_factor(p, prec, &gbar);
        let omega = omega_coeffs(p, pn as u64, prec);
        Ok(EigenRing {
            p,
            n,
            chi_order,
            prec,
            modulus,
            d: gbar.len(),
            pn,
            zeta_min: Arc::new(zeta_min),
            omega: Arc::new(omega),
        })
    }

    pub fn with_precision(&self, prec: u32) -> Result<Self, IwasawaError> {
        EigenRing::new(self.p, self.n, self.chi_order, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn chi_order(&self) -> u64 {
        self.chi_order
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// Degree of O_χ over Z_p.
    pub fn degree(&self) -> usize {
        self.d
    }
    /// p^n, the number of T-columns.
    pub fn tower_order(&self) -> usize {
        self.pn
    }
    /// Rank of the ring as a Z/p^N-module.
    pub fn rank(&self) -> usize {
        self.d * self.pn
    }
    /// Coefficients c_i of the minimal polynomial z^d + Σ c_i z^i of ζ.
    pub fn zeta_minpoly(&self) -> &[u64] {
        &self.zeta_min
    }

    // ---- scalars -------------------------------------------------------

    #[inline]
    pub(crate) fn mulm(&self, a: u64, b: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            a * b % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }
    #[inline]
    pub(crate) fn addm(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    #[inline]
    pub(crate) fn subm(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    pub(crate) fn reduce_int(&self, c: i128) -> u64 {
        c.rem_euclid(self.modulus as i128) as u64
    }

    // ---- O_χ arithmetic on blocks of length d --------------------------

    pub(crate) fn o_mul_acc(&self, a: &[u64], b: &[u64], out: &mut [u64], sub: bool) {
        let d = self.d;
        if d == 1 {
            let t = self.mulm(a[0], b[0]);
            out[0] = if sub { self.subm(out[0], t) } else { self.addm(out[0], t) };
            return;
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = self.addm(prod[i + j], self.mulm(a[i], b[j]));
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                let t = self.mulm(c, self.zeta_min[i]);
                prod[k - d + i] = self.subm(prod[k - d + i], t);
            }
        }
        for i in 0..d {
            out[i] = if sub { self.subm(out[i], prod[i]) } else { self.addm(out[i], prod[i]) };
        }
    }

    pub(crate) fn o_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.d];
        self.o_mul_acc(a, b, &mut out, false);
        out
    }

    pub(crate) fn o_is_unit(&self, a: &[u64]) -> bool {
        a.iter().any(|&x| x % self.p != 0)
    }

    pub(crate) fn o_one(&self) -> Vec<u64> {
        let mut v = vec![0; self.d];
        v[0] = 1 % self.modulus;
        v
    }

    pub(crate) fn o_zeta_pow(&self, k: u64) -> Vec<u64> {
        let mut z = vec![0; self.d];
        if self.d == 1 {
            z[0] = self.reduce_int(-(self.zeta_min[0] as i128));
        } else {
            z[1] = 1;
        }
        let mut acc = self.o_one();
        let mut base = z;
        let mut e = k % self.chi_order;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.o_mul(&acc, &base);
            }
            base = self.o_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn o_inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if !self.o_is_unit(a) {
            return None;
        }
        if self.d == 1 {
            return inv_mod(a[0], self.modulus).map(|x| vec![x]);
        }
        // a^(p^d - 2) inverts mod p, Newton lifts to p^N
        let e = self.p.pow(self.d as u32) - 2;
        let mut y = self.o_one();
        let mut base = a.to_vec();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                y = self.o_mul(&y, &base);
            }
            base = self.o_mul(&base, &base);
            k >>= 1;
        }
        let two = {
            let mut t = vec![0; self.d];
            t[0] = 2 % self.modulus;
            t
        };
        let mut good = 1u32;
        while good < self.prec {
            let ay = self.o_mul(a, &y);
            let mut corr = two.clone();
            for i in 0..self.d {
                corr[i] = self.subm(corr[i], ay[i]);
            }
            y = self.o_mul(&y, &corr);
            good *= 2;
        }
        debug_assert_eq!(self.o_mul(a, &y), self.o_one());
        Some(y)
    }

    // ---- polynomials over O_χ, flattened blocks ------------------------

    pub(crate) fn omega_n_poly(&self) -> Vec<u64> {
        self.omega_poly(self.n)
    }

    /// Monic ω_m as a flattened polynomial of degree p^m.
    pub(crate) fn omega_poly(&self, m: u32) -> Vec<u64> {
        let pm = self.p.pow(m) as usize;
        let coeffs = if m == self.n {
            self.omega.as_ref().clone()
        } else {
            omega_coeffs(self.p, pm as u64, self.prec)
        };
        let mut out = vec![0u64; (pm + 1) * self.d];
        for (j, c) in coeffs.into_iter().enumerate() {
            out[j * self.d] = c;
        }
        out
    }

    /// Product of two flattened polynomials, no reduction in T.
    pub(crate) fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.d;
        let la = a.len() / d;
        let lb = b.len() / d;
        if la == 0 || lb == 0 {
            return Vec::new();
        }
        let mut out = vec![0u64; (la + lb - 1) * d];
        for i in 0..la {
            let ai = &a[i * d..(i + 1) * d];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..lb {
                let bj = &b[j * d..(j + 1) * d];
                let (lo, hi) = ((i + j) * d, (i + j + 1) * d);
                self.o_mul_acc(ai, bj, &mut out[lo..hi], false);
            }
        }
        out
    }

    /// Quotient and remainder of `a` by the monic polynomial `m`.
    pub(crate) fn poly_divrem(&self, a: &[u64], m: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let d = self.d;
        let lam = m.len() / d - 1;
        let la = a.len() / d;
        let mut r = a.to_vec();
        if la <= lam {
            r.resize(lam * d, 0);
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; (la - lam) * d];
        for j in (lam..la).rev() {
            let c: Vec<u64> = r[j * d..(j + 1) * d].to_vec();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            q[(j - lam) * d..(j - lam + 1) * d].copy_from_slice(&c);
            for k in 0..lam {
                let mk = &m[k * d..(k + 1) * d];
                let off = (j - lam + k) * d;
                self.o_mul_acc(&c, mk, &mut r[off..off + d], true);
            }
            for x in &mut r[j * d..(j + 1) * d] {
                *x = 0;
            }
        }
        r.truncate(lam * d);
        (q, r)
    }

    pub(crate) fn poly_rem(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        self.poly_divrem(a, m).1
    }

    /// Multiply a residue mod the monic `m` by T.
    pub(crate) fn mul_t_mod(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let d = self.d;
        let lam = m.len() / d - 1;
        if lam == 0 {
            return Vec::new();
        }
        let mut out = vec![0u64; lam * d];
        out[d..].copy_from_slice(&a[..(lam - 1) * d]);
        let top = &a[(lam - 1) * d..lam * d];
        if top.iter().any(|&x| x != 0) {
            for k in 0..lam {
                let mk = &m[k * d..(k + 1) * d];
                self.o_mul_acc(top, mk, &mut out[k * d..(k + 1) * d], true);
            }
        }
        out
    }

    pub(crate) fn mul_zeta(&self, a: &[u64]) -> Vec<u64> {
        let d = self.d;
        let z = self.o_zeta_pow(1);
        let mut out = vec![0u64; a.len()];
        for j in 0..a.len() / d {
            self.o_mul_acc(&a[j * d..(j + 1) * d], &z, &mut out[j * d..(j + 1) * d], false);
        }
        out
    }

    pub(crate) fn scale_poly(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| self.mulm(x, c)).collect()
    }

    /// Lowest T-degree whose coefficient is a unit of O_χ.
    pub(crate) fn unit_index(&self, a: &[u64]) -> Option<usize> {
        let d = self.d;
        (0..a.len() / d).find(|&j| self.o_is_unit(&a[j * d..(j + 1) * d]))
    }

    // ---- ring elements -------------------------------------------------

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![0; self.rank()] }
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    pub fn constant(&self, c: i128) -> RingElement {
        let mut e = self.zero();
        e.coords[0] = self.reduce_int(c);
        e
    }

    /// Element with coordinate `j*d + i` on `x^i T^j`, where `x` generates O
    /// over Z_p. Entries are reduced mod p^N; `None` on a length mismatch.
    pub fn from_coords(&self, coords: &[u64]) -> Option<RingElement> {
        (coords.len() == self.rank()).then(|| RingElement {
            coords: coords.iter().map(|&c| c % self.modulus).collect(),
        })
    }

    pub fn t(&self) -> RingElement {
        self.element_from_poly(&[0, 1].iter().flat_map(|&c| {
            let mut b = vec![0; self.d];
            b[0] = c;
            b
        }).collect::<Vec<_>>())
    }

    pub fn zeta(&self) -> RingElement {
        let mut e = self.zero();
        let z = self.o_zeta_pow(1);
        e.coords[..self.d].copy_from_slice(&z);
        e
    }

    /// Reduce an arbitrary flattened polynomial into the ring.
    pub(crate) fn element_from_poly(&self, a: &[u64]) -> RingElement {
        let mut r = self.poly_rem(a, &self.omega_n_poly());
        r.resize(self.rank(), 0);
        RingElement { coords: r }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.addm(x, y)).collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.subm(x, y)).collect(),
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.element_from_poly(&self.poly_mul(&a.coords, &b.coords))
    }

    pub fn scalar_mul(&self, a: &RingElement, c: i128) -> RingElement {
        let c = self.reduce_int(c);
        RingElement { coords: self.scale_poly(&a.coords, c) }
    }

    /// ω_m(T) as an element (zero when m = n).
    pub fn omega(&self, m: u32) -> RingElement {
        assert!(m <= self.n);
        self.element_from_poly(&self.omega_poly(m))
    }

    /// ω_n(T)/T.
    pub fn omega_over_t(&self) -> RingElement {
        let w = self.omega_n_poly();
        let mut e = self.zero();
        e.coords.copy_from_slice(&w[self.d..]);
        e
    }

    /// Σ_r c_r (1+T)^r for coefficients c_r ∈ O_χ, r < p^n (flattened).
    pub fn from_group_ring(&self, coeffs: &[u64]) -> RingElement {
        let d = self.d;
        let mut a = coeffs.to_vec();
        a.resize(self.rank(), 0);
        // Taylor shift f(X) -> f(X+1)
        let len = self.pn;
        for i in 0..len {
            for j in (i..len - 1).rev() {
                for k in 0..d {
                    let v = self.addm(a[j * d + k], a[(j + 1) * d + k]);
                    a[j * d + k] = v;
                }
            }
        }
        RingElement { coords: a }
    }

    pub fn from_int_poly(&self, p: &IntPoly) -> RingElement {
        let d = self.d;
        // exponents beyond 2p^n go through repeated squaring instead
        let cut = 2 * self.pn + 1;
        let mut poly = vec![0u64; cut * d];
        let mut acc = self.zero();
        for term in &p.terms {
            let c = self.reduce_int(term.coeff);
            let mut blk = self.o_zeta_pow(term.z as u64);
            for x in &mut blk {
                *x = self.mulm(*x, c);
            }
            let t = term.t as usize;
            if t < cut {
                for k in 0..d {
                    poly[t * d + k] = self.addm(poly[t * d + k], blk[k]);
                }
            } else {
                let mut s = self.zero();
                s.coords[..d].copy_from_slice(&blk);
                acc = self.add(&acc, &self.mul(&self.pow_t(term.t as u64), &s));
            }
        }
        self.add(&acc, &self.element_from_poly(&poly))
    }

    fn pow_t(&self, mut e: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = self.t();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer polynomial with balanced coefficients in (-p^N/2, p^N/2].
    pub fn to_int_poly(&self, a: &RingElement) -> IntPoly {
        self.poly_to_int(&a.coords)
    }

    pub(crate) fn poly_to_int(&self, a: &[u64]) -> IntPoly {
        let d = self.d;
        let mut terms = Vec::new();
        let half = self.modulus / 2;
        for j in (0..a.len() / d).rev() {
            for i in 0..d {
                let c = a[j * d + i];
                if c == 0 {
                    continue;
                }
                let coeff = if c > half { c as i128 - self.modulus as i128 } else { c as i128 };
                terms.push(Term { coeff, z: i as u32, t: j as u32 });
            }
        }
        IntPoly { terms }
    }

    pub fn render(&self, a: &RingElement) -> String {
        self.to_int_poly(a).to_string()
    }

    pub fn parse(&self, s: &str) -> Result<RingElement, IwasawaError> {
        Ok(self.from_int_poly(&IntPoly::parse(s)?))
    }
}

/// Binomial coefficients C(m, j) mod `modulus`, j = 0..=m.
fn omega_coeffs(p: u64, m: u64, prec: u32) -> Vec<u64> {
    let modulus = p.pow(prec);
    let prec = prec as i64;
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % modulus as u128) as u64;
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(0); // ω has no constant term
    let mut v: i64 = 0;
    let mut unit: u64 = 1 % modulus;
    for j in 1..=m {
        let num = m - j + 1;
        let vn = valuation(num, p) as i64;
        let vd = valuation(j, p) as i64;
        unit = mulm(unit, (num / p.pow(vn as u32)) % modulus);
        let dj = (j / p.pow(vd as u32)) % modulus;
        unit = mulm(unit, inv_mod(dj, modulus).expect("unit"));
        v += vn - vd;
        let val = if v >= prec { 0 } else { mulm(unit, p.pow(v as u32)) };
        out.push(val);
    }
    out
}

/// Integer coefficients of the c-th cyclotomic polynomial, constant term first.
pub(crate) fn cyclotomic_poly(c: u64) -> Vec<i64> {
    // x^c - 1 divided by Φ_e for every proper divisor e
    let mut num: Vec<i64> = vec![0; c as usize + 1];
    num[0] = -1;
    num[c as usize] = 1;
    for e in 1..c {
        if c % e == 0 {
            let den = cyclotomic_poly(e);
            num = exact_div(&num, &den);
        }
    }
    num
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = r.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db] / b[db];
        q[k] = c;
        for i in 0..=db {
            r[k + i] -= c * b[i];
        }
    }
    q
}

/// Least monic irreducible factor (coefficients compared from the top) of
/// Φ_c mod p, without its leading 1.
fn least_cyclotomic_factor(p: u64, c: u64) -> Result<Vec<u64>, IwasawaError> {
    let phi: Vec<u64> = cyclotomic_poly(c)
        .into_iter()
        .map(|x| x.rem_euclid(p as i64) as u64)
        .collect();
    // all factors have degree f = ord_c(p)
    let mut f = 1u32;
    if c > 1 {
        let mut x = p % c;
        while x != 1 {
            x = x * p % c;
            f += 1;
        }
    }
    let count = p.checked_pow(f).filter(|&x| x <= FACTOR_SEARCH_LIMIT);
    let count = count.ok_or(IwasawaError::UnsupportedCharacter { p, chi_order: c })?;
    for k in 0..count {
        let mut g = Vec::with_capacity(f as usize + 1);
        let mut t = k;
        for _ in 0..f {
            g.push(t % p);
            t /= p;
        }
        g.push(1);
        if divides_mod_p(&g, &phi, p) {
            g.pop();
            return Ok(g);
        }
    }
    Err(IwasawaError::UnsupportedCharacter { p, chi_order: c })
}

fn divides_mod_p(g: &[u64], a: &[u64], p: u64) -> bool {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    if r.len() <= dg {
        return r.iter().all(|&x| x == 0);
    }
    for k in (0..r.len() - dg).rev() {
        let c = r[k + dg];
        if c == 0 {
            continue;
        }
        for i in 0..=dg {
            r[k + i] = (r[k + i] + p * p - c * g[i] % p) % p;
        }
    }
    r[..dg].iter().all(|&x| x == 0)
}

/// Hensel lift of the mod-p factor `gbar` of Φ_c to precision p^prec: the
/// minimal polynomial of the Teichmüller lift of a root of `gbar`.
fn lift_factor(p: u64, prec: u32, gbar: &[u64]) -> Vec<u64> {
    let f = gbar.len();
    let m = p.pow(prec);
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % m as u128) as u64;
    if f == 1 {
        // root r0 = -gbar[0]; lift by r <- r^p repeatedly
        let mut r = (p - gbar[0] % p) % p;
        for _ in 0..prec {
            r = crate::arith::pow_mod(r, p, m);
        }
        return vec![(m - r) % m];
    }
    // arithmetic in A = Z/p^prec [x]/(gbar)
    let amul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut prod = vec![0u64; 2 * f - 1];
        for i in 0..f {
            for j in 0..f {
                prod[i + j] = (prod[i + j] + mulm(a[i], b[j])) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            for i in 0..f {
                prod[k - f + i] = (prod[k - f + i] + m - mulm(c, gbar[i])) % m;
            }
        }
        prod.truncate(f);
        prod
    };
    let apow = |a: &[u64], mut e: u64| -> Vec<u64> {
        let mut acc = vec![0u64; f];
        acc[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = amul(&acc, &base);
            }
            base = amul(&base, &base);
            e >>= 1;
        }
        acc
    };
    let q = p.pow(f as u32);
    let mut t = vec![0u64; f];
    t[1] = 1;
    for _ in 0..prec {
        t = apow(&t, q);
    }
    // ∏_{k<f} (X - t^{p^k}) with coefficients in A
    let mut poly: Vec<Vec<u64>> = vec![{
        let mut one = vec![0u64; f];
        one[0] = 1;
        one
    }];
    let mut root = t;
    for _ in 0..f {
        let mut next = vec![vec![0u64; f]; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            for k in 0..f {
                next[i + 1][k] = (next[i + 1][k] + c[k]) % m;
            }
            let rc = amul(c, &root);
            for k in 0..f {
                next[i][k] = (next[i][k] + m - rc[k]) % m;
            }
        }
        poly = next;
        root = apow(&root, p);
    }
    poly.pop();
    poly.into_iter()
        .map(|c| {
            debug_assert!(c[1..].iter().all(|&x| x == 0), "lifted factor not over Z_p");
            c[0]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_rings() {
        let r = ring_make(3, 2, 2, 3).unwrap();
        assert_eq!((r.degree(), r.rank(), r.modulus()), (1, 9, 27));
        assert_eq!(r.render(&r.zeta()), "-1");
        let r = ring_make(2, 5, 3, 3).unwrap();
        assert_eq!((r.degree(), r.rank(), r.modulus()), (2, 64, 8));
        assert_eq!(r.zeta_minpoly(), &[1, 1]);
        assert!(matches!(ring_make(3, 1, 3, 2), Err(IwasawaError::ChiOrderNotCoprime { .. })));
    }

    #[test]
    fn omega_vanishes() {
        for (p, n, c, prec) in [(3, 2, 2, 3), (2, 3, 3, 4), (7, 1, 3, 2), (5, 1, 4, 2)] {
            let r = ring_make(p, n, c, prec).unwrap();
            assert!(r.omega(n).is_zero());
            let w = r.omega_over_t();
            assert!(r.mul(&w, &r.t()).is_zero());
            // ζ has the right order
            let mut z = r.one();
            for _ in 0..c {
                z = r.mul(&z, &r.zeta());
            }
            assert_eq!(z, r.one());
        }
    }

    #[test]
    fn cube_root_in_z7() {
        let r = ring_make(7, 0, 3, 4).unwrap();
        assert_eq!(r.degree(), 1);
        let z = r.zeta().coords[0];
        assert_eq!(z % 7, 4);
        assert_eq!(crate::arith::pow_mod(z, 3, 2401), 1);
    }

    #[test]
    fn taylor_shift() {
        let r = ring_make(3, 1, 2, 3).unwrap();
        // (1+T)^2 = 1 + 2T + T^2
        let e = r.from_group_ring(&[0, 0, 1]);
        assert_eq!(e.coords, vec![1, 2, 1]);
        assert_eq!(r.render(&r.parse("T^3").unwrap()), r.render(&r.parse("-3*T^2-3*T").unwrap()));
    }
}
