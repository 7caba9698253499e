//! Ideals of R = O_χ[T]/(ω_n, p^N).
//!
//! An ideal I is stored as a pair (P, M): P is a distinguished polynomial of
//! least degree λ in I and M = I ∩ {deg < λ} in Howell form. Since R/I is a
//! quotient of O_χ[T]/(P), everything below works in that rank-λd module,
//! which stays tiny even when p^n is in the thousands.

use super::expr::IntPoly;
use super::ring::{EigenRing, RingElement};
use super::IwasawaError;
use crate::arith::{ResidueMatrix, Submodule};

#[derive(Debug, Clone)]
struct Canon {
    lambda: usize,
    // monic, (lambda+1) blocks; canonical once `finish` ran
    pmon: Vec<u64>,
    // columns in descending T-degree (reverse of the block layout)
    low: Submodule,
}

impl PartialEq for Canon {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.pmon == other.pmon && self.low == other.low
    }
}

fn rev(v: &[u64]) -> Vec<u64> {
    v.iter().rev().copied().collect()
}

fn close(ring: &EigenRing, low: &mut Submodule, mut queue: Vec<Vec<u64>>, pmon: &[u64]) {
    while let Some(v) = queue.pop() {
        if v.is_empty() || !low.insert(&rev(&v)) {
            continue;
        }
        queue.push(ring.mul_t_mod(&v, pmon));
        if ring.degree() > 1 {
            queue.push(ring.mul_zeta(&v));
        }
    }
}

/// Distinguished polynomial of degree `lam` dividing `f` with unit cofactor;
/// `lam` must be the lowest T-degree of `f` carrying a unit coefficient.
fn weierstrass(ring: &EigenRing, f: &[u64], lam: usize) -> Vec<u64> {
    let d = ring.degree();
    let mut pmon = vec![0u64; (lam + 1) * d];
    pmon[lam * d..].copy_from_slice(&ring.o_one());
    if lam == 0 {
        return pmon;
    }
    let high = &f[lam * d..];
    let h0 = &high[..d];
    let h0_inv = ring.o_inv(h0).expect("unit coefficient");
    // t = high^{-1} mod T^lam
    let mut t = vec![0u64; lam * d];
    t[..d].copy_from_slice(&h0_inv);
    for k in 1..lam {
        let mut acc = vec![0u64; d];
        for i in 1..=k {
            if (i + 1) * d > high.len() {
                break;
            }
            ring.o_mul_acc(&high[i * d..(i + 1) * d], &t[(k - i) * d..(k - i + 1) * d], &mut acc, false);
        }
        let tk = ring.o_mul(&acc, &h0_inv);
        for j in 0..d {
            t[k * d + j] = ring.subm(0, tk[j]);
        }
    }
    for _ in 0..=ring.precision() + 1 {
        let (_, r) = ring.poly_divrem(f, &pmon);
        if r.iter().all(|&x| x == 0) {
            return pmon;
        }
        let corr = ring.poly_mul(&r, &t);
        for k in 0..lam * d {
            pmon[k] = ring.addm(pmon[k], corr[k]);
        }
    }
    unreachable!("Weierstrass lifting did not converge");
}

fn canon_from_gens(ring: &EigenRing, gens: Vec<Vec<u64>>) -> Canon {
    let d = ring.degree();
    let mut pmon = ring.omega_n_poly();
    let pn = ring.tower_order();
    let best = gens
        .iter()
        .filter_map(|g| ring.unit_index(g).map(|k| (k, g)))
        .filter(|&(k, _)| k < pn)
        .min_by_key(|&(k, _)| k);
    if let Some((k, g)) = best {
        pmon = weierstrass(ring, g, k);
    }
    let mut pending = gens;
    pending.push(ring.omega_n_poly());
    loop {
        let lambda = pmon.len() / d - 1;
        let mut low = Submodule::new(ring.p(), ring.precision(), lambda * d);
        if lambda > 0 {
            let queue = pending.iter().map(|g| ring.poly_rem(g, &pmon)).collect();
            close(ring, &mut low, queue, &pmon);
        }
        let better = low
            .generators()
            .map(|c| rev(c))
            .filter_map(|v| ring.unit_index(&v).map(|k| (k, v)))
            .min_by_key(|(k, _)| *k);
        match better {
            Some((k, v)) if k < lambda => {
                pending = low.generators().map(|c| rev(c)).collect();
                pending.push(pmon.clone());
                pmon = weierstrass(ring, &v, k);
            }
            _ => {
                // canonical P = T^λ - (canonical residue of T^λ)
                let mut neg = vec![0u64; lambda * d];
                for k in 0..lambda * d {
                    neg[k] = ring.subm(0, pmon[k]);
                }
                let c = rev(&low.reduce(&rev(&neg)));
                for k in 0..lambda * d {
                    pmon[k] = ring.subm(0, c[k]);
                }
                return Canon { lambda, pmon, low };
            }
        }
    }
}

/// Canonical generators of the ideal spanned by `gens`: equal outputs iff
/// equal ideals. The unit ideal gives the single polynomial 1.
pub(crate) fn canonical_span(ring: &EigenRing, gens: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    canon_from_gens(ring, gens).generator_polys()
}

impl Canon {
    fn residue(&self, ring: &EigenRing, x: &[u64]) -> Vec<u64> {
        if self.lambda == 0 {
            return Vec::new();
        }
        let r = ring.poly_rem(x, &self.pmon);
        rev(&self.low.reduce(&rev(&r)))
    }

    fn plus(&self, ring: &EigenRing, x: &[u64]) -> Submodule {
        let mut low = self.low.clone();
        if self.lambda > 0 {
            close(ring, &mut low, vec![ring.poly_rem(x, &self.pmon)], &self.pmon);
        }
        low
    }

    fn generator_polys(&self) -> Vec<Vec<u64>> {
        let mut out = vec![self.pmon.clone()];
        out.extend(self.low.canonical_rows().iter().map(|r| rev(r)));
        out
    }
}

/// An ideal of an [`EigenRing`], canonical up to equality of ideals.
#[derive(Debug, Clone)]
pub struct RingIdeal {
    ring: EigenRing,
    generators: Vec<RingElement>,
    canon: Canon,
    dominated: bool,
}

impl PartialEq for RingIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.canon == other.canon
    }
}
impl Eq for RingIdeal {}

/// The ideal generated by integer polynomials in T and z.
pub fn ideal_make(ring: &EigenRing, gens: &[IntPoly]) -> Result<RingIdeal, IwasawaError> {
    let hi = ring.with_precision(ring.precision() + 1)?;
    let lifted = gens.iter().map(|g| hi.from_int_poly(g).coords).collect();
    let generators = gens.iter().map(|g| ring.from_int_poly(g)).collect();
    RingIdeal::build(ring, &hi, lifted, generators)
}

impl RingIdeal {
    /// Ideal generated by elements given to one extra digit of precision:
    /// `hi` must be `ring` at precision N+1.
    pub(crate) fn from_lifted(
        ring: &EigenRing,
        hi: &EigenRing,
        gens_hi: Vec<Vec<u64>>,
    ) -> Result<Self, IwasawaError> {
        let m = ring.modulus();
        let generators = gens_hi
            .iter()
            .map(|g| RingElement { coords: g.iter().map(|&x| x % m).collect() })
            .collect();
        RingIdeal::build(ring, hi, gens_hi, generators)
    }

    /// Ideal generated by elements of the ring itself. Their coordinates are
    /// read as integer lifts, which may leave the ideal undominated.
    pub fn from_elements(ring: &EigenRing, gens: &[RingElement]) -> Result<Self, IwasawaError> {
        let hi = ring.with_precision(ring.precision() + 1)?;
        let lifted = gens.iter().map(|g| g.coords.clone()).collect();
        RingIdeal::build(ring, &hi, lifted, gens.to_vec())
    }

    fn build(
        ring: &EigenRing,
        hi: &EigenRing,
        gens_hi: Vec<Vec<u64>>,
        generators: Vec<RingElement>,
    ) -> Result<Self, IwasawaError> {
        let d = ring.degree();
        let canon_hi = canon_from_gens(hi, gens_hi);
        let dominated = canon_hi.lambda == 0 || {
            let mut pn = vec![0u64; canon_hi.lambda * d];
            pn[0] = ring.modulus();
            canon_hi.low.contains(&rev(&pn))
        };
        let m = ring.modulus();
        let down = |v: &[u64]| v.iter().map(|&x| x % m).collect::<Vec<u64>>();
        let mut gens_lo = vec![down(&canon_hi.pmon)];
        gens_lo.extend(canon_hi.low.generators().map(|c| down(&rev(c))));
        let canon = canon_from_gens(ring, gens_lo);
        Ok(RingIdeal { ring: ring.clone(), generators, canon, dominated })
    }

    pub fn ring(&self) -> &EigenRing {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    /// Whether p^N lies in the ideal, certified one digit further out.
    pub fn is_dominated(&self) -> bool {
        self.dominated
    }

    fn require_dominated(&self) -> Result<(), IwasawaError> {
        if self.dominated {
            Ok(())
        } else {
            Err(IwasawaError::PrecisionTooLow { prec: self.ring.precision() })
        }
    }

    pub fn is_unit(&self) -> bool {
        self.canon.lambda == 0
    }

    /// Least degree of a distinguished polynomial in the ideal.
    pub fn lambda(&self) -> usize {
        self.canon.lambda
    }

    /// Canonical generators: the distinguished polynomial followed by the
    /// Howell rows of the low part.
    pub fn canonical_generators(&self) -> Vec<RingElement> {
        self.canon
            .generator_polys()
            .into_iter()
            .map(|g| self.ring.element_from_poly(&g))
            .collect()
    }

    /// Canonical generators as integer polynomials, with `p^N` appended.
    pub fn canonical_int_polys(&self) -> Vec<IntPoly> {
        let mut out: Vec<IntPoly> = self
            .canon
            .generator_polys()
            .iter()
            .map(|g| self.ring.poly_to_int(g))
            .collect();
        if !self.is_unit() {
            out.push(IntPoly::constant(self.ring.modulus() as i128));
        }
        out
    }

    /// Smallest k with p^k in the ideal (0 for the unit ideal).
    pub fn exponent(&self) -> Option<u32> {
        if self.is_unit() {
            return Some(0);
        }
        let d = self.ring.degree();
        (0..=self.ring.precision()).find(|&k| {
            let mut v = vec![0u64; self.canon.lambda * d];
            v[0] = self.ring.p().pow(k) % self.ring.modulus();
            self.canon.low.contains(&rev(&v))
        }).filter(|&k| k < self.ring.precision() || self.dominated)
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        self.canon.residue(&self.ring, &x.coords).iter().all(|&c| c == 0)
    }

    /// Canonical representative of x modulo the ideal.
    pub fn residue(&self, x: &RingElement) -> RingElement {
        let mut r = self.canon.residue(&self.ring, &x.coords);
        r.resize(self.ring.rank(), 0);
        RingElement { coords: r }
    }

    /// log_p |R/I|.
    pub fn index_log(&self) -> u32 {
        self.canon.low.index_log()
    }

    /// Full Howell form of the ideal in R, columns ordered by descending
    /// T-degree and, within a degree, descending power of ζ.
    pub fn howell(&self) -> ResidueMatrix {
        let ring = &self.ring;
        let d = ring.degree();
        let rank = ring.rank();
        let lam = self.canon.lambda;
        let mut rows = Vec::new();
        // a pivot 1 in every column of degree >= λ; the row is the basis
        // element minus its canonical residue
        let mut tj: Option<Vec<u64>> = None;
        for j in lam..ring.tower_order() {
            let cur = match tj.take() {
                None => {
                    let mut t = vec![0u64; (lam + 1) * d];
                    t[lam * d..].copy_from_slice(&ring.o_one());
                    ring.poly_rem(&t, &self.canon.pmon)
                }
                Some(prev) => ring.mul_t_mod(&prev, &self.canon.pmon),
            };
            for i in 0..d {
                let zi = ring.o_zeta_pow(i as u64);
                let mut e = vec![0u64; lam * d];
                for k in 0..lam {
                    let blk = ring.o_mul(&cur[k * d..(k + 1) * d], &zi);
                    e[k * d..(k + 1) * d].copy_from_slice(&blk);
                }
                let rep = if lam == 0 { Vec::new() } else { rev(&self.canon.low.reduce(&rev(&e))) };
                let mut full = vec![0u64; rank];
                full[j * d + i] = 1;
                for k in 0..lam * d {
                    full[k] = ring.subm(full[k], rep[k]);
                }
                rows.push(rev(&full));
            }
            tj = Some(cur);
        }
        for r in self.canon.low.canonical_rows() {
            let mut row = vec![0u64; rank - lam * d];
            row.extend(r);
            rows.push(row);
        }
        // already reduced; only the row order needs fixing
        rows.sort_by_key(|r| r.iter().position(|&x| x != 0));
        ResidueMatrix::from_reduced(ring.p(), ring.precision(), rank, rows)
    }

    fn check_same_ring(&self, other: &RingIdeal) {
        assert!(self.ring == other.ring, "ideals live in different rings");
    }

    /// Sum of two ideals.
    pub fn add(&self, other: &RingIdeal) -> RingIdeal {
        self.check_same_ring(other);
        let mut gens = self.canon.generator_polys();
        gens.extend(other.canon.generator_polys());
        let canon = canon_from_gens(&self.ring, gens);
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        RingIdeal {
            ring: self.ring.clone(),
            generators,
            canon,
            dominated: self.dominated || other.dominated,
        }
    }

    // ---- Iwasawa-theoretic invariants ----------------------------------

    /// |R/(I + (T))|, the order of the χ-part of the class group.
    pub fn eigenspace_class_order_log(&self) -> Result<u32, IwasawaError> {
        self.require_dominated()?;
        Ok(self.canon.plus(&self.ring, &self.ring.t().coords).index_log())
    }

    /// |R/(I + (ω_m))|.
    pub fn level_class_order_log(&self, m: u32) -> Result<u32, IwasawaError> {
        self.require_dominated()?;
        if m > self.ring.n() {
            return Err(IwasawaError::LevelOutOfRange { m, n: self.ring.n() });
        }
        Ok(self.canon.plus(&self.ring, &self.ring.omega(m).coords).index_log())
    }

    /// Cyclic invariants (p-exponents) of R/(I + (T)).
    pub fn class_invariants(&self) -> Result<Vec<u32>, IwasawaError> {
        self.require_dominated()?;
        let s = self.canon.low.cols();
        let sub = self.canon.plus(&self.ring, &self.ring.t().coords);
        Ok(Submodule::full(self.ring.p(), self.ring.precision(), s).quotient_invariants(&sub))
    }

    /// Cyclic invariants of R/(I + (ω_m)); m = n gives R/I.
    pub fn level_invariants(&self, m: u32) -> Result<Vec<u32>, IwasawaError> {
        self.require_dominated()?;
        if m > self.ring.n() {
            return Err(IwasawaError::LevelOutOfRange { m, n: self.ring.n() });
        }
        let s = self.canon.low.cols();
        let sub = self.canon.plus(&self.ring, &self.ring.omega(m).coords);
        Ok(Submodule::full(self.ring.p(), self.ring.precision(), s).quotient_invariants(&sub))
    }

    /// {f : Tf ∈ I} / (I + (ω_n/T)), as cyclic p-exponents.
    pub fn capitulation_module(&self) -> Result<CapitulationModule, IwasawaError> {
        self.require_dominated()?;
        let ring = &self.ring;
        let lam = self.canon.lambda;
        let p = ring.p();
        if lam == 0 {
            return Ok(CapitulationModule { p, invariants: Vec::new() });
        }
        let s = lam * ring.degree();
        let images: Vec<Vec<u64>> = (0..s)
            .map(|c| {
                let mut e = vec![0u64; s];
                e[s - 1 - c] = 1;
                rev(&ring.mul_t_mod(&e, &self.canon.pmon))
            })
            .collect();
        let kernel = Submodule::preimage(&images, &self.canon.low);
        let sub = self.canon.plus(ring, &ring.omega_over_t().coords);
        debug_assert!(sub.generators().all(|g| kernel.contains(g)));
        let invariants = kernel.quotient_invariants(&sub);
        Ok(CapitulationModule { p, invariants })
    }

    /// log_p |{f : Tf ∈ I}/I|.
    pub fn t_kernel_log(&self) -> Result<u32, IwasawaError> {
        self.require_dominated()?;
        let ring = &self.ring;
        let lam = self.canon.lambda;
        if lam == 0 {
            return Ok(0);
        }
        let s = lam * ring.degree();
        let images: Vec<Vec<u64>> = (0..s)
            .map(|c| {
                let mut e = vec![0u64; s];
                e[s - 1 - c] = 1;
                rev(&ring.mul_t_mod(&e, &self.canon.pmon))
            })
            .collect();
        let kernel = Submodule::preimage(&images, &self.canon.low);
        Ok(kernel.order_log() - self.canon.low.order_log())
    }

    /// Whether ω_n(T)/T ∈ I, i.e. every class of the χ-part capitulates.
    pub fn maximal_capitulation(&self) -> Result<bool, IwasawaError> {
        self.require_dominated()?;
        Ok(self.contains(&self.ring.omega_over_t()))
    }
}

/// {f : Tf ∈ I}/(I + (ω_n/T)) for one eigenspace: dual to the capitulation
/// kernel, so abstractly isomorphic to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapitulationModule {
    pub p: u64,
    /// p-exponents of the cyclic factors, descending.
    pub invariants: Vec<u32>,
}

impl CapitulationModule {
    pub fn order_log(&self) -> u32 {
        self.invariants.iter().sum()
    }
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.order_log())
    }
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
    /// Cyclic factor orders, descending.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.invariants.iter().map(|&e| self.p.pow(e)).collect()
    }
}
