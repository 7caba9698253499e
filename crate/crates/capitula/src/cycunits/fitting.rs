use rayon::prelude::*;

use super::{aux_logs, aux_step, CycUnitError, CyclotomicUnitSymbol};
use crate::arith::{gcd, is_prime, valuation};
use crate::iwasawa::ideal::canonical_span;
use crate::iwasawa::{ideal_make, ring_make, EigenRing, IntPoly, IwasawaError, RingIdeal};

/// Sampling limits for [`compute_fitting_ideal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub batch_size: usize,
    /// Batches without change before the ideal counts as stable.
    pub stable_batches: usize,
    pub max_batches: usize,
    /// Largest precision exponent tried by the doubling retry.
    pub max_precision: u32,
    pub max_tower: u32,
    /// Number of admissible q skipped before sampling starts.
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            batch_size: 4,
            stable_batches: 5,
            max_batches: 60,
            max_precision: 24,
            max_tower: 16,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested,
}

/// A Fitting ideal I_χ ⊂ O_χ[[T]]/(ω_n) together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittingIdealRecord {
    pub ell: u64,
    pub p: u64,
    pub chi_order: u64,
    /// χ(g) = ζ^{chi_id} for the least primitive root g mod ℓ.
    pub chi_id: u64,
    pub n: u32,
    pub prec: u32,
    pub generators: Vec<String>,
    pub provenance: Provenance,
    pub aux_primes_used: u32,
    pub seed: u64,
    /// Batches the Howell form stayed unchanged (computed records only).
    pub stable_batches: Option<u32>,
}

impl FittingIdealRecord {
    pub fn ring(&self) -> Result<EigenRing, IwasawaError> {
        ring_make(self.p, self.n, self.chi_order, self.prec)
    }

    pub fn ideal(&self) -> Result<RingIdeal, IwasawaError> {
        let ring = self.ring()?;
        let gens = self
            .generators
            .iter()
            .map(|g| IntPoly::parse(g))
            .collect::<Result<Vec<_>, _>>()?;
        ideal_make(&ring, &gens)
    }
}

/// v_p((ℓ−1)/2): the p-part of Gal(Q(ζ_ℓ)⁺/Q) has order p^n.
pub fn tower_exponent(ell: u64, p: u64) -> u32 {
    valuation((ell - 1) / 2, p)
}

/// One chi_id per O_χ-component: characters of order `chi_order` on the
/// p-free part of Gal(Q(ζ_ℓ)⁺/Q), up to Frobenius χ ↦ χ^p. Empty if there
/// are none.
pub fn eigen_characters(ell: u64, p: u64, chi_order: u64) -> Vec<u64> {
    let m = (ell - 1) / 2;
    let free = m / p.pow(valuation(m, p));
    if chi_order < 2 || free % chi_order != 0 {
        return Vec::new();
    }
    let mut seen = vec![false; chi_order as usize];
    let mut out = Vec::new();
    for a in 1..chi_order {
        if gcd(a, chi_order) != 1 || seen[a as usize] {
            continue;
        }
        out.push(a);
        let mut b = a;
        while !seen[b as usize] {
            seen[b as usize] = true;
            b = b * (p % chi_order) % chi_order;
        }
    }
    out
}

/// The ideal I_χ with B(χ) ≅ O_χ[[T]]/I_χ, from the images of the
/// Galois-generating cyclotomic unit modulo auxiliary primes
/// q ≡ 1 (mod ℓ·p^{N+1}). Sampling stops once the Howell form is unchanged
/// for `budget.stable_batches` batches. The record is reduced to the least
/// precision p^k lying in the ideal.
pub fn compute_fitting_ideal(
    ell: u64,
    p: u64,
    chi_order: u64,
    chi_id: u64,
    prec: Option<u32>,
    budget: &Budget,
) -> Result<FittingIdealRecord, CycUnitError> {
    if !is_prime(ell) || ell < 5 {
        return Err(CycUnitError::NotPrime(ell));
    }
    if !is_prime(p) {
        return Err(CycUnitError::NotPrime(p));
    }
    let no_char = || CycUnitError::NoSuchCharacter { ell, p, chi_order, chi_id };
    let m = (ell - 1) / 2;
    let free = m / p.pow(valuation(m, p));
    if chi_order < 2 || free % chi_order != 0 || gcd(chi_id, chi_order) != 1 {
        return Err(no_char());
    }
    let n = tower_exponent(ell, p).min(budget.max_tower);
    let mut prec = prec.unwrap_or(n + 3).max(1);
    loop {
        match attempt(ell, p, chi_order, chi_id, n, prec, budget) {
            Err(CycUnitError::PrecisionTooLow { .. }) if prec * 2 <= budget.max_precision => {
                prec *= 2;
            }
            r => return r,
        }
    }
}

fn attempt(
    ell: u64,
    p: u64,
    chi_order: u64,
    chi_id: u64,
    n: u32,
    prec: u32,
    budget: &Budget,
) -> Result<FittingIdealRecord, CycUnitError> {
    let ring = ring_make(p, n, chi_order, prec)?;
    let hi = ring.with_precision(prec + 1)?;
    let step = aux_step(ell, p, prec + 1).ok_or(CycUnitError::AuxPrimeOverflow { prec })?;
    let unit = CyclotomicUnitSymbol::generator(ell)?;
    let mut candidates = (1u64..)
        .map_while(|t| t.checked_mul(step).and_then(|x| x.checked_add(1)))
        .filter(|&q| is_prime(q))
        .skip(budget.seed as usize);

    let mut gens: Vec<Vec<u64>> = Vec::new();
    let mut used = 0u32;
    let mut stable = 0usize;
    let mut last_index: Option<u32> = None;
    let mut converged = false;
    for _ in 0..budget.max_batches {
        let batch: Vec<u64> = candidates.by_ref().take(budget.batch_size).collect();
        if batch.is_empty() {
            return Err(CycUnitError::AuxPrimeOverflow { prec });
        }
        let images = batch
            .par_iter()
            .map(|&q| {
                let logs = aux_logs(ell, unit.primitive_root(), q, p, prec + 1)?;
                let im = logs.image(&unit);
                Ok(im.to_eigenspace(&hi, chi_id).expect("ring matches the image").coords().to_vec())
            })
            .collect::<Result<Vec<_>, CycUnitError>>()?;
        used += batch.len() as u32;
        let mut next = gens.clone();
        next.extend(images);
        let next = canonical_span(&hi, next);
        let is_unit = next.len() == 1 && next[0].len() == hi.degree();
        if next == gens {
            stable += 1;
        } else {
            // more relations can only shrink R/I
            let idx = RingIdeal::from_lifted(&ring, &hi, next.clone())?.index_log();
            debug_assert!(last_index.is_none_or(|l| idx <= l));
            last_index = Some(idx);
            stable = 0;
            gens = next;
        }
        if is_unit || stable >= budget.stable_batches {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CycUnitError::StabilizationFailure { aux_primes: used });
    }
    let ideal = RingIdeal::from_lifted(&ring, &hi, gens)?;
    if !ideal.is_dominated() {
        return Err(CycUnitError::PrecisionTooLow { prec });
    }
    let (min_prec, generators) = minimal_form(&ideal)?;
    Ok(FittingIdealRecord {
        ell,
        p,
        chi_order,
        chi_id,
        n,
        prec: min_prec,
        generators,
        provenance: Provenance::Computed,
        aux_primes_used: used,
        seed: budget.seed,
        stable_batches: Some(stable as u32),
    })
}

/// The same ideal at the least precision p^k with p^k ∈ I.
fn minimal_form(ideal: &RingIdeal) -> Result<(u32, Vec<String>), CycUnitError> {
    if ideal.is_unit() {
        return Ok((1, vec!["1".to_string()]));
    }
    let ring = ideal.ring();
    let k = ideal.exponent().expect("dominated ideal");
    let low = ring.with_precision(k)?;
    let mut gens = ideal.canonical_int_polys();
    gens.pop();
    gens.push(IntPoly::constant((ring.p() as i128).pow(k)));
    let reduced = ideal_make(&low, &gens)?;
    debug_assert!(reduced.is_dominated());
    Ok((k, reduced.canonical_int_polys().iter().map(|g| g.to_string()).collect()))
}
