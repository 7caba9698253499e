//! Cyclotomic units of Q(ζ_ℓ)⁺, their images modulo auxiliary primes, and
//! the Fitting ideals I_χ computed from them.

mod cache;
mod fitting;
mod table;

pub use cache::RecordCache;
pub use fitting::{
    compute_fitting_ideal, eigen_characters, tower_exponent, Budget, FittingIdealRecord,
    Provenance,
};
pub use table::{export_table, ingest_table, parse_table, parse_table_line, render_line, render_table};

use thiserror::Error;

use crate::arith::{
    discrete_log_p_power, is_prime, least_primitive_root, mul_mod, pow_mod, sub_mod,
};
use crate::iwasawa::{EigenRing, IwasawaError, RingElement};

#[derive(Debug, Error)]
pub enum CycUnitError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no character of order {chi_order} (id {chi_id}) on the p-free part for ell={ell}, p={p}")]
    NoSuchCharacter { ell: u64, p: u64, chi_order: u64, chi_id: u64 },
    #[error("{q} is not an auxiliary prime for ell={ell} at modulus {modulus}")]
    BadAuxPrime { q: u64, ell: u64, modulus: u64 },
    #[error("ideal did not stabilize after {aux_primes} auxiliary primes")]
    StabilizationFailure { aux_primes: u32 },
    #[error("precision cap p^{prec} reached without domination")]
    PrecisionTooLow { prec: u32 },
    #[error("auxiliary primes overflow 64 bits at precision {prec}")]
    AuxPrimeOverflow { prec: u32 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    RingMismatch { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
}

/// A product Π u_{a_k}^{e_k} with u_a = (ζ^a − ζ^{−a})/(ζ − ζ^{−1}) and
/// a_k = g^k for the least primitive root g mod ℓ, 0 ≤ k < (ℓ−1)/2.
/// Signs are ignored, so this is a unit up to ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicUnitSymbol {
    ell: u64,
    g: u64,
    // exps[0] belongs to u_1 = 1 and is kept at zero
    exps: Vec<i64>,
}

impl CyclotomicUnitSymbol {
    pub fn trivial(ell: u64) -> Result<Self, CycUnitError> {
        if ell < 5 || !is_prime(ell) {
            return Err(CycUnitError::NotPrime(ell));
        }
        let g = least_primitive_root(ell).map_err(|_| CycUnitError::NotPrime(ell))?;
        Ok(CyclotomicUnitSymbol { ell, g, exps: vec![0; ((ell - 1) / 2) as usize] })
    }

    /// u_a for a prime to ℓ.
    pub fn basic(ell: u64, a: u64) -> Result<Self, CycUnitError> {
        let mut u = Self::trivial(ell)?;
        let k = u.index_of(a).ok_or(CycUnitError::NotPrime(ell))?;
        if k != 0 {
            u.exps[k] = 1;
        }
        Ok(u)
    }

    /// u_g, which generates the cyclotomic units as a Galois module up to ±1.
    pub fn generator(ell: u64) -> Result<Self, CycUnitError> {
        let g = least_primitive_root(ell).map_err(|_| CycUnitError::NotPrime(ell))?;
        Self::basic(ell, g)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// k with a ≡ ±g^k (mod ℓ), 0 ≤ k < (ℓ−1)/2.
    fn index_of(&self, a: u64) -> Option<usize> {
        let a = a % self.ell;
        if a == 0 {
            return None;
        }
        let m = self.exps.len();
        let mut x = 1u64;
        for k in 0..m {
            if x == a || x == self.ell - a {
                return Some(k);
            }
            x = mul_mod(x, self.g, self.ell);
        }
        None
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell, "symbols for different conductors");
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        CyclotomicUnitSymbol { ell: self.ell, g: self.g, exps }
    }

    pub fn pow(&self, e: i64) -> Self {
        let exps = self.exps.iter().map(|a| a * e).collect();
        CyclotomicUnitSymbol { ell: self.ell, g: self.g, exps }
    }

    /// σ_c(u), using σ_c(u_a) = u_{ca}/u_c.
    pub fn galois(&self, c: u64) -> Option<Self> {
        let i = self.index_of(c)?;
        let m = self.exps.len();
        let mut exps = vec![0i64; m];
        let mut total = 0;
        for (j, &e) in self.exps.iter().enumerate() {
            exps[(i + j) % m] += e;
            total += e;
        }
        exps[i] -= total;
        exps[0] = 0;
        Some(CyclotomicUnitSymbol { ell: self.ell, g: self.g, exps })
    }
}

/// Image of a unit in (Z/p^N)[G], G = Gal(Q(ζ_ℓ)⁺/Q): coefficient k is the
/// discrete log of σ_g^k(u) in F_q^×/(F_q^×)^{p^N}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitImage {
    pub q: u64,
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

/// Auxiliary prime data: the ℓ-th root of unity g_q^{(q−1)/ℓ} and the log
/// table L(k) = log(ζ_q^{a_k} − ζ_q^{−a_k}).
struct AuxLogs {
    q: u64,
    modulus: u64,
    logs: Vec<u64>,
}

fn aux_logs(ell: u64, g: u64, q: u64, p: u64, prec: u32) -> Result<AuxLogs, CycUnitError> {
    let modulus = p.pow(prec);
    let step = aux_step(ell, p, prec).ok_or(CycUnitError::AuxPrimeOverflow { prec })?;
    if !is_prime(q) || q % step != 1 {
        return Err(CycUnitError::BadAuxPrime { q, ell, modulus });
    }
    let gq = least_primitive_root(q).map_err(|_| CycUnitError::BadAuxPrime { q, ell, modulus })?;
    let zeta = pow_mod(gq, (q - 1) / ell, q);
    let h = pow_mod(gq, (q - 1) / modulus, q);
    let cof = (q - 1) / modulus;
    let mut zpow = Vec::with_capacity(ell as usize);
    let mut x = 1u64;
    for _ in 0..ell {
        zpow.push(x);
        x = mul_mod(x, zeta, q);
    }
    let m = ((ell - 1) / 2) as usize;
    let mut logs = Vec::with_capacity(m);
    let mut a = 1u64;
    for _ in 0..m {
        let y = sub_mod(zpow[a as usize], zpow[(ell - a) as usize], q);
        let l = discrete_log_p_power(q, h, p, prec, pow_mod(y, cof, q))
            .expect("element of the p^N-torsion");
        logs.push(l);
        a = mul_mod(a, g, ell);
    }
    Ok(AuxLogs { q, modulus, logs })
}

/// Period of admissible auxiliary primes: q ≡ 1 mod ℓ·p^N, and mod 2ℓ·2^N
/// for p = 2 so that −1 is a 2^N-th power.
pub fn aux_step(ell: u64, p: u64, prec: u32) -> Option<u64> {
    let pn = p.checked_pow(prec)?;
    let s = ell.checked_mul(pn)?;
    if p == 2 {
        s.checked_mul(2)
    } else {
        Some(s)
    }
}

impl AuxLogs {
    fn image(&self, u: &CyclotomicUnitSymbol) -> UnitImage {
        let m = self.logs.len();
        let md = self.modulus;
        let mut coeffs = vec![0u64; m];
        for (j, &e) in u.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e.rem_euclid(md as i64) as u64;
            for (k, c) in coeffs.iter_mut().enumerate() {
                let d = (self.logs[(k + j) % m] + md - self.logs[k]) % md;
                *c = (*c + mul_mod(e, d, md)) % md;
            }
        }
        UnitImage { q: self.q, modulus: md, coeffs }
    }
}

/// Reduce u modulo an auxiliary prime q ≡ 1 (mod ℓ·p^N) and take discrete
/// logs of all its conjugates.
pub fn unit_image_mod_q(
    u: &CyclotomicUnitSymbol,
    q: u64,
    p: u64,
    prec: u32,
) -> Result<UnitImage, CycUnitError> {
    Ok(aux_logs(u.ell, u.g, q, p, prec)?.image(u))
}

impl UnitImage {
    /// Σ_k c_k χ(δ_k)(1+T)^{k mod p^n}, the χ-component in the ring, where
    /// χ(g) = ζ^{chi_id}.
    pub fn to_eigenspace(&self, ring: &EigenRing, chi_id: u64) -> Option<RingElement> {
        let m = self.coeffs.len();
        let pn = ring.tower_order();
        let c = ring.chi_order();
        if ring.modulus() != self.modulus || m % pn != 0 || m as u64 % c != 0 {
            return None;
        }
        let d = ring.degree();
        let zpows: Vec<Vec<u64>> = (0..c).map(|i| ring.o_zeta_pow(i * chi_id % c)).collect();
        let mut acc = vec![0u64; d * pn];
        for (k, &v) in self.coeffs.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let z = &zpows[k % c as usize];
            let j = k % pn;
            for i in 0..d {
                let t = mul_mod(v, z[i], self.modulus);
                acc[j * d + i] = (acc[j * d + i] + t) % self.modulus;
            }
        }
        Some(ring.from_group_ring(&acc))
    }
}
