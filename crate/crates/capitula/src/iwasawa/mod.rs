//! Arithmetic in O_χ[[T]]/(ω_n(T)) at finite precision p^N, Fitting-ideal
//! normal forms and the capitulation module {f : Tf ∈ I}/(I + (ω_n/T)).

pub mod expr;
pub(crate) mod ideal;
pub(crate) mod ring;

pub use expr::{ExprError, IntPoly, Term};
pub use ideal::{ideal_make, CapitulationModule, RingIdeal};
pub use ring::{ring_make, EigenRing, RingElement};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IwasawaError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("character order {chi_order} is not prime to p={p}")]
    ChiOrderNotCoprime { p: u64, chi_order: u64 },
    #[error("unsupported character of order {chi_order} for p={p}")]
    UnsupportedCharacter { p: u64, chi_order: u64 },
    #[error("precision exponent {0} out of range")]
    BadPrecision(u32),
    #[error("tower exponent {0} out of range")]
    TowerTooDeep(u32),
    #[error("precision p^{prec} does not dominate the ideal")]
    PrecisionTooLow { prec: u32 },
    #[error("level {m} exceeds the tower exponent {n}")]
    LevelOutOfRange { m: u32, n: u32 },
    #[error(transparent)]
    Parse(#[from] ExprError),
}

/// |R/(I+(T))|.
pub fn eigenspace_class_order(ideal: &RingIdeal) -> Result<u128, IwasawaError> {
    let e = ideal.eigenspace_class_order_log()?;
    Ok((ideal.ring().p() as u128).pow(e))
}

/// The module {f : Tf ∈ I}/(I + (ω_n/T)), which has the order of the capitulation kernel.
pub fn capitulation_module(ideal: &RingIdeal) -> Result<CapitulationModule, IwasawaError> {
    ideal.capitulation_module()
}

/// ω_n(T)/T ∈ I.
pub fn maximal_capitulation(ideal: &RingIdeal) -> Result<bool, IwasawaError> {
    ideal.maximal_capitulation()
}

/// |R/(I+(ω_m))|. Only m = 0 is known to give a class-group order; other
/// levels are heuristic.
pub fn level_class_order(ideal: &RingIdeal, m: u32) -> Result<u128, IwasawaError> {
    let e = ideal.level_class_order_log(m)?;
    Ok((ideal.ring().p() as u128).pow(e))
}
