use std::collections::BTreeSet;

use crate::quadforms::selmer::{ambiguous_ideal_form, squarefree_divisors};
use crate::quadforms::{class_group, is_fundamental, visible_class, QuadError};

/// Order of the subgroup of C(Q(√d)) spanned by classes shown to
/// capitulate in Q(ζ_|d|): ambiguous ideals (principal in the genus field,
/// which lies in Q(ζ_|d|)) and the classes built from fundamental units of
/// Q(√d₁), d = d₁d₂.
pub fn quadratic_genus_capitulation(d: i64) -> Result<u64, QuadError> {
    let g = class_group(d)?;
    let mut gens = Vec::new();
    for m in squarefree_divisors(d) {
        if let Some(f) = ambiguous_ideal_form(d, m) {
            gens.push(g.dlog(&f));
        }
    }
    if d > 0 {
        for d1 in 5..d {
            if d % d1 == 0 && is_fundamental(d1) && is_fundamental(d / d1) {
                if let Ok(v) = visible_class(d, d1) {
                    gens.push(g.dlog(&v.form));
                }
            }
        }
    }
    let inv = &g.invariants;
    let mut span: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; inv.len()]]);
    for x in gens {
        let more: Vec<Vec<u64>> = span
            .iter()
            .map(|y| y.iter().zip(&x).zip(inv).map(|((a, b), n)| (a + b) % n).collect())
            .collect();
        span.extend(more);
    }
    Ok(span.len() as u64)
}
