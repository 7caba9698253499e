//! Text tables of Fitting ideals, one record per line:
//!
//! ```text
//! # comment
//! ell=2089 p=3 chi=2 n=2 prec=3 gens=[T-3,27]
//! ell=7489 p=2 chi=3 n=5 prec=3 gens=[T+2+4*z,8] chi_id=1 source=computed aux=24 seed=0 stable=5
//! ```
//!
//! `chi_id` defaults to 1 and `source` to `ingested`.

use std::fmt::Write as _;
use std::path::Path;

use super::{CycUnitError, FittingIdealRecord, Provenance};
use crate::iwasawa::{ideal_make, ring_make, IntPoly};

fn perr(line: usize, reason: impl Into<String>) -> CycUnitError {
    CycUnitError::Parse { line, reason: reason.into() }
}

fn split_fields(s: &str, line: usize) -> Result<Vec<(&str, &str)>, CycUnitError> {
    let mut out = Vec::new();
    let mut rest = s.trim_start();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or_else(|| perr(line, format!("expected key=value near `{rest}`")))?;
        let key = &rest[..eq];
        if key.is_empty() || !key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(perr(line, format!("bad key `{key}`")));
        }
        let after = &rest[eq + 1..];
        let (val, tail) = if after.starts_with('[') {
            let close = after.find(']').ok_or_else(|| perr(line, "unterminated `[`"))?;
            (&after[..=close], &after[close + 1..])
        } else {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            (&after[..end], &after[end..])
        };
        if !tail.is_empty() && !tail.starts_with(char::is_whitespace) {
            return Err(perr(line, format!("junk after `{key}`")));
        }
        out.push((key, val));
        rest = tail.trim_start();
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(v: &str, key: &str, line: usize) -> Result<T, CycUnitError> {
    v.parse().map_err(|_| perr(line, format!("bad value for {key}: `{v}`")))
}

/// Parse one non-comment line; `line` is used in error messages.
/// Returns `Ok(None)` for blank and comment lines.
pub fn parse_table_line(s: &str, line: usize) -> Result<Option<FittingIdealRecord>, CycUnitError> {
    let body = s.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let mut ell = None;
    let mut p = None;
    let mut chi = None;
    let mut n = None;
    let mut prec = None;
    let mut gens: Option<Vec<String>> = None;
    let mut chi_id = 1u64;
    let mut provenance = Provenance::Ingested;
    let mut aux = 0u32;
    let mut seed = 0u64;
    let mut stable = None;
    let mut seen: Vec<&str> = Vec::new();
    for (key, val) in split_fields(body, line)? {
        if seen.contains(&key) {
            return Err(perr(line, format!("duplicate key {key}")));
        }
        seen.push(key);
        match key {
            "ell" => ell = Some(num::<u64>(val, key, line)?),
            "p" => p = Some(num::<u64>(val, key, line)?),
            "chi" => chi = Some(num::<u64>(val, key, line)?),
            "n" => n = Some(num::<u32>(val, key, line)?),
            "prec" => prec = Some(num::<u32>(val, key, line)?),
            "chi_id" => chi_id = num(val, key, line)?,
            "aux" => aux = num(val, key, line)?,
            "seed" => seed = num(val, key, line)?,
            "stable" => stable = Some(num(val, key, line)?),
            "source" => {
                provenance = match val {
                    "computed" => Provenance::Computed,
                    "ingested" => Provenance::Ingested,
                    _ => return Err(perr(line, format!("unknown source `{val}`"))),
                }
            }
            "gens" => {
                let inner = val
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| perr(line, "gens must be a bracketed list"))?;
                let list: Vec<String> = inner.split(',').map(|g| g.trim().to_string()).collect();
                if list.iter().any(|g| g.is_empty()) {
                    return Err(perr(line, "empty generator"));
                }
                gens = Some(list);
            }
            _ => return Err(perr(line, format!("unknown key {key}"))),
        }
    }
    let missing = |k: &str| perr(line, format!("missing {k}"));
    let rec = FittingIdealRecord {
        ell: ell.ok_or_else(|| missing("ell"))?,
        p: p.ok_or_else(|| missing("p"))?,
        chi_order: chi.ok_or_else(|| missing("chi"))?,
        chi_id,
        n: n.ok_or_else(|| missing("n"))?,
        prec: prec.ok_or_else(|| missing("prec"))?,
        generators: gens.ok_or_else(|| missing("gens"))?,
        provenance,
        aux_primes_used: aux,
        seed,
        stable_batches: stable,
    };
    if rec.provenance == Provenance::Computed && rec.stable_batches.is_none() {
        return Err(perr(line, "computed record without stable="));
    }
    check_ring(&rec, line)?;
    Ok(Some(rec))
}

fn check_ring(rec: &FittingIdealRecord, line: usize) -> Result<(), CycUnitError> {
    let mismatch = |reason: String| CycUnitError::RingMismatch { line, reason };
    let ring = ring_make(rec.p, rec.n, rec.chi_order, rec.prec).map_err(|e| mismatch(e.to_string()))?;
    let gens = rec
        .generators
        .iter()
        .map(|g| IntPoly::parse(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| mismatch(e.to_string()))?;
    ideal_make(&ring, &gens).map_err(|e| mismatch(e.to_string()))?;
    Ok(())
}

pub fn parse_table(text: &str) -> Result<Vec<FittingIdealRecord>, CycUnitError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(r) = parse_table_line(l, i + 1)? {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn ingest_table(path: &Path) -> Result<Vec<FittingIdealRecord>, CycUnitError> {
    parse_table(&std::fs::read_to_string(path)?)
}

pub fn render_line(r: &FittingIdealRecord) -> String {
    let mut s = format!(
        "ell={} p={} chi={} n={} prec={} gens=[{}]",
        r.ell,
        r.p,
        r.chi_order,
        r.n,
        r.prec,
        r.generators.join(",")
    );
    if r.chi_id != 1 {
        let _ = write!(s, " chi_id={}", r.chi_id);
    }
    if r.provenance == Provenance::Computed {
        s.push_str(" source=computed");
    }
    if r.aux_primes_used != 0 {
        let _ = write!(s, " aux={}", r.aux_primes_used);
    }
    if r.seed != 0 {
        let _ = write!(s, " seed={}", r.seed);
    }
    if let Some(st) = r.stable_batches {
        let _ = write!(s, " stable={st}");
    }
    s
}

pub fn render_table(records: &[FittingIdealRecord]) -> String {
    records.iter().map(|r| render_line(r) + "\n").collect()
}

pub fn export_table(records: &[FittingIdealRecord], path: &Path) -> Result<(), CycUnitError> {
    std::fs::write(path, render_table(records))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_line() {
        let r = parse_table_line("ell=2089 p=3 chi=2 n=2 prec=3 gens=[T-3,27]", 1).unwrap().unwrap();
        assert_eq!((r.ell, r.p, r.chi_order, r.n, r.prec), (2089, 3, 2, 2, 3));
        assert_eq!(r.generators, vec!["T-3", "27"]);
        assert_eq!(r.provenance, Provenance::Ingested);
        assert_eq!(render_line(&r), "ell=2089 p=3 chi=2 n=2 prec=3 gens=[T-3,27]");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(parse_table("").unwrap().is_empty());
        assert!(parse_table("# only a comment\n\n").unwrap().is_empty());
        let e = parse_table("# x\nell=2089 p=3 chi=2 n=2 prec=3 gens=[T-3").unwrap_err();
        assert!(matches!(e, CycUnitError::Parse { line: 2, .. }), "{e}");
        let e = parse_table("ell=2089 p=3 chi=2 n=2 prec=3 gens=[T-3,x]").unwrap_err();
        assert!(matches!(e, CycUnitError::RingMismatch { line: 1, .. }), "{e}");
        let e = parse_table("ell=2089 p=3 chi=3 n=2 prec=3 gens=[T-3]").unwrap_err();
        assert!(matches!(e, CycUnitError::RingMismatch { line: 1, .. }), "{e}");
        let e = parse_table("ell=2089 p=3 chi=2 n=2 gens=[T-3]").unwrap_err();
        assert!(matches!(e, CycUnitError::Parse { line: 1, .. }), "{e}");
    }

    #[test]
    fn spaces_inside_brackets() {
        let r = parse_table_line("ell=9337 p=2 chi=3 n=2 prec=3 gens=[T + 4 - 2*z, 8]  # ex", 7)
            .unwrap()
            .unwrap();
        assert_eq!(r.generators, vec!["T + 4 - 2*z", "8"]);
    }
}
