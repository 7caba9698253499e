//! Surveys over prime conductors: class parts, verdicts and the aggregate
//! counts of the tables for quadratic and cyclic cubic fields.

mod report;

pub use report::{parse_records_csv, CSV_COLUMNS, parse_records_json, render_report, Format, Summary};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_between};
use crate::criteria::{
    classify, CapitulationVerdict, ClassifyInputs, EigenKernel, FieldDescriptor, Fixture,
    KernelOrder, Status,
};
use crate::cycunits::{
    compute_fitting_ideal, eigen_characters, tower_exponent, Budget, CycUnitError,
    FittingIdealRecord, RecordCache,
};
use crate::quadforms::{class_group, p_part};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Q(√ℓ), ℓ ≡ 1 mod 4.
    Quad,
    /// The cubic subfield of Q(ζ_ℓ), ℓ ≡ 1 mod 3.
    Cubic,
}

impl Family {
    pub fn degree(self) -> u64 {
        match self {
            Family::Quad => 2,
            Family::Cubic => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Quad => "quad",
            Family::Cubic => "cubic",
        }
    }

    /// Whether the family has a member of conductor ℓ.
    pub fn admits(self, ell: u64) -> bool {
        is_prime(ell) && ell > 3 && (ell - 1) % (2 * self.degree()) == 0
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub budget: Budget,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub cache: Option<RecordCache>,
    /// Record wall-clock time per row; off by default so reports are
    /// reproducible byte for byte.
    pub timing: bool,
    /// Also run the eigenspace computation where the rules already decide.
    pub confirm: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { budget: Budget::default(), jobs: 0, cache: None, timing: false, confirm: false }
    }
}

/// One row of a survey table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub ell: u64,
    pub kind: Family,
    pub p: u64,
    /// Invariants of the p-part, e.g. `3x9`; `?` when it could not be computed.
    pub class_part: String,
    /// A verdict status, or `error`.
    pub status: String,
    /// `kernel/potential`, the kernel an integer or `[lo,hi]`.
    pub kernel: String,
    /// Rule names separated by `;` (the error message for error rows).
    pub certificates: String,
    pub timing_ms: u64,
    /// rules, eigenspace or fixture.
    pub provenance: String,
}

impl SurveyRecord {
    pub fn is_error(&self) -> bool {
        self.status == "error"
    }

    fn split_kernel(&self) -> Option<(&str, u64)> {
        let (k, pot) = self.kernel.rsplit_once('/')?;
        Some((k, pot.parse().ok()?))
    }

    /// Every class with potential capitulation capitulates, and there is one.
    pub fn is_maximal(&self) -> bool {
        match self.split_kernel() {
            Some((k, pot)) => pot > 1 && k.parse::<u64>().ok() == Some(pot),
            None => false,
        }
    }

    pub fn exact_kernel(&self) -> Option<u64> {
        self.split_kernel().and_then(|(k, _)| k.parse().ok())
    }

    pub fn has_certificate(&self, rule: &str) -> bool {
        self.certificates.split(';').any(|c| c == rule)
    }
}

pub fn render_invariants(inv: &[u64]) -> String {
    if inv.is_empty() {
        "1".into()
    } else {
        inv.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x")
    }
}

pub fn parse_invariants(s: &str) -> Option<Vec<u64>> {
    if s == "1" {
        return Some(Vec::new());
    }
    s.split('x').map(|t| t.parse().ok().filter(|&n: &u64| n > 1)).collect()
}

/// Eigenspace data of the p-part of a real field of prime conductor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    /// Invariants of ⊕_χ R/(I_χ + (T)).
    pub class_part: Vec<u64>,
    /// Invariants of the p-part for the degree-p extension inside the
    /// tower, from Fitting ideals of that field.
    pub level_one_part: Option<Vec<u64>>,
    pub kernel: EigenKernel,
    pub records: Vec<FittingIdealRecord>,
}

fn fetch(
    ell: u64,
    p: u64,
    chi_order: u64,
    chi_id: u64,
    budget: &Budget,
    cache: Option<&RecordCache>,
) -> Result<FittingIdealRecord, CycUnitError> {
    let n = tower_exponent(ell, p).min(budget.max_tower);
    if let Some(rec) = cache.and_then(|c| c.get(ell, p, chi_order, chi_id, n, budget.seed)) {
        return Ok(rec);
    }
    let rec = compute_fitting_ideal(ell, p, chi_order, chi_id, None, budget)?;
    if let Some(c) = cache {
        c.put(&rec)?;
    }
    Ok(rec)
}

fn powers(p: u64, e: &[u32]) -> Vec<u64> {
    e.iter().filter(|&&x| x > 0).map(|&x| p.pow(x)).collect()
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort();
    v
}

/// Fitting ideals for every O_χ-component with χ of order `chi_order`,
/// and what they say about the p-part of the degree-`chi_order` subfield.
pub fn eigen_data(
    ell: u64,
    p: u64,
    chi_order: u64,
    budget: &Budget,
    cache: Option<&RecordCache>,
) -> Result<EigenData, CycUnitError> {
    let chars = eigen_characters(ell, p, chi_order);
    if chars.is_empty() {
        return Err(CycUnitError::NoSuchCharacter { ell, p, chi_order, chi_id: 1 });
    }
    let n = tower_exponent(ell, p).min(budget.max_tower);
    let mut class_part = Vec::new();
    let mut level_one = Vec::new();
    let mut kernel = Vec::new();
    let mut member = true;
    let mut records = Vec::new();
    for chi in chars {
        let rec = fetch(ell, p, chi_order, chi, budget, cache)?;
        let ideal = rec.ideal()?;
        class_part.extend(powers(p, &ideal.class_invariants()?));
        let cap = ideal.capitulation_module()?;
        kernel.extend(powers(p, &cap.invariants));
        member &= ideal.maximal_capitulation()?;
        if n >= 1 {
            if n == 1 {
                level_one.extend(powers(p, &ideal.level_invariants(1)?));
            } else {
                let capped = Budget { max_tower: 1, ..budget.clone() };
                let r1 = fetch(ell, p, chi_order, chi, &capped, cache)?;
                level_one.extend(powers(p, &r1.ideal()?.level_invariants(1)?));
                records.push(r1);
            }
        }
        records.push(rec);
    }
    Ok(EigenData {
        class_part: sorted(class_part),
        level_one_part: (n >= 1).then(|| sorted(level_one)),
        kernel: EigenKernel { invariants: sorted(kernel), omega_over_t_in_ideal: member },
        records,
    })
}

/// Kernels established outside the rules.
pub fn fixture_for(field: &FieldDescriptor, p: Option<u64>) -> Option<Fixture> {
    // Q(√−39): I² ~ J with J = (√−3) in Q(√−39, √−3), and h(Q(ζ₃₉)) = 2
    // forces I itself to die in Q(ζ₃₉) by the norm argument.
    (field.discriminant() == Some(-39) && p.is_none_or(|p| p == 2))
        .then(|| Fixture { name: "Q(√-39) order-4 class principal in Q(ζ39)".into(), kernel: 4 })
}

/// The verdict for the p-part of one member of a family, or None when the
/// p-part is trivial.
pub fn survey_field(
    family: Family,
    ell: u64,
    p: u64,
    opts: &ScanOptions,
) -> Result<Option<CapitulationVerdict>, SurveyError> {
    if !family.admits(ell) {
        return Err(SurveyError::NotInFamily { ell, family });
    }
    let field = FieldDescriptor::real_cyclic(ell, family.degree());
    let cache = opts.cache.as_ref();
    let (class_part, mut eigen) = match family {
        Family::Quad => {
            let g = class_group(ell as i64)?;
            (sorted(p_part(&g, p)), None)
        }
        Family::Cubic => {
            let e = eigen_data(ell, p, 3, &opts.budget, cache)?;
            (e.class_part.clone(), Some(e))
        }
    };
    if class_part.is_empty() {
        return Ok(None);
    }
    let mut inputs = ClassifyInputs { class_part: class_part.clone(), ..Default::default() };
    // rules that need no Fitting ideal
    let first = classify(&field, Some(p), &inputs);
    let decided = matches!(&first, Ok(v) if v.kernel.exact().is_some());
    if decided && !opts.confirm {
        return Ok(Some(first?));
    }
    if eigen.is_none() {
        let e = eigen_data(ell, p, family.degree(), &opts.budget, cache)?;
        // Fitting ideals fix the order of the χ-part, not its structure
        if e.class_part.iter().product::<u64>() != class_part.iter().product::<u64>() {
            return Err(SurveyError::ClassPartMismatch {
                ell,
                forms: render_invariants(&class_part),
                eigen: render_invariants(&e.class_part),
            });
        }
        eigen = Some(e);
    }
    let e = eigen.unwrap();
    inputs.level_one_part = e.level_one_part.clone();
    let with_rules = classify(&field, Some(p), &inputs);
    if let Ok(v) = &with_rules {
        if v.kernel.exact().is_some() && !opts.confirm {
            return Ok(Some(v.clone()));
        }
    }
    inputs.eigenspace = Some(e.kernel.clone());
    Ok(Some(classify(&field, Some(p), &inputs)?))
}

#[derive(Debug, thiserror::Error)]
pub enum SurveyError {
    #[error("{ell} is not a conductor of the {family:?} family")]
    NotInFamily { ell: u64, family: Family },
    #[error("ℓ = {ell}: forms give order {forms}, eigenspaces give {eigen}")]
    ClassPartMismatch { ell: u64, forms: String, eigen: String },
    #[error(transparent)]
    Quad(#[from] crate::quadforms::QuadError),
    #[error(transparent)]
    CycUnit(#[from] CycUnitError),
    #[error(transparent)]
    Iwasawa(#[from] crate::iwasawa::IwasawaError),
    #[error(transparent)]
    Criteria(#[from] crate::criteria::CriteriaError),
    #[error("bad scan: {0}")]
    BadScan(String),
}

fn provenance(v: &CapitulationVerdict) -> &'static str {
    let names = v.certificate_names();
    if names.contains(&"fixture") {
        "fixture"
    } else if names.contains(&"eigenspace") {
        "eigenspace"
    } else {
        "rules"
    }
}

pub fn record_of(family: Family, ell: u64, p: u64, v: &CapitulationVerdict, timing_ms: u64) -> SurveyRecord {
    let kernel = match v.kernel {
        KernelOrder::Exact(k) => k.to_string(),
        KernelOrder::Interval { lo, hi } => format!("[{lo},{hi}]"),
    };
    SurveyRecord {
        ell,
        kind: family,
        p,
        class_part: render_invariants(&v.class_part),
        status: v.status.as_str().into(),
        kernel: format!("{kernel}/{}", v.potential),
        certificates: v.certificate_names().join(";"),
        timing_ms,
        provenance: provenance(v).into(),
    }
}

/// A scan over ℓ in [5, max) with ℓ ≡ a mod m (if given) in the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSpec {
    pub family: Family,
    pub p: u64,
    pub residue: Option<(u64, u64)>,
    pub max: u64,
}

impl ScanSpec {
    pub fn conductors(&self) -> Vec<u64> {
        primes_between(5, self.max)
            .into_iter()
            .filter(|&l| self.family.admits(l))
            .filter(|&l| self.residue.is_none_or(|(a, m)| l % m == a % m))
            .collect()
    }
}

fn validate(spec: &ScanSpec) -> Result<(), SurveyError> {
    if !is_prime(spec.p) {
        return Err(SurveyError::BadScan(format!("{} is not prime", spec.p)));
    }
    if spec.residue.is_some_and(|(_, m)| m == 0) {
        return Err(SurveyError::BadScan("modulus 0".into()));
    }
    Ok(())
}

fn error_row(family: Family, ell: u64, p: u64, e: &SurveyError, ms: u64) -> SurveyRecord {
    SurveyRecord {
        ell,
        kind: family,
        p,
        class_part: "?".into(),
        status: "error".into(),
        kernel: "?".into(),
        certificates: e.to_string(),
        timing_ms: ms,
        provenance: "rules".into(),
    }
}

fn scan_conductors(
    family: Family,
    p: u64,
    ells: &[u64],
    opts: &ScanOptions,
) -> Result<Vec<SurveyRecord>, SurveyError> {
    let run = || {
        ells.par_iter()
            .map(|&ell| {
                let t = Instant::now();
                let r = survey_field(family, ell, p, opts);
                let ms = if opts.timing { t.elapsed().as_millis() as u64 } else { 0 };
                match r {
                    Ok(None) => None,
                    Ok(Some(v)) => Some(record_of(family, ell, p, &v, ms)),
                    Err(e) => Some(error_row(family, ell, p, &e, ms)),
                }
            })
            .collect::<Vec<_>>()
    };
    let rows = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| SurveyError::BadScan(e.to_string()))?
            .install(run)
    } else {
        run()
    };
    Ok(rows.into_iter().flatten().collect())
}

/// Parses a residue class `a:m` (also `a mod m`) into (a mod m, m).
pub fn parse_residue(s: &str) -> Result<(u64, u64), SurveyError> {
    let bad = || SurveyError::BadScan(format!("bad residue class {s:?}, expected a:m"));
    let (a, m) = s.split_once(':').or_else(|| s.split_once(" mod ")).ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(bad());
    }
    Ok((a % m, m))
}

/// One record per conductor with nontrivial p-part, ascending in ℓ.
/// Failures become rows with status `error`.
pub fn scan(spec: &ScanSpec, opts: &ScanOptions) -> Result<Vec<SurveyRecord>, SurveyError> {
    validate(spec)?;
    scan_conductors(spec.family, spec.p, &spec.conductors(), opts)
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    family: Family,
    p: u64,
    residue: Option<(u64, u64)>,
    /// Every conductor below this bound has been surveyed.
    done_below: u64,
    records: Vec<SurveyRecord>,
}

/// `scan` in chunks of `chunk` conductors, rewriting `path` after each so
/// an interrupted run resumes where it stopped. `progress` receives the
/// number of conductors done and the total.
pub fn scan_checkpointed(
    spec: &ScanSpec,
    opts: &ScanOptions,
    path: &std::path::Path,
    chunk: usize,
    mut progress: impl FnMut(usize, usize),
) -> Result<Vec<SurveyRecord>, SurveyError> {
    validate(spec)?;
    let io = |e: std::io::Error| SurveyError::BadScan(format!("{}: {e}", path.display()));
    let mut cp = match std::fs::read_to_string(path) {
        Ok(text) => {
            let cp: Checkpoint =
                serde_json::from_str(&text).map_err(|e| SurveyError::BadScan(format!("{}: {e}", path.display())))?;
            if (cp.family, cp.p, cp.residue) != (spec.family, spec.p, spec.residue) {
                return Err(SurveyError::BadScan(format!("{} belongs to another scan", path.display())));
            }
            cp
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Checkpoint {
            family: spec.family,
            p: spec.p,
            residue: spec.residue,
            done_below: 0,
            records: Vec::new(),
        },
        Err(e) => return Err(io(e)),
    };
    let all = spec.conductors();
    cp.records.retain(|r| r.ell < spec.max);
    let todo: Vec<u64> = all.iter().copied().filter(|&l| l >= cp.done_below).collect();
    let mut done = all.len() - todo.len();
    progress(done, all.len());
    for part in todo.chunks(chunk.max(1)) {
        cp.records.extend(scan_conductors(spec.family, spec.p, part, opts)?);
        cp.done_below = part[part.len() - 1] + 1;
        done += part.len();
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&cp).map_err(|e| SurveyError::BadScan(e.to_string()))?)
            .map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)?;
        progress(done, all.len());
    }
    Ok(cp.records)
}

/// One imaginary quadratic field of the small-discriminant suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImaginaryRow {
    pub d: i64,
    pub invariants: Vec<u64>,
    pub verdict: CapitulationVerdict,
}

/// Every imaginary quadratic field with |d| < bound, classified on its
/// whole class group.
pub fn imaginary_suite(bound: i64) -> Result<Vec<ImaginaryRow>, SurveyError> {
    let mut out = Vec::new();
    for d in (-bound + 1..0).rev() {
        if !crate::quadforms::is_fundamental(d) {
            continue;
        }
        let g = class_group(d)?;
        let field = FieldDescriptor::quadratic(d);
        let inputs = ClassifyInputs {
            class_part: g.invariants.clone(),
            fixture: fixture_for(&field, None),
            ..Default::default()
        };
        let verdict = classify(&field, None, &inputs)?;
        out.push(ImaginaryRow { d, invariants: g.invariants, verdict });
    }
    Ok(out)
}

/// Counts over an imaginary suite.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImaginarySummary {
    pub fields: usize,
    pub trivial: usize,
    pub full_certified: usize,
    pub full_by_fixture: usize,
    pub non_capitulating: usize,
    pub undetermined: Vec<(i64, Vec<u64>)>,
}

pub fn summarize_imaginary(rows: &[ImaginaryRow]) -> ImaginarySummary {
    let mut s = ImaginarySummary { fields: rows.len(), ..Default::default() };
    for r in rows {
        let v = &r.verdict;
        if v.class_order() == 1 {
            s.trivial += 1;
            continue;
        }
        match v.status {
            Status::Full if v.certificate_names().contains(&"fixture") => s.full_by_fixture += 1,
            Status::Full => s.full_certified += 1,
            Status::Undetermined => s.undetermined.push((r.d, r.invariants.clone())),
            _ => s.non_capitulating += 1,
        }
    }
    s
}
