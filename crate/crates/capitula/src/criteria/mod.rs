//! Classical capitulation rules and the verdict engine that chains them.
//!
//! Every rule contributes a certificate bounding |Ker(C_K → C_{Q(ζ_n)})|
//! restricted to the class part under study; the verdict is the
//! intersection of those bounds.

mod genus;

pub use genus::quadratic_genus_capitulation;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor, gcd, valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("no rule applies and no Fitting ideal is available")]
    InsufficientData,
    #[error("{rule} gives kernel {got}, outside the certified range [{lo}, {hi}]")]
    Inconsistent { rule: String, lo: u64, hi: u64, got: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    QuadraticReal,
    QuadraticImaginary,
    CyclicCubic,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub conductor: u64,
    pub degree: u64,
    pub roots_of_unity_count: u64,
}

impl FieldDescriptor {
    /// Q(√d) for a fundamental discriminant d.
    pub fn quadratic(d: i64) -> Self {
        let roots = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        FieldDescriptor {
            kind: if d > 0 { FieldKind::QuadraticReal } else { FieldKind::QuadraticImaginary },
            conductor: d.unsigned_abs(),
            degree: 2,
            roots_of_unity_count: roots,
        }
    }

    /// The degree-m subfield of Q(ζ_ℓ)⁺, ℓ prime and 2m | ℓ − 1.
    pub fn real_cyclic(ell: u64, m: u64) -> Self {
        let kind = match m {
            2 => FieldKind::QuadraticReal,
            3 => FieldKind::CyclicCubic,
            _ => FieldKind::Cyclic,
        };
        FieldDescriptor { kind, conductor: ell, degree: m, roots_of_unity_count: 2 }
    }

    pub fn is_totally_real(&self) -> bool {
        self.kind != FieldKind::QuadraticImaginary
    }

    /// The discriminant, for quadratic fields.
    pub fn discriminant(&self) -> Option<i64> {
        match self.kind {
            FieldKind::QuadraticReal => Some(self.conductor as i64),
            FieldKind::QuadraticImaginary => Some(-(self.conductor as i64)),
            _ => None,
        }
    }

    fn prime_conductor(&self) -> bool {
        crate::arith::is_prime(self.conductor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Full,
    Partial,
    None,
    NoPotential,
    Undetermined,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Full => "full",
            Status::Partial => "partial",
            Status::None => "none",
            Status::NoPotential => "no-potential",
            Status::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelOrder {
    Exact(u64),
    Interval { lo: u64, hi: u64 },
}

impl KernelOrder {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            KernelOrder::Exact(k) => Some(k),
            KernelOrder::Interval { .. } => None,
        }
    }
}

impl std::fmt::Display for KernelOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelOrder::Exact(k) => write!(f, "{k}"),
            KernelOrder::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// One rule application: the kernel order lies in [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub rule: String,
    pub detail: String,
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapitulationVerdict {
    pub field: FieldDescriptor,
    /// None stands for the whole class group.
    #[serde(with = "prime_or_all")]
    pub p: Option<u64>,
    pub status: Status,
    pub kernel: KernelOrder,
    pub certificates: Vec<Certificate>,
    pub class_part: Vec<u64>,
    /// Order of the subgroup of classes with potential capitulation.
    pub potential: u64,
    pub kernel_invariants: Option<Vec<u64>>,
}

impl CapitulationVerdict {
    pub fn class_order(&self) -> u64 {
        group_order(&self.class_part)
    }

    /// Every class with potential capitulation capitulates, and there is one.
    pub fn is_maximal(&self) -> bool {
        self.potential > 1 && self.kernel.exact() == Some(self.potential)
    }

    pub fn certificate_names(&self) -> Vec<&str> {
        self.certificates.iter().map(|c| c.rule.as_str()).collect()
    }
}

mod prime_or_all {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => s.serialize_u64(*p),
            None => s.serialize_str("all"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum P {
            N(u64),
            S(String),
        }
        match P::deserialize(d)? {
            P::N(p) => Ok(Some(p)),
            P::S(s) if s == "all" => Ok(None),
            P::S(s) => Err(serde::de::Error::custom(format!("bad prime {s:?}"))),
        }
    }
}

pub fn group_order(inv: &[u64]) -> u64 {
    inv.iter().product()
}

/// |A[m]| for A = ⊕ Z/n_i.
pub fn torsion_order(inv: &[u64], m: u64) -> u64 {
    inv.iter().map(|&n| gcd(n, m)).product()
}

fn is_cyclic(inv: &[u64]) -> bool {
    inv.iter().filter(|&&n| n > 1).count() <= 1
}

fn render(inv: &[u64]) -> String {
    if inv.is_empty() {
        return "1".into();
    }
    inv.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x")
}

/// A class of this order has potential capitulation: it divides φ(n)/d.
pub fn potential_capitulation(class_order: u64, n: u64, d: u64) -> bool {
    let phi = factor(n).totient();
    phi % d == 0 && (phi / d) % class_order == 0
}

/// Whether a class of the given order can die in an extension of this
/// degree: its norm I^[L:K] must then be principal.
pub fn norm_bound(class_order: u64, relative_degree: u64) -> bool {
    relative_degree % class_order == 0
}

/// Exact kernel order of C_F → C_L on ℓ-parts when [L:F] = ℓ^a and ℓ ∤ h_L/h_F.
pub fn lemma4_i(
    f_part: &[u64],
    l_part: &[u64],
    ell: u64,
    a: u32,
    ramification_ok: bool,
) -> Result<u64, CriteriaError> {
    if !ramification_ok {
        return Err(CriteriaError::HypothesisNotMet("L/F may have an unramified subextension".into()));
    }
    let (hf, hl) = (group_order(f_part), group_order(l_part));
    if hl % hf != 0 || (hl / hf) % ell == 0 {
        return Err(CriteriaError::HypothesisNotMet(format!("{ell} divides h_L/h_F = {hl}/{hf}")));
    }
    Ok(torsion_order(f_part, ell.pow(a)))
}

/// For L/F cyclic of odd prime degree ℓ with A_L cyclic of order ℓ^k and
/// |A_F| = ℓ^f, f < k: the map is injective (kernel 1) and f = k − 1.
pub fn lemma4_ii(f: u32, k: u32, ell: u64) -> Result<u64, CriteriaError> {
    if ell == 2 {
        return Err(CriteriaError::HypothesisNotMet("ℓ must be odd".into()));
    }
    if f >= k {
        return Err(CriteriaError::HypothesisNotMet(format!("f = {f} is not below k = {k}")));
    }
    if k > 1 && f != k - 1 {
        return Err(CriteriaError::HypothesisNotMet(format!(
            "f = {f}, k = {k} contradicts f = k - 1"
        )));
    }
    Ok(1)
}

/// For L/F cyclic of odd prime degree ℓ with A_L ≅ (Z/ℓ)²: all classes of
/// order ℓ capitulate, so the kernel has order at least |A_F[ℓ]|.
pub fn lemma4_iii(f_part: &[u64], l_part: &[u64], ell: u64) -> Result<u64, CriteriaError> {
    if ell == 2 {
        return Err(CriteriaError::HypothesisNotMet("ℓ must be odd".into()));
    }
    let mut l: Vec<u64> = l_part.iter().copied().filter(|&n| n > 1).collect();
    l.sort();
    if l != [ell, ell] {
        return Err(CriteriaError::HypothesisNotMet(format!(
            "A_L = {} is not ({ell},{ell})",
            render(l_part)
        )));
    }
    Ok(torsion_order(f_part, ell))
}

/// Bounds from the capitulation corollary and genus theory for an imaginary
/// quadratic field with roots of unity ±1: the kernel lies between
/// |C[2]| and |C[4]|.
pub fn imaginary_bound(
    field: &FieldDescriptor,
    class_invariants: &[u64],
) -> Result<Certificate, CriteriaError> {
    if field.kind != FieldKind::QuadraticImaginary {
        return Err(CriteriaError::HypothesisNotMet("field is not imaginary quadratic".into()));
    }
    if field.roots_of_unity_count != 2 {
        return Err(CriteriaError::HypothesisNotMet("roots of unity other than ±1".into()));
    }
    let lo = torsion_order(class_invariants, 2);
    let hi = torsion_order(class_invariants, 4);
    Ok(Certificate {
        rule: "imaginary_bound".into(),
        detail: format!("C = {}: C[2] capitulates, I^4 principal", render(class_invariants)),
        lo,
        hi,
    })
}

/// For totally real K of prime conductor and p = 2: an odd degree
/// [Q(ζ_ℓ)⁺:K] leaves the 2-part injective (with C⁺ → C injective).
pub fn parity_obstruction(p: u64, relative_degree_real: u64) -> Option<Certificate> {
    (p == 2 && relative_degree_real % 2 == 1).then(|| Certificate {
        rule: "parity_obstruction".into(),
        detail: format!("[Q(ζ)+:K] = {relative_degree_real} is odd"),
        lo: 1,
        hi: 1,
    })
}

/// The eigenspace answer: invariants of {f : Tf ∈ I}/(I + (ω_n/T)) and
/// whether ω_n/T ∈ I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenKernel {
    pub invariants: Vec<u64>,
    pub omega_over_t_in_ideal: bool,
}

/// A kernel established by an argument outside the rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub kernel: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassifyInputs {
    /// Invariants of the class part under study: the p-part, or the whole
    /// group when p is None.
    pub class_part: Vec<u64>,
    /// p-part of the class group of the degree-p extension of K inside
    /// Q(ζ_ℓ)⁺.
    pub level_one_part: Option<Vec<u64>>,
    pub eigenspace: Option<EigenKernel>,
    pub fixture: Option<Fixture>,
}

fn status_of(lo: u64, hi: u64, h: u64, potential: u64) -> Status {
    if h > 1 && potential == 1 {
        return Status::NoPotential;
    }
    if lo == hi {
        return match lo {
            k if k == h && h > 1 => Status::Full,
            1 => Status::None,
            _ => Status::Partial,
        };
    }
    if lo > 1 && hi < h {
        Status::Partial
    } else {
        Status::Undetermined
    }
}

/// Recomputes the status from the certificate chain alone.
pub fn replay(v: &CapitulationVerdict) -> Status {
    let (lo, hi) = v
        .certificates
        .iter()
        .fold((1, u64::MAX), |(lo, hi), c| (lo.max(c.lo), hi.min(c.hi)));
    status_of(lo, hi, v.class_order(), v.potential)
}

/// Rules in fixed order: potential capitulation, parity, degree-p descent,
/// imaginary bounds and genus theory, then the eigenspace computation and
/// fixtures, which give exact kernels.
pub fn classify(
    field: &FieldDescriptor,
    p: Option<u64>,
    inputs: &ClassifyInputs,
) -> Result<CapitulationVerdict, CriteriaError> {
    let part = &inputs.class_part;
    let h = group_order(part);
    let phi = factor(field.conductor).totient();
    let top = phi / field.degree;
    let potential = torsion_order(part, top);
    let mut certs = vec![Certificate {
        rule: "potential_capitulation".into(),
        detail: format!("C = {}, φ(n)/d = {top}", render(part)),
        lo: 1,
        hi: potential,
    }];
    let (mut lo, mut hi) = (1u64, potential);
    let apply = |c: Certificate, lo: &mut u64, hi: &mut u64, certs: &mut Vec<Certificate>| {
        *lo = (*lo).max(c.lo);
        *hi = (*hi).min(c.hi);
        certs.push(c);
    };
    let mut fired = h == 1 || potential == 1;

    let real_prime = field.is_totally_real() && field.prime_conductor();
    // [Q(ζ_ℓ)⁺ : K]
    let rel = real_prime.then(|| (field.conductor - 1) / (2 * field.degree));

    if !fired {
        if let (Some(2), Some(rel)) = (p, rel) {
            if let Some(c) = parity_obstruction(2, rel) {
                apply(c, &mut lo, &mut hi, &mut certs);
                fired = true;
            }
        }
    }

    if let (Some(p), Some(rel), Some(l1)) = (p, rel, &inputs.level_one_part) {
        let tn = valuation(rel, p);
        if tn >= 1 && h > 1 {
            let hl = group_order(l1);
            if let Ok(k) = lemma4_i(part, l1, p, 1, true) {
                apply(
                    Certificate {
                        rule: "lemma4_i".into(),
                        detail: format!("A_K = {}, A_L = {}, [L:K] = {p}", render(part), render(l1)),
                        lo: k,
                        hi: u64::MAX,
                    },
                    &mut lo,
                    &mut hi,
                    &mut certs,
                );
                fired = true;
            } else if p != 2 && is_cyclic(l1) && h < hl {
                let f = valuation(h, p);
                let k = valuation(hl, p);
                let k_top = lemma4_ii(f, k, p)?;
                // injective into L; beyond L the degree is prime to p when tn = 1
                if tn == 1 {
                    apply(
                        Certificate {
                            rule: "lemma4_ii".into(),
                            detail: format!("A_K = {}, A_L = {} cyclic, p ∤ [Q(ζ):L]", render(part), render(l1)),
                            lo: k_top,
                            hi: k_top,
                        },
                        &mut lo,
                        &mut hi,
                        &mut certs,
                    );
                    fired = true;
                }
            } else if let Ok(k) = lemma4_iii(part, l1, p) {
                apply(
                    Certificate {
                        rule: "lemma4_iii".into(),
                        detail: format!("A_L = {}", render(l1)),
                        lo: k,
                        hi: u64::MAX,
                    },
                    &mut lo,
                    &mut hi,
                    &mut certs,
                );
                fired = true;
            }
        }
    }

    if field.kind == FieldKind::QuadraticImaginary && h > 1 && potential > 1 {
        let relevant = p.is_none_or(|p| p == 2);
        if field.roots_of_unity_count == 2 {
            let mut c = imaginary_bound(field, part)?;
            if !relevant {
                c.lo = 1;
            }
            apply(c, &mut lo, &mut hi, &mut certs);
            fired = true;
        }
    } else if field.kind == FieldKind::QuadraticReal && h > 1 && potential > 1 && p.is_none_or(|p| p == 2) {
        let d = field.discriminant().unwrap();
        if let Ok(g) = quadratic_genus_capitulation(d) {
            if g > 1 {
                apply(
                    Certificate {
                        rule: "genus".into(),
                        detail: format!("ambiguous and visible classes span {g} classes of order 2"),
                        lo: g,
                        hi: u64::MAX,
                    },
                    &mut lo,
                    &mut hi,
                    &mut certs,
                );
                fired = true;
            }
        }
    }

    let mut kernel_invariants = None;
    let check = |rule: &str, k: u64, lo: u64, hi: u64| {
        if k < lo || k > hi || k % lo != 0 {
            Err(CriteriaError::Inconsistent { rule: rule.into(), lo, hi, got: k })
        } else {
            Ok(())
        }
    };
    if let Some(e) = &inputs.eigenspace {
        let k = group_order(&e.invariants);
        check("eigenspace", k, lo, hi)?;
        if e.omega_over_t_in_ideal != (k == h) {
            return Err(CriteriaError::Inconsistent { rule: "eigenspace".into(), lo: h, hi: h, got: k });
        }
        apply(
            Certificate {
                rule: "eigenspace".into(),
                detail: format!(
                    "kernel {}, ω_n/T {} I",
                    render(&e.invariants),
                    if e.omega_over_t_in_ideal { "∈" } else { "∉" }
                ),
                lo: k,
                hi: k,
            },
            &mut lo,
            &mut hi,
            &mut certs,
        );
        kernel_invariants = Some(e.invariants.clone());
        fired = true;
    }
    if let Some(fx) = &inputs.fixture {
        check(&fx.name, fx.kernel, lo, hi)?;
        apply(
            Certificate { rule: "fixture".into(), detail: fx.name.clone(), lo: fx.kernel, hi: fx.kernel },
            &mut lo,
            &mut hi,
            &mut certs,
        );
        fired = true;
    }
    if !fired {
        return Err(CriteriaError::InsufficientData);
    }
    let hi = hi.min(potential);
    let status = status_of(lo, hi, h, potential);
    let kernel = if lo == hi { KernelOrder::Exact(lo) } else { KernelOrder::Interval { lo, hi } };
    Ok(CapitulationVerdict {
        field: field.clone(),
        p,
        status,
        kernel,
        certificates: certs,
        class_part: part.clone(),
        potential,
        kernel_invariants,
    })
}
