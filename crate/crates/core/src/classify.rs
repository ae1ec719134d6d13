//! Closed-form layer: Frattini ranks of Sylow 3-subgroups by family, the
//! 2-generation classification, stated k₀ counts, and the resulting prediction.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::grpzoo::{ExtKind, Family, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("{0} is outside the encoded classification")]
    NotCovered(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

/// Base-3 digits `a_0, a_1, …` of `n`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeAdicDigits(Vec<u8>);

impl ThreeAdicDigits {
    pub fn new(n: u64) -> ThreeAdicDigits {
        ThreeAdicDigits(arith::digits(n, 3).into_iter().map(|d| d as u8).collect())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn value(&self) -> u64 {
        self.0.iter().rev().fold(0, |acc, &d| acc * 3 + d as u64)
    }

    /// `Σ (i + shift)·a_i`.
    pub fn weighted(&self, shift: u32) -> u32 {
        self.0.iter().enumerate().map(|(i, &a)| (i as u32 + shift) * a as u32).sum()
    }
}

/// An integer or an explicit marker for "not determined".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rank {
    Known(u32),
    Unknown,
}

impl Rank {
    pub fn known(self) -> Option<u32> {
        match self {
            Rank::Known(r) => Some(r),
            Rank::Unknown => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Known(r) => write!(f, "{r}"),
            Rank::Unknown => f.write_str("unknown"),
        }
    }
}

/// A count given by a closed formula, or `none stated`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stated {
    Value(u64),
    NoneStated,
}

impl Stated {
    pub fn value(self) -> Option<u64> {
        match self {
            Stated::Value(v) => Some(v),
            Stated::NoneStated => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Num(u64),
    Text(String),
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Known(r) => s.serialize_u32(*r),
            Rank::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumOrText::deserialize(d)? {
            NumOrText::Num(v) => Ok(Rank::Known(v as u32)),
            NumOrText::Text(t) if t == "unknown" => Ok(Rank::Unknown),
            NumOrText::Text(t) => Err(serde::de::Error::custom(format!("bad rank `{t}`"))),
        }
    }
}

impl Serialize for Stated {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Stated::Value(v) => s.serialize_u64(*v),
            Stated::NoneStated => s.serialize_str("none stated"),
        }
    }
}

impl<'de> Deserialize<'de> for Stated {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumOrText::deserialize(d)? {
            NumOrText::Num(v) => Ok(Stated::Value(v)),
            NumOrText::Text(t) if t == "none stated" => Ok(Stated::NoneStated),
            NumOrText::Text(t) => Err(serde::de::Error::custom(format!("bad count `{t}`"))),
        }
    }
}

pub mod tags {
    pub const DIGITS_SYM: &str = "rank:base3-digits-sym";
    pub const DIGITS_GL: &str = "rank:base3-digits-gl";
    pub const SL_VIA_GL: &str = "rank:sl-as-gl(n-1)";
    pub const TWISTED_VIA_GL: &str = "rank:gl(n/2,q^2)";
    pub const SMALL_N: &str = "rank:explicit-small-n";
    pub const WREATH: &str = "rank:wreath-tower-length";
    pub const PGL_3PRIME_CENTRE: &str = "rank:pgl-split-centre";
    pub const DEFINING: &str = "rule:defining-characteristic";
    pub const CLASSICAL: &str = "rule:cross-characteristic-classical";
    pub const ORTHOGONAL_EVEN: &str = "rule:even-orthogonal-reduction";
    pub const EXCEPTIONAL: &str = "rule:exceptional-types";
    pub const SUZUKI: &str = "rule:order-prime-to-3";
    pub const SPORADIC: &str = "data:bundled-generators";
    pub const EXT_3PRIME: &str = "ext:3prime-same-as-socle";
    pub const EXT_NONCYCLIC: &str = "ext:noncyclic-not-2-generated";
    pub const EXT_SMALL: &str = "ext:psl2-psl3-cyclic";
    pub const EXT_OTHER: &str = "ext:other-lie-not-2-generated";
    pub const K0_PSL4: &str = "k0:psl4-split";
    pub const K0_PSL67: &str = "k0:psl6-7-nonsplit";
    pub const K0_SP6: &str = "k0:psp6-pomega8minus";
    pub const K0_PSL3: &str = "k0:psl3-split";
    pub const K0_CYCLIC: &str = "k0:cyclic-sylow";
    pub const PREDICTION: &str = "prediction:two-generated-iff-6-or-9";
}

pub fn rank_sym(n: u64) -> u32 {
    ThreeAdicDigits::new(n).weighted(0)
}

fn check_field(q: u64) -> Result<(), ClassifyError> {
    if arith::prime_power(q).is_none() {
        return Err(ClassifyError::Invalid(format!("q = {q} is not a prime power")));
    }
    if q % 3 == 0 {
        return Err(ClassifyError::Invalid(format!("q = {q} is a power of 3")));
    }
    Ok(())
}

/// `3 | q - eps`, for `3 ∤ q`.
fn splits(q: u64, eps: i8) -> bool {
    (q as i128 - eps as i128).rem_euclid(3) == 0
}

/// Rank of a Sylow 3-subgroup of `GL^ε_n(q)` when `3 | q − ε`.
pub fn rank_gl(n: u64, q: u64, eps: i8) -> Result<u32, ClassifyError> {
    check_field(q)?;
    if !splits(q, eps) {
        return Err(ClassifyError::Invalid(format!("3 does not divide q - eps for q = {q}, eps = {eps}")));
    }
    Ok(ThreeAdicDigits::new(n).weighted(1))
}

/// Rank for `GL^ε_n(q)` in either congruence class.
pub fn rank_gl_any(n: u64, q: u64, eps: i8) -> Result<u32, ClassifyError> {
    check_field(q)?;
    Ok(if splits(q, eps) {
        ThreeAdicDigits::new(n).weighted(1)
    } else {
        ThreeAdicDigits::new(n / 2).weighted(1)
    })
}

pub fn rank_sl(n: u64, q: u64, eps: i8) -> Result<Rank, ClassifyError> {
    check_field(q)?;
    if !splits(q, eps) {
        return Ok(Rank::Known(ThreeAdicDigits::new(n / 2).weighted(1)));
    }
    Ok(match n {
        0 => return Err(ClassifyError::Invalid("n must be positive".into())),
        3 => Rank::Known(2),
        _ if n % 3 != 0 => Rank::Known(ThreeAdicDigits::new(n - 1).weighted(1)),
        _ => Rank::Unknown,
    })
}

pub fn rank_psl(n: u64, q: u64, eps: i8) -> Result<Rank, ClassifyError> {
    rank_sl(n, q, eps)
}

/// Rank for `PGL^ε_n(q)`: the centre splits off when `3 ∤ n`.
pub fn rank_pgl(n: u64, q: u64, eps: i8) -> Result<Rank, ClassifyError> {
    check_field(q)?;
    if !splits(q, eps) {
        return Ok(Rank::Known(ThreeAdicDigits::new(n / 2).weighted(1)));
    }
    Ok(match n {
        3 => Rank::Known(2),
        _ if n % 3 != 0 => Rank::Known(ThreeAdicDigits::new(n - 1).weighted(1)),
        _ => Rank::Unknown,
    })
}

/// Rank, 2-generation and provenance for a spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: Rank,
    pub two_generated: bool,
    pub provenance: Vec<&'static str>,
}

impl RankInfo {
    fn known(rank: u32, tag: &'static str) -> RankInfo {
        RankInfo {
            rank: Rank::Known(rank),
            two_generated: rank == 2,
            provenance: vec![tag],
        }
    }

    fn judged(rank: Rank, two_generated: bool, tags: &[&'static str]) -> RankInfo {
        RankInfo {
            rank,
            two_generated,
            provenance: tags.to_vec(),
        }
    }
}

fn field_exponent(q: u64) -> Result<(u64, u32), ClassifyError> {
    arith::prime_power(q).ok_or_else(|| ClassifyError::Invalid(format!("q = {q} is not a prime power")))
}

/// Characteristic 3: 2-generated exactly for `(r, q) ∈ {(2, 3), (1, 9)}`.
fn defining_rule(spec: &GroupSpec, r: u32, rank: Rank) -> Result<RankInfo, ClassifyError> {
    let small = (r == 2 && spec.q == 3) || (r == 1 && spec.q == 9);
    if small && spec.family == Family::G2 {
        return Err(ClassifyError::NotCovered(spec.name()));
    }
    let rank = if small { Rank::Known(2) } else { rank };
    Ok(RankInfo::judged(rank, small, &[tags::DEFINING]))
}

/// Rank information for `spec` ignoring any extension decoration.
fn socle_info(spec: &GroupSpec) -> Result<RankInfo, ClassifyError> {
    spec.validate().map_err(|e| ClassifyError::Invalid(e.to_string()))?;
    let n = spec.n as u64;
    let q = spec.q;
    let eps = spec.effective_eps();
    match spec.family {
        Family::Sym | Family::Alt => Ok(RankInfo::known(rank_sym(n), tags::DIGITS_SYM)),
        Family::WreathTower => Ok(RankInfo::known(spec.tower.len() as u32, tags::WREATH)),
        Family::External => Err(ClassifyError::NotCovered(spec.name())),
        Family::Sporadic => match spec.label.as_deref() {
            Some("M11") | Some("M12") => Ok(RankInfo::known(2, tags::SPORADIC)),
            _ => Err(ClassifyError::NotCovered(spec.name())),
        },
        f if f.is_linear_type() => {
            if q % 3 == 0 {
                let (_, k) = field_exponent(q)?;
                let rank = if eps == 1 {
                    Rank::Known(k * (spec.n.saturating_sub(1)))
                } else {
                    match spec.n {
                        1 => Rank::Known(0),
                        2 => Rank::Known(k),
                        3 => Rank::Known(2 * k),
                        _ => Rank::Unknown,
                    }
                };
                let r = spec.n.saturating_sub(1);
                return defining_rule(spec, r, rank);
            }
            let split = splits(q, eps);
            let tag = if split { tags::DIGITS_GL } else { tags::TWISTED_VIA_GL };
            match f {
                Family::Gl | Family::Gu => Ok(RankInfo::known(rank_gl_any(n, q, eps)?, tag)),
                _ => {
                    let rank = match f {
                        Family::Pgl | Family::Pgu => rank_pgl(n, q, eps)?,
                        _ => rank_psl(n, q, eps)?,
                    };
                    let two = if split { n == 3 || n == 4 } else { (4..=7).contains(&n) };
                    let mut prov = vec![tag];
                    if split && n % 3 != 0 {
                        prov.push(tags::SL_VIA_GL);
                    }
                    if split && n == 3 {
                        prov.push(tags::SMALL_N);
                    }
                    if matches!(f, Family::Pgl | Family::Pgu) && split && n % 3 != 0 {
                        prov.push(tags::PGL_3PRIME_CENTRE);
                    }
                    Ok(RankInfo::judged(rank, two, &prov))
                }
            }
        }
        Family::Sp | Family::Psp | Family::POmega => {
            let m = if spec.family == Family::POmega {
                if n % 2 == 0 || n < 5 {
                    return Err(ClassifyError::NotCovered(spec.name()));
                }
                (n - 1) / 2
            } else {
                if n % 2 == 1 || n < 4 {
                    return Err(ClassifyError::NotCovered(spec.name()));
                }
                n / 2
            };
            if q % 3 == 0 {
                return defining_rule(spec, m as u32, Rank::Unknown);
            }
            Ok(RankInfo {
                provenance: vec![tags::DIGITS_GL, tags::CLASSICAL],
                ..RankInfo::known(ThreeAdicDigits::new(m).weighted(1), tags::CLASSICAL)
            })
        }
        Family::POmegaPlus | Family::POmegaMinus => {
            if n % 2 == 1 || n < 8 {
                return Err(ClassifyError::NotCovered(spec.name()));
            }
            let m = n / 2;
            if q % 3 == 0 {
                return defining_rule(spec, m as u32, Rank::Unknown);
            }
            if m == 4 {
                let rank = if spec.family == Family::POmegaMinus { 2 } else { 3 };
                return Ok(RankInfo {
                    provenance: vec![tags::ORTHOGONAL_EVEN, tags::DIGITS_GL],
                    ..RankInfo::known(rank, tags::ORTHOGONAL_EVEN)
                });
            }
            Ok(RankInfo::judged(Rank::Unknown, false, &[tags::ORTHOGONAL_EVEN]))
        }
        Family::G2 | Family::D4Triality | Family::F4 | Family::E6 | Family::E6Twisted | Family::E7 | Family::E8 => {
            let r = match spec.family {
                Family::G2 => 2,
                Family::D4Triality | Family::F4 => 4,
                Family::E6 | Family::E6Twisted => 6,
                Family::E7 => 7,
                _ => 8,
            };
            if q % 3 == 0 {
                return defining_rule(spec, r, Rank::Unknown);
            }
            if matches!(spec.family, Family::G2 | Family::D4Triality) {
                Ok(RankInfo::known(2, tags::EXCEPTIONAL))
            } else {
                Ok(RankInfo::judged(Rank::Unknown, false, &[tags::EXCEPTIONAL]))
            }
        }
        Family::F4Twisted => {
            let (p, k) = field_exponent(q)?;
            if p != 2 || k % 2 == 0 {
                return Err(ClassifyError::Invalid(format!("2F4 needs q = 2^(2m+1), got {q}")));
            }
            Ok(RankInfo::known(2, tags::EXCEPTIONAL))
        }
        Family::Suzuki => {
            let (p, k) = field_exponent(q)?;
            if p != 2 || k % 2 == 0 || k < 3 {
                return Err(ClassifyError::Invalid(format!("2B2 needs q = 2^(2m+1) >= 8, got {q}")));
            }
            Ok(RankInfo::known(0, tags::SUZUKI))
        }
        Family::Ree => {
            let (p, k) = field_exponent(q)?;
            if p != 3 || k % 2 == 0 || k < 3 {
                return Err(ClassifyError::Invalid(format!("2G2 needs q = 3^(2m+1) >= 27, got {q}")));
            }
            Ok(RankInfo::judged(Rank::Unknown, false, &[tags::DEFINING]))
        }
        _ => Err(ClassifyError::NotCovered(spec.name())),
    }
}

fn is_simple_socle(f: Family) -> bool {
    !matches!(
        f,
        Family::Sym
            | Family::Gl
            | Family::Sl
            | Family::Pgl
            | Family::Gu
            | Family::Su
            | Family::Pgu
            | Family::Sp
            | Family::WreathTower
            | Family::External
    )
}

/// Rank and 2-generation for `spec`, including an almost simple extension if present.
pub fn rank_info(spec: &GroupSpec) -> Result<RankInfo, ClassifyError> {
    let base = socle_info(spec)?;
    let Some(ext) = spec.ext else { return Ok(base) };
    if !is_simple_socle(spec.family) {
        return Err(ClassifyError::Invalid(format!("{} is not a simple socle", spec.family)));
    }
    if ext == ExtKind::ThreePrime {
        let mut info = base;
        info.provenance.push(tags::EXT_3PRIME);
        return Ok(info);
    }
    let lie = spec.family.uses_field();
    if !lie {
        // sporadic and alternating socles: outer parts relevant here are 3'
        return Err(ClassifyError::NotCovered(spec.name()));
    }
    if spec.q % 3 == 0 {
        if base.two_generated {
            return Err(ClassifyError::NotCovered(spec.name()));
        }
        return Ok(RankInfo::judged(Rank::Unknown, false, &[tags::DEFINING]));
    }
    if ext == ExtKind::NonCyclic3 {
        return Ok(RankInfo::judged(Rank::Unknown, false, &[tags::EXT_NONCYCLIC]));
    }
    let n = spec.n;
    let psl = matches!(spec.family, Family::Psl | Family::Psu);
    let split = splits(spec.q, spec.effective_eps());
    let has_diagonal = matches!(ext, ExtKind::Diagonal | ExtKind::DiagonalField);
    if psl && has_diagonal {
        let d = arith::gcd(n as u64, (spec.q as i128 - spec.effective_eps() as i128).unsigned_abs() as u64);
        if d % 3 != 0 {
            return Err(ClassifyError::Invalid(format!("{} has no diagonal automorphism of order 3", spec.name())));
        }
    }
    if psl && (n == 2 || (n == 3 && !split)) {
        return Ok(RankInfo::known(2, tags::EXT_SMALL));
    }
    if psl && n == 3 {
        return Ok(match ext {
            ExtKind::Diagonal | ExtKind::DiagonalField => RankInfo::known(2, tags::EXT_SMALL),
            _ => RankInfo::judged(Rank::Unknown, false, &[tags::EXT_SMALL]),
        });
    }
    Ok(RankInfo::judged(Rank::Unknown, false, &[tags::EXT_OTHER]))
}

pub fn two_generated(spec: &GroupSpec) -> Result<bool, ClassifyError> {
    Ok(rank_info(spec)?.two_generated)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Formulas {
    pub k0: Stated,
    pub k0_sigma: Stated,
    pub provenance: Vec<String>,
}

impl K0Formulas {
    fn none() -> K0Formulas {
        K0Formulas {
            k0: Stated::NoneStated,
            k0_sigma: Stated::NoneStated,
            provenance: Vec::new(),
        }
    }
}

/// Closed-form `k₀(B₀)` and `k₀,σ(B₀)` where known for the simple group `spec`.
pub fn k0_formulas(spec: &GroupSpec) -> K0Formulas {
    let mut out = K0Formulas::none();
    if spec.ext.is_some() || !spec.family.uses_field() || spec.q % 3 == 0 || arith::prime_power(spec.q).is_none() {
        return out;
    }
    let q = spec.q as u128;
    let eps = spec.effective_eps();
    let split = splits(spec.q, eps);
    let n = spec.n;
    let mut set = |k0: Stated, ks: Stated, tag: &str| {
        out = K0Formulas {
            k0,
            k0_sigma: ks,
            provenance: vec![tag.to_string()],
        };
    };
    match spec.family {
        Family::Psl | Family::Psu => {
            let a_minus = arith::valuation((q as i128 - eps as i128).unsigned_abs(), 3);
            let a_plus = arith::valuation((q as i128 + eps as i128).unsigned_abs(), 3);
            match (n, split) {
                (4, true) => set(Stated::Value(3u64.pow(a_minus + 1)), Stated::Value(9), tags::K0_PSL4),
                (6, false) | (7, false) => {
                    set(Stated::Value(3 * (3u64.pow(a_plus) - 1) / 2 + 6), Stated::Value(9), tags::K0_PSL67)
                }
                (3, true) => set(Stated::NoneStated, Stated::Value(6), tags::K0_PSL3),
                (2, _) | (3, false) => set(Stated::NoneStated, Stated::Value(3), tags::K0_CYCLIC),
                _ => {}
            }
        }
        Family::Psp if n == 6 => {
            let a = arith::valuation(q * q - 1, 3);
            set(Stated::Value(6 + 3 * (3u64.pow(a) - 1) / 2), Stated::NoneStated, tags::K0_SP6);
        }
        Family::POmegaMinus if n == 8 => {
            let a = arith::valuation(q * q - 1, 3);
            set(Stated::Value(6 + 3 * (3u64.pow(a) - 1) / 2), Stated::NoneStated, tags::K0_SP6);
        }
        _ => {}
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub spec: GroupSpec,
    pub group: String,
    pub rank: Rank,
    pub two_generated: bool,
    pub k0_formula: Stated,
    pub k0_sigma_formula: Stated,
    pub theorem_a_prediction: bool,
    pub provenance: Vec<String>,
}

/// The prediction: `k₀,σ(B₀) ∈ {6, 9}` exactly when the Sylow 3-subgroup is 2-generated.
pub fn theorem_a_predict(spec: &GroupSpec) -> Result<ClassificationRecord, ClassifyError> {
    let info = rank_info(spec)?;
    let k0 = k0_formulas(spec);
    let mut provenance: Vec<String> = info.provenance.iter().map(|s| s.to_string()).collect();
    provenance.extend(k0.provenance.iter().cloned());
    provenance.push(tags::PREDICTION.to_string());
    Ok(ClassificationRecord {
        spec: spec.clone(),
        group: spec.name(),
        rank: info.rank,
        two_generated: info.two_generated,
        k0_formula: k0.k0,
        k0_sigma_formula: k0.k0_sigma,
        theorem_a_prediction: info.two_generated,
        provenance,
    })
}
