//! Concrete groups: symmetric and alternating groups, linear and unitary
//! groups over small fields as permutation groups, iterated wreath products,
//! groups loaded from generator files, and their Sylow 3-subgroups.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::finfield::{FieldCtx, FieldError};
use crate::permgrp::{Perm, PermError, PermGroup};

pub const MAX_DEGREE: usize = 5000;
/// Orders up to this bound are checked against the order formula after construction.
pub const VERIFY_ORDER_BOUND: u128 = 1_000_000_000;
pub const SYLOW_BUDGET: u32 = 100_000;
const MAX_FIELD: u128 = 1024;

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("invalid group description: {0}")]
    Invalid(String),
    #[error("{0} has no permutation constructor")]
    Unsupported(String),
    #[error("permutation degree {degree} exceeds the bound {limit}")]
    DegreeTooLarge { degree: u128, limit: usize },
    #[error("field of order {0} is too large for matrix constructors")]
    FieldTooLarge(u128),
    #[error("group order does not fit in 128 bits")]
    OrderTooLarge,
    #[error("constructed group has order {found}, expected {expected}")]
    OrderMismatch { expected: u128, found: u128 },
    #[error("Sylow search reached order {reached} of {target} within {budget} iterations")]
    SylowBudget { reached: u128, target: u128, budget: u32 },
    #[error("malformed generator file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sym")]
    Sym,
    #[serde(rename = "alt")]
    Alt,
    #[serde(rename = "gl")]
    Gl,
    #[serde(rename = "sl")]
    Sl,
    #[serde(rename = "pgl")]
    Pgl,
    #[serde(rename = "psl")]
    Psl,
    #[serde(rename = "gu")]
    Gu,
    #[serde(rename = "su")]
    Su,
    #[serde(rename = "pgu")]
    Pgu,
    #[serde(rename = "psu")]
    Psu,
    #[serde(rename = "sp")]
    Sp,
    #[serde(rename = "psp")]
    Psp,
    #[serde(rename = "wreath_tower")]
    WreathTower,
    #[serde(rename = "external")]
    External,
    /// `PΩ_{2m+1}(q)`, `n = 2m+1`.
    #[serde(rename = "pomega")]
    POmega,
    #[serde(rename = "pomega-plus")]
    POmegaPlus,
    #[serde(rename = "pomega-minus")]
    POmegaMinus,
    #[serde(rename = "g2")]
    G2,
    #[serde(rename = "3d4")]
    D4Triality,
    /// `²F₄(q)′` with `q = 2^(2m+1)`.
    #[serde(rename = "2f4")]
    F4Twisted,
    #[serde(rename = "f4")]
    F4,
    #[serde(rename = "e6")]
    E6,
    #[serde(rename = "2e6")]
    E6Twisted,
    #[serde(rename = "e7")]
    E7,
    #[serde(rename = "e8")]
    E8,
    #[serde(rename = "2b2")]
    Suzuki,
    #[serde(rename = "2g2")]
    Ree,
    #[serde(rename = "sporadic")]
    Sporadic,
}

impl Family {
    pub const ALL: [Family; 28] = [
        Family::Sym,
        Family::Alt,
        Family::Gl,
        Family::Sl,
        Family::Pgl,
        Family::Psl,
        Family::Gu,
        Family::Su,
        Family::Pgu,
        Family::Psu,
        Family::Sp,
        Family::Psp,
        Family::WreathTower,
        Family::External,
        Family::POmega,
        Family::POmegaPlus,
        Family::POmegaMinus,
        Family::G2,
        Family::D4Triality,
        Family::F4Twisted,
        Family::F4,
        Family::E6,
        Family::E6Twisted,
        Family::E7,
        Family::E8,
        Family::Suzuki,
        Family::Ree,
        Family::Sporadic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::Alt => "alt",
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::Pgl => "pgl",
            Family::Psl => "psl",
            Family::Gu => "gu",
            Family::Su => "su",
            Family::Pgu => "pgu",
            Family::Psu => "psu",
            Family::Sp => "sp",
            Family::Psp => "psp",
            Family::WreathTower => "wreath_tower",
            Family::External => "external",
            Family::POmega => "pomega",
            Family::POmegaPlus => "pomega-plus",
            Family::POmegaMinus => "pomega-minus",
            Family::G2 => "g2",
            Family::D4Triality => "3d4",
            Family::F4Twisted => "2f4",
            Family::F4 => "f4",
            Family::E6 => "e6",
            Family::E6Twisted => "2e6",
            Family::E7 => "e7",
            Family::E8 => "e8",
            Family::Suzuki => "2b2",
            Family::Ree => "2g2",
            Family::Sporadic => "sporadic",
        }
    }

    /// Linear-type families, unitary ones included.
    pub fn is_linear_type(&self) -> bool {
        matches!(
            self,
            Family::Gl
                | Family::Sl
                | Family::Pgl
                | Family::Psl
                | Family::Gu
                | Family::Su
                | Family::Pgu
                | Family::Psu
        )
    }

    pub fn is_unitary_name(&self) -> bool {
        matches!(self, Family::Gu | Family::Su | Family::Pgu | Family::Psu)
    }

    pub fn uses_field(&self) -> bool {
        !matches!(
            self,
            Family::Sym | Family::Alt | Family::WreathTower | Family::External | Family::Sporadic
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ZooError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "wreath" | "wreath-tower" => "wreath_tower",
            "omega" => "pomega",
            "pomega+" | "pomegaplus" => "pomega-plus",
            "pomega-" | "pomegaminus" => "pomega-minus",
            other => other,
        };
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == alias)
            .ok_or_else(|| ZooError::Invalid(format!("unknown family `{s}`")))
    }
}

/// Automorphism decoration of an almost simple group `S ≤ A ≤ Aut(S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtKind {
    /// `A/S` has order prime to 3.
    #[serde(rename = "3prime")]
    ThreePrime,
    /// Cyclic 3-part from diagonal automorphisms.
    #[serde(rename = "diagonal")]
    Diagonal,
    /// Cyclic 3-part from field automorphisms.
    #[serde(rename = "field")]
    Field,
    /// Cyclic 3-part mixing diagonal and field automorphisms.
    #[serde(rename = "diagonal-field")]
    DiagonalField,
    /// Non-cyclic Sylow 3-subgroup of `A/S`.
    #[serde(rename = "noncyclic3")]
    NonCyclic3,
}

impl FromStr for ExtKind {
    type Err = ZooError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| ZooError::Invalid(format!("unknown extension kind `{s}`")))
    }
}

/// Symbolic description of a group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    #[serde(default)]
    pub n: u32,
    #[serde(default)]
    pub q: u64,
    #[serde(default = "default_eps")]
    pub eps: i8,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtKind>,
}

fn default_eps() -> i8 {
    1
}

impl GroupSpec {
    fn bare(family: Family) -> GroupSpec {
        GroupSpec {
            family,
            n: 0,
            q: 0,
            eps: 1,
            tower: Vec::new(),
            label: None,
            path: None,
            ext: None,
        }
    }

    pub fn sym(n: u32) -> GroupSpec {
        GroupSpec { n, ..GroupSpec::bare(Family::Sym) }
    }

    pub fn alt(n: u32) -> GroupSpec {
        GroupSpec { n, ..GroupSpec::bare(Family::Alt) }
    }

    /// Any field-based family; unitary names force `eps = -1`.
    pub fn lie(family: Family, n: u32, q: u64, eps: i8) -> GroupSpec {
        let eps = if family.is_unitary_name() { -1 } else { eps };
        GroupSpec {
            n,
            q,
            eps,
            ..GroupSpec::bare(family)
        }
    }

    pub fn wreath_tower(tower: Vec<u32>) -> GroupSpec {
        GroupSpec {
            n: tower.len() as u32,
            tower,
            ..GroupSpec::bare(Family::WreathTower)
        }
    }

    pub fn external(path: impl Into<String>) -> GroupSpec {
        GroupSpec {
            path: Some(path.into()),
            ..GroupSpec::bare(Family::External)
        }
    }

    pub fn sporadic(label: &str) -> GroupSpec {
        GroupSpec {
            label: Some(label.to_string()),
            ..GroupSpec::bare(Family::Sporadic)
        }
    }

    pub fn with_ext(mut self, ext: ExtKind) -> GroupSpec {
        self.ext = Some(ext);
        self
    }

    /// `+1` for linear, `-1` for unitary.
    pub fn effective_eps(&self) -> i8 {
        if self.family.is_unitary_name() {
            -1
        } else {
            self.eps
        }
    }

    /// Checks parameter domains.
    pub fn validate(&self) -> Result<(), ZooError> {
        let bad = |m: &str| Err(ZooError::Invalid(format!("{}: {m}", self.name())));
        if self.eps != 1 && self.eps != -1 {
            return bad("eps must be +1 or -1");
        }
        if self.family.is_unitary_name() && self.eps != -1 {
            return bad("unitary families take eps = -1");
        }
        match self.family {
            Family::Sym | Family::Alt => {
                if self.n == 0 {
                    return bad("n must be positive");
                }
            }
            Family::WreathTower => {
                if self.tower.is_empty() || self.tower.contains(&0) {
                    return bad("tower needs positive exponents");
                }
            }
            Family::External => {
                if self.path.is_none() {
                    return bad("external groups need a generator file");
                }
            }
            Family::Sporadic => {
                if self.label.is_none() {
                    return bad("sporadic groups need a label");
                }
            }
            _ => {
                if self.n == 0 && !self.is_exceptional() {
                    return bad("n must be positive");
                }
                if arith::prime_power(self.q).is_none() {
                    return bad("q must be a prime power");
                }
            }
        }
        Ok(())
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(
            self.family,
            Family::G2
                | Family::D4Triality
                | Family::F4Twisted
                | Family::F4
                | Family::E6
                | Family::E6Twisted
                | Family::E7
                | Family::E8
                | Family::Suzuki
                | Family::Ree
        )
    }

    /// Conventional name, e.g. `PSL(3,4)` or `PSU(4,2)`.
    pub fn name(&self) -> String {
        let ext = match self.ext {
            Some(e) => format!(
                ".{}",
                serde_json::to_value(e).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
            ),
            None => String::new(),
        };
        let unitary = self.effective_eps() == -1;
        let lin = |stem: &str| {
            let stem = if unitary { stem.replace('L', "U") } else { stem.to_string() };
            format!("{stem}({},{})", self.n, self.q)
        };
        let core = match self.family {
            Family::Sym => format!("S{}", self.n),
            Family::Alt => format!("A{}", self.n),
            Family::Gl | Family::Gu => lin("GL"),
            Family::Sl | Family::Su => lin("SL"),
            Family::Pgl | Family::Pgu => lin("PGL"),
            Family::Psl | Family::Psu => lin("PSL"),
            Family::Sp => format!("Sp({},{})", self.n, self.q),
            Family::Psp => format!("PSp({},{})", self.n, self.q),
            Family::WreathTower => {
                let parts: Vec<String> = self.tower.iter().map(|a| format!("C{}", 3u64.pow(*a))).collect();
                parts.join("wr")
            }
            Family::External => self
                .label
                .clone()
                .or_else(|| self.path.clone())
                .unwrap_or_else(|| "external".into()),
            Family::Sporadic => self.label.clone().unwrap_or_default(),
            Family::POmega => format!("POmega({},{})", self.n, self.q),
            Family::POmegaPlus => format!("POmega+({},{})", self.n, self.q),
            Family::POmegaMinus => format!("POmega-({},{})", self.n, self.q),
            Family::G2 => format!("G2({})", self.q),
            Family::D4Triality => format!("3D4({})", self.q),
            Family::F4Twisted => format!("2F4({})'", self.q),
            Family::F4 => format!("F4({})", self.q),
            Family::E6 => format!("E6({})", self.q),
            Family::E6Twisted => format!("2E6({})", self.q),
            Family::E7 => format!("E7({})", self.q),
            Family::E8 => format!("E8({})", self.q),
            Family::Suzuki => format!("Sz({})", self.q),
            Family::Ree => format!("Ree({})", self.q),
        };
        format!("{core}{ext}")
    }

    /// Order from the standard formulas, where one is encoded and fits in `u128`.
    pub fn expected_order(&self) -> Option<u128> {
        match self.family {
            Family::Sym => Some(arith::factorial(self.n as u64)),
            Family::Alt => Some(if self.n < 2 { 1 } else { arith::factorial(self.n as u64) / 2 }),
            Family::WreathTower => {
                let mut order: u128 = 1;
                let mut degree: u128 = 1;
                for &a in &self.tower {
                    let m = 3u128.pow(a);
                    order = order.checked_pow(m as u32)?.checked_mul(m)?;
                    degree *= m;
                    if degree > MAX_DEGREE as u128 * 10 {
                        return None;
                    }
                }
                Some(order)
            }
            f if f.is_linear_type() => {
                let (n, q, eps) = (self.n, self.q as i128, self.effective_eps() as i128);
                let mut gl: i128 = q.checked_pow(n * (n.saturating_sub(1)) / 2)?;
                for i in 1..=n {
                    let qi = q.checked_pow(i)?;
                    gl = gl.checked_mul(qi - eps.pow(i))?;
                }
                let gl = gl as u128;
                let qe = (q - eps) as u128;
                Some(match f {
                    Family::Gl | Family::Gu => gl,
                    Family::Sl | Family::Su | Family::Pgl | Family::Pgu => gl / qe,
                    _ => gl / qe / arith::gcd(n as u64, qe as u64) as u128,
                })
            }
            Family::Sporadic => match self.label.as_deref() {
                Some("M11") => Some(7920),
                Some("M12") => Some(95040),
                _ => None,
            },
            _ => None,
        }
    }
}

const M11_GENS: &str = include_str!("../../../data/m11.gens");
const M12_GENS: &str = include_str!("../../../data/m12.gens");

/// Bundled generator files, by label.
pub fn bundled_generators(label: &str) -> Option<&'static str> {
    match label {
        "M11" => Some(M11_GENS),
        "M12" => Some(M12_GENS),
        _ => None,
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A small finite field with table arithmetic on integer encodings.
#[derive(Clone, Debug)]
pub struct SmallField {
    ctx: Arc<FieldCtx>,
    s: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl SmallField {
    pub fn new(q: u64) -> Result<SmallField, ZooError> {
        let (p, k) = arith::prime_power(q).ok_or_else(|| ZooError::Invalid(format!("{q} is not a prime power")))?;
        if q as u128 > MAX_FIELD {
            return Err(ZooError::FieldTooLarge(q as u128));
        }
        let ctx = FieldCtx::new(p, k)?;
        let s = q as usize;
        let p = p as usize;
        let digits = |mut x: usize| {
            let mut d = vec![0usize; k as usize];
            for c in d.iter_mut() {
                *c = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * p + c);
        let mut add = vec![0u16; s * s];
        let mut neg = vec![0u16; s];
        for a in 0..s {
            let da = digits(a);
            neg[a] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u16;
            for b in 0..s {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * s + b] = undigits(&sum) as u16;
            }
        }
        let gamma = ctx.primitive_element();
        let mut exp = vec![0u16; s - 1];
        let mut log = vec![0u32; s];
        let mut x = ctx.one();
        for (i, e) in exp.iter_mut().enumerate() {
            let idx = x.index() as usize;
            *e = idx as u16;
            log[idx] = i as u32;
            x = &x * &gamma;
        }
        Ok(SmallField { ctx, s, add, neg, exp, log })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.s + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % (self.s - 1)]
        }
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        self.exp[(self.s - 1 - self.log[a as usize] as usize) % (self.s - 1)]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        self.exp[((self.log[a as usize] as u128 * e as u128) % (self.s as u128 - 1)) as usize]
    }

    /// `γ^i` for the least primitive element `γ`.
    pub fn gamma_pow(&self, i: u64) -> u16 {
        self.exp[(i % (self.s as u64 - 1)) as usize]
    }

    pub fn from_int(&self, v: i64) -> u16 {
        self.ctx.from_int(v).index() as u16
    }
}

/// Square matrix over a [`SmallField`], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub dim: usize,
    pub entries: Vec<u16>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Matrix {
        let mut entries = vec![0u16; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Matrix { dim, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &Matrix, f: &SmallField) -> Matrix {
        let d = self.dim;
        let mut out = vec![0u16; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let t = f.mul(a, other.get(k, j));
                    out[i * d + j] = f.add(out[i * d + j], t);
                }
            }
        }
        Matrix { dim: d, entries: out }
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.dim)
    }

    /// Block-diagonal embedding of `self` at rows/columns `offset..offset+dim`.
    pub fn embed(&self, dim: usize, offset: usize) -> Matrix {
        let mut m = Matrix::identity(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(offset + i, offset + j, self.get(i, j));
            }
        }
        m
    }

    /// Permutation matrix with `e_i ↦ e_{π(i)}` for coordinates.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let d = perm.len();
        let mut m = Matrix { dim: d, entries: vec![0; d * d] };
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn diagonal(diag: &[u16]) -> Matrix {
        let mut m = Matrix::identity(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn pow(&self, mut e: u64, f: &SmallField) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        acc
    }
}

/// A matrix group over `F_q` (linear) or `F_{q^2}` (unitary, Hermitian form the identity).
#[derive(Clone, Debug)]
pub struct MatGroup {
    pub field: SmallField,
    pub dim: usize,
    pub q: u64,
    pub eps: i8,
    pub generators: Vec<Matrix>,
}

impl MatGroup {
    /// `M M̄ᵀ = I` for every generator, checked with field-element arithmetic.
    pub fn preserves_hermitian_form(&self) -> bool {
        let ctx = self.field.ctx();
        let el = |x: u16| ctx.from_index(x as u128);
        self.generators.iter().all(|m| {
            (0..self.dim).all(|i| {
                (0..self.dim).all(|j| {
                    let mut acc = ctx.zero();
                    for k in 0..self.dim {
                        let bar = ctx.frobenius(&el(m.get(j, k)), self.q).expect("F_{q^2}");
                        acc = &acc + &(&el(m.get(i, k)) * &bar);
                    }
                    if i == j {
                        acc.is_one()
                    } else {
                        acc.is_zero()
                    }
                })
            })
        })
    }
}

/// Right action of matrices on nonzero row vectors or on projective points.
struct MatAction {
    field: SmallField,
    dim: usize,
    projective: bool,
    points: Vec<Vec<u16>>,
    lookup: Vec<u32>,
}

impl MatAction {
    fn new(field: SmallField, dim: usize, projective: bool) -> Result<MatAction, ZooError> {
        let s = field.size() as u128;
        let total = s.pow(dim as u32);
        let degree = if projective { (total - 1) / (s - 1) } else { total - 1 };
        if degree > MAX_DEGREE as u128 {
            return Err(ZooError::DegreeTooLarge { degree, limit: MAX_DEGREE });
        }
        let mut points = Vec::with_capacity(degree as usize);
        let mut lookup = vec![u32::MAX; total as usize];
        for code in 1..total as usize {
            let v = Self::decode(code, dim, s as usize);
            if projective && v.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            lookup[code] = points.len() as u32;
            points.push(v);
        }
        Ok(MatAction {
            field,
            dim,
            projective,
            points,
            lookup,
        })
    }

    fn decode(mut code: usize, dim: usize, s: usize) -> Vec<u16> {
        let mut v = vec![0u16; dim];
        for c in v.iter_mut().rev() {
            *c = (code % s) as u16;
            code /= s;
        }
        v
    }

    fn encode(&self, v: &[u16]) -> usize {
        let s = self.field.size();
        v.iter().fold(0usize, |acc, &c| acc * s + c as usize)
    }

    fn degree(&self) -> usize {
        self.points.len()
    }

    fn perm_of(&self, m: &Matrix) -> Perm {
        let f = &self.field;
        let d = self.dim;
        let images: Vec<usize> = self
            .points
            .iter()
            .map(|v| {
                let mut w = vec![0u16; d];
                for (i, &vi) in v.iter().enumerate() {
                    if vi == 0 {
                        continue;
                    }
                    for (j, wj) in w.iter_mut().enumerate() {
                        *wj = f.add(*wj, f.mul(vi, m.get(i, j)));
                    }
                }
                if self.projective {
                    let lead = *w.iter().find(|&&c| c != 0).expect("invertible");
                    let li = f.inv(lead);
                    w.iter_mut().for_each(|c| *c = f.mul(*c, li));
                }
                self.lookup[self.encode(&w)] as usize
            })
            .collect();
        Perm::from_images(&images).expect("invertible matrices permute points")
    }
}

/// Linear-type shape of a spec: special (det 1) and projective flags.
fn linear_shape(family: Family) -> (bool, bool) {
    match family {
        Family::Gl | Family::Gu => (false, false),
        Family::Sl | Family::Su => (true, false),
        Family::Pgl | Family::Pgu => (false, true),
        _ => (true, true),
    }
}

fn check_q(spec: &GroupSpec) -> Result<(u64, u32), ZooError> {
    let (p, k) = arith::prime_power(spec.q)
        .ok_or_else(|| ZooError::Invalid(format!("q = {} is not a prime power", spec.q)))?;
    Ok((p, k))
}

/// Matrix field: `F_q` for linear, `F_{q^2}` for unitary.
fn matrix_field(spec: &GroupSpec) -> Result<SmallField, ZooError> {
    check_q(spec)?;
    let s = if spec.effective_eps() == -1 {
        (spec.q as u128).pow(2)
    } else {
        spec.q as u128
    };
    if s > MAX_FIELD {
        return Err(ZooError::FieldTooLarge(s));
    }
    SmallField::new(s as u64)
}

/// Cyclic coordinate shift with a sign making the determinant 1.
fn signed_cycle(n: usize, f: &SmallField) -> Matrix {
    let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut m = Matrix::permutation(&perm);
    if n % 2 == 0 {
        m.set(n - 1, 0, f.neg(1));
    }
    m
}

/// An `F_p`-basis of `F_q` inside `F_s`, as encodings.
fn prime_field_basis(f: &SmallField, q: u64) -> Vec<u16> {
    let (p, k) = arith::prime_power(q).expect("prime power");
    let s = f.size() as u64;
    // F_q is the subfield of (q-1)-th roots; a generator power spans it
    let g = f.gamma_pow((s - 1) / (q - 1));
    let _ = p;
    (0..k).map(|i| f.pow(g, i as u64)).collect()
}

fn norm(f: &SmallField, x: u16, q: u64) -> u16 {
    f.pow(x, q + 1)
}

fn conj(f: &SmallField, x: u16, q: u64) -> u16 {
    f.pow(x, q)
}

/// Elements `[[a, b], [-b̄, ā]]` of `SU_2(q)` in lexicographic order of `(a, b)`.
fn su2_elements(f: &SmallField, q: u64) -> impl Iterator<Item = Matrix> + '_ {
    let s = f.size() as u16;
    (0..s).flat_map(move |a| {
        (0..s).filter_map(move |b| {
            if f.add(norm(f, a, q), norm(f, b, q)) != 1 {
                return None;
            }
            Some(Matrix {
                dim: 2,
                entries: vec![a, b, f.neg(conj(f, b, q)), conj(f, a, q)],
            })
        })
    })
}

/// Candidate elements of `SU_n(q)`: unitary transvections `I + a·v̄ᵀv` for isotropic
/// `v` and `a + ā = 0`, then diagonal and signed cyclic elements.
fn su_candidates(f: &SmallField, q: u64, n: usize) -> Vec<Matrix> {
    let s = f.size();
    let trace_zero: Vec<u16> = (1..s as u16).filter(|&a| f.add(a, conj(f, a, q)) == 0).collect();
    let mut out = Vec::new();
    let total = s.pow(n as u32);
    for code in 1..total {
        let v = MatAction::decode(code, n, s);
        if v.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let len = v.iter().fold(0u16, |acc, &c| f.add(acc, norm(f, c, q)));
        if len != 0 {
            continue;
        }
        for &a in &trace_zero {
            let mut m = Matrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    let t = f.mul(a, f.mul(conj(f, v[i], q), v[j]));
                    m.set(i, j, f.add(m.get(i, j), t));
                }
            }
            out.push(m);
        }
    }
    let u = f.gamma_pow(q - 1);
    // R_v(u)·diag(u^-1, 1, ...) for non-isotropic v, R_v the quasi-reflection of determinant u
    let mut fix = vec![1u16; n];
    fix[0] = f.inv(u);
    let fix = Matrix::diagonal(&fix);
    for code in 1..total {
        let v = MatAction::decode(code, n, s);
        if v.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let len = v.iter().fold(0u16, |acc, &c| f.add(acc, norm(f, c, q)));
        if len == 0 {
            continue;
        }
        let coef = f.mul(f.add(u, f.neg(1)), f.inv(len));
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let t = f.mul(coef, f.mul(conj(f, v[i], q), v[j]));
                m.set(i, j, f.add(m.get(i, j), t));
            }
        }
        out.push(m.mul(&fix, f));
    }
    for i in 0..n.saturating_sub(1) {
        let mut d = vec![1u16; n];
        d[i] = u;
        d[i + 1] = f.inv(u);
        out.push(Matrix::diagonal(&d));
    }
    for m in su2_elements(f, q) {
        out.push(m.embed(n, 0));
    }
    if n > 2 {
        out.push(signed_cycle(n, f));
    }
    out
}

/// Generators of `SU_n(q)` chosen greedily from [`su_candidates`], judged on projective points.
fn su_generators(f: &SmallField, q: u64, n: usize) -> Result<Vec<Matrix>, ZooError> {
    let target = GroupSpec::lie(Family::Psu, n as u32, q, -1)
        .expected_order()
        .ok_or(ZooError::FieldTooLarge(q as u128))?;
    let action = MatAction::new(f.clone(), n, true)?;
    let mut gens = Vec::new();
    let mut group = PermGroup::trivial(action.degree());
    for m in su_candidates(f, q, n) {
        let p = action.perm_of(&m);
        if group.contains(&p) {
            continue;
        }
        gens.push(m);
        let perms = gens.iter().map(|g| action.perm_of(g)).collect();
        group = PermGroup::new(action.degree(), perms)?;
        if group.order() == target {
            return Ok(gens);
        }
    }
    Err(ZooError::OrderMismatch {
        expected: target,
        found: group.order(),
    })
}

/// Matrix generators for the linear-type family of `spec`.
pub fn matrix_group(spec: &GroupSpec) -> Result<MatGroup, ZooError> {
    if !spec.family.is_linear_type() {
        return Err(ZooError::Unsupported(spec.name()));
    }
    spec.validate()?;
    let f = matrix_field(spec)?;
    let n = spec.n as usize;
    let q = spec.q;
    let eps = spec.effective_eps();
    let (special, _) = linear_shape(spec.family);
    let mut gens = Vec::new();
    if n >= 2 {
        if eps == 1 {
            for t in prime_field_basis(&f, q) {
                let mut up = Matrix::identity(n);
                up.set(0, 1, t);
                let mut down = Matrix::identity(n);
                down.set(1, 0, t);
                gens.push(up);
                gens.push(down);
            }
        } else {
            gens.extend(su_generators(&f, q, n)?);
        }
        if n > 2 && eps == 1 {
            gens.push(signed_cycle(n, &f));
        }
    }
    if !special {
        let det_gen = if eps == 1 {
            f.gamma_pow(1)
        } else {
            // generator of the norm-1 subgroup, order q+1
            f.gamma_pow(q - 1)
        };
        let mut d = vec![1u16; n];
        d[0] = det_gen;
        gens.push(Matrix::diagonal(&d));
    }
    Ok(MatGroup {
        field: f,
        dim: n,
        q,
        eps,
        generators: gens,
    })
}

fn linear_action(spec: &GroupSpec) -> Result<(MatGroup, MatAction), ZooError> {
    let mg = matrix_group(spec)?;
    let (_, projective) = linear_shape(spec.family);
    let action = MatAction::new(mg.field.clone(), mg.dim, projective)?;
    Ok((mg, action))
}

fn sym_generators(n: usize) -> Vec<Perm> {
    if n < 2 {
        return Vec::new();
    }
    let c: Vec<usize> = (0..n).collect();
    vec![
        Perm::from_cycles(n, &[&c]).expect("cycle"),
        Perm::from_cycles(n, &[&[0, 1]]).expect("transposition"),
    ]
}

fn alt_generators(n: usize) -> Vec<Perm> {
    if n < 3 {
        return Vec::new();
    }
    // (0,1,2) and the (n-1)- or n-cycle on the rest, whichever is even
    let three = Perm::from_cycles(n, &[&[0, 1, 2]]).expect("3-cycle");
    let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
    vec![three, Perm::from_cycles(n, &[&long]).expect("cycle")]
}

/// Regular cyclic group of order `m`.
pub fn cyclic(m: usize) -> PermGroup {
    let c: Vec<usize> = (0..m).collect();
    let gens = if m > 1 {
        vec![Perm::from_cycles(m, &[&c]).expect("cycle")]
    } else {
        Vec::new()
    };
    PermGroup::new(m, gens).expect("valid")
}

/// `A ≀ B` in the imprimitive action: `B` (of degree `k`) permutes `k` copies of `A`.
pub fn wreath_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup, ZooError> {
    let d = a.degree();
    let k = b.degree();
    let degree = d * k;
    if degree > MAX_DEGREE {
        return Err(ZooError::DegreeTooLarge {
            degree: degree as u128,
            limit: MAX_DEGREE,
        });
    }
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut im: Vec<usize> = (0..degree).collect();
        for (i, x) in im.iter_mut().enumerate().take(d) {
            *x = g.image(i);
        }
        gens.push(Perm::from_images(&im)?);
    }
    for h in b.generators() {
        let im: Vec<usize> = (0..degree).map(|x| h.image(x / d) * d + x % d).collect();
        gens.push(Perm::from_images(&im)?);
    }
    Ok(PermGroup::new(degree, gens)?)
}

/// `A × B` on the disjoint union of the two domains.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> PermGroup {
    let (da, db) = (a.degree(), b.degree());
    let n = da + db;
    let mut gens = Vec::new();
    for g in a.generators() {
        let im: Vec<usize> = (0..n).map(|x| if x < da { g.image(x) } else { x }).collect();
        gens.push(Perm::from_images(&im).expect("valid"));
    }
    for g in b.generators() {
        let im: Vec<usize> = (0..n).map(|x| if x < da { x } else { da + g.image(x - da) }).collect();
        gens.push(Perm::from_images(&im).expect("valid"));
    }
    PermGroup::new(n, gens).expect("valid")
}

/// `Z/m ⋊ ⟨x ↦ r·x⟩` acting on `Z/m`.
pub fn affine_cyclic(m: usize, r: usize) -> Result<PermGroup, ZooError> {
    if arith::gcd(r as u64, m as u64) != 1 {
        return Err(ZooError::Invalid(format!("{r} is not a unit modulo {m}")));
    }
    let shift: Vec<usize> = (0..m).map(|x| (x + 1) % m).collect();
    let mult: Vec<usize> = (0..m).map(|x| x * r % m).collect();
    Ok(PermGroup::new(m, vec![Perm::from_images(&shift)?, Perm::from_images(&mult)?])?)
}

fn wreath_tower_group(tower: &[u32]) -> Result<PermGroup, ZooError> {
    let mut g = cyclic(3usize.pow(tower[0]));
    for &a in &tower[1..] {
        g = wreath_product(&g, &cyclic(3usize.pow(a)))?;
    }
    Ok(g)
}

/// Generators of a Sylow 3-subgroup of `S_n` acting on `0..n`: one tower
/// `C_3 ≀ … ≀ C_3` per base-3 digit, laid out on consecutive blocks.
pub fn sym_sylow_generators(n: usize) -> Vec<Perm> {
    let mut gens = Vec::new();
    let mut offset = 0;
    for (i, &a) in arith::digits(n as u64, 3).iter().enumerate() {
        let size = 3usize.pow(i as u32);
        for _ in 0..a {
            for level in 1..=i {
                // cycle the three sub-blocks of size 3^(level-1) inside the first block of size 3^level
                let sub = 3usize.pow(level as u32 - 1);
                let mut im: Vec<usize> = (0..n).collect();
                for x in 0..3 * sub {
                    im[offset + x] = offset + (x + sub) % (3 * sub);
                }
                gens.push(Perm::from_images(&im).expect("valid"));
            }
            offset += size;
        }
    }
    gens
}

/// Reads a generator file: `name <label>`, `degree <n>`, then one line of images per generator.
pub fn parse_generators(text: &str) -> Result<(String, PermGroup), ZooError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let bad = |m: &str| ZooError::Malformed(m.to_string());
    let name = lines
        .next()
        .and_then(|l| l.strip_prefix("name"))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| bad("first line must be `name <label>`"))?;
    let degree: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("degree"))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad("second line must be `degree <n>`"))?;
    if degree > MAX_DEGREE {
        return Err(ZooError::DegreeTooLarge {
            degree: degree as u128,
            limit: MAX_DEGREE,
        });
    }
    let mut gens = Vec::new();
    for (k, l) in lines.enumerate() {
        let images: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(&format!("generator {} has a non-integer entry", k + 1)))?;
        if images.len() != degree {
            return Err(bad(&format!("generator {} has {} images, expected {degree}", k + 1, images.len())));
        }
        gens.push(Perm::from_images(&images).map_err(|_| bad(&format!("generator {} is not a bijection", k + 1)))?);
    }
    Ok((name, PermGroup::new(degree, gens)?))
}

pub fn load_external(path: impl AsRef<Path>) -> Result<(String, PermGroup), ZooError> {
    let text = std::fs::read_to_string(path)?;
    parse_generators(&text)
}

/// Faithful permutation representation of the group described by `spec`.
pub fn build(spec: &GroupSpec) -> Result<PermGroup, ZooError> {
    spec.validate()?;
    let group = match spec.family {
        Family::Sym | Family::Alt => {
            let n = spec.n as usize;
            if n > MAX_DEGREE {
                return Err(ZooError::DegreeTooLarge {
                    degree: n as u128,
                    limit: MAX_DEGREE,
                });
            }
            let gens = if spec.family == Family::Sym { sym_generators(n) } else { alt_generators(n) };
            PermGroup::new(n, gens)?
        }
        Family::WreathTower => {
            if spec.expected_order().is_none() {
                return Err(ZooError::OrderTooLarge);
            }
            wreath_tower_group(&spec.tower)?
        }
        Family::External => load_external(spec.path.as_deref().expect("validated"))?.1,
        Family::Sporadic => {
            let label = spec.label.as_deref().expect("validated");
            let text = bundled_generators(label).ok_or_else(|| ZooError::Unsupported(spec.name()))?;
            parse_generators(text)?.1
        }
        f if f.is_linear_type() => {
            let (mg, action) = linear_action(spec)?;
            let perms = mg.generators.iter().map(|m| action.perm_of(m)).collect();
            PermGroup::new(action.degree(), perms)?
        }
        _ => return Err(ZooError::Unsupported(spec.name())),
    };
    if let Some(expected) = spec.expected_order() {
        if expected <= VERIFY_ORDER_BOUND {
            let found = group.order();
            if found != expected {
                return Err(ZooError::OrderMismatch { expected, found });
            }
        }
    }
    Ok(group)
}

/// Order of the 3-part of `|G|`, from the formula when available.
fn sylow_target(spec: &GroupSpec, g: &PermGroup) -> u128 {
    arith::three_part(spec.expected_order().unwrap_or_else(|| g.order()))
}

/// A Sylow 3-subgroup of `g = build(spec)`, in the same permutation representation.
pub fn syl3(spec: &GroupSpec, g: &PermGroup) -> Result<PermGroup, ZooError> {
    syl3_seeded(spec, g, 0)
}

pub fn syl3_seeded(spec: &GroupSpec, g: &PermGroup, seed: u64) -> Result<PermGroup, ZooError> {
    let target = sylow_target(spec, g);
    if target == 1 {
        return Ok(PermGroup::trivial(g.degree()));
    }
    let structural = match spec.family {
        Family::Sym | Family::Alt => Some(PermGroup::new(g.degree(), sym_sylow_generators(spec.n as usize))?),
        Family::WreathTower => Some(g.clone()),
        f if f.is_linear_type() && spec.q % 3 != 0 => Some(linear_sylow(spec)?),
        _ => None,
    };
    let p = match structural {
        Some(p) => p,
        None => return random_sylow(g, target, seed, SYLOW_BUDGET),
    };
    let found = p.order();
    if found != target {
        return Err(ZooError::OrderMismatch { expected: target, found });
    }
    Ok(p)
}

/// Structural Sylow 3-subgroup of a linear or unitary group with `3 ∤ q`.
fn linear_sylow(spec: &GroupSpec) -> Result<PermGroup, ZooError> {
    let (_, action) = linear_action(spec)?;
    let f = &action.field;
    let n = spec.n as usize;
    let q = spec.q;
    let eps = spec.effective_eps() as i64;
    let (special, _) = linear_shape(spec.family);
    let s = f.size() as u64;
    let mut mats = Vec::new();
    let qe = (q as i64 - eps) as u64;
    if qe % 3 == 0 {
        let a = arith::valuation(qe as u128, 3);
        // norm-1 when unitary, since 3^a | q + 1
        let t = f.gamma_pow((s - 1) / 3u64.pow(a));
        if special {
            for i in 0..n.saturating_sub(1) {
                let mut d = vec![1u16; n];
                d[i] = t;
                d[i + 1] = f.inv(t);
                mats.push(Matrix::diagonal(&d));
            }
        } else {
            for i in 0..n {
                let mut d = vec![1u16; n];
                d[i] = t;
                mats.push(Matrix::diagonal(&d));
            }
        }
        for w in sym_sylow_generators(n) {
            mats.push(Matrix::permutation(&w.images()));
        }
    } else {
        let m = n / 2;
        if m > 0 {
            let b = arith::valuation((q as u128).pow(2) - 1, 3);
            let block = three_element_2x2(f, q, eps, 3u64.pow(b))?;
            for i in 0..m {
                mats.push(block.embed(n, 2 * i));
            }
            for w in sym_sylow_generators(m) {
                let mut perm: Vec<usize> = (0..n).collect();
                for i in 0..m {
                    perm[2 * i] = 2 * w.image(i);
                    perm[2 * i + 1] = 2 * w.image(i) + 1;
                }
                mats.push(Matrix::permutation(&perm));
            }
        }
    }
    let perms = mats.iter().map(|m| action.perm_of(m)).collect();
    Ok(PermGroup::new(action.degree(), perms)?)
}

/// Least (in enumeration order) element of `SL_2(q)` or `SU_2(q)` of order exactly `order`.
fn three_element_2x2(f: &SmallField, q: u64, eps: i64, order: u64) -> Result<Matrix, ZooError> {
    let has_order = |m: &Matrix| m.pow(order, f).is_identity() && !m.pow(order / 3, f).is_identity();
    let found = if eps == 1 {
        let s = f.size() as u16;
        let mut hit = None;
        'outer: for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    for d in 0..s {
                        let det = f.add(f.mul(a, d), f.neg(f.mul(b, c)));
                        if det != 1 {
                            continue;
                        }
                        let m = Matrix { dim: 2, entries: vec![a, b, c, d] };
                        if has_order(&m) {
                            hit = Some(m);
                            break 'outer;
                        }
                    }
                }
            }
        }
        hit
    } else {
        su2_elements(f, q).find(|m| has_order(m))
    };
    found.ok_or(ZooError::OrderMismatch {
        expected: order as u128,
        found: 1,
    })
}

/// Randomised ascent: adjoin 3-parts of random elements that normalise the current subgroup.
pub fn random_sylow(g: &PermGroup, target: u128, seed: u64, budget: u32) -> Result<PermGroup, ZooError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = PermGroup::trivial(g.degree());
    let mut gens: Vec<Perm> = Vec::new();
    for _ in 0..budget {
        if h.order() == target {
            return Ok(h);
        }
        let x = g.random_element(&mut rng);
        let o = x.order();
        let x = x.pow(o / arith::three_part(o));
        if x.is_identity() || h.contains(&x) {
            continue;
        }
        if gens.iter().all(|y| h.contains(&y.conj(&x))) {
            gens.push(x);
            h = PermGroup::new(g.degree(), gens.clone())?;
        }
    }
    if h.order() == target {
        return Ok(h);
    }
    Err(ZooError::SylowBudget {
        reached: h.order(),
        target,
        budget,
    })
}
