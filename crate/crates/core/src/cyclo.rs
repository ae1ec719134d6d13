//! Exact arithmetic in `Q(ζ_N)`.
//!
//! Values are stored in the tensor basis `∏_p {ζ_{p^e}^i : 0 <= i < φ(p^e)}`,
//! written as exponents of `ζ_N`. An exponent `j` is canonical when every CRT
//! component `j_p = j·(N/p^e)^{-1} mod p^e` is below `φ(p^e)`. This basis is an
//! integral basis, so algebraic integers are exactly the values with integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::finfield::{FFElem, FieldCtx, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("conductor {left} does not match {right}")]
    ConductorMismatch { left: u64, right: u64 },
    #[error("exponent {e} is not invertible modulo {n}")]
    NotInvertible { e: u64, n: u64 },
    #[error("value is not an algebraic integer")]
    NotIntegral,
    #[error("{l} is not congruent to 1 modulo {n}")]
    BadPrime { l: u64, n: u64 },
    #[error("{0} is not a primitive root of the required order")]
    BadRoot(u64),
    #[error("square root of {z} does not lie in Q(zeta_{n})")]
    NoSquareRoot { z: i64, n: u64 },
    #[error("conductor {0} is not a multiple of {1}")]
    NotMultiple(u64, u64),
    #[error("malformed value: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Per-prime data of a conductor.
struct PrimePart {
    p: u64,
    pe: u64,
    /// `p^(e-1)`
    step: u64,
    phi: u64,
    cofactor: u64,
    cofactor_inv: u64,
}

fn prime_parts(n: u64) -> Vec<PrimePart> {
    arith::factor(n as u128)
        .into_iter()
        .map(|(p, e)| {
            let p = p as u64;
            let pe = p.pow(e);
            let step = pe / p;
            let cofactor = n / pe;
            PrimePart {
                p,
                pe,
                step,
                phi: pe - step,
                cofactor,
                cofactor_inv: arith::mod_inv(cofactor % pe, pe).unwrap_or(0),
            }
        })
        .collect()
}

fn canonicalize(n: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> BTreeMap<u64, BigRational> {
    let mut cur: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (j, c) in terms {
        *cur.entry(j % n).or_insert_with(BigRational::zero) += c;
    }
    for pp in prime_parts(n) {
        if pp.pe == 1 {
            continue;
        }
        let mut next: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (j, c) in cur {
            if c.is_zero() {
                continue;
            }
            let jp = (j as u128 * pp.cofactor_inv as u128 % pp.pe as u128) as u64;
            if jp < pp.phi {
                *next.entry(j).or_insert_with(BigRational::zero) += c;
            } else {
                let shift = pp.step * pp.cofactor % n;
                for s in 1..pp.p {
                    let k = (j + n - (s * shift) % n) % n;
                    *next.entry(k).or_insert_with(BigRational::zero) -= &c;
                }
            }
        }
        cur = next;
    }
    cur.retain(|_, c| !c.is_zero());
    cur
}

/// An element of `Q(ζ_N)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

impl Cyclotomic {
    pub fn zero(n: u64) -> Cyclotomic {
        assert!(n >= 1, "conductor must be positive");
        Cyclotomic {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(n: u64) -> Cyclotomic {
        Cyclotomic::from_int(n, 1)
    }

    pub fn from_int(n: u64, v: i64) -> Cyclotomic {
        Cyclotomic::from_rational(n, BigRational::from_integer(v.into()))
    }

    pub fn from_bigint(n: u64, v: BigInt) -> Cyclotomic {
        Cyclotomic::from_rational(n, BigRational::from_integer(v))
    }

    pub fn from_rational(n: u64, v: BigRational) -> Cyclotomic {
        let mut x = Cyclotomic::zero(n);
        if !v.is_zero() {
            x.coeffs.insert(0, v);
        }
        x
    }

    /// `ζ_N^j`.
    pub fn zeta(n: u64, j: i64) -> Cyclotomic {
        let j = j.rem_euclid(n as i64) as u64;
        Cyclotomic::from_terms(n, [(j, BigRational::one())])
    }

    /// `Σ c·ζ_N^j` for arbitrary (not necessarily canonical) exponents.
    pub fn from_terms(n: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Cyclotomic {
        assert!(n >= 1, "conductor must be positive");
        Cyclotomic {
            n,
            coeffs: canonicalize(n, terms),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Canonical coefficients keyed by exponent of `ζ_N`.
    pub fn coeffs(&self) -> &BTreeMap<u64, BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Least `d | N` such that the value lies in `Q(ζ_d)`, up to the `Q(ζ_d) = Q(ζ_2d)` ambiguity.
    pub fn field_conductor(&self) -> u64 {
        let g = self.coeffs.keys().fold(self.n, |g, &j| arith::gcd(g, j));
        self.n / g
    }

    /// The same value written in `Q(ζ_d)`; requires `field_conductor() | d | N`.
    pub fn restrict(&self, d: u64) -> Result<Cyclotomic, CycloError> {
        if d == 0 || self.n % d != 0 || d % self.field_conductor() != 0 {
            return Err(CycloError::NotMultiple(self.n, d));
        }
        let f = self.n / d;
        Ok(Cyclotomic {
            n: d,
            coeffs: self.coeffs.iter().map(|(j, c)| (j / f, c.clone())).collect(),
        })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    fn same(&self, other: &Cyclotomic) -> Result<(), CycloError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(CycloError::ConductorMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn checked_add(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.same(other)?;
        let mut coeffs = self.coeffs.clone();
        for (j, c) in &other.coeffs {
            *coeffs.entry(*j).or_insert_with(BigRational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Cyclotomic { n: self.n, coeffs })
    }

    pub fn checked_sub(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.same(other)?;
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(&r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(&r));
        }
        let n = self.n;
        let mut raw: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                *raw.entry((a + b) % n).or_insert_with(BigRational::zero) += x * y;
            }
        }
        Ok(Cyclotomic::from_terms(n, raw))
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, -c)).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero(self.n);
        }
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c * r)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Cyclotomic {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(self.n - 1)
    }

    /// Image under `ζ_N ↦ ζ_N^e`; `e` is assumed coprime to `N`.
    fn galois(&self, e: u64) -> Cyclotomic {
        if e % self.n == 1 % self.n || self.coeffs.keys().all(|&j| j == 0) {
            return self.clone();
        }
        let n = self.n;
        Cyclotomic::from_terms(
            n,
            self.coeffs
                .iter()
                .map(|(j, c)| ((*j as u128 * e as u128 % n as u128) as u64, c.clone())),
        )
    }

    /// The same value viewed in `Q(ζ_M)` for a multiple `M` of `N`.
    pub fn embed(&self, m: u64) -> Result<Cyclotomic, CycloError> {
        if m % self.n != 0 {
            return Err(CycloError::NotMultiple(m, self.n));
        }
        let f = m / self.n;
        Ok(Cyclotomic::from_terms(
            m,
            self.coeffs.iter().map(|(j, c)| (j * f, c.clone())),
        ))
    }

    /// Quadratic Gauss sum `Σ_a (a/p) ζ_p^a` for an odd prime `p | N`; its square is `(-1)^((p-1)/2) p`.
    pub fn gauss_sum(n: u64, p: u64) -> Cyclotomic {
        assert!(p % 2 == 1 && arith::is_prime(p) && n % p == 0);
        let f = n / p;
        Cyclotomic::from_terms(
            n,
            (1..p).map(|a| (a * f, BigRational::from_integer(arith::jacobi(a as i64, p).into()))),
        )
    }

    /// A square root of the integer `z` in `Q(ζ_N)`, built from Gauss sums.
    pub fn sqrt_int(n: u64, z: i64) -> Result<Cyclotomic, CycloError> {
        let none = CycloError::NoSquareRoot { z, n };
        if z == 0 {
            return Ok(Cyclotomic::zero(n));
        }
        let mut s = 1i64;
        let mut m = z.signum();
        for (p, e) in arith::factor(z.unsigned_abs() as u128) {
            let p = p as i64;
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= p;
            }
        }
        // root of prod p* over odd primes, then fix the remaining unit/2 part
        let mut root = Cyclotomic::one(n);
        let mut pstar_prod = 1i64;
        for (p, _) in arith::factor(m.unsigned_abs() as u128) {
            let p = p as u64;
            if p == 2 {
                continue;
            }
            if n % p != 0 {
                return Err(none);
            }
            root = &root * &Cyclotomic::gauss_sum(n, p);
            pstar_prod *= if p % 4 == 1 { p as i64 } else { -(p as i64) };
        }
        let rest = m / pstar_prod;
        let extra = match rest {
            1 => Cyclotomic::one(n),
            -1 if n % 4 == 0 => Cyclotomic::zeta(n, (n / 4) as i64),
            2 if n % 8 == 0 => &Cyclotomic::zeta(n, (n / 8) as i64) + &Cyclotomic::zeta(n, -((n / 8) as i64)),
            -2 if n % 8 == 0 => &Cyclotomic::zeta(n, (n / 8) as i64) + &Cyclotomic::zeta(n, (3 * n / 8) as i64),
            _ => return Err(none),
        };
        Ok((&root * &extra).scale_int(s))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let bad = || CycloError::Parse(s.to_string());
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    #[serde(rename = "N")]
    n: u64,
    coeffs: BTreeMap<u64, String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloRepr {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, rational_to_string(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.n == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(repr.coeffs.len());
        for (j, c) in repr.coeffs {
            terms.push((j, parse_rational(&c).map_err(serde::de::Error::custom)?));
        }
        Ok(Cyclotomic::from_terms(repr.n, terms))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a_str = rational_to_string(&a);
            match (*j, a.is_one()) {
                (0, _) => write!(f, "{a_str}")?,
                (j, true) => write!(f, "z{}^{j}", self.n)?,
                (j, false) => write!(f, "{a_str}*z{}^{j}", self.n)?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).expect("conductor mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

/// The automorphism `ζ_N ↦ ζ_N^e` of `Q(ζ_N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisMap {
    n: u64,
    e: u64,
}

impl GaloisMap {
    pub fn new(n: u64, e: i64) -> Result<GaloisMap, CycloError> {
        let e = e.rem_euclid(n as i64) as u64;
        if arith::gcd(e, n) != 1 {
            return Err(CycloError::NotInvertible { e, n });
        }
        Ok(GaloisMap { n, e: e % n })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn is_identity(&self) -> bool {
        self.e == 1 % self.n
    }

    pub fn compose(&self, other: &GaloisMap) -> Result<GaloisMap, CycloError> {
        if self.n != other.n {
            return Err(CycloError::ConductorMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(GaloisMap {
            n: self.n,
            e: (self.e as u128 * other.e as u128 % self.n as u128) as u64,
        })
    }

    pub fn pow(&self, k: u64) -> GaloisMap {
        GaloisMap {
            n: self.n,
            e: arith::mod_pow(self.e, k, self.n),
        }
    }

    pub fn inverse(&self) -> GaloisMap {
        GaloisMap {
            n: self.n,
            e: arith::mod_inv(self.e, self.n).unwrap_or(0),
        }
    }

    /// Order as an automorphism of `Q(ζ_N)`.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.e % self.n;
        while x != 1 % self.n {
            x = (x as u128 * self.e as u128 % self.n as u128) as u64;
            k += 1;
        }
        k
    }

    pub fn apply(&self, x: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        if x.n != self.n {
            return Err(CycloError::ConductorMismatch {
                left: self.n,
                right: x.n,
            });
        }
        Ok(x.galois(self.e))
    }
}

/// The automorphism fixing 3′-roots of unity and raising 3-power roots to the fourth power.
pub fn sigma(n: u64) -> GaloisMap {
    assert!(n >= 1);
    let a = arith::valuation(n as u128, 3);
    if a <= 1 {
        return GaloisMap { n, e: 1 % n };
    }
    let p3 = 3u64.pow(a);
    let rest = n / p3;
    let t = 3 * arith::mod_inv(rest % p3, p3).expect("coprime") % p3;
    GaloisMap {
        n,
        e: (1 + rest as u128 * t as u128) as u64 % n,
    }
}

pub fn galois_apply(m: &GaloisMap, x: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
    m.apply(x)
}

/// Reduction `Z[ζ_N] → F_{3^m}` modulo a prime over 3.
#[derive(Clone, Debug)]
pub struct Mod3Reducer {
    n: u64,
    field: Arc<FieldCtx>,
    root: FFElem,
}

impl Mod3Reducer {
    /// Sends `ζ_N` to the canonical primitive `N′`-th root: `y^((3^m-1)/N′)` for the
    /// least `y` (by integer encoding) for which that power has exact order `N′`.
    pub fn new(n: u64) -> Result<Mod3Reducer, CycloError> {
        let n3 = n / 3u64.pow(arith::valuation(n as u128, 3));
        let m = if n3 == 1 {
            1
        } else {
            let mut m = 1u32;
            let mut x = 3 % n3;
            while x != 1 {
                x = x * 3 % n3;
                m += 1;
            }
            m
        };
        let field = FieldCtx::new(3, m)?;
        let cof = (field.size() - 1) / n3 as u128;
        let divs = arith::prime_divisors(n3);
        let root = (1..field.size())
            .map(|i| field.from_index(i).pow(cof))
            .find(|z| divs.iter().all(|&r| !z.pow((n3 / r) as u128).is_one()))
            .expect("F_{3^m}^* is cyclic of order divisible by N′");
        Ok(Mod3Reducer { n, field, root })
    }

    /// Same prime field, with `ζ_N` sent to `root^u`, `gcd(u, N′) = 1`.
    pub fn with_root_power(&self, u: u64) -> Result<Mod3Reducer, CycloError> {
        let n3 = self.n / 3u64.pow(arith::valuation(self.n as u128, 3));
        if arith::gcd(u, n3) != 1 {
            return Err(CycloError::NotInvertible { e: u, n: n3 });
        }
        Ok(Mod3Reducer {
            n: self.n,
            field: Arc::clone(&self.field),
            root: self.root.pow(u as u128),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn root(&self) -> &FFElem {
        &self.root
    }

    pub fn reduce(&self, x: &Cyclotomic) -> Result<FFElem, CycloError> {
        if x.n != self.n {
            return Err(CycloError::ConductorMismatch {
                left: self.n,
                right: x.n,
            });
        }
        let mut acc = self.field.zero();
        for (j, c) in &x.coeffs {
            if !c.is_integer() {
                return Err(CycloError::NotIntegral);
            }
            let r = (c.to_integer() % BigInt::from(3)).to_i64().expect("small");
            if r == 0 {
                continue;
            }
            let term = self.root.pow(*j as u128);
            acc = &acc + &(&term * &self.field.from_int(r));
        }
        Ok(acc)
    }
}

pub fn reduce_mod3(x: &Cyclotomic) -> Result<FFElem, CycloError> {
    Mod3Reducer::new(x.n)?.reduce(x)
}

/// Reduction `Z[ζ_N] → F_ℓ` with `ζ_N ↦ ω`.
pub fn reduce_modl(x: &Cyclotomic, l: u64, omega: u64) -> Result<u64, CycloError> {
    let n = x.n;
    if (l - 1) % n != 0 || !arith::is_prime(l) {
        return Err(CycloError::BadPrime { l, n });
    }
    let divs = arith::prime_divisors(n);
    if arith::mod_pow(omega, n, l) != 1 || divs.iter().any(|&r| arith::mod_pow(omega, n / r, l) == 1) {
        return Err(CycloError::BadRoot(omega));
    }
    let lb = BigInt::from(l);
    let mut acc = 0u64;
    for (j, c) in &x.coeffs {
        if !c.is_integer() {
            return Err(CycloError::NotIntegral);
        }
        let r = ((c.to_integer() % &lb + &lb) % &lb).to_u64().expect("reduced");
        let t = (r as u128 * arith::mod_pow(omega, *j, l) as u128 % l as u128) as u64;
        acc = (acc + t) % l;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn restrict_inverts_embed() {
        let x = &Cyclotomic::zeta(15, 5) + &Cyclotomic::from_int(15, 2);
        let big = x.embed(45).unwrap();
        assert_eq!(big.field_conductor(), 3);
        assert_eq!(big.restrict(3).unwrap(), x.restrict(3).unwrap());
        assert_eq!(big.restrict(15).unwrap(), x);
        let r = Cyclotomic::sqrt_int(84, -7).unwrap();
        assert_eq!(r.field_conductor(), 7);
        let r7 = r.restrict(7).unwrap();
        assert_eq!(&r7 * &r7, Cyclotomic::from_int(7, -7));
        assert!(big.restrict(5).is_err());
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn arb_cyclo(n: u64) -> impl Strategy<Value = Cyclotomic> {
        proptest::collection::vec((0..n, -5i64..6, 1i64..4), 0..6).prop_map(move |terms| {
            Cyclotomic::from_terms(n, terms.into_iter().map(|(j, a, b)| (j, q(a, b))))
        })
    }

    fn arb_integral(n: u64) -> impl Strategy<Value = Cyclotomic> {
        proptest::collection::vec((0..n, -5i64..6), 0..6).prop_map(move |terms| {
            Cyclotomic::from_terms(n, terms.into_iter().map(|(j, a)| (j, q(a, 1))))
        })
    }

    #[test]
    fn vanishing_sums() {
        for n in [3u64, 4, 5, 9, 12, 36] {
            for d in (1..=n).filter(|d| n % d == 0 && *d > 1) {
                let s = Cyclotomic::from_terms(n, (0..d).map(|k| (k * (n / d), q(1, 1))));
                assert!(s.is_zero(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn zeta_power_relations() {
        let z = Cyclotomic::zeta(12, 1);
        let mut x = Cyclotomic::one(12);
        for _ in 0..12 {
            x = &x * &z;
        }
        assert_eq!(x, Cyclotomic::one(12));
        assert_eq!(&Cyclotomic::zeta(9, 4) * &Cyclotomic::zeta(9, 5), Cyclotomic::one(9));
        // basis dimension is φ(N)
        let all: std::collections::BTreeSet<u64> = (0..36)
            .flat_map(|j| Cyclotomic::zeta(36, j).coeffs().keys().copied().collect::<Vec<_>>())
            .collect();
        assert_eq!(all.len(), 12);
    }

    #[test]
    fn sigma_examples() {
        let s9 = sigma(9);
        assert_eq!(s9.exponent(), 4);
        assert_eq!(s9.apply(&Cyclotomic::zeta(9, 1)).unwrap(), Cyclotomic::zeta(9, 4));
        assert!(sigma(5).is_identity());
        assert!(sigma(3).is_identity());
        assert!(sigma(15).is_identity());
        let s = sigma(45);
        assert_eq!(s.exponent() % 9, 4);
        assert_eq!(s.exponent() % 5, 1);
        let x = &Cyclotomic::zeta(9, 1) + &Cyclotomic::zeta(9, -1);
        let mut y = x.clone();
        for _ in 0..3 {
            y = s9.apply(&y).unwrap();
        }
        assert_eq!(y, x);
        assert_ne!(s9.apply(&x).unwrap(), x);
    }

    #[test]
    fn sigma_orders() {
        for a in 2..=4u32 {
            assert_eq!(sigma(3u64.pow(a)).order(), 3u64.pow(a - 1));
        }
        assert_eq!(sigma(1).order(), 1);
    }

    #[test]
    fn galois_rejects_mismatch() {
        let m = sigma(9);
        assert!(m.apply(&Cyclotomic::zeta(5, 1)).is_err());
        assert!(GaloisMap::new(9, 3).is_err());
        let r = Cyclotomic::from_rational(9, q(3, 7));
        assert_eq!(m.apply(&r).unwrap(), r);
    }

    #[test]
    fn gauss_sums_and_roots() {
        for p in [3u64, 5, 7, 11, 13] {
            let g = Cyclotomic::gauss_sum(p * 4, p);
            let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            assert_eq!(&g * &g, Cyclotomic::from_int(p * 4, pstar));
        }
        for z in [-1i64, 2, -2, 5, -3, 12, -15, 21, 45, -7 * 9 * 5, 1] {
            let r = Cyclotomic::sqrt_int(840, z).unwrap();
            assert_eq!(&r * &r, Cyclotomic::from_int(840, z), "z={z}");
        }
        assert!(Cyclotomic::sqrt_int(5, -1).is_err());
        assert!(Cyclotomic::sqrt_int(9, 5).is_err());
    }

    #[test]
    fn embedding() {
        let x = &Cyclotomic::zeta(3, 1) + &Cyclotomic::from_int(3, 2);
        let y = x.embed(12).unwrap();
        assert_eq!(y, &Cyclotomic::zeta(12, 4) + &Cyclotomic::from_int(12, 2));
        assert!(x.embed(10).is_err());
    }

    #[test]
    fn mod3_examples() {
        assert!(reduce_mod3(&Cyclotomic::from_int(9, 3)).unwrap().is_zero());
        assert!(reduce_mod3(&Cyclotomic::zeta(9, 1)).unwrap().is_one());
        let r8 = Mod3Reducer::new(8).unwrap();
        assert_eq!(r8.field().size(), 9);
        let w = r8.reduce(&Cyclotomic::zeta(8, 1)).unwrap();
        assert_eq!(r8.field().multiplicative_order(&w).unwrap(), 8);
        assert_eq!(
            reduce_mod3(&Cyclotomic::from_rational(3, q(1, 2))).unwrap_err(),
            CycloError::NotIntegral
        );
    }

    #[test]
    fn modl_examples() {
        assert_eq!(reduce_modl(&Cyclotomic::one(3), 7, 2).unwrap(), 1);
        assert_eq!(reduce_modl(&Cyclotomic::zeta(3, 1), 7, 2).unwrap(), 2);
        let s = Cyclotomic::from_terms(3, (0..3).map(|j| (j, q(1, 1))));
        assert_eq!(reduce_modl(&s, 7, 2).unwrap(), 0);
        assert!(reduce_modl(&Cyclotomic::one(3), 11, 2).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let x = &Cyclotomic::zeta(20, 3).scale(&q(-2, 3)) + &Cyclotomic::from_int(20, 4);
        let s = serde_json::to_string(&x).unwrap();
        let y: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    proptest! {
        #[test]
        fn galois_is_ring_hom(x in arb_cyclo(36), y in arb_cyclo(36), e in prop::sample::select(vec![1i64, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35])) {
            let m = GaloisMap::new(36, e).unwrap();
            prop_assert_eq!(m.apply(&(&x + &y)).unwrap(), &m.apply(&x).unwrap() + &m.apply(&y).unwrap());
            prop_assert_eq!(m.apply(&(&x * &y)).unwrap(), &m.apply(&x).unwrap() * &m.apply(&y).unwrap());
            prop_assert_eq!(m.inverse().apply(&m.apply(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn sigma_has_three_power_order(x in arb_cyclo(72), a in 0u32..3) {
            // conductor 8·3^(a+2)
            let x = x.embed(72 * 3u64.pow(a)).unwrap();
            let s = sigma(x.conductor());
            let k = 3u64.pow(a + 1);
            prop_assert_eq!(s.pow(k).apply(&x).unwrap(), x);
            prop_assert_eq!(s.order(), k);
        }

        #[test]
        fn canonical_form_unique(terms in proptest::collection::vec((0u64..30, -4i64..5), 0..8), shifts in proptest::collection::vec(0u64..4, 8)) {
            let a = Cyclotomic::from_terms(30, terms.iter().map(|&(j, c)| (j, q(c, 1))));
            let b = Cyclotomic::from_terms(30, terms.iter().zip(&shifts).map(|(&(j, c), s)| (j + 30 * s, q(c, 1))));
            prop_assert_eq!(&a, &b);
            prop_assert!((&a - &b).is_zero());
        }

        #[test]
        fn mod3_is_ring_hom(x in arb_integral(40), y in arb_integral(40)) {
            let r = Mod3Reducer::new(40).unwrap();
            let s = r.reduce(&(&x + &y)).unwrap();
            prop_assert_eq!(s, &r.reduce(&x).unwrap() + &r.reduce(&y).unwrap());
            let p = r.reduce(&(&x * &y)).unwrap();
            prop_assert_eq!(p, &r.reduce(&x).unwrap() * &r.reduce(&y).unwrap());
        }

        #[test]
        fn modl_is_ring_hom(x in arb_integral(12), y in arb_integral(12)) {
            // 37 = 3·12 + 1, 2 has order 36 mod 37 so 2^3 has order 12
            let w = arith::mod_pow(2, 3, 37);
            let f = |v: &Cyclotomic| reduce_modl(v, 37, w).unwrap();
            prop_assert_eq!(f(&(&x + &y)), (f(&x) + f(&y)) % 37);
            prop_assert_eq!(f(&(&x * &y)), f(&x) * f(&y) % 37);
        }
    }
}
