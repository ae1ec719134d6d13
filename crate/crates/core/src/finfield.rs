//! Finite fields `F_{p^k}` as `F_p[x] / (f)` for a fixed irreducible `f`.
//!
//! The modulus is the monic irreducible of degree `k` with the least integer
//! encoding `sum c_i p^i` over its lower coefficients, found by exhaustive
//! search, so a context is fully determined by `(p, k)`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} is too large")]
    TooLarge { p: u64, k: u32 },
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("field has {size} elements, expected {expected}")]
    WrongSize { size: u128, expected: u128 },
    #[error("zero has no multiplicative order or inverse")]
    Zero,
}

/// Polynomial arithmetic over `F_p`, coefficients least significant first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x as u64 * y as u64;
            }
            if i % 64 == 63 {
                out.iter_mut().for_each(|c| *c %= p as u64);
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| (c % p as u64) as u32).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic-or-not nonzero `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let d = r.len() - 1;
            let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
            if c != 0 {
                let shift = d - dm;
                for (i, &mi) in m.iter().enumerate() {
                    let t = (c as u64 * mi as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        super::arith::mod_pow(a as u64, p as u64 - 2, p as u64) as u32
    }

    /// `base^(p^times)` modulo `m`, by repeated `p`-th powering.
    pub fn frobenius_iter(base: &[u32], times: u32, m: &[u32], p: u32) -> Vec<u32> {
        let mut x = rem(base, m, p);
        for _ in 0..times {
            x = pow_mod(&x, p as u128, m, p);
        }
        x
    }

    pub fn pow_mod(base: &[u32], mut e: u128, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test for a monic `f` of degree `k >= 1`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = (f.len() - 1) as u32;
        if k == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        if sub(&frobenius_iter(&x, k, f, p), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::arith::prime_divisors(k as u64) {
            let h = sub(&frobenius_iter(&x, k / r as u32, f, p), &x, p);
            if gcd(f, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

/// A finite field context. Shared behind an `Arc`; elements carry a handle to it.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    size: u128,
}

impl FieldCtx {
    /// Builds `F_{p^k}` with the least irreducible modulus of degree `k`.
    pub fn new(p: u64, k: u32) -> Result<Arc<FieldCtx>, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = (p as u128)
            .checked_pow(k)
            .filter(|&s| s < (1u128 << 100) && p < (1 << 16))
            .ok_or(FieldError::TooLarge { p, k })?;
        let p32 = p as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let mut lower = vec![0u32; k as usize];
            loop {
                let mut f = lower.clone();
                f.push(1);
                if f[0] != 0 && poly::is_irreducible(&f, p32) {
                    break f;
                }
                // increment the base-p counter
                let mut i = 0;
                loop {
                    lower[i] += 1;
                    if lower[i] < p32 {
                        break;
                    }
                    lower[i] = 0;
                    i += 1;
                }
            }
        };
        Ok(Arc::new(FieldCtx {
            p: p32,
            k,
            modulus,
            size,
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> FFElem {
        FFElem {
            ctx: Arc::clone(self),
            coeffs: vec![0; self.k as usize].into(),
        }
    }

    pub fn one(self: &Arc<Self>) -> FFElem {
        self.from_int(1)
    }

    /// Embeds an integer via `Z -> F_p`.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.p as i64) as u32;
        e
    }

    /// Element with the given coefficient vector (reduced mod `p`, padded to length `k`).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FFElem {
        let mut reduced: Vec<u32> = coeffs.iter().map(|&c| (c % self.p as u64) as u32).collect();
        let reduced = poly::rem(&reduced.split_off(0), &self.modulus, self.p);
        let mut e = self.zero();
        e.coeffs[..reduced.len()].copy_from_slice(&reduced);
        e
    }

    /// Element with integer encoding `index = sum c_i p^i`, `index < |F|`.
    pub fn from_index(self: &Arc<Self>, mut index: u128) -> FFElem {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (index % self.p as u128) as u32;
            index /= self.p as u128;
        }
        e
    }

    /// All elements in order of their integer encoding.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }

    /// Least element (by integer encoding) generating the multiplicative group.
    pub fn primitive_element(self: &Arc<Self>) -> FFElem {
        let n = self.size - 1;
        (1..self.size)
            .map(|i| self.from_index(i))
            .find(|x| x.order_given(n) == n)
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// `x -> x^q` on `F_{q^2}`; an involution fixing `F_q`.
    pub fn frobenius(self: &Arc<Self>, x: &FFElem, q: u64) -> Result<FFElem, FieldError> {
        x.check(self)?;
        let expected = (q as u128) * (q as u128);
        if expected != self.size {
            return Err(FieldError::WrongSize {
                size: self.size,
                expected,
            });
        }
        Ok(x.pow(q as u128))
    }

    /// Least `m >= 1` with `x^m = 1`.
    pub fn multiplicative_order(self: &Arc<Self>, x: &FFElem) -> Result<u128, FieldError> {
        x.check(self)?;
        if x.is_zero() {
            return Err(FieldError::Zero);
        }
        Ok(x.order_given(self.size - 1))
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone)]
pub struct FFElem {
    ctx: Arc<FieldCtx>,
    coeffs: Box<[u32]>,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }
}

impl Eq for FFElem {}

impl std::hash::Hash for FFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}^{}{:?}", self.ctx.p, self.ctx.k, &self.coeffs[..])
    }
}

impl FFElem {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn index(&self) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.ctx.p as u128 + c as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, ctx: &Arc<FieldCtx>) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.ctx, ctx) || *self.ctx == **ctx {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    fn same(&self, other: &FFElem) -> Result<(), FieldError> {
        other.check(&self.ctx)
    }

    pub fn checked_add(&self, other: &FFElem) -> Result<FFElem, FieldError> {
        self.same(other)?;
        let p = self.ctx.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FFElem {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &FFElem) -> Result<FFElem, FieldError> {
        self.same(other)?;
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &FFElem) -> Result<FFElem, FieldError> {
        self.same(other)?;
        let p = self.ctx.p;
        let prod = poly::mul(&self.coeffs, &other.coeffs, p);
        let r = poly::rem(&prod, &self.ctx.modulus, p);
        let mut coeffs = vec![0u32; self.ctx.k as usize];
        coeffs[..r.len()].copy_from_slice(&r);
        Ok(FFElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: coeffs.into(),
        })
    }

    pub fn neg(&self) -> FFElem {
        let p = self.ctx.p;
        FFElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    pub fn pow(&self, mut e: u128) -> FFElem {
        let mut acc = self.ctx.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FFElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::Zero);
        }
        Ok(self.pow(self.ctx.size - 2))
    }

    /// Order of a nonzero element whose order divides `n`.
    fn order_given(&self, n: u128) -> u128 {
        let mut m = n;
        for (r, _) in arith::factor(n) {
            while m % r == 0 && self.pow(m / r).is_one() {
                m /= r;
            }
        }
        m
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&FFElem> for &FFElem {
            type Output = FFElem;
            fn $method(self, rhs: &FFElem) -> FFElem {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
        impl std::ops::$tr<FFElem> for FFElem {
            type Output = FFElem;
            fn $method(self, rhs: FFElem) -> FFElem {
                (&self).$checked(&rhs).expect("field context mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        FFElem::neg(self)
    }
}
