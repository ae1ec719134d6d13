//! Permutation groups: Schreier–Sims, normal closures, Frattini ranks of
//! 3-groups, conjugacy classes and power maps.
//!
//! Permutations act on the right: `images[i]` is `i^g` and the product `g * h`
//! applies `g` first.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use indexmap::IndexSet;
use rand::Rng;
use thiserror::Error;

use crate::arith;

pub const DEFAULT_CLASS_BOUND: u128 = 1_000_000;
pub const MAX_DEGREE: usize = u16::MAX as usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("degree {found} differs from {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {0} is too large")]
    DegreeTooLarge(usize),
    #[error("element is not a member of the group")]
    NotMember,
    #[error("group order {0} is not a power of 3")]
    NotThreeGroup(u128),
    #[error("{what} {actual} exceeds the bound {limit}")]
    BoundExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[u16]>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u16).collect(),
        }
    }

    pub fn from_images(images: &[usize]) -> Result<Perm, PermError> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&i| i as u16).collect(),
        })
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(PermError::NotBijective(n));
                }
                touched[a] = true;
                images[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Perm::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm { images: inv.into() }
    }

    pub fn pow(&self, mut e: u128) -> Perm {
        let mut acc = Perm::identity(self.degree());
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

    /// `g^-1 self g`.
    pub fn conj(&self, g: &Perm) -> Perm {
        let mut out = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            out[g.images[i] as usize] = g.images[j as usize];
        }
        Perm { images: out.into() }
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        &(&a.inverse() * &b.inverse()) * &(a * b)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.image(x);
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn order(&self) -> u128 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| arith::lcm(acc, l as u64)) as u128
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
    }
}

impl std::ops::Mul<&Perm> for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&i| rhs.images[i as usize]).collect(),
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.image(s) == s {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = s;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.image(x);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `slot[beta]` indexes `reps` for orbit points, `u32::MAX` otherwise.
    slot: Vec<u32>,
    orbit: Vec<usize>,
    reps: Vec<Perm>,
    inv_reps: Vec<Perm>,
}

impl Level {
    fn new(base: usize, n: usize) -> Level {
        let mut l = Level {
            base,
            gens: Vec::new(),
            slot: vec![u32::MAX; n],
            orbit: Vec::new(),
            reps: Vec::new(),
            inv_reps: Vec::new(),
        };
        l.recompute_orbit(n);
        l
    }

    fn recompute_orbit(&mut self, n: usize) {
        self.slot.iter_mut().for_each(|s| *s = u32::MAX);
        self.orbit.clear();
        self.reps.clear();
        self.inv_reps.clear();
        self.slot[self.base] = 0;
        self.orbit.push(self.base);
        self.reps.push(Perm::identity(n));
        self.inv_reps.push(Perm::identity(n));
        let mut k = 0;
        while k < self.orbit.len() {
            let beta = self.orbit[k];
            for s in &self.gens {
                let gamma = s.image(beta);
                if self.slot[gamma] == u32::MAX {
                    let u = &self.reps[k] * s;
                    self.slot[gamma] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.inv_reps.push(u.inverse());
                    self.reps.push(u);
                }
            }
            k += 1;
        }
    }

    fn rep(&self, beta: usize) -> Option<(&Perm, &Perm)> {
        match self.slot[beta] {
            u32::MAX => None,
            s => Some((&self.reps[s as usize], &self.inv_reps[s as usize])),
        }
    }
}

/// Base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn trivial(degree: usize) -> Bsgs {
        Bsgs {
            degree,
            levels: Vec::new(),
        }
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Sifts `g` from level `start`; returns the residue and the level where it stopped.
    fn strip_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, l) in self.levels.iter().enumerate().skip(start) {
            let beta = h.image(l.base);
            match l.rep(beta) {
                Some((_, uinv)) => h = &h * uinv,
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, i) = self.strip_from(g, 0);
        i == self.levels.len() && h.is_identity()
    }

    /// Adds a generator, keeping the structure a valid BSGS of the enlarged group.
    pub fn add_generator(&mut self, g: &Perm) {
        let (h, j) = self.strip_from(g, 0);
        if h.is_identity() {
            return;
        }
        let top = self.insert_at(h, 0, j);
        self.complete(top);
    }

    /// Inserts a sifting residue `h` that fixes the first `j` base points and
    /// stopped at level `j`, adding it to the generators of levels `from..=j`.
    fn insert_at(&mut self, h: Perm, from: usize, j: usize) -> usize {
        let n = self.degree;
        if j == self.levels.len() {
            let moved = (0..n).find(|&x| h.image(x) != x).expect("non-identity");
            self.levels.push(Level::new(moved, n));
        }
        for l in from..=j {
            self.levels[l].gens.push(h.clone());
            self.levels[l].recompute_orbit(n);
        }
        j
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let lvl = i as usize;
            let mut residue = None;
            'scan: for k in 0..self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[k];
                for s in &self.levels[lvl].gens {
                    let ub = &self.levels[lvl].reps[k];
                    let gamma = s.image(beta);
                    let (_, ug_inv) = self.levels[lvl].rep(gamma).expect("orbit closed");
                    let sch = &(ub * s) * ug_inv;
                    if sch.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip_from(&sch, lvl + 1);
                    if !h.is_identity() {
                        residue = Some((h, j));
                        break 'scan;
                    }
                }
            }
            match residue {
                Some((h, j)) => i = self.insert_at(h, lvl + 1, j) as isize,
                None => i -= 1,
            }
        }
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for l in self.levels.iter().rev() {
            let k = rng.gen_range(0..l.reps.len());
            g = &g * &l.reps[k];
        }
        g
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }
}

/// A permutation group given by generators, with a lazily computed BSGS.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    bsgs: OnceLock<Bsgs>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<PermGroup, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            gens,
            bsgs: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup {
            degree,
            gens: Vec::new(),
            bsgs: OnceLock::new(),
        }
    }

    fn from_bsgs(degree: usize, gens: Vec<Perm>, bsgs: Bsgs) -> PermGroup {
        let lock = OnceLock::new();
        let _ = lock.set(bsgs);
        PermGroup {
            degree,
            gens,
            bsgs: lock,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn bsgs(&self) -> &Bsgs {
        self.bsgs.get_or_init(|| {
            let mut b = Bsgs::trivial(self.degree);
            for g in &self.gens {
                b.add_generator(g);
            }
            b
        })
    }

    pub fn order(&self) -> u128 {
        self.bsgs().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.bsgs().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.bsgs().random_element(rng)
    }

    /// Subgroup generated by `gens`, which must be members.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup, PermError> {
        for g in &gens {
            if !self.contains(g) {
                return Err(PermError::NotMember);
            }
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Smallest normal subgroup of `self` containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> Result<PermGroup, PermError> {
        for s in seeds {
            if s.degree() != self.degree {
                return Err(PermError::DegreeMismatch {
                    expected: self.degree,
                    found: s.degree(),
                });
            }
            if !self.contains(s) {
                return Err(PermError::NotMember);
            }
        }
        Ok(self.normal_closure_unchecked(seeds))
    }

    fn normal_closure_unchecked(&self, seeds: &[Perm]) -> PermGroup {
        let mut bsgs = Bsgs::trivial(self.degree);
        let mut gens = Vec::new();
        let mut queue: VecDeque<Perm> = VecDeque::new();
        for s in seeds {
            if !bsgs.contains(s) {
                bsgs.add_generator(s);
                gens.push(s.clone());
                queue.push_back(s.clone());
            }
        }
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let c = x.conj(g);
                if !bsgs.contains(&c) {
                    bsgs.add_generator(&c);
                    gens.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        PermGroup::from_bsgs(self.degree, gens, bsgs)
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut seeds = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                seeds.push(Perm::commutator(a, b));
            }
        }
        self.normal_closure_unchecked(&seeds)
    }

    /// `Φ(P) = P'P^3` for a 3-group, as the normal closure of generator commutators and cubes.
    pub fn frattini_subgroup_3group(&self) -> Result<PermGroup, PermError> {
        let order = self.order();
        if arith::three_part(order) != order {
            return Err(PermError::NotThreeGroup(order));
        }
        let mut seeds: Vec<Perm> = self.gens.iter().map(|g| g.pow(3)).collect();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                seeds.push(Perm::commutator(a, b));
            }
        }
        Ok(self.normal_closure_unchecked(&seeds))
    }

    /// `d` with `|P : Φ(P)| = 3^d`.
    pub fn frattini_rank_3group(&self) -> Result<u32, PermError> {
        let phi = self.frattini_subgroup_3group()?;
        Ok(arith::valuation(self.order() / phi.order(), 3))
    }

    /// All elements, identity first, in breadth-first order over the generators.
    pub fn elements(&self, bound: u128) -> Result<IndexSet<Perm>, PermError> {
        let order = self.order();
        if order > bound {
            return Err(PermError::BoundExceeded {
                what: "group order",
                limit: bound,
                actual: order,
            });
        }
        let mut set = IndexSet::with_capacity(order as usize);
        set.insert(Perm::identity(self.degree));
        let mut k = 0;
        while k < set.len() {
            let x = set[k].clone();
            for g in &self.gens {
                set.insert(&x * g);
            }
            k += 1;
        }
        debug_assert_eq!(set.len() as u128, order);
        Ok(set)
    }

    pub fn conjugacy_classes(&self) -> Result<ConjClasses, PermError> {
        self.conjugacy_classes_bounded(DEFAULT_CLASS_BOUND)
    }

    pub fn conjugacy_classes_bounded(&self, bound: u128) -> Result<ConjClasses, PermError> {
        let elements = self.elements(bound)?;
        let m = elements.len();
        let mut class_of = vec![u32::MAX; m];
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for start in 0..m {
            if class_of[start] != u32::MAX {
                continue;
            }
            let c = raw.len() as u32;
            class_of[start] = c;
            let mut members = vec![start as u32];
            let mut k = 0;
            while k < members.len() {
                let x = &elements[members[k] as usize];
                for g in &self.gens {
                    let y = x.conj(g);
                    let idx = elements.get_index_of(&y).expect("closed under conjugation");
                    if class_of[idx] == u32::MAX {
                        class_of[idx] = c;
                        members.push(idx as u32);
                    }
                }
                k += 1;
            }
            raw.push(members);
        }
        let mut keyed: Vec<(u128, Perm, Vec<u32>)> = raw
            .into_iter()
            .map(|mut members| {
                members.sort_unstable_by(|&a, &b| elements[a as usize].cmp(&elements[b as usize]));
                let rep = elements[members[0] as usize].clone();
                (rep.order(), rep, members)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut reps = Vec::with_capacity(keyed.len());
        let mut orders = Vec::with_capacity(keyed.len());
        let mut members = Vec::with_capacity(keyed.len());
        for (c, (o, rep, mem)) in keyed.into_iter().enumerate() {
            for &i in &mem {
                class_of[i as usize] = c as u32;
            }
            reps.push(rep);
            orders.push(o);
            members.push(mem);
        }
        Ok(ConjClasses {
            group_order: m as u128,
            reps,
            orders,
            members,
            elements,
            class_of,
        })
    }
}

/// Conjugacy classes with a full element locator.
#[derive(Clone, Debug)]
pub struct ConjClasses {
    group_order: u128,
    reps: Vec<Perm>,
    orders: Vec<u128>,
    members: Vec<Vec<u32>>,
    elements: IndexSet<Perm>,
    class_of: Vec<u32>,
}

impl ConjClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    pub fn reps(&self) -> &[Perm] {
        &self.reps
    }

    pub fn rep_orders(&self) -> &[u128] {
        &self.orders
    }

    pub fn sizes(&self) -> Vec<u128> {
        self.members.iter().map(|m| m.len() as u128).collect()
    }

    pub fn size(&self, c: usize) -> u128 {
        self.members[c].len() as u128
    }

    /// Element indices (into [`ConjClasses::element`]) of class `c`, least element first.
    pub fn members(&self, c: usize) -> &[u32] {
        &self.members[c]
    }

    pub fn element(&self, idx: u32) -> &Perm {
        &self.elements[idx as usize]
    }

    pub fn index_of(&self, g: &Perm) -> Option<u32> {
        self.elements.get_index_of(g).map(|i| i as u32)
    }

    pub fn class_of_index(&self, idx: u32) -> usize {
        self.class_of[idx as usize] as usize
    }

    pub fn class_of(&self, g: &Perm) -> Option<usize> {
        self.index_of(g).map(|i| self.class_of_index(i))
    }

    /// Exponent of the group: lcm of element orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| arith::lcm(acc, o as u64))
    }

    /// Class of `g^k` for each class of `g`.
    pub fn power_map(&self, k: i64) -> Vec<usize> {
        self.reps
            .iter()
            .zip(&self.orders)
            .map(|(r, &o)| {
                let e = (k as i128).rem_euclid(o as i128) as u128;
                self.class_of(&r.pow(e)).expect("powers stay in the group")
            })
            .collect()
    }

    /// Class of the inverses.
    pub fn inverse_classes(&self) -> Vec<usize> {
        self.power_map(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    fn sym(n: usize) -> PermGroup {
        let c: Vec<usize> = (0..n).collect();
        PermGroup::new(n, vec![cyc(n, &[&c]), cyc(n, &[&[0, 1]])]).unwrap()
    }

    fn alt5() -> PermGroup {
        PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap()
    }

    fn c3_wr_c3() -> PermGroup {
        PermGroup::new(
            9,
            vec![cyc(9, &[&[0, 1, 2]]), cyc(9, &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]])],
        )
        .unwrap()
    }

    #[test]
    fn perm_basics() {
        let a = cyc(4, &[&[0, 1]]);
        let b = cyc(4, &[&[1, 2]]);
        // apply a then b: 0 -> 1 -> 2
        assert_eq!((&a * &b).image(0), 2);
        assert_eq!(cyc(6, &[&[0, 1, 2], &[3, 4]]).order(), 6);
        assert_eq!(cyc(6, &[&[0, 1, 2], &[3, 4]]).cycle_type(), vec![3, 2, 1]);
        assert!((&a * &a.inverse()).is_identity());
        assert_eq!(format!("{}", cyc(5, &[&[1, 3, 2]])), "(1,3,2)");
        assert!(Perm::from_images(&[0, 0, 1]).is_err());
        let g = cyc(5, &[&[0, 1, 2, 3, 4]]);
        let h = cyc(5, &[&[0, 1]]);
        assert_eq!(g.conj(&h), &(&h.inverse() * &g) * &h);
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(sym(4).order(), 24);
        assert_eq!(PermGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap().order(), 3);
        assert_eq!(alt5().order(), 60);
        assert_eq!(sym(9).order(), 362_880);
        assert_eq!(PermGroup::trivial(5).order(), 1);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let err = PermGroup::new(4, vec![Perm::identity(3)]).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn bsgs_is_idempotent() {
        let g = sym(6);
        let o1 = g.order();
        let b1 = g.bsgs().base();
        assert_eq!(g.order(), o1);
        assert_eq!(g.bsgs().base(), b1);
        let strong = PermGroup::new(6, g.bsgs().strong_generators()).unwrap();
        assert_eq!(strong.order(), o1);
    }

    #[test]
    fn membership() {
        let a5 = alt5();
        assert!(a5.contains(&cyc(5, &[&[0, 1], &[2, 3]])));
        assert!(!a5.contains(&cyc(5, &[&[0, 1]])));
        assert!(!a5.contains(&Perm::identity(6)));
    }

    #[test]
    fn normal_closures() {
        let s4 = sym(4);
        assert_eq!(s4.normal_closure(&[Perm::identity(4)]).unwrap().order(), 1);
        assert_eq!(s4.normal_closure(&[cyc(4, &[&[0, 1, 2]])]).unwrap().order(), 12);
        let gens = s4.generators().to_vec();
        assert_eq!(s4.normal_closure(&gens).unwrap().order(), 24);
        assert_eq!(alt5().normal_closure(&[cyc(5, &[&[0, 1]])]).unwrap_err(), PermError::NotMember);
        assert_eq!(s4.derived_subgroup().order(), 12);
        assert_eq!(alt5().derived_subgroup().order(), 60);
    }

    #[test]
    fn frattini_ranks() {
        let c3 = PermGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(c3.frattini_rank_3group().unwrap(), 1);
        assert_eq!(c3_wr_c3().order(), 81);
        assert_eq!(c3_wr_c3().frattini_rank_3group().unwrap(), 2);
        let c9xc3 = PermGroup::new(
            12,
            vec![cyc(12, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]), cyc(12, &[&[9, 10, 11]])],
        )
        .unwrap();
        assert_eq!(c9xc3.frattini_rank_3group().unwrap(), 2);
        assert_eq!(PermGroup::trivial(3).frattini_rank_3group().unwrap(), 0);
        assert_eq!(sym(3).frattini_rank_3group().unwrap_err(), PermError::NotThreeGroup(6));
    }

    #[test]
    fn classes_of_small_groups() {
        let s3 = sym(3).conjugacy_classes().unwrap();
        assert_eq!(s3.sizes(), vec![1, 3, 2]);
        let a4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])]).unwrap();
        let cc = a4.conjugacy_classes().unwrap();
        assert_eq!(cc.sizes(), vec![1, 3, 4, 4]);
        let c3 = PermGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(c3.conjugacy_classes().unwrap().sizes(), vec![1, 1, 1]);
        assert!(sym(10).conjugacy_classes().is_err());
    }

    #[test]
    fn class_reps_are_least() {
        let cc = sym(4).conjugacy_classes().unwrap();
        for c in 0..cc.len() {
            let least = cc.members(c).iter().map(|&i| cc.element(i)).min().unwrap();
            assert_eq!(least, &cc.reps()[c]);
        }
    }

    #[test]
    fn power_maps() {
        let s3 = sym(3).conjugacy_classes().unwrap();
        assert_eq!(s3.power_map(1), vec![0, 1, 2]);
        assert_eq!(s3.power_map(2), vec![0, 0, 2]);
        let a4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])])
            .unwrap()
            .conjugacy_classes()
            .unwrap();
        assert_eq!(a4.power_map(2), vec![0, 0, 3, 2]);
    }

    #[test]
    fn class_sizes_divide_order() {
        for g in [sym(5), alt5(), c3_wr_c3()] {
            let cc = g.conjugacy_classes().unwrap();
            let sizes = cc.sizes();
            assert_eq!(sizes.iter().sum::<u128>(), g.order());
            assert!(sizes.iter().all(|s| g.order() % s == 0));
        }
    }

    #[test]
    fn random_words_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a5 = alt5();
        let s5 = sym(5);
        for _ in 0..1000 {
            let mut w = Perm::identity(5);
            for _ in 0..rng.gen_range(0..20) {
                let g = &a5.generators()[rng.gen_range(0..2)];
                w = &w * g;
            }
            assert!(a5.contains(&w));
            let x = s5.random_element(&mut rng);
            assert_eq!(a5.contains(&x), x.is_even());
        }
    }

    proptest! {
        #[test]
        fn lagrange_for_random_subgroups(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = sym(7);
            let k = rng.gen_range(1..3);
            let gens: Vec<Perm> = (0..k).map(|_| g.random_element(&mut rng)).collect();
            let h = g.subgroup(gens).unwrap();
            prop_assert_eq!(g.order() % h.order(), 0);
            let n = g.normal_closure(h.generators()).unwrap();
            prop_assert_eq!(n.order() % h.order(), 0);
        }
    }
}
