//! Exact character tables.
//!
//! Three builders: Dixon's method over a prime field for groups whose
//! classes can be enumerated, Murnaghan–Nakayama for `S_n`, and restriction
//! from `S_n` for `A_n`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cyclo::{CycloError, Cyclotomic};
use crate::permgrp::{ConjClasses, Perm, PermError, PermGroup};

pub const SN_MAX: u32 = 15;

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("n = {0} is outside the supported range {1}..={2}")]
    OutOfRange(u32, u32, u32),
    #[error("eigenspace splitting left a subspace of dimension {0}")]
    NotDiagonalised(usize),
    #[error("character value lift failed on class {class}")]
    LiftFailed { class: usize },
}

/// An exact character table. Class 0 is the identity; row 0 is the trivial character.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub group: String,
    pub order: u128,
    pub exponent: u64,
    pub class_sizes: Vec<u128>,
    pub rep_orders: Vec<u128>,
    /// Cycle types, partitions or permutation representatives.
    pub class_labels: Vec<String>,
    pub row_labels: Vec<String>,
    /// `p ↦ [class of g^p]` for each prime `p` dividing the order.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    /// `values[row][class]`, all with conductor `exponent`.
    pub values: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn degree(&self, row: usize) -> u128 {
        self.values[row][0]
            .as_integer()
            .and_then(|d| d.to_u128())
            .expect("degrees are positive integers")
    }

    pub fn degrees(&self) -> Vec<u128> {
        (0..self.values.len()).map(|r| self.degree(r)).collect()
    }

    /// Classes of inverses, read off from complex conjugation of the columns.
    pub fn inverse_classes(&self) -> Vec<usize> {
        let r = self.num_classes();
        (0..r)
            .map(|k| {
                let col: Vec<Cyclotomic> = self.values.iter().map(|row| row[k].conj()).collect();
                (0..r)
                    .find(|&l| self.values.iter().zip(&col).all(|(row, c)| row[l] == *c))
                    .expect("columns are closed under conjugation")
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableRepr::from(self)).expect("serializable")
    }

    pub fn from_json(v: serde_json::Value) -> Result<CharacterTable, serde_json::Error> {
        let repr: TableRepr = serde_json::from_value(v)?;
        Ok(repr.into())
    }
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    rep_order: u128,
    size: u128,
    #[serde(default)]
    label: String,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    group: String,
    order: u128,
    exponent: u64,
    classes: Vec<ClassRepr>,
    power_maps: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    row_labels: Vec<String>,
    irreducibles: Vec<Vec<Cyclotomic>>,
}

impl From<&CharacterTable> for TableRepr {
    fn from(t: &CharacterTable) -> Self {
        TableRepr {
            group: t.group.clone(),
            order: t.order,
            exponent: t.exponent,
            classes: (0..t.num_classes())
                .map(|k| ClassRepr {
                    rep_order: t.rep_orders[k],
                    size: t.class_sizes[k],
                    label: t.class_labels[k].clone(),
                })
                .collect(),
            power_maps: t.power_maps.iter().map(|(p, m)| (p.to_string(), m.clone())).collect(),
            row_labels: t.row_labels.clone(),
            irreducibles: t.values.clone(),
        }
    }
}

impl From<TableRepr> for CharacterTable {
    fn from(r: TableRepr) -> Self {
        CharacterTable {
            group: r.group,
            order: r.order,
            exponent: r.exponent,
            class_sizes: r.classes.iter().map(|c| c.size).collect(),
            rep_orders: r.classes.iter().map(|c| c.rep_order).collect(),
            class_labels: r.classes.into_iter().map(|c| c.label).collect(),
            power_maps: r
                .power_maps
                .into_iter()
                .filter_map(|(k, m)| k.parse().ok().map(|k| (k, m)))
                .collect(),
            row_labels: r.row_labels,
            values: r.irreducibles,
        }
    }
}

fn cyclo_key(x: &Cyclotomic) -> Vec<(u64, BigRational)> {
    x.coeffs().iter().map(|(j, c)| (*j, c.clone())).collect()
}

fn cmp_rows(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match cyclo_key(x).cmp(&cyclo_key(y)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Trivial row first, then by degree, then lexicographically by values.
fn sort_rows(values: &mut [Vec<Cyclotomic>]) {
    let is_trivial = |row: &[Cyclotomic]| row.iter().all(|v| v.as_integer() == Some(BigInt::one()));
    values.sort_by(|a, b| {
        is_trivial(b)
            .cmp(&is_trivial(a))
            .then_with(|| cyclo_key(&a[0]).cmp(&cyclo_key(&b[0])))
            .then_with(|| cmp_rows(a, b))
    });
}

/// Arithmetic and linear algebra modulo a prime `l < 2^32`.
mod modl {
    use crate::arith;

    pub fn inv(a: u64, l: u64) -> u64 {
        arith::mod_pow(a, l - 2, l)
    }

    /// Row-reduced echelon basis of the null space of the `r × r` matrix `a` (row-major).
    pub fn null_space(a: &[u64], r: usize, l: u64) -> Vec<Vec<u64>> {
        let mut m = a.to_vec();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..r {
            let Some(p) = (row..r).find(|&i| m[i * r + col] != 0) else { continue };
            for k in 0..r {
                m.swap(row * r + k, p * r + k);
            }
            let iv = inv(m[row * r + col], l);
            for k in 0..r {
                m[row * r + k] = m[row * r + k] * iv % l;
            }
            for i in 0..r {
                if i != row && m[i * r + col] != 0 {
                    let f = m[i * r + col];
                    for k in 0..r {
                        m[i * r + k] = (m[i * r + k] + l - f * m[row * r + k] % l) % l;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == r {
                break;
            }
        }
        let free: Vec<usize> = (0..r).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; r];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (l - m[i * r + fc]) % l;
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial via Hessenberg reduction; coefficients low to high, monic.
    pub fn charpoly(a: &[u64], d: usize, l: u64) -> Vec<u64> {
        let mut h = a.to_vec();
        let at = |i: usize, j: usize| i * d + j;
        for k in 0..d.saturating_sub(2) {
            let Some(p) = (k + 1..d).find(|&i| h[at(i, k)] != 0) else { continue };
            if p != k + 1 {
                for j in 0..d {
                    h.swap(at(p, j), at(k + 1, j));
                }
                for i in 0..d {
                    h.swap(at(i, p), at(i, k + 1));
                }
            }
            let iv = inv(h[at(k + 1, k)], l);
            for i in k + 2..d {
                let f = h[at(i, k)] * iv % l;
                if f == 0 {
                    continue;
                }
                for j in 0..d {
                    h[at(i, j)] = (h[at(i, j)] + l - f * h[at(k + 1, j)] % l) % l;
                }
                for j in 0..d {
                    h[at(j, k + 1)] = (h[at(j, k + 1)] + f * h[at(j, i)]) % l;
                }
            }
        }
        // p_m(x) = (x - h_mm) p_{m-1} - Σ h_{i,m} (Π sub-diagonal) p_{i-1}
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for m in 0..d {
            let prev = &polys[m];
            let mut next = vec![0u64; m + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] = (next[i + 1] + c) % l;
                next[i] = (next[i] + l - c * h[at(m, m)] % l) % l;
            }
            let mut prod = 1u64;
            for i in (0..m).rev() {
                prod = prod * h[at(i + 1, i)] % l;
                let coef = h[at(i, m)] * prod % l;
                if coef == 0 {
                    continue;
                }
                for (k, &c) in polys[i].iter().enumerate() {
                    next[k] = (next[k] + l - coef * c % l) % l;
                }
            }
            polys.push(next);
        }
        polys.pop().expect("nonempty")
    }

    pub fn eval(p: &[u64], x: u64, l: u64) -> u64 {
        p.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % l)
    }
}

/// Character table by Dixon's method.
pub fn dixon_table(g: &PermGroup, name: &str) -> Result<CharacterTable, TableError> {
    let cc = g.conjugacy_classes()?;
    dixon_from_classes(&cc, name)
}

pub fn dixon_from_classes(cc: &ConjClasses, name: &str) -> Result<CharacterTable, TableError> {
    let r = cc.len();
    let order = cc.group_order();
    let e = cc.exponent();
    let sizes = cc.sizes();
    let bound = 2 * ((order as f64).sqrt().ceil() as u64);
    let mut l = e + 1;
    while l <= bound || !arith::is_prime(l) {
        l += e;
    }
    let omega = arith::mod_pow(arith::primitive_root(l), (l - 1) / e, l);

    // c[j][k][i] = #{x ∈ K_j : x^-1 g_i ∈ K_k}
    let mut coeff = vec![0u64; r * r * r];
    for i in 0..r {
        let gi = &cc.reps()[i];
        for j in 0..r {
            for &xi in cc.members(j) {
                let y = &cc.element(xi).inverse() * gi;
                let k = cc.class_of(&y).expect("group element");
                coeff[(j * r + k) * r + i] += 1;
            }
        }
    }
    let class_matrix = |j: usize| -> Vec<u64> {
        // (M_j)_{k,i} = c_{jk}^i, acting on column vectors of central characters
        let mut m = vec![0u64; r * r];
        for k in 0..r {
            for i in 0..r {
                m[k * r + i] = coeff[(j * r + k) * r + i] % l;
            }
        }
        m
    };

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for j in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(j);
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split_space(&basis, &m, r, l));
        }
        spaces = next;
    }
    if let Some(s) = spaces.iter().find(|s| s.len() != 1) {
        return Err(TableError::NotDiagonalised(s.len()));
    }

    let inv_class = cc.inverse_classes();
    let mut rows_modl = Vec::with_capacity(r);
    for s in &spaces {
        let mut w = s[0].clone();
        let w0 = modl::inv(w[0], l);
        w.iter_mut().for_each(|x| *x = *x * w0 % l);
        let mut sum = 0u64;
        for k in 0..r {
            let hk = (sizes[k] % l as u128) as u64;
            sum = (sum + w[k] * w[inv_class[k]] % l * modl::inv(hk, l)) % l;
        }
        let target = (order % l as u128) as u64 * modl::inv(sum, l) % l;
        let d = (1..=(order as f64).sqrt() as u64 + 1)
            .find(|&d| d * d % l == target)
            .ok_or(TableError::LiftFailed { class: 0 })?;
        let chi: Vec<u64> = (0..r)
            .map(|k| w[k] * d % l * modl::inv((sizes[k] % l as u128) as u64, l) % l)
            .collect();
        rows_modl.push((d, chi));
    }

    // powers of class representatives, by class
    let pow_classes: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let g = &cc.reps()[k];
            let o = cc.rep_orders()[k] as usize;
            let mut out = Vec::with_capacity(o);
            let mut x = Perm::identity(g.degree());
            for _ in 0..o {
                out.push(cc.class_of(&x).expect("member"));
                x = &x * g;
            }
            out
        })
        .collect();

    let mut values = Vec::with_capacity(r);
    for (d, chi) in &rows_modl {
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = cc.rep_orders()[k] as u64;
            let zeta_o = arith::mod_pow(omega, e / o, l);
            let inv_o = modl::inv(o % l, l);
            let mut terms = Vec::new();
            for t in 0..o {
                let mut m = 0u64;
                for (jj, &cls) in pow_classes[k].iter().enumerate() {
                    let z = arith::mod_pow(zeta_o, (o - (jj as u64 * t) % o) % o, l);
                    m = (m + chi[cls] * z) % l;
                }
                m = m * inv_o % l;
                if m > *d {
                    return Err(TableError::LiftFailed { class: k });
                }
                if m != 0 {
                    terms.push((t * (e / o), BigRational::from_integer(m.into())));
                }
            }
            row.push(Cyclotomic::from_terms(e, terms));
        }
        values.push(row);
    }
    sort_rows(&mut values);

    let mut power_maps = BTreeMap::new();
    for p in arith::prime_divisors(order as u64) {
        power_maps.insert(p, cc.power_map(p as i64));
    }
    Ok(CharacterTable {
        group: name.to_string(),
        order,
        exponent: e,
        class_sizes: sizes,
        rep_orders: cc.rep_orders().to_vec(),
        class_labels: cc.reps().iter().map(|p| p.to_string()).collect(),
        row_labels: (0..r).map(|i| format!("X{}", i + 1)).collect(),
        power_maps,
        values,
    })
}

/// Splits an invariant subspace (row-vector basis) into eigenspaces of `m`.
fn split_space(basis: &[Vec<u64>], m: &[u64], r: usize, l: u64) -> Vec<Vec<Vec<u64>>> {
    let d = basis.len();
    // echelonise basis to read coordinates at pivot positions
    let mut b = basis.to_vec();
    let mut pivots = Vec::with_capacity(d);
    for row in 0..d {
        let col = (0..r).find(|&c| b[row][c] != 0 && !pivots.contains(&c)).expect("independent");
        let iv = modl::inv(b[row][col], l);
        b[row].iter_mut().for_each(|x| *x = *x * iv % l);
        for other in 0..d {
            if other != row && b[other][col] != 0 {
                let f = b[other][col];
                let src = b[row].clone();
                for (x, y) in b[other].iter_mut().zip(&src) {
                    *x = (*x + l - f * y % l) % l;
                }
            }
        }
        pivots.push(col);
    }
    // restricted action: column vectors v ↦ M v, coordinates at pivots
    let mut a = vec![0u64; d * d];
    for (c, v) in b.iter().enumerate() {
        let mv: Vec<u64> = (0..r)
            .map(|k| (0..r).fold(0u64, |acc, i| (acc + m[k * r + i] * v[i]) % l))
            .collect();
        for (row, &p) in pivots.iter().enumerate() {
            a[row * d + c] = mv[p];
        }
    }
    let cp = modl::charpoly(&a, d, l);
    let roots: Vec<u64> = (0..l).filter(|&x| modl::eval(&cp, x, l) == 0).collect();
    if roots.len() <= 1 {
        return vec![b];
    }
    roots
        .into_iter()
        .map(|lam| {
            let mut shifted = a.clone();
            for i in 0..d {
                shifted[i * d + i] = (shifted[i * d + i] + l - lam) % l;
            }
            modl::null_space(&shifted, d, l)
                .into_iter()
                .map(|coords| {
                    let mut v = vec![0u64; r];
                    for (c, &x) in coords.iter().enumerate() {
                        for k in 0..r {
                            v[k] = (v[k] + x * b[c][k]) % l;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Partitions of `n` in reverse lexicographic order, `(n)` first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate_partition(p: &[u32]) -> Vec<u32> {
    let m = p.first().copied().unwrap_or(0);
    (1..=m).map(|i| p.iter().filter(|&&x| x >= i).count() as u32).collect()
}

/// Centraliser order `z_μ = Π i^{m_i} m_i!`.
pub fn centraliser_order(mu: &[u32]) -> u128 {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &x in mu {
        *counts.entry(x).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(i, m)| (i as u128).pow(m as u32) * arith::factorial(m))
        .product()
}

fn partition_label(p: &[u32]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Murnaghan–Nakayama with memoisation over (shape, remaining cycle parts).
struct MnRule {
    memo: HashMap<(Vec<u32>, Vec<u32>), i64>,
}

impl MnRule {
    fn new() -> MnRule {
        MnRule { memo: HashMap::new() }
    }

    fn value(&mut self, lambda: &[u32], mu: &[u32]) -> i64 {
        if mu.is_empty() {
            return if lambda.is_empty() { 1 } else { 0 };
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let k = mu[0];
        let rest = &mu[1..];
        // beta set: λ_i + (len - 1 - i)
        let len = lambda.len();
        let beta: Vec<u32> = lambda.iter().enumerate().map(|(i, &x)| x + (len - 1 - i) as u32).collect();
        let mut total = 0i64;
        for (idx, &b) in beta.iter().enumerate() {
            if b < k || beta.contains(&(b - k)) {
                continue;
            }
            let nb = b - k;
            let between = beta.iter().filter(|&&x| x > nb && x < b).count();
            let sign = if between % 2 == 0 { 1 } else { -1 };
            let mut nbeta = beta.clone();
            nbeta[idx] = nb;
            nbeta.sort_unstable_by(|a, b| b.cmp(a));
            let l2 = nbeta.len();
            let mut shape: Vec<u32> = nbeta.iter().enumerate().map(|(i, &x)| x - (l2 - 1 - i) as u32).collect();
            while shape.last() == Some(&0) {
                shape.pop();
            }
            total += sign * self.value(&shape, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

fn cycle_power(mu: &[u32], k: u64) -> Vec<u32> {
    let mut out = Vec::new();
    for &l in mu {
        let g = arith::gcd(l as u64, k) as u32;
        for _ in 0..g {
            out.push(l / g);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn partition_order(mu: &[u32]) -> u128 {
    mu.iter().fold(1u64, |acc, &x| arith::lcm(acc, x as u64)) as u128
}

/// Cycle types in increasing lexicographic order, `1^n` first.
fn cycle_types(n: u32) -> Vec<Vec<u32>> {
    let mut c = partitions(n);
    c.reverse();
    c
}

/// Character table of `S_n` via Murnaghan–Nakayama.
pub fn sn_table(n: u32) -> Result<CharacterTable, TableError> {
    if !(1..=SN_MAX).contains(&n) {
        return Err(TableError::OutOfRange(n, 1, SN_MAX));
    }
    let rows = partitions(n);
    let cols = cycle_types(n);
    let order = arith::factorial(n as u64);
    let exponent = cols.iter().fold(1u64, |acc, mu| arith::lcm(acc, partition_order(mu) as u64));
    let mut mn = MnRule::new();
    let values = rows
        .iter()
        .map(|lam| cols.iter().map(|mu| Cyclotomic::from_int(exponent, mn.value(lam, mu))).collect())
        .collect();
    let index: HashMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut power_maps = BTreeMap::new();
    for p in arith::prime_divisors(order as u64) {
        power_maps.insert(p, cols.iter().map(|mu| index[&cycle_power(mu, p)]).collect());
    }
    Ok(CharacterTable {
        group: format!("S{n}"),
        order,
        exponent,
        class_sizes: cols.iter().map(|mu| order / centraliser_order(mu)).collect(),
        rep_orders: cols.iter().map(|mu| partition_order(mu)).collect(),
        class_labels: cols.iter().map(|mu| partition_label(mu)).collect(),
        row_labels: rows.iter().map(|l| partition_label(l)).collect(),
        power_maps,
        values,
    })
}

fn is_even_type(mu: &[u32]) -> bool {
    mu.iter().filter(|&&x| x % 2 == 0).count() % 2 == 0
}

fn splits_in_an(mu: &[u32]) -> bool {
    mu.iter().all(|&x| x % 2 == 1) && mu.windows(2).all(|w| w[0] != w[1])
}

/// Diagonal hook lengths of a partition.
fn diagonal_hooks(lam: &[u32]) -> Vec<u32> {
    let conj = conjugate_partition(lam);
    (0..lam.len())
        .take_while(|&i| lam[i] as usize > i)
        .map(|i| lam[i] + conj[i] - 2 * i as u32 - 1)
        .collect()
}

/// Character table of `A_n` by restriction from `S_n`.
pub fn an_table(n: u32) -> Result<CharacterTable, TableError> {
    if !(5..=SN_MAX).contains(&n) {
        return Err(TableError::OutOfRange(n, 5, SN_MAX));
    }
    let order = arith::factorial(n as u64) / 2;
    // columns: (cycle type, sign) with sign 0 for non-split, ±1 for split halves
    let mut cols: Vec<(Vec<u32>, i8)> = Vec::new();
    for mu in cycle_types(n).into_iter().filter(|m| is_even_type(m)) {
        if splits_in_an(&mu) {
            cols.push((mu.clone(), 1));
            cols.push((mu, -1));
        } else {
            cols.push((mu, 0));
        }
    }
    let exponent = cols.iter().fold(1u64, |acc, (mu, _)| arith::lcm(acc, partition_order(mu) as u64));
    let mut mn = MnRule::new();
    let mut values: Vec<Vec<Cyclotomic>> = Vec::new();
    let mut seen: Vec<Vec<u32>> = Vec::new();
    for lam in partitions(n) {
        let conj = conjugate_partition(&lam);
        if seen.contains(&conj) {
            continue;
        }
        seen.push(lam.clone());
        let sn: Vec<i64> = cols.iter().map(|(mu, _)| mn.value(&lam, mu)).collect();
        if conj != lam {
            values.push(sn.iter().map(|&v| Cyclotomic::from_int(exponent, v)).collect());
            continue;
        }
        let hooks = diagonal_hooks(&lam);
        let d = hooks.len() as u32;
        let eps: i64 = if ((n - d) / 2) % 2 == 0 { 1 } else { -1 };
        let z: i64 = hooks.iter().map(|&h| h as i64).product();
        let root = Cyclotomic::sqrt_int(exponent, eps * z)?;
        let half = BigRational::new(1.into(), 2.into());
        for s in [1i64, -1] {
            let row = cols
                .iter()
                .zip(&sn)
                .map(|((mu, sign), &v)| {
                    if *sign != 0 && *mu == hooks {
                        let pm = root.scale_int(s * *sign as i64);
                        (&Cyclotomic::from_int(exponent, eps) + &pm).scale(&half)
                    } else {
                        Cyclotomic::from_rational(exponent, BigRational::from_integer(v.into()) * &half)
                    }
                })
                .collect();
            values.push(row);
        }
    }
    sort_rows(&mut values);
    let index: HashMap<(Vec<u32>, i8), usize> = cols.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut power_maps = BTreeMap::new();
    for p in arith::prime_divisors(order as u64) {
        let map = cols
            .iter()
            .map(|(mu, sign)| {
                let img = cycle_power(mu, p);
                let s = if splits_in_an(&img) {
                    let z: i64 = mu.iter().map(|&x| x as i64).product();
                    if img == *mu && arith::jacobi(p as i64, z as u64) == -1 {
                        -*sign
                    } else {
                        *sign
                    }
                } else {
                    0
                };
                index[&(img, s)]
            })
            .collect();
        power_maps.insert(p, map);
    }
    let sizes: Vec<u128> = cols
        .iter()
        .map(|(mu, s)| {
            let full = arith::factorial(n as u64) / centraliser_order(mu);
            if *s == 0 {
                full
            } else {
                full / 2
            }
        })
        .collect();
    let r = values.len();
    Ok(CharacterTable {
        group: format!("A{n}"),
        order,
        exponent,
        class_sizes: sizes,
        rep_orders: cols.iter().map(|(mu, _)| partition_order(mu)).collect(),
        class_labels: cols
            .iter()
            .map(|(mu, s)| {
                let suffix = match s {
                    1 => "+",
                    -1 => "-",
                    _ => "",
                };
                format!("{}{suffix}", partition_label(mu))
            })
            .collect(),
        row_labels: (0..r).map(|i| format!("X{}", i + 1)).collect(),
        power_maps,
        values,
    })
}

/// Exact consistency checks; returns the list of violations.
pub fn validate(t: &CharacterTable) -> Vec<String> {
    let mut bad = Vec::new();
    let r = t.num_classes();
    let e = t.exponent;
    if t.values.len() != r {
        bad.push(format!("{} rows for {} classes", t.values.len(), r));
        return bad;
    }
    if t.values.iter().any(|row| row.len() != r || row.iter().any(|v| v.conductor() != e)) {
        bad.push("row length or conductor mismatch".into());
        return bad;
    }
    if t.class_sizes.iter().sum::<u128>() != t.order {
        bad.push("class sizes do not sum to the order".into());
    }
    if !t.values[0].iter().all(|v| v.as_integer() == Some(BigInt::one())) {
        bad.push("first row is not the trivial character".into());
    }
    let mut degrees = Vec::with_capacity(r);
    for (i, row) in t.values.iter().enumerate() {
        match row[0].as_integer().and_then(|d| d.to_u128()).filter(|&d| d > 0) {
            Some(d) => {
                if t.order % d != 0 {
                    bad.push(format!("degree {d} of row {i} does not divide the order"));
                }
                degrees.push(d);
            }
            None => {
                bad.push(format!("row {i} has a non-integral degree"));
                return bad;
            }
        }
    }
    if degrees.iter().map(|d| d * d).sum::<u128>() != t.order {
        bad.push("sum of squared degrees differs from the order".into());
    }
    let conj: Vec<Vec<Cyclotomic>> = t.values.iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();
    let sizes: Vec<Cyclotomic> = t.class_sizes.iter().map(|&h| Cyclotomic::from_bigint(e, BigInt::from(h))).collect();
    for a in 0..r {
        for b in a..r {
            let mut s = Cyclotomic::zero(e);
            for k in 0..r {
                s = &s + &(&(&sizes[k] * &t.values[a][k]) * &conj[b][k]);
            }
            let expect = if a == b { Cyclotomic::from_bigint(e, BigInt::from(t.order)) } else { Cyclotomic::zero(e) };
            if s != expect {
                bad.push(format!("rows {a} and {b} fail the first orthogonality relation"));
            }
        }
    }
    for k in 0..r {
        for l in k..r {
            let mut s = Cyclotomic::zero(e);
            for row in 0..r {
                s = &s + &(&t.values[row][k] * &conj[row][l]);
            }
            let expect = if k == l {
                Cyclotomic::from_bigint(e, BigInt::from(t.order / t.class_sizes[k]))
            } else {
                Cyclotomic::zero(e)
            };
            if s != expect {
                bad.push(format!("classes {k} and {l} fail the second orthogonality relation"));
            }
        }
    }
    for (i, row) in t.values.iter().enumerate() {
        let d = BigRational::from_integer(BigInt::from(degrees[i]));
        for k in 0..r {
            let w = row[k].scale(&(BigRational::from_integer(BigInt::from(t.class_sizes[k])) / &d));
            if !w.is_integral() {
                bad.push(format!("central character of row {i} on class {k} is not integral"));
            }
        }
    }
    if bad.is_empty() && degrees.iter().any(|d| d.is_zero()) {
        bad.push("zero degree".into());
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::{self, Family, GroupSpec};

    fn ints(t: &CharacterTable) -> Vec<Vec<i64>> {
        t.values
            .iter()
            .map(|row| row.iter().map(|v| v.as_integer().unwrap().to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn partitions_and_hooks() {
        assert_eq!(partitions(4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(15).len(), 176);
        assert_eq!(conjugate_partition(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(diagonal_hooks(&[3, 1, 1]), vec![5]);
        assert_eq!(diagonal_hooks(&[2, 2]), vec![3, 1]);
    }

    #[test]
    fn s4_table() {
        let t = sn_table(4).unwrap();
        assert_eq!(t.degrees(), vec![1, 3, 2, 3, 1]);
        assert!(validate(&t).is_empty());
        assert!(ints(&t)[0].iter().all(|&v| v == 1));
        // centraliser orders from the second orthogonality relation, columns 1^4, 2 1^2, 2^2, 3 1, 4
        let cent: Vec<i64> = (0..5).map(|k| ints(&t).iter().map(|row| row[k] * row[k]).sum()).collect();
        assert_eq!(cent, vec![24, 4, 8, 3, 4]);
    }

    #[test]
    fn s3_dixon_matches_combinatorial() {
        let g = grpzoo::build(&GroupSpec::sym(3)).unwrap();
        let d = dixon_table(&g, "S3").unwrap();
        assert_eq!(d.degrees(), vec![1, 1, 2]);
        assert!(validate(&d).is_empty());
        let s = sn_table(3).unwrap();
        let mut a = ints(&s);
        a.sort();
        let mut b: Vec<Vec<i64>> = ints(&d);
        // dixon classes for S3 are identity, transpositions, 3-cycles; sn columns 1^3, 2 1, 3
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn c3_has_nonrational_linear_characters() {
        let g = grpzoo::cyclic(3);
        let t = dixon_table(&g, "C3").unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1]);
        assert_eq!(t.exponent, 3);
        assert!(t.values[1].iter().any(|v| v.as_rational().is_none()));
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn psl27_degrees() {
        let g = grpzoo::build(&GroupSpec::lie(Family::Psl, 2, 7, 1)).unwrap();
        let t = dixon_table(&g, "PSL(2,7)").unwrap();
        assert_eq!(t.degrees(), vec![1, 3, 3, 6, 7, 8]);
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn a5_and_a6() {
        let t = an_table(5).unwrap();
        let mut d = t.degrees();
        d.sort();
        assert_eq!(d, vec![1, 3, 3, 4, 5]);
        assert!(validate(&t).is_empty(), "{:?}", validate(&t));
        let t6 = an_table(6).unwrap();
        assert!(validate(&t6).is_empty());
        let irrational = |t: &CharacterTable, d: u128| {
            t.values
                .iter()
                .filter(|row| t.degree_of(row) == d && row.iter().any(|v| v.as_rational().is_none()))
                .count()
        };
        assert_eq!(irrational(&t, 3), 2);
        assert_eq!(irrational(&t6, 8), 2);
    }

    #[test]
    fn perturbed_table_is_rejected() {
        let mut t = sn_table(4).unwrap();
        t.values[2][1] = &t.values[2][1] + &Cyclotomic::one(t.exponent);
        assert!(!validate(&t).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let t = an_table(5).unwrap();
        let back = CharacterTable::from_json(t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn out_of_range() {
        assert!(sn_table(0).is_err());
        assert!(sn_table(16).is_err());
        assert!(an_table(4).is_err());
    }

    impl CharacterTable {
        fn degree_of(&self, row: &[Cyclotomic]) -> u128 {
            row[0].as_integer().unwrap().to_u128().unwrap()
        }
    }
}
