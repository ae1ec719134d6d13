//! Independent test-side oracles.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use sylgal::permgrp::PermGroup;

/// Partitions of `n` in any order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=n.min(max) {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate(p: &[u32]) -> Vec<u32> {
    let m = p.first().copied().unwrap_or(0);
    (1..=m).map(|i| p.iter().filter(|&&x| x >= i).count() as u32).collect()
}

/// `n! / Π hooks`.
pub fn hook_degree(p: &[u32]) -> u128 {
    let n: u32 = p.iter().sum();
    let c = conjugate(p);
    let num: u128 = (1..=n as u128).product();
    let mut den: u128 = 1;
    for (i, &row) in p.iter().enumerate() {
        for j in 0..row as usize {
            den *= ((row as usize - j - 1) + (c[j] as usize - i - 1) + 1) as u128;
        }
    }
    num / den
}

/// 3-core by sliding beads up on a 3-runner abacus.
pub fn three_core(p: &[u32]) -> Vec<u32> {
    let k = p.len();
    let beta: Vec<u32> = p.iter().enumerate().map(|(i, &x)| x + (k - 1 - i) as u32).collect();
    let mut per_runner = [0u32; 3];
    for b in &beta {
        per_runner[(b % 3) as usize] += 1;
    }
    let mut packed: Vec<u32> = Vec::new();
    for r in 0..3u32 {
        for j in 0..per_runner[r as usize] {
            packed.push(r + 3 * j);
        }
    }
    packed.sort_unstable_by(|a, b| b.cmp(a));
    let m = packed.len();
    let mut core: Vec<u32> = packed.iter().enumerate().map(|(i, &b)| b - (m - 1 - i) as u32).collect();
    core.retain(|&x| x > 0);
    core
}

fn principal_core(n: u32) -> Vec<u32> {
    three_core(&[n])
}

/// `k₀(B₀(S_n))` from 3-cores and hook lengths.
pub fn k0_sym(n: u32) -> usize {
    let core = principal_core(n);
    partitions(n)
        .into_iter()
        .filter(|l| three_core(l) == core && hook_degree(l) % 3 != 0)
        .count()
}

/// `k₀(B₀(A_n))`: restrictions from both sign-twisted principal blocks of `S_n`.
pub fn k0_alt(n: u32) -> usize {
    let core = principal_core(n);
    let core_c = conjugate(&core);
    let mut count = 0;
    for l in partitions(n) {
        let c = three_core(&l);
        if (c != core && c != core_c) || hook_degree(&l) % 3 == 0 {
            continue;
        }
        let lc = conjugate(&l);
        if lc == l {
            count += 2;
        } else if l > lc {
            count += 1;
        }
    }
    count
}

type Elt = Vec<u16>;

fn compose(a: &Elt, b: &Elt) -> Elt {
    // apply a, then b
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &Elt) -> Elt {
    let mut out = vec![0u16; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u16;
    }
    out
}

fn closure(degree: usize, gens: &[Elt]) -> HashSet<Elt> {
    let id: Elt = (0..degree as u16).collect();
    let mut seen: HashSet<Elt> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Frattini rank of a 3-group by element enumeration: `|P : P'P³| = 3^d`.
pub fn frattini_rank_oracle(p: &PermGroup) -> u32 {
    let degree = p.degree();
    let gens: Vec<Elt> =
        p.generators().iter().map(|g| g.images().into_iter().map(|x| x as u16).collect()).collect();
    let elements: Vec<Elt> = closure(degree, &gens).into_iter().collect();
    let mut phi_gens: Vec<Elt> = Vec::new();
    for g in &gens {
        phi_gens.push(compose(&compose(g, g), g));
    }
    for a in &gens {
        for b in &gens {
            let c = compose(&compose(&invert(a), &invert(b)), &compose(a, b));
            phi_gens.push(c);
        }
    }
    // normal closure of ⟨commutators of generators, cubes of generators⟩ plus cubes of all elements
    for x in &elements {
        phi_gens.push(compose(&compose(x, x), x));
    }
    let mut phi = closure(degree, &phi_gens);
    loop {
        let mut extra = Vec::new();
        for y in &phi {
            for g in &gens {
                let c = compose(&compose(&invert(g), y), g);
                if !phi.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            break;
        }
        let mut all: Vec<Elt> = phi.iter().cloned().collect();
        all.extend(extra);
        phi = closure(degree, &all);
    }
    let mut index = elements.len() / phi.len();
    let mut d = 0;
    while index > 1 {
        assert_eq!(index % 3, 0, "not a 3-group");
        index /= 3;
        d += 1;
    }
    d
}
