//! 3-blocks of a character table, the principal block, and the σ action on
//! its height-zero characters.

use std::collections::HashMap;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::chartab::CharacterTable;
use crate::cyclo::{self, CycloError, Cyclotomic, Mod3Reducer};

#[derive(Debug, Error)]
pub enum BlockError {
    #[error("central character of row {row} on class {class} is not an algebraic integer")]
    NotIntegral { row: usize, class: usize },
    #[error("row {0} has no image under sigma")]
    SigmaUnmatched(usize),
    #[error("index out of range")]
    Index,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    /// Row sets, each sorted, ordered by least row.
    pub blocks: Vec<Vec<usize>>,
    pub principal: usize,
    pub defect: u32,
}

impl BlockPartition {
    pub fn principal_rows(&self) -> &[usize] {
        &self.blocks[self.principal]
    }

    pub fn block_of(&self, row: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&row).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub k0: usize,
    pub k0_sigma: usize,
    /// σ-fixed height-zero rows of the principal block.
    pub fixed_rows: Vec<usize>,
    /// Sizes of the σ-orbits on all rows, ascending.
    pub orbit_sizes: Vec<usize>,
}

/// `ω_χ(K) = |K| χ(g_K) / χ(1)`.
pub fn central_character(t: &CharacterTable, row: usize, class: usize) -> Result<Cyclotomic, BlockError> {
    let value = t.values.get(row).and_then(|r| r.get(class)).ok_or(BlockError::Index)?;
    let ratio = BigRational::new(BigInt::from(t.class_sizes[class]), BigInt::from(t.degree(row)));
    let w = value.scale(&ratio);
    if !w.is_integral() {
        return Err(BlockError::NotIntegral { row, class });
    }
    Ok(w)
}

/// Smallest cyclotomic field (by conductor dividing the exponent) holding every value.
pub fn values_conductor(t: &CharacterTable) -> u64 {
    t.values
        .iter()
        .flatten()
        .fold(1u64, |acc, v| arith::lcm(acc, v.field_conductor()))
}

/// Reducer on the value field with the canonical root.
pub fn default_reducer(t: &CharacterTable) -> Result<Mod3Reducer, BlockError> {
    Ok(Mod3Reducer::new(values_conductor(t))?)
}

/// An exponent `u` sending the canonical root to a different primitive root, or 1 if none exists.
pub fn alternative_root_power(t: &CharacterTable) -> Result<u64, BlockError> {
    let base = default_reducer(t)?;
    let d = values_conductor(t);
    let d3 = d / 3u64.pow(arith::valuation(d as u128, 3));
    Ok((2..d3.max(2))
        .filter(|&u| arith::gcd(u, d3) == 1)
        .find(|&u| base.root().pow(u as u128) != *base.root())
        .unwrap_or(1))
}

pub fn block_partition(t: &CharacterTable) -> Result<BlockPartition, BlockError> {
    block_partition_with(t, &default_reducer(t)?)
}

/// Block partition using `ζ ↦ root^u` in the residue field.
pub fn block_partition_with_root_power(t: &CharacterTable, u: u64) -> Result<BlockPartition, BlockError> {
    block_partition_with(t, &default_reducer(t)?.with_root_power(u)?)
}

fn block_partition_with(t: &CharacterTable, red: &Mod3Reducer) -> Result<BlockPartition, BlockError> {
    let d = red.conductor();
    let r = t.num_classes();
    let mut keys: Vec<(Vec<u128>, Vec<usize>)> = Vec::new();
    for row in 0..t.values.len() {
        let mut key = Vec::with_capacity(r);
        for class in 0..r {
            let w = central_character(t, row, class)?.restrict(d)?;
            key.push(red.reduce(&w)?.index());
        }
        match keys.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(row),
            None => keys.push((key, vec![row])),
        }
    }
    let blocks: Vec<Vec<usize>> = keys.into_iter().map(|(_, rows)| rows).collect();
    let principal = blocks.iter().position(|b| b.contains(&0)).expect("row 0 exists");
    Ok(BlockPartition {
        blocks,
        principal,
        defect: arith::valuation(t.order, 3),
    })
}

/// Row permutation induced by σ on the table.
pub fn sigma_permutation(t: &CharacterTable) -> Result<Vec<usize>, BlockError> {
    let s = cyclo::sigma(t.exponent);
    let index: HashMap<&Vec<Cyclotomic>, usize> = t.values.iter().enumerate().map(|(i, r)| (r, i)).collect();
    t.values
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if s.is_identity() {
                return Ok(i);
            }
            let image = row.iter().map(|v| cyclo::galois_apply(&s, v)).collect::<Result<Vec<_>, _>>()?;
            index.get(&image).copied().ok_or(BlockError::SigmaUnmatched(i))
        })
        .collect()
}

pub fn sigma_report(t: &CharacterTable, partition: &BlockPartition) -> Result<SigmaReport, BlockError> {
    let perm = sigma_permutation(t)?;
    let height_zero: Vec<usize> =
        partition.principal_rows().iter().copied().filter(|&r| t.degree(r) % 3 != 0).collect();
    let fixed_rows: Vec<usize> = height_zero.iter().copied().filter(|&r| perm[r] == r).collect();
    let mut seen = vec![false; perm.len()];
    let mut orbit_sizes = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        orbit_sizes.push(len);
    }
    orbit_sizes.sort_unstable();
    Ok(SigmaReport {
        k0: height_zero.len(),
        k0_sigma: fixed_rows.len(),
        fixed_rows,
        orbit_sizes,
    })
}

/// The per-group verdict: `(rank = 2) ⟺ k0_sigma ∈ {6, 9}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub group: String,
    pub order: u128,
    pub defect: u32,
    pub k0: usize,
    pub k0_sigma: usize,
    pub rank: u32,
    pub two_generated: bool,
    pub theorem_a_consistent: bool,
}

pub fn predicts_two_generated(k0_sigma: usize) -> bool {
    k0_sigma == 6 || k0_sigma == 9
}

pub fn theorem_a_check(
    group: &str,
    t: &CharacterTable,
    syl3rank: u32,
) -> Result<(TheoremAReport, BlockPartition, SigmaReport), BlockError> {
    let partition = block_partition(t)?;
    let sigma = sigma_report(t, &partition)?;
    let two_generated = syl3rank == 2;
    let report = TheoremAReport {
        group: group.to_string(),
        order: t.order,
        defect: partition.defect,
        k0: sigma.k0,
        k0_sigma: sigma.k0_sigma,
        rank: syl3rank,
        two_generated,
        theorem_a_consistent: two_generated == predicts_two_generated(sigma.k0_sigma),
    };
    Ok((report, partition, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{an_table, dixon_table, sn_table};
    use crate::grpzoo;

    #[test]
    fn central_character_examples() {
        let t = sn_table(3).unwrap();
        // rows (3), (2,1), (1,1,1); columns 1^3, 2 1, 3
        assert_eq!(central_character(&t, 1, 2).unwrap(), Cyclotomic::from_int(t.exponent, -1));
        assert_eq!(central_character(&t, 0, 1).unwrap(), Cyclotomic::from_int(t.exponent, 3));
        for row in 0..3 {
            assert_eq!(central_character(&t, row, 0).unwrap(), Cyclotomic::one(t.exponent));
        }
    }

    #[test]
    fn s3_and_c3_are_one_block() {
        let p = block_partition(&sn_table(3).unwrap()).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2]]);
        let c3 = dixon_table(&grpzoo::cyclic(3), "C3").unwrap();
        let p = block_partition(&c3).unwrap();
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.defect, 1);
    }

    #[test]
    fn three_prime_order_gives_singletons() {
        let t = dixon_table(&grpzoo::cyclic(4), "C4").unwrap();
        let p = block_partition(&t).unwrap();
        assert_eq!(p.blocks.len(), 4);
        assert_eq!(p.principal_rows(), &[0]);
        assert_eq!(p.defect, 0);
    }

    #[test]
    fn s4_blocks() {
        let t = sn_table(4).unwrap();
        let p = block_partition(&t).unwrap();
        // 3-cores: (4),(2,1,1),(1^4) share core (1); (3,1) and (2,2) have degree 3 and 2
        let b = &p.blocks[p.principal];
        assert!(b.contains(&0));
        assert_eq!(p.blocks.iter().map(|b| b.len()).sum::<usize>(), 5);
        for row in 0..5 {
            if t.degree(row) % 3 == 0 {
                assert_eq!(p.blocks[p.block_of(row).unwrap()].len(), 1);
            }
        }
    }

    #[test]
    fn an_sigma_fixed() {
        let t = an_table(9).unwrap();
        let p = block_partition(&t).unwrap();
        let s = sigma_report(&t, &p).unwrap();
        assert_eq!(s.k0, s.k0_sigma);
        assert!(s.orbit_sizes.iter().all(|&o| o == 1));
    }

    #[test]
    fn psl27_negative_case() {
        let g = grpzoo::build(&grpzoo::GroupSpec::lie(grpzoo::Family::Psl, 2, 7, 1)).unwrap();
        let t = dixon_table(&g, "PSL(2,7)").unwrap();
        let (r, _, s) = theorem_a_check("PSL(2,7)", &t, 1).unwrap();
        assert_eq!(s.k0_sigma, 3);
        assert!(r.theorem_a_consistent);
    }

    #[test]
    fn alternative_root_agrees() {
        let t = an_table(7).unwrap();
        let u = alternative_root_power(&t).unwrap();
        assert_eq!(block_partition(&t).unwrap(), block_partition_with_root_power(&t, u).unwrap());
    }
}
