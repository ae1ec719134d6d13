//! Brute-force pipeline and corpus entries: construct, find a Sylow
//! 3-subgroup, compute its Frattini rank, the character table, the principal
//! block and the σ report, and compare with the closed forms.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{self, BlockError};
use crate::chartab::{self, CharacterTable, TableError};
use crate::classify::{self, ClassifyError, Rank, Stated};
use crate::grpzoo::{self, Family, GroupSpec, ZooError};
use crate::permgrp::{PermError, PermGroup, DEFAULT_CLASS_BOUND};

pub const DEFAULT_MAX_CLASSES: usize = 500;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("{what} bound exceeded: {actual} > {limit}")]
    Bound { what: &'static str, limit: u128, actual: u128 },
}

impl PipelineError {
    /// Whether the failure is a size bound rather than a defect.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            PipelineError::Bound { .. }
                | PipelineError::Perm(PermError::BoundExceeded { .. })
                | PipelineError::Zoo(ZooError::DegreeTooLarge { .. })
                | PipelineError::Zoo(ZooError::FieldTooLarge(_))
                | PipelineError::Zoo(ZooError::OrderTooLarge)
                | PipelineError::Zoo(ZooError::SylowBudget { .. })
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest group order whose elements are enumerated for a table.
    pub max_order: u128,
    pub max_classes: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_order: DEFAULT_CLASS_BOUND,
            max_classes: DEFAULT_MAX_CLASSES,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Closed forms only.
    Formula,
    /// Closed forms and the Sylow rank.
    Rank,
    /// Everything, character table included.
    Full,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub build_ms: f64,
    pub sylow_ms: f64,
    pub table_ms: f64,
    pub blocks_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub spec: GroupSpec,
    pub group: String,
    pub stage: Stage,
    #[serde(with = "big_order")]
    pub order: Option<u128>,
    pub rank_formula: Option<Rank>,
    pub two_generated_formula: Option<bool>,
    pub rank_bruteforce: Option<u32>,
    pub k0: Option<usize>,
    pub k0_sigma: Option<usize>,
    pub k0_formula: Option<Stated>,
    pub k0_sigma_formula: Option<Stated>,
    pub num_blocks: Option<usize>,
    pub theorem_a_consistent: Option<bool>,
    pub seed: u64,
    pub timings: Option<Timings>,
}

/// Orders beyond `u64` are written as decimal strings.
mod big_order {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(x) => match u64::try_from(*x) {
                Ok(small) => s.serialize_u64(small),
                Err(_) => s.serialize_str(&x.to_string()),
            },
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(x)) => Ok(Some(x as u128)),
            Some(Repr::Str(s)) => s.parse().map(Some).map_err(D::Error::custom),
        }
    }
}

/// Individual comparisons between the legs present in an entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl CorpusEntry {
    fn bare(spec: &GroupSpec, stage: Stage, seed: u64) -> CorpusEntry {
        CorpusEntry {
            spec: spec.clone(),
            group: spec.name(),
            stage,
            order: None,
            rank_formula: None,
            two_generated_formula: None,
            rank_bruteforce: None,
            k0: None,
            k0_sigma: None,
            k0_formula: None,
            k0_sigma_formula: None,
            num_blocks: None,
            theorem_a_consistent: None,
            seed,
            timings: None,
        }
    }

    /// Every cross-check whose inputs are present.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let mut push = |name, ok, detail: String| out.push(Check { name, ok, detail });
        if let (Some(Rank::Known(f)), Some(b)) = (self.rank_formula, self.rank_bruteforce) {
            push("rank", f == b, format!("formula {f}, brute force {b}"));
        }
        if let (Some(t), Some(b)) = (self.two_generated_formula, self.rank_bruteforce) {
            push("two_generated", t == (b == 2), format!("formula {t}, brute-force rank {b}"));
        }
        let rank = self.rank_bruteforce.or(self.rank_formula.and_then(Rank::known));
        if let (Some(r), Some(ks)) = (rank, self.k0_sigma) {
            let divisible = self.order.is_none_or(|o| o % 3 == 0);
            if divisible {
                push(
                    "theorem_a",
                    (r == 2) == blocks::predicts_two_generated(ks),
                    format!("rank {r}, k0_sigma {ks}"),
                );
            }
        }
        if let (Some(Stated::Value(f)), Some(k)) = (self.k0_formula, self.k0) {
            push("k0", f as usize == k, format!("formula {f}, computed {k}"));
        }
        if let (Some(Stated::Value(f)), Some(k)) = (self.k0_sigma_formula, self.k0_sigma) {
            push("k0_sigma", f as usize == k, format!("formula {f}, computed {k}"));
        }
        if let (Some(k0), Some(ks)) = (self.k0, self.k0_sigma) {
            push("k0_sigma_le_k0", ks <= k0, format!("k0 {k0}, k0_sigma {ks}"));
        }
        out
    }

    /// Conjunction of the available checks, `None` when there are none.
    pub fn consistency(&self) -> Option<bool> {
        let checks = self.checks();
        if checks.is_empty() {
            None
        } else {
            Some(checks.iter().all(|c| c.ok))
        }
    }
}

/// Table for `g`: combinatorial for symmetric and alternating groups, Dixon otherwise.
pub fn character_table(spec: &GroupSpec, g: &PermGroup, bounds: Bounds) -> Result<CharacterTable, PipelineError> {
    let n = spec.n;
    let table = match spec.family {
        Family::Sym if (1..=chartab::SN_MAX).contains(&n) => chartab::sn_table(n)?,
        Family::Alt if (5..=chartab::SN_MAX).contains(&n) => chartab::an_table(n)?,
        _ => {
            let order = g.order();
            if order > bounds.max_order {
                return Err(PipelineError::Bound {
                    what: "max-order",
                    limit: bounds.max_order,
                    actual: order,
                });
            }
            let cc = g.conjugacy_classes_bounded(bounds.max_order)?;
            if cc.len() > bounds.max_classes {
                return Err(PipelineError::Bound {
                    what: "max-classes",
                    limit: bounds.max_classes as u128,
                    actual: cc.len() as u128,
                });
            }
            chartab::dixon_from_classes(&cc, &spec.name())?
        }
    };
    if table.num_classes() > bounds.max_classes {
        return Err(PipelineError::Bound {
            what: "max-classes",
            limit: bounds.max_classes as u128,
            actual: table.num_classes() as u128,
        });
    }
    Ok(table)
}

fn fill_formula(entry: &mut CorpusEntry, spec: &GroupSpec) -> Result<(), ClassifyError> {
    match classify::theorem_a_predict(spec) {
        Ok(rec) => {
            entry.rank_formula = Some(rec.rank);
            entry.two_generated_formula = Some(rec.two_generated);
            entry.k0_formula = Some(rec.k0_formula);
            entry.k0_sigma_formula = Some(rec.k0_sigma_formula);
            Ok(())
        }
        Err(ClassifyError::NotCovered(_)) => Ok(()),
        Err(e) => Err(e),
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e5).round() / 100.0
}

/// Runs the pipeline up to `stage`. Timings are recorded only when `timed`.
pub fn run(spec: &GroupSpec, stage: Stage, seed: u64, bounds: Bounds, timed: bool) -> Result<CorpusEntry, PipelineError> {
    run_with_table(spec, stage, seed, bounds, timed).map(|(e, _)| e)
}

/// As [`run`], also returning the character table at the full stage.
pub fn run_with_table(
    spec: &GroupSpec,
    stage: Stage,
    seed: u64,
    bounds: Bounds,
    timed: bool,
) -> Result<(CorpusEntry, Option<CharacterTable>), PipelineError> {
    let mut entry = CorpusEntry::bare(spec, stage, seed);
    if let Err(e) = fill_formula(&mut entry, spec) {
        return Err(PipelineError::Zoo(ZooError::Invalid(e.to_string())));
    }
    if stage == Stage::Formula {
        entry.theorem_a_consistent = entry.consistency();
        return Ok((entry, None));
    }
    let mut timings = Timings::default();
    let t = Instant::now();
    let g = grpzoo::build(spec)?;
    if let (Family::External, Some(path)) = (spec.family, spec.path.as_deref()) {
        entry.group = grpzoo::load_external(path)?.0;
    }
    entry.order = Some(g.order());
    timings.build_ms = ms(t);

    let t = Instant::now();
    let p = grpzoo::syl3_seeded(spec, &g, seed)?;
    entry.rank_bruteforce = Some(p.frattini_rank_3group()?);
    timings.sylow_ms = ms(t);

    let mut computed = None;
    if stage == Stage::Full {
        let t = Instant::now();
        let table = character_table(spec, &g, bounds)?;
        timings.table_ms = ms(t);
        let t = Instant::now();
        let partition = blocks::block_partition(&table)?;
        let sigma = blocks::sigma_report(&table, &partition)?;
        entry.k0 = Some(sigma.k0);
        entry.k0_sigma = Some(sigma.k0_sigma);
        entry.num_blocks = Some(partition.blocks.len());
        timings.blocks_ms = ms(t);
        computed = Some(table);
    }
    entry.theorem_a_consistent = entry.consistency();
    if timed {
        entry.timings = Some(timings);
    }
    Ok((entry, computed))
}

/// Entry as a JSON value with sorted keys.
pub fn entry_json(entry: &CorpusEntry) -> serde_json::Value {
    serde_json::to_value(entry).expect("serializable")
}

/// A corpus item: the spec and how far to run it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub spec: GroupSpec,
    pub stage: Stage,
}

fn item(spec: GroupSpec, stage: Stage) -> CorpusItem {
    CorpusItem { spec, stage }
}

/// The bundled corpus.
pub fn default_corpus() -> Vec<CorpusItem> {
    let mut out = Vec::new();
    for n in 3..=13 {
        let stage = if n <= 12 { Stage::Full } else { Stage::Rank };
        out.push(item(GroupSpec::sym(n), stage));
    }
    for n in 3..=13 {
        let stage = if (5..=11).contains(&n) { Stage::Full } else { Stage::Rank };
        out.push(item(GroupSpec::alt(n), stage));
    }
    for tower in [vec![1], vec![1, 1], vec![1, 1, 1], vec![2], vec![2, 1], vec![1, 2]] {
        out.push(item(GroupSpec::wreath_tower(tower), Stage::Rank));
    }
    let linear = [(2, 4, 1), (3, 4, 1), (3, 7, 1), (4, 7, 1), (2, 7, 1), (3, 2, -1), (2, 5, 1), (4, 2, 1)];
    for (n, q, eps) in linear {
        let fams: [Family; 3] = if eps == 1 {
            [Family::Gl, Family::Sl, Family::Psl]
        } else {
            [Family::Gu, Family::Su, Family::Psu]
        };
        for f in fams {
            let spec = GroupSpec::lie(f, n, q, eps);
            let order = spec.expected_order().unwrap_or(u128::MAX);
            let stage = if order <= 200_000 { Stage::Full } else { Stage::Rank };
            out.push(item(spec, stage));
        }
    }
    for (f, n, q, eps) in [
        (Family::Pgl, 3, 4, 1),
        (Family::Pgl, 4, 7, 1),
        (Family::Psl, 5, 7, 1),
        (Family::Pgl, 5, 7, 1),
        (Family::Psl, 2, 8, 1),
        (Family::Psl, 2, 9, 1),
        (Family::Psl, 2, 27, 1),
        (Family::Psl, 3, 3, 1),
        (Family::Psu, 3, 3, -1),
        (Family::Psu, 4, 2, -1),
        (Family::Gu, 5, 2, -1),
    ] {
        let spec = GroupSpec::lie(f, n, q, eps);
        let order = spec.expected_order().unwrap_or(u128::MAX);
        let stage = if order <= 200_000 { Stage::Full } else { Stage::Rank };
        out.push(item(spec, stage));
    }
    out.push(item(GroupSpec::sporadic("M11"), Stage::Full));
    out.push(item(GroupSpec::sporadic("M12"), Stage::Full));
    // closed forms only: groups far beyond enumeration
    for (f, n, q, eps) in [
        (Family::Psl, 4, 7, 1),
        (Family::Psl, 4, 19, 1),
        (Family::Psl, 4, 109, 1),
        (Family::Psu, 4, 5, -1),
        (Family::Psl, 6, 2, 1),
        (Family::Psl, 6, 17, 1),
        (Family::Psl, 7, 53, 1),
        (Family::Psu, 7, 4, -1),
        (Family::Psl, 3, 7, 1),
        (Family::Psp, 6, 2, 1),
        (Family::Psp, 4, 5, 1),
        (Family::POmega, 7, 5, 1),
        (Family::POmegaMinus, 8, 2, 1),
        (Family::POmegaPlus, 8, 5, 1),
        (Family::G2, 0, 4, 1),
        (Family::D4Triality, 0, 2, 1),
        (Family::F4Twisted, 0, 8, 1),
        (Family::E6, 0, 2, 1),
    ] {
        out.push(item(GroupSpec::lie(f, n, q, eps), Stage::Formula));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psl27_entry() {
        let spec = GroupSpec::lie(Family::Psl, 2, 7, 1);
        let e = run(&spec, Stage::Full, 0, Bounds::default(), false).unwrap();
        assert_eq!(e.rank_bruteforce, Some(1));
        assert_eq!(e.k0_sigma, Some(3));
        assert_eq!(e.theorem_a_consistent, Some(true));
        assert_eq!(e.timings, None);
        let back: CorpusEntry = serde_json::from_value(entry_json(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn hand_edited_rank_is_caught() {
        let spec = GroupSpec::sym(9);
        let mut e = run(&spec, Stage::Full, 0, Bounds::default(), false).unwrap();
        assert_eq!(e.consistency(), Some(true));
        e.rank_bruteforce = Some(3);
        assert_eq!(e.consistency(), Some(false));
    }

    #[test]
    fn formula_only_entries_have_null_legs() {
        let spec = GroupSpec::lie(Family::Psl, 4, 7, 1);
        let e = run(&spec, Stage::Formula, 0, Bounds::default(), false).unwrap();
        assert_eq!(e.order, None);
        assert_eq!(e.k0_formula, Some(Stated::Value(9)));
        assert_eq!(e.theorem_a_consistent, None);
    }

    #[test]
    fn huge_orders_round_trip() {
        let mut e = run(&GroupSpec::sym(3), Stage::Rank, 0, Bounds::default(), false).unwrap();
        e.order = Some(u128::from(u64::MAX) * 7);
        let v = entry_json(&e);
        assert!(v["order"].is_string());
        let back: CorpusEntry = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn order_bound() {
        let spec = GroupSpec::lie(Family::Psl, 3, 4, 1);
        let tight = Bounds { max_order: 1000, ..Bounds::default() };
        let err = run(&spec, Stage::Full, 0, tight, false).unwrap_err();
        assert!(err.is_bound());
        assert!(err.to_string().contains("max-order"));
    }
}
