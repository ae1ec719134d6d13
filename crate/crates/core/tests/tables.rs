mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use sylgal::arith;
use sylgal::chartab::{self, CharacterTable};
use sylgal::cyclo::GaloisMap;
use sylgal::grpzoo::{self, Family, GroupSpec};

fn dixon(spec: &GroupSpec) -> CharacterTable {
    let g = grpzoo::build(spec).unwrap();
    chartab::dixon_table(&g, &spec.name()).unwrap()
}

fn parse_partition(label: &str) -> Vec<u32> {
    label.split_whitespace().map(|x| x.parse().unwrap()).collect()
}

/// Multiset of per-row column signatures, invariant under reordering rows and classes.
fn signature(t: &CharacterTable) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = t
        .values
        .iter()
        .map(|row| {
            let mut cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let v = v.restrict(v.field_conductor()).unwrap();
                    format!("{}|{}|{}", t.rep_orders[k], t.class_sizes[k], v.to_json_value())
                })
                .collect();
            cells.sort();
            cells
        })
        .collect();
    rows.sort();
    rows
}

#[test]
fn galois_conjugates_of_rows_are_rows() {
    let mut tables = vec![dixon(&GroupSpec::lie(Family::Psl, 2, 7, 1)), dixon(&GroupSpec::lie(Family::Psl, 2, 8, 1))];
    tables.push(dixon(&GroupSpec::lie(Family::Psu, 3, 2, -1)));
    tables.push(dixon(&GroupSpec::sporadic("M11")));
    for n in 5..=9 {
        tables.push(chartab::an_table(n).unwrap());
    }
    for t in &tables {
        for k in 1..t.exponent {
            if arith::gcd(k, t.exponent) != 1 {
                continue;
            }
            let g = GaloisMap::new(t.exponent, k as i64).unwrap();
            for row in &t.values {
                let image: Vec<_> = row.iter().map(|v| g.apply(v).unwrap()).collect();
                assert!(t.values.contains(&image), "{}: row not closed under zeta -> zeta^{k}", t.group);
            }
        }
    }
}

#[test]
fn alternating_tables_agree_with_dixon() {
    for n in 5..=7 {
        let symbolic = chartab::an_table(n).unwrap();
        let computed = dixon(&GroupSpec::alt(n));
        assert_eq!(symbolic.num_classes(), computed.num_classes(), "A{n}");
        let mut a = symbolic.degrees();
        let mut b = computed.degrees();
        a.sort();
        b.sort();
        assert_eq!(a, b, "A{n} degrees");
        assert_eq!(signature(&symbolic), signature(&computed), "A{n}");
    }
}

#[test]
fn symmetric_degrees_follow_hook_lengths() {
    for n in 1..=12 {
        let t = chartab::sn_table(n).unwrap();
        let want: BTreeMap<Vec<u32>, u128> =
            common::partitions(n).into_iter().map(|l| (l.clone(), common::hook_degree(&l))).collect();
        assert_eq!(t.num_classes(), want.len());
        for (row, label) in t.row_labels.iter().enumerate() {
            assert_eq!(t.degree(row), want[&parse_partition(label)], "S{n} {label}");
        }
    }
}

#[test]
fn json_round_trip() {
    for t in [chartab::an_table(6).unwrap(), dixon(&GroupSpec::lie(Family::Psl, 2, 8, 1))] {
        let back = CharacterTable::from_json(t.to_json()).unwrap();
        assert_eq!(back.values, t.values);
        assert_eq!(back.power_maps, t.power_maps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symmetric_tables_validate(n in 1u32..=9) {
        let t = chartab::sn_table(n).unwrap();
        prop_assert!(chartab::validate(&t).is_empty());
        let sum: u128 = t.degrees().iter().map(|d| d * d).sum();
        prop_assert_eq!(sum, t.order);
    }

    #[test]
    fn alternating_tables_validate(n in 5u32..=10) {
        let t = chartab::an_table(n).unwrap();
        prop_assert!(chartab::validate(&t).is_empty());
    }
}
