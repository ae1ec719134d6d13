mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sylgal::grpzoo::{self, Family, GroupSpec};
use sylgal::permgrp::PermGroup;

fn small_three_groups() -> Vec<(String, PermGroup)> {
    let c = grpzoo::cyclic;
    let dp = grpzoo::direct_product;
    let wr = |a: &PermGroup, b: &PermGroup| grpzoo::wreath_product(a, b).unwrap();
    let aff = |m, r| grpzoo::affine_cyclic(m, r).unwrap();
    let e3 = dp(&c(3), &c(3));
    let e27 = dp(&e3, &c(3));
    let mut out: Vec<(String, PermGroup)> = vec![
        ("1".into(), PermGroup::trivial(1)),
        ("C3".into(), c(3)),
        ("C9".into(), c(9)),
        ("C27".into(), c(27)),
        ("C81".into(), c(81)),
        ("C243".into(), c(243)),
        ("C3^2".into(), e3.clone()),
        ("C3^3".into(), e27.clone()),
        ("C3^4".into(), dp(&e27, &c(3))),
        ("C3^5".into(), dp(&dp(&e27, &c(3)), &c(3))),
        ("C9xC3".into(), dp(&c(9), &c(3))),
        ("C9xC9".into(), dp(&c(9), &c(9))),
        ("C27xC9".into(), dp(&c(27), &c(9))),
        ("C9:C3".into(), aff(9, 4)),
        ("C27:C3".into(), aff(27, 10)),
        ("C27:C9".into(), aff(27, 4)),
        ("C81:C3".into(), aff(81, 28)),
        ("(C9:C3)xC3".into(), dp(&aff(9, 4), &c(3))),
        ("(C9:C3)xC9".into(), dp(&aff(9, 4), &c(9))),
        ("(C27:C3)xC3".into(), dp(&aff(27, 10), &c(3))),
        ("C3wrC3".into(), wr(&c(3), &c(3))),
        ("(C3wrC3)xC3".into(), dp(&wr(&c(3), &c(3)), &c(3))),
    ];
    for n in [3, 6, 9, 12] {
        let spec = GroupSpec::sym(n);
        let g = grpzoo::build(&spec).unwrap();
        out.push((format!("Syl3(S{n})"), grpzoo::syl3(&spec, &g).unwrap()));
    }
    for spec in [
        GroupSpec::lie(Family::Gl, 3, 4, 1),
        GroupSpec::lie(Family::Sl, 3, 4, 1),
        GroupSpec::lie(Family::Psl, 3, 4, 1),
        GroupSpec::lie(Family::Gl, 2, 7, 1),
        GroupSpec::lie(Family::Psu, 3, 2, -1),
        GroupSpec::lie(Family::Psl, 4, 2, 1),
        GroupSpec::sporadic("M12"),
    ] {
        let g = grpzoo::build(&spec).unwrap();
        out.push((format!("Syl3({})", spec.name()), grpzoo::syl3(&spec, &g).unwrap()));
    }
    out
}

#[test]
fn library_rank_matches_closure_oracle() {
    for (name, p) in small_three_groups() {
        assert!(p.order() <= 243, "{name} has order {}", p.order());
        assert_eq!(p.frattini_rank_3group().unwrap(), common::frattini_rank_oracle(&p), "{name}");
    }
}

fn ambient() -> PermGroup {
    grpzoo::build(&GroupSpec::wreath_tower(vec![1, 1, 1])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_subgroups_of_a_tower(seed in any::<u64>(), k in 1usize..4) {
        let g = ambient();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<_> = (0..k).map(|_| g.random_element(&mut rng)).collect();
        let h = g.subgroup(gens).unwrap();
        prop_assume!(h.order() <= 243);
        prop_assert_eq!(h.frattini_rank_3group().unwrap(), common::frattini_rank_oracle(&h));
    }
}
