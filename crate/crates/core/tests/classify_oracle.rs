use sylgal::classify::{self, Rank};
use sylgal::grpzoo::{Family, GroupSpec};
use sylgal::pipeline::{self, Bounds, Stage};

fn degree_bound_ok(spec: &GroupSpec) -> bool {
    let field = if spec.eps == -1 { spec.q * spec.q } else { spec.q };
    let vectors = field.pow(spec.n) - 1;
    let points = vectors / (field - 1);
    match spec.family {
        Family::Gl | Family::Sl | Family::Gu | Family::Su => vectors <= 3000,
        _ => points <= 3000,
    }
}

#[test]
fn formula_rank_matches_bruteforce_on_a_grid() {
    let mut compared = 0;
    for (n, q, eps) in [
        (2, 2, 1),
        (3, 2, 1),
        (4, 2, 1),
        (5, 2, 1),
        (2, 4, 1),
        (3, 4, 1),
        (4, 4, 1),
        (2, 5, 1),
        (3, 5, 1),
        (4, 5, 1),
        (2, 7, 1),
        (3, 7, 1),
        (2, 8, 1),
        (3, 8, 1),
        (2, 11, 1),
        (2, 13, 1),
        (3, 13, 1),
        (2, 2, -1),
        (3, 2, -1),
        (4, 2, -1),
        (2, 4, -1),
        (3, 4, -1),
        (2, 5, -1),
        (3, 5, -1),
        (2, 8, -1),
    ] {
        let fams: [Family; 4] = if eps == 1 {
            [Family::Gl, Family::Sl, Family::Psl, Family::Pgl]
        } else {
            [Family::Gu, Family::Su, Family::Psu, Family::Pgu]
        };
        for f in fams {
            let spec = GroupSpec::lie(f, n, q, eps);
            if !degree_bound_ok(&spec) {
                continue;
            }
            let e = pipeline::run(&spec, Stage::Rank, 0, Bounds::default(), false).unwrap();
            let b = e.rank_bruteforce.unwrap();
            match e.rank_formula.unwrap() {
                Rank::Known(r) => {
                    assert_eq!(r, b, "{}", spec.name());
                    assert_eq!(classify::two_generated(&spec).unwrap(), b == 2, "{}", spec.name());
                    compared += 1;
                }
                Rank::Unknown => {}
            }
        }
    }
    assert!(compared >= 40, "only {compared} comparisons");
}

#[test]
fn symmetric_and_alternating_digit_formula() {
    for n in 1..=24u32 {
        let spec = GroupSpec::sym(n);
        let e = pipeline::run(&spec, Stage::Rank, 0, Bounds::default(), false).unwrap();
        assert_eq!(e.rank_formula, Some(Rank::Known(e.rank_bruteforce.unwrap())), "S{n}");
        if n >= 3 {
            let spec = GroupSpec::alt(n);
            let e = pipeline::run(&spec, Stage::Rank, 0, Bounds::default(), false).unwrap();
            assert_eq!(e.rank_formula, Some(Rank::Known(e.rank_bruteforce.unwrap())), "A{n}");
        }
    }
}
