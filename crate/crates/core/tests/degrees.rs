mod common;

use common::*;
use proptest::prelude::*;
use ramdeg::arrows::Mode;
use ramdeg::category::FiniteCategory;
use ramdeg::degrees::{
    big_degree_exact, check_monotonicity, check_multiplicativity, check_sub_representation, small_degree_bounds,
    small_degree_exact, DegreeValue, SmallDegreeQuery,
};
use ramdeg::structures::Structure;
use ramdeg::SearchConfig;

fn cat_of(pool: &[(&str, &Structure)]) -> FiniteCategory {
    FiniteCategory::from_pool(pool.iter().map(|(n, s)| (n.to_string(), (*s).clone())).collect()).unwrap()
}

fn big(s: &Structure, a: &Structure, copies: bool) -> usize {
    let cat = cat_of(&[("S", s), ("A", a)]);
    let mode = if copies { Mode::Objects } else { Mode::Morphisms };
    big_degree_exact(&cat, 0, 1, mode, &SearchConfig::default())
        .unwrap()
        .value
        .exact()
        .unwrap()
}

fn small(pool: &[Structure], a: usize, copies: bool) -> usize {
    let named: Vec<(String, Structure)> = pool
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("X{i}"), s.clone()))
        .collect();
    let cat = FiniteCategory::from_pool(named).unwrap();
    let mode = if copies { Mode::Objects } else { Mode::Morphisms };
    small_degree_exact(&cat, a, mode, &SearchConfig::default())
        .unwrap()
        .value
        .exact()
        .unwrap()
}

fn k2() -> Structure {
    graph(2, &[(0, 1)])
}
fn p3() -> Structure {
    graph(3, &[(0, 1), (1, 2)])
}
fn c4() -> Structure {
    graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
}
fn k3() -> Structure {
    graph(3, &[(0, 1), (1, 2), (0, 2)])
}

// Expected values below were produced by the brute-force oracle in
// `common` and are checked against it again here.
#[test]
fn big_degrees_match_frozen_oracle_values() {
    let cases: [(Structure, Structure, bool, usize); 10] = [
        (chain(4), chain(2), true, 6),
        (chain(5), chain(2), false, 10),
        (p3(), k2(), false, 4),
        (p3(), k2(), true, 2),
        (c4(), k2(), false, 8),
        (c4(), k2(), true, 4),
        (c4(), graph(2, &[]), false, 4),
        (c4(), graph(2, &[]), true, 2),
        (p3(), graph(1, &[]), false, 3),
        (k3(), k2(), true, 3),
    ];
    for (s, a, copies, expected) in cases {
        assert_eq!(oracle_big_degree(&s, &a, copies), expected);
        assert_eq!(big(&s, &a, copies), expected, "{s:?} {a:?} copies={copies}");
    }
    assert_eq!(big(&k3(), &k2(), false), 6);
}

#[test]
fn rigid_host_degree_is_class_count() {
    for n in 2..=6 {
        let cat = cat_of(&[("S", &chain(n)), ("A", &chain(2))]);
        let r = big_degree_exact(&cat, 0, 1, Mode::Objects, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, DegreeValue::Exact(n * (n - 1) / 2));
    }
}

#[test]
fn small_degrees_match_frozen_oracle_values() {
    let chains: Vec<Structure> = (1..=4).map(chain).collect();
    assert_eq!(oracle_small_degree(&chains, &chain(2), true), 6);
    assert_eq!(small(&chains, 1, true), 6);
    assert_eq!(oracle_small_degree(&chains, &chain(1), true), 4);
    assert_eq!(small(&chains, 0, true), 4);

    let graphs = vec![
        graph(1, &[]),
        k2(),
        graph(2, &[]),
        p3(),
        k3(),
        graph(3, &[]),
        graph(3, &[(0, 1)]),
    ];
    for (a, copies, expected) in [(0, false, 3), (1, false, 6), (1, true, 3), (2, false, 6), (2, true, 3)] {
        assert_eq!(oracle_small_degree(&graphs, &graphs[a], copies), expected);
        assert_eq!(small(&graphs, a, copies), expected);
    }
}

#[test]
fn bounded_query_reports_its_scope() {
    let pool: Vec<(String, Structure)> = (1..=4).map(|n| (format!("C{n}"), chain(n))).collect();
    let cat = FiniteCategory::from_pool(pool).unwrap();
    let q = SmallDegreeQuery {
        k_max: Some(2),
        ..Default::default()
    };
    let r = small_degree_bounds(&cat, 1, &q, Mode::Objects, &SearchConfig::default()).unwrap();
    assert_ne!(r.scope, "category");
    let chains: Vec<Structure> = (1..=4).map(chain).collect();
    let expected = (1..)
        .find(|&t| {
            chains
                .iter()
                .all(|b| chains.iter().any(|c| problem(c, b, &chain(2), true).holds(2, t)))
        })
        .unwrap();
    assert_eq!(expected, 2);
    assert_eq!(r.value, DegreeValue::Exact(expected));
}

fn arb_pair() -> impl Strategy<Value = (Structure, Structure)> {
    (arb_graph(4), arb_graph(3)).prop_filter("small domain", |(s, a)| problem(s, s, a, false).domain <= 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn big_degree_matches_oracle((s, a) in arb_pair(), copies: bool) {
        prop_assert_eq!(big(&s, &a, copies), oracle_big_degree(&s, &a, copies));
    }

    #[test]
    fn big_degree_is_positive_and_rigid_hosts_count_classes((s, a) in arb_pair()) {
        let cat = cat_of(&[("S", &s), ("A", &a)]);
        let r = big_degree_exact(&cat, 0, 1, Mode::Objects, &SearchConfig::default()).unwrap();
        let v = r.value.exact().unwrap();
        prop_assert!(v >= 1);
        if cat.hom(0, 0).len() == 1 {
            prop_assert_eq!(v, cat.hom_classes(1, 0).len().max(1));
        }
    }

    #[test]
    fn embedding_degree_is_automorphism_multiple((s, a) in arb_pair()) {
        let cat = cat_of(&[("S", &s), ("A", &a)]);
        let r = check_multiplicativity(&cat, 1, 0, &SearchConfig::default()).unwrap();
        prop_assert!(!r.outcome.is_violated(), "{:?}", r);
        if !cat.hom(1, 0).is_empty() {
            prop_assert!(r.outcome.is_verified());
            prop_assert_eq!(big(&s, &a, false), cat.automorphisms(1).len() * big(&s, &a, true));
        }
    }

    #[test]
    fn weakly_homogeneous_pairs_are_monotone(s in arb_graph(4), a in arb_graph(2), b in arb_graph(3)) {
        prop_assume!(problem(&s, &s, &b, false).domain <= 8);
        let cat = cat_of(&[("S", &s), ("A", &a), ("B", &b)]);
        let r = check_monotonicity(&cat, 0, 1, 2, &SearchConfig::default()).unwrap();
        prop_assert!(!r.outcome.is_violated(), "{:?}", r);
    }

    #[test]
    fn small_degree_equals_big_degree_in_power_category(sizes in proptest::collection::vec(1usize..=3, 1..=3)) {
        let mut sizes = sizes;
        sizes.sort_unstable();
        sizes.dedup();
        let pool: Vec<(String, Structure)> = sizes.iter().map(|&n| (format!("C{n}"), chain(n))).collect();
        let cat = FiniteCategory::from_pool(pool).unwrap();
        for a in cat.objects() {
            let r = check_sub_representation(&cat, a, &SearchConfig::default()).unwrap();
            prop_assert!(r.outcome.is_verified(), "{:?}", r);
        }
    }
}
