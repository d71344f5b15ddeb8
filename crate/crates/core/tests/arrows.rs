mod common;

use common::*;
use proptest::prelude::*;
use ramdeg::arrows::{arrow, find_bad_coloring, oligochromatic_witness, Mode};
use ramdeg::category::FiniteCategory;
use ramdeg::structures::Structure;
use ramdeg::SearchConfig;

fn triple(c: &Structure, b: &Structure, a: &Structure) -> FiniteCategory {
    FiniteCategory::from_pool(vec![
        ("C".into(), c.clone()),
        ("B".into(), b.clone()),
        ("A".into(), a.clone()),
    ])
    .unwrap()
}

fn mode(copies: bool) -> Mode {
    if copies {
        Mode::Objects
    } else {
        Mode::Morphisms
    }
}

fn lib_arrow(c: &Structure, b: &Structure, a: &Structure, k: usize, t: usize, copies: bool) -> bool {
    let cat = triple(c, b, a);
    arrow(&cat, 0, 1, 2, k, t, mode(copies), &SearchConfig::default())
        .unwrap()
        .holds
}

#[test]
fn oracle_reproduces_classical_ramsey_number() {
    assert_eq!(ramsey_three_three(), 6);
    assert!(oracle_arrow(&chain(6), &chain(3), &chain(2), 2, 1, true));
    assert!(!oracle_arrow(&chain(5), &chain(3), &chain(2), 2, 1, true));
}

#[test]
fn pair_colorings_of_chains_match_oracle() {
    // Frozen from the oracle: C_n -> (C_3)^{C_2}_{2,1} first holds at n = 6.
    for n in 3..=6 {
        let holds = lib_arrow(&chain(n), &chain(3), &chain(2), 2, 1, true);
        assert_eq!(holds, n == 6, "n = {n}");
        assert_eq!(holds, oracle_arrow(&chain(n), &chain(3), &chain(2), 2, 1, true));
    }
}

#[test]
fn refutation_of_five_element_chain_survives_recheck() {
    let cat = triple(&chain(5), &chain(3), &chain(2));
    let cert = find_bad_coloring(&cat, 0, 1, 2, 2, 1, Mode::Objects, &SearchConfig::default())
        .unwrap()
        .expect("C5 does not arrow");
    assert_eq!(cert.colors.len(), 10);
    assert_eq!(
        oligochromatic_witness(&cat, 0, 1, 2, 1, Mode::Objects, &cert.colors).unwrap(),
        None
    );
    // Re-check with the oracle's own view of the problem, whose domain order
    // is the lexicographic order of the copies.
    let p = problem(&chain(5), &chain(3), &chain(2), true);
    let by_copy: Vec<(Vec<usize>, usize)> = cert
        .domain
        .iter()
        .zip(&cert.colors)
        .map(|(&m, &c)| {
            let mut image = cat.map(m).unwrap().to_vec();
            image.sort_unstable();
            (image, c)
        })
        .collect();
    let mut sorted = by_copy.clone();
    sorted.sort();
    let colors: Vec<usize> = sorted.into_iter().map(|(_, c)| c).collect();
    assert!(p.refutes(&colors, 1));
}

#[test]
fn graph_instances_match_oracle() {
    let k2 = graph(2, &[(0, 1)]);
    let p3 = graph(3, &[(0, 1), (1, 2)]);
    let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    for (c, b) in [(&c4, &p3), (&k3, &k2), (&c4, &k2), (&p3, &p3)] {
        for copies in [true, false] {
            for k in 1..=3 {
                for t in 1..=3 {
                    assert_eq!(
                        lib_arrow(c, b, &k2, k, t, copies),
                        oracle_arrow(c, b, &k2, k, t, copies),
                        "k={k} t={t} copies={copies}"
                    );
                }
            }
        }
    }
}

#[test]
fn empty_candidate_set_fails_and_empty_domain_holds() {
    let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let e3 = graph(3, &[]);
    // No copy of E3 in K3.
    assert!(!lib_arrow(&k3, &e3, &graph(1, &[]), 2, 1, true));
    // No copy of E2 in K3, but the identity on K3 exists.
    assert!(lib_arrow(&k3, &k3, &graph(2, &[]), 2, 1, true));
    assert!(oracle_arrow(&k3, &k3, &graph(2, &[]), 2, 1, true));
}

fn small_triples() -> impl Strategy<Value = (Structure, Structure, Structure)> {
    (
        arb_digraph(2),
        arb_digraph(3),
        prop_oneof![arb_graph(4).boxed(), arb_digraph(3).boxed()],
    )
        .prop_map(|(a, b, c)| (c, b, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn verdict_matches_oracle((c, b, a) in small_triples(), k in 1usize..=3, t in 1usize..=3, copies: bool) {
        prop_assume!(problem(&c, &b, &a, copies).domain <= 8);
        prop_assert_eq!(lib_arrow(&c, &b, &a, k, t, copies), oracle_arrow(&c, &b, &a, k, t, copies));
    }

    #[test]
    fn extra_colors_beyond_domain_change_nothing((c, b, a) in small_triples(), t in 1usize..=3, copies: bool) {
        let cat = triple(&c, &b, &a);
        let cfg = SearchConfig::default();
        let n = cat.hom(2, 0).len().max(1);
        let at_n = arrow(&cat, 0, 1, 2, n, t, mode(copies), &cfg).unwrap();
        let above = arrow(&cat, 0, 1, 2, n + 3, t, mode(copies), &cfg).unwrap();
        prop_assert_eq!(at_n.holds, above.holds);
        prop_assert_eq!(at_n.certificate, above.certificate);
    }

    #[test]
    fn larger_threshold_is_easier((c, b, a) in small_triples(), k in 1usize..=3, t in 1usize..=3, copies: bool) {
        let cat = triple(&c, &b, &a);
        let cfg = SearchConfig::default();
        let lo = arrow(&cat, 0, 1, 2, k, t, mode(copies), &cfg).unwrap();
        let hi = arrow(&cat, 0, 1, 2, k, t + 1, mode(copies), &cfg).unwrap();
        prop_assert!(!lo.holds || hi.holds);
        if let Some(cert) = &hi.certificate {
            prop_assert_eq!(oligochromatic_witness(&cat, 0, 1, 2, t, mode(copies), &cert.colors).unwrap(), None);
        }
    }

    #[test]
    fn certificates_defeat_every_candidate((c, b, a) in small_triples(), k in 1usize..=3, t in 1usize..=2, copies: bool) {
        let cat = triple(&c, &b, &a);
        let r = arrow(&cat, 0, 1, 2, k, t, mode(copies), &SearchConfig::default()).unwrap();
        if let Some(cert) = &r.certificate {
            prop_assert!(cert.colors.iter().all(|&x| x < k));
            prop_assert_eq!(oligochromatic_witness(&cat, 0, 1, 2, t, mode(copies), &cert.colors).unwrap(), None);
        }
    }

    #[test]
    fn embeddings_and_copies_agree_up_to_automorphisms((c, b, a) in small_triples(), t in 1usize..=2) {
        let cat = triple(&c, &b, &a);
        let cfg = SearchConfig::default();
        let aut = cat.automorphisms(2).len();
        let objects = arrow(&cat, 0, 1, 2, 64, t, Mode::Objects, &cfg).unwrap();
        let morphisms = arrow(&cat, 0, 1, 2, 64, t * aut, Mode::Morphisms, &cfg).unwrap();
        prop_assert_eq!(objects.holds, morphisms.holds);
    }

    #[test]
    fn pruning_and_threads_keep_the_answer((c, b, a) in small_triples(), k in 1usize..=3, t in 1usize..=2, copies: bool) {
        let cat = triple(&c, &b, &a);
        let plain = arrow(&cat, 0, 1, 2, k, t, mode(copies), &SearchConfig::default()).unwrap();
        let tuned = arrow(&cat, 0, 1, 2, k, t, mode(copies), &SearchConfig::default().with_pruning(true).with_jobs(4)).unwrap();
        prop_assert_eq!(plain.holds, tuned.holds);
        prop_assert_eq!(plain.certificate, tuned.certificate);
    }
}
