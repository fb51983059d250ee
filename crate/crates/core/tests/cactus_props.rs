//! Ear decompositions, pinching and the cactus certifier against oracles.

mod common;

use proptest::prelude::*;
use rand::Rng;

use smallcut::cactus::{certify_cut_classes, ear_decomposition, is_valid_ear_decomposition, pinch_relation};
use smallcut::circulation::{random_circulation, BitWidth};
use smallcut::dsu::UnionFind;
use smallcut::graph::{bfs_tree, Graph};
use smallcut::oracle::{connected_graph_catalog, oracle_3ec_classes, oracle_bridges_articulations, oracle_cut_classes};
use smallcut::report::canonical_labels;
use smallcut::rng::Prng;
use smallcut::Verdict;

fn canonical(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ear_decompositions_are_valid(g in common::bridgeless(3, 40)) {
        let dec = ear_decomposition(&g).unwrap();
        prop_assert!(is_valid_ear_decomposition(g.n(), g.edges(), &dec));
    }

    /// Each cut class lies within a single ear.
    #[test]
    fn classes_stay_on_one_ear(g in common::bridgeless(3, 24)) {
        let dec = ear_decomposition(&g).unwrap();
        let mut ear_of = vec![0; g.m()];
        for (i, ear) in dec.ears.iter().enumerate() {
            for &e in &ear.edges {
                ear_of[e] = i;
            }
        }
        for class in oracle_cut_classes(&g) {
            prop_assert!(class.iter().all(|&e| ear_of[e] == ear_of[class[0]]), "class {:?}", class);
        }
    }

    /// Pinching every ear along the true cut classes, with every other edge
    /// pinched alone, yields exactly 3-edge-connectivity.
    #[test]
    fn pinching_by_true_classes_gives_three_edge_connectivity(g in common::bridgeless(3, 20)) {
        let dec = ear_decomposition(&g).unwrap();
        let mut class_of = vec![None; g.m()];
        let classes = oracle_cut_classes(&g);
        for (i, c) in classes.iter().enumerate() {
            for &e in c {
                class_of[e] = Some(i);
            }
        }
        let mut uf = UnionFind::new(g.n());
        for ear in &dec.ears {
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for &e in &ear.edges {
                match class_of[e] {
                    Some(c) if groups.iter().any(|gr| class_of[gr[0]] == Some(c)) => {
                        groups.iter_mut().find(|gr| class_of[gr[0]] == Some(c)).unwrap().push(e);
                    }
                    _ => groups.push(vec![e]),
                }
            }
            for group in groups {
                for (a, b) in pinch_relation(ear, &group).unwrap() {
                    uf.union(a, b);
                }
            }
        }
        prop_assert_eq!(canonical_labels(&uf.labels()), canonical_labels(&oracle_3ec_classes(&g)));
    }
}

/// The certifier never accepts a wrong set of classes: low widths make
/// colliding values common, and random bit flips break circulations.
#[test]
fn certifier_never_accepts_wrong_classes() {
    let graphs: Vec<Graph> = connected_graph_catalog(6)
        .into_iter()
        .filter(|g| g.m() > 0 && oracle_bridges_articulations(g).0.is_empty())
        .collect();
    let truth: Vec<_> = graphs.iter().map(|g| canonical(oracle_cut_classes(g))).collect();
    let trees: Vec<_> = graphs.iter().map(|g| bfs_tree(g, 0).unwrap()).collect();
    let mut rng = Prng::new(0xcac7);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    for i in 0..100_000 {
        let k = i % graphs.len();
        let g = &graphs[k];
        let width = BitWidth::new(rng.gen_range(1..=6)).unwrap();
        let mut phi = random_circulation(g, &trees[k], width, &mut rng);
        if rng.gen_bool(0.1) {
            phi.flip(rng.gen_range(0..g.m()), rng.gen_range(0..width.get()));
        }
        match certify_cut_classes(g, &phi).unwrap() {
            Verdict::Accept(cert) => {
                accepted += 1;
                assert_eq!(canonical(cert.classes), truth[k], "{}", g.to_text());
            }
            Verdict::Reject(_) => rejected += 1,
        }
    }
    assert!(accepted > 10_000 && rejected > 10_000, "{accepted} / {rejected}");
}
