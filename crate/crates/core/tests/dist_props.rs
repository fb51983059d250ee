//! Distributed protocols: determinism, metering, frozen round and message
//! constants, one-sidedness, verifier completeness and Las Vegas repeats.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use smallcut::congest::{self, SimConfig};
use smallcut::dist::bfs::{dist_bfs, BfsProtocol};
use smallcut::dist::circulation::{dist_cut_edges, dist_cut_vertices, dist_wide_circulation};
use smallcut::dist::cut_pairs::dist_cut_pairs;
use smallcut::dist::verify::{verify_cut_edges, verify_cut_pairs, verify_cut_vertices};
use smallcut::dist::{DistConfig, Session};
use smallcut::generators::{
    bowtie, cycle, fig6, grid, path, random_connected, random_two_edge_connected, theta, twin_k4,
};
use smallcut::gf2::Gf2Matrix;
use smallcut::graph::{EdgeId, Graph};
use smallcut::circulation::BitWidth;
use smallcut::lv::{dist_report, seq_report, Algo, Attempts};
use smallcut::oracle::{connected_graph_catalog, oracle_blocks, oracle_bridges_articulations, oracle_cut_classes, oracle_report};

/// Round constants, frozen from the suite below: `rounds <= c·D + c0` for a
/// whole Las Vegas run of each stage.
const EDGE_ROUNDS: (u64, u64) = (7, 12);
const PAIR_ROUNDS: (u64, u64) = (21, 30);
const VERTEX_ROUNDS: (u64, u64) = (10, 20);
/// Message constants, frozen the same way.
const EDGE_MESSAGES_PER_EDGE: u64 = 2;
const FC_CAST_FACTOR: u64 = 2;
/// Whole Las Vegas cut-pair run, including the BFS and cut-edge stages that
/// add an `O(m)` term.
const PAIR_MESSAGES_FACTOR: u64 = 8;

fn suite() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in [4, 8, 16, 32, 64] {
        out.push(path(n).unwrap());
        out.push(cycle(n).unwrap());
    }
    for k in [2, 3, 5, 8] {
        out.push(grid(k, k + 1).unwrap());
    }
    for s in 0..6u64 {
        let k = s as usize;
        out.push(random_connected(10 + 6 * k, 14 + 12 * k, s).unwrap());
        out.push(random_two_edge_connected(10 + 6 * k, 16 + 10 * k, s).unwrap());
    }
    out.extend([fig6(), bowtie(), twin_k4(), theta(&[2, 3, 4]).unwrap()]);
    out
}

fn bridgeless(g: &Graph) -> bool {
    oracle_bridges_articulations(g).0.is_empty()
}

#[test]
fn rounds_are_linear_in_the_diameter() {
    for g in suite() {
        let d = g.diameter() as u64;
        let mut algos = vec![(Algo::CutEdges, EDGE_ROUNDS), (Algo::CutVertices, VERTEX_ROUNDS)];
        if bridgeless(&g) {
            algos.push((Algo::CutPairs, PAIR_ROUNDS));
        }
        for (algo, (c, c0)) in algos {
            let run = dist_report(&g, DistConfig::new(1), algo, true).unwrap();
            let rounds = run.session.metrics.rounds;
            assert!(rounds <= c * d + c0, "{algo} on n={} D={d}: {rounds} rounds", g.n());
        }
    }
}

#[test]
fn messages_within_frozen_bounds() {
    for g in suite() {
        let (n, m) = (g.n() as u64, g.m() as u64);
        let h = smallcut::graph::bfs_tree(&g, 0).unwrap().height() as u64;
        let run = dist_report(&g, DistConfig::new(2), Algo::CutEdges, false).unwrap();
        let circ = run.session.phases.iter().find(|p| p.name == "circulation").unwrap();
        assert!(circ.metrics.messages <= EDGE_MESSAGES_PER_EDGE * m);
        if !bridgeless(&g) {
            continue;
        }
        let pairs = dist_report(&g, DistConfig::new(2), Algo::CutPairs, true).unwrap();
        for phase in pairs.session.phases.iter().filter(|p| p.name == "fc-cast") {
            let bound = FC_CAST_FACTOR * ((m * h).min(n * n) + m);
            assert!(phase.metrics.messages <= bound, "fc-cast {} > {bound}", phase.metrics.messages);
        }
        let d = g.diameter() as u64;
        let total = pairs.session.metrics.messages;
        assert!(total <= PAIR_MESSAGES_FACTOR * ((m * d).min(n * n) + m), "pairs n={n} m={m} D={d}: {total}");
    }
}

/// A graph set small enough to run 10⁵ times.
fn small_graphs() -> Vec<Graph> {
    connected_graph_catalog(5)
        .into_iter()
        .chain([bowtie(), twin_k4(), theta(&[2, 2, 2]).unwrap(), cycle(6).unwrap()])
        .collect()
}

#[test]
fn distributed_monte_carlo_is_one_sided() {
    let graphs = small_graphs();
    let prepared: Vec<_> = graphs
        .iter()
        .map(|g| {
            let mut s = Session::new(DistConfig::new(0));
            let (trees, _) = dist_bfs(&mut s, g, 0).unwrap();
            (trees, oracle_bridges_articulations(g), oracle_cut_classes(g), bridgeless(g))
        })
        .collect();
    for i in 0..100_000u64 {
        let k = i as usize % graphs.len();
        let g = &graphs[k];
        let (trees, (bridges, cut_vertices), classes, no_bridges) = &prepared[k];
        let mut s = Session::new(DistConfig::new(i));
        let (edges, _) = dist_cut_edges(&mut s, g, 0, trees, i).unwrap();
        assert!(bridges.is_subset(&edges));
        let (vertices, _) = dist_cut_vertices(&mut s, g, 0, trees, i).unwrap();
        assert!(cut_vertices.iter().all(|v| vertices.contains(v)));
        if *no_bridges && g.m() > 0 {
            // True classes always share one value; see the sequential test for
            // why the zero value can still drop one.
            let out = dist_cut_pairs(&mut s, g, 0, trees, i).unwrap();
            for c in classes {
                assert!(c.iter().all(|&e| out.phi.value(e) == out.phi.value(c[0])));
                if !out.phi.is_zero_at(c[0]) {
                    assert!(c.iter().all(|&e| out.members.contains(e)));
                }
            }
        }
    }
}

fn canonical(mut classes: Vec<Vec<EdgeId>>) -> Vec<Vec<EdgeId>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

/// Whether the column dependencies of `phi` at every vertex give exactly the
/// true local block partition.
fn locally_exact(g: &Graph, phi: &smallcut::circulation::BitCirculation) -> bool {
    let blocks = oracle_blocks(g);
    (0..g.n()).all(|v| {
        let cols = Gf2Matrix::vertex_columns(g, v);
        let Some(parts) = Gf2Matrix::at_vertex(g, phi, v).zero_sum_partition() else {
            return false;
        };
        let got: BTreeSet<Vec<EdgeId>> = parts
            .into_iter()
            .map(|p| {
                let mut es: Vec<EdgeId> = p.into_iter().map(|j| cols[j]).collect();
                es.sort_unstable();
                es
            })
            .collect();
        let mut want = std::collections::BTreeMap::<EdgeId, Vec<EdgeId>>::new();
        for &e in &cols {
            want.entry(blocks[e]).or_default().push(e);
        }
        let want: BTreeSet<Vec<EdgeId>> = want.into_values().map(|mut es| { es.sort_unstable(); es }).collect();
        got == want
    })
}

fn mean(xs: impl IntoIterator<Item = usize>) -> f64 {
    let (sum, count) = xs.into_iter().fold((0, 0), |(s, c), x| (s + x, c + 1));
    sum as f64 / count.max(1) as f64
}

fn stage_attempts(a: &Attempts) -> Vec<usize> {
    let mut out = vec![a.cut_edges, a.blocks];
    out.extend(&a.cut_classes);
    out.retain(|&k| k > 0);
    out
}

/// Mean repeats per verified stage stay within `1/(1 − 1/n) + 0.1`, and every
/// accepted run equals the oracle.
#[test]
fn las_vegas_repeats_are_rare() {
    for g in suite().into_iter().filter(|g| g.n() <= 32) {
        let bound = 1.0 / (1.0 - 1.0 / g.n() as f64) + 0.1;
        let oracle = oracle_report(&g);
        let seq: Vec<usize> = (0..200)
            .flat_map(|seed| {
                let run = seq_report(&g, seed, Algo::All, true, 200).unwrap();
                assert!(run.report.diff(&oracle).is_empty());
                stage_attempts(&run.attempts)
            })
            .collect();
        assert!(mean(seq.iter().copied()) <= bound, "seq n={}: {}", g.n(), mean(seq));
        let dist: Vec<usize> = (0..10)
            .flat_map(|seed| {
                let run = dist_report(&g, DistConfig::new(seed), Algo::CutPairs, true).unwrap();
                assert!(run.report.diff(&oracle).is_empty());
                stage_attempts(&run.attempts)
            })
            .collect();
        assert!(mean(dist.iter().copied()) <= bound, "dist n={}: {}", g.n(), mean(dist));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn runs_and_transcripts_are_deterministic(g in common::connected(1, 14), seed in any::<u64>(), pick in 0usize..6) {
        let algo: Algo = Algo::NAMES[pick].parse().unwrap();
        let mut cfg = DistConfig::new(seed);
        cfg.trace = true;
        let a = dist_report(&g, cfg.clone(), algo, true).unwrap();
        let b = dist_report(&g, cfg, algo, true).unwrap();
        prop_assert_eq!(a.report.to_json(), b.report.to_json());
        prop_assert_eq!(&a.session.trace, &b.session.trace);
        prop_assert_eq!(&a.session.phases, &b.session.phases);
    }

    /// Reported metrics equal a recount of the transcript.
    #[test]
    fn metering_matches_the_transcript(g in common::connected(1, 20), seed in any::<u64>()) {
        let mut cfg = SimConfig::for_graph(&g, seed);
        cfg.record_trace = true;
        let run = congest::run(&g, &BfsProtocol, &cfg).unwrap();
        prop_assert_eq!(run.metrics.messages, run.trace.len() as u64);
        prop_assert_eq!(run.metrics.messages, run.per_round_messages.iter().sum::<u64>());
        let widest = run.trace.iter().map(|t| t.payload.len_bits()).max().unwrap_or(0);
        prop_assert_eq!(run.metrics.max_payload_bits, widest);
        prop_assert_eq!(run.metrics.rounds, run.done_round);
        prop_assert!(run.trace.iter().all(|t| t.round <= run.done_round));

        let mut dcfg = DistConfig::new(seed);
        dcfg.trace = true;
        let d = dist_report(&g, dcfg, Algo::All, true).unwrap();
        let s = &d.session;
        prop_assert_eq!(s.metrics.messages, s.trace.len() as u64);
        prop_assert_eq!(s.metrics.messages, s.phases.iter().map(|p| p.metrics.messages).sum::<u64>());
        prop_assert_eq!(s.metrics.rounds, s.phases.iter().map(|p| p.metrics.rounds).sum::<u64>());
        let hex_bits = s.trace.iter().map(|l| 4 * l.rsplit(' ').next().unwrap().len()).max().unwrap_or(0);
        prop_assert_eq!(hex_bits, s.metrics.max_payload_bits.div_ceil(4) * 4);
    }

    #[test]
    fn verifiers_accept_correct_candidates(g in common::connected(2, 16), seed in any::<u64>()) {
        let mut s = Session::new(DistConfig::new(seed));
        let (trees, _) = dist_bfs(&mut s, &g, 0).unwrap();
        let (bridges, _) = oracle_bridges_articulations(&g);
        prop_assert!(verify_cut_edges(&mut s, &g, 0, &trees, &bridges).unwrap().is_accept());

        let width = BitWidth::for_cut_vertices(g.n(), trees[0].max_degree).get();
        let phi = dist_wide_circulation(&mut s, &g, 0, &trees, width, seed).unwrap();
        if locally_exact(&g, &phi) {
            prop_assert!(verify_cut_vertices(&mut s, &g, 0, &trees, &phi).unwrap().is_accept());
        }

        if bridgeless(&g) {
            let out = dist_cut_pairs(&mut s, &g, 0, &trees, seed).unwrap();
            let got = canonical(out.classes.iter().map(|(_, es)| es.clone()).collect());
            if got == canonical(oracle_cut_classes(&g)) {
                prop_assert!(verify_cut_pairs(&mut s, &g, 0, &trees, &out.phi).unwrap().is_accept());
            }
        }
    }
}
