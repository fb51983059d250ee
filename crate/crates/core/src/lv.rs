//! Full pipelines: Monte Carlo detection, optionally repeated until a
//! verifier accepts, assembled into a [`CutReport`].
//!
//! Cut pairs are computed per 2-edge-connected component, after the cut
//! edges are known. Components are processed one after another.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitString;
use crate::blocks::{verify_blocks, BlockStructure};
use crate::cactus::{certify_cut_classes, CactusError};
use crate::circulation::{random_circulation, BitCirculation, BitWidth};
use crate::dist::bfs::dist_bfs;
use crate::dist::circulation::{dist_cut_edges, dist_cut_vertices, dist_wide_circulation};
use crate::dist::components::{dist_three_ecc, dist_two_ecc};
use crate::dist::cut_pairs::dist_cut_pairs;
use crate::dist::verify::{verify_cut_edges, verify_cut_pairs, verify_cut_vertices};
use crate::dist::{DistConfig, DistError, LocalTree, Session};
use crate::graph::{bfs_tree, EdgeId, EdgeSet, Graph, GraphError, RootedTree, Subgraph, Vertex};
use crate::report::{canonical_labels, CutReport};
use crate::rng::{derive_seed, Prng};
use crate::seq::{
    classes_from_phi, cut_vertices_from_phi, spanning_tree, three_ecc_labels, two_ecc_labels, zero_edges,
    SeqError,
};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LvError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Cactus(#[from] CactusError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("{stage}: no verified output after {attempts} attempts")]
    GaveUp { stage: &'static str, attempts: usize },
}

/// Which outputs to compute. Later outputs pull in what they depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    CutEdges,
    CutPairs,
    CutVertices,
    TwoEcc,
    ThreeEcc,
    All,
}

impl Algo {
    pub const NAMES: [&'static str; 6] = ["cut-edges", "cut-pairs", "cut-vertices", "two-ecc", "three-ecc", "all"];

    fn needs_edges(self) -> bool {
        !matches!(self, Algo::CutVertices)
    }

    fn needs_pairs(self) -> bool {
        matches!(self, Algo::CutPairs | Algo::ThreeEcc | Algo::All)
    }

    /// Whether the 3-ecc labels, and with them the flood phase, are computed.
    pub fn needs_three_ecc(self) -> bool {
        matches!(self, Algo::ThreeEcc | Algo::All)
    }

    fn needs_vertices(self) -> bool {
        matches!(self, Algo::CutVertices | Algo::All)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Algo::CutEdges => 0,
            Algo::CutPairs => 1,
            Algo::CutVertices => 2,
            Algo::TwoEcc => 3,
            Algo::ThreeEcc => 4,
            Algo::All => 5,
        };
        f.write_str(Self::NAMES[i])
    }
}

impl FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "cut-edges" => Algo::CutEdges,
            "cut-pairs" | "cut-classes" => Algo::CutPairs,
            "cut-vertices" | "blocks" => Algo::CutVertices,
            "two-ecc" => Algo::TwoEcc,
            "three-ecc" => Algo::ThreeEcc,
            "all" => Algo::All,
            _ => return Err(format!("unknown algorithm {s:?}; expected one of {}", Self::NAMES.join(", "))),
        })
    }
}

/// How many tries each verified stage took.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Attempts {
    pub cut_edges: usize,
    /// One entry per 2-edge-connected component with at least one edge.
    pub cut_classes: Vec<usize>,
    pub blocks: usize,
}

const EDGE_STAGE: u64 = 1;
const CLASS_STAGE: u64 = 2;
const BLOCK_STAGE: u64 = 3;

type Classes = Vec<(BitString, Vec<EdgeId>)>;

/// 2-edge-connected components that carry edges, as subgraphs without the
/// cut edges.
pub fn edge_components(g: &Graph, cut_edges: &EdgeSet) -> Vec<Subgraph> {
    let label = g.component_labels(|e| !cut_edges.contains(e));
    let mut members: std::collections::BTreeMap<Vertex, Vec<Vertex>> = Default::default();
    for (v, &l) in label.iter().enumerate() {
        members.entry(l).or_default().push(v);
    }
    members
        .into_values()
        .filter(|vs| vs.len() >= 3)
        .map(|vs| g.subgraph(&vs, |e| !cut_edges.contains(e)))
        .collect()
}

fn lift_classes(sub: &Subgraph, classes: Classes) -> Classes {
    classes
        .into_iter()
        .map(|(v, edges)| {
            let mut e: Vec<EdgeId> = edges.into_iter().map(|e| sub.edge_map[e]).collect();
            e.sort_unstable();
            (v, e)
        })
        .collect()
}

fn fill_classes(r: &mut CutReport, classes: Classes) {
    r.set_classes(classes.into_iter().map(|(v, e)| (Some(v.to_string()), e)).collect());
}

fn pair_edges(g: &Graph, r: &CutReport) -> EdgeSet {
    EdgeSet::from_edges(g.m(), r.cut_pair_edges.clone().unwrap_or_default())
}

// ------------------------------------------------------------- sequential

/// Accept iff `candidate`, assumed to contain every cut edge, is exactly the
/// cut edges: it must lie in `t`, and every non-tree edge must stay within one
/// component of `t` minus the candidate. On accept, returns those
/// components' labels.
pub fn verify_cut_edges_seq(g: &Graph, t: &RootedTree, candidate: &EdgeSet) -> Verdict<Vec<Vertex>> {
    if let Some(e) = candidate.iter().find(|&e| !t.is_tree_edge(e)) {
        return Verdict::Reject(format!("non-tree edge {e} flagged"));
    }
    let label = g.component_labels(|e| t.is_tree_edge(e) && !candidate.contains(e));
    for e in (0..g.m()).filter(|&e| !t.is_tree_edge(e)) {
        let (u, v) = g.edge(e);
        if label[u] != label[v] {
            return Verdict::Reject(format!("non-tree edge {e} joins two components"));
        }
    }
    Verdict::Accept(label)
}

/// One verified stage's output, the circulation behind it, and the number
/// of tries it took.
pub type Verified<T> = (T, BitCirculation, usize);

pub fn seq_cut_edges_lv(g: &Graph, rng: &mut Prng, max_attempts: usize) -> Result<Verified<EdgeSet>, LvError> {
    let t = spanning_tree(g)?;
    for attempt in 1..=max_attempts {
        let phi = random_circulation(g, &t, BitWidth::for_cut_edges(g.n(), g.m()), rng);
        let candidate = zero_edges(&phi);
        if verify_cut_edges_seq(g, &t, &candidate).is_accept() {
            return Ok((candidate, phi, attempt));
        }
    }
    Err(LvError::GaveUp {
        stage: "cut edges",
        attempts: max_attempts,
    })
}

/// Cut classes of one bridge-free component, certified by contraction.
pub fn seq_component_classes_lv(
    g: &Graph,
    rng: &mut Prng,
    max_attempts: usize,
) -> Result<Verified<Classes>, LvError> {
    let t = bfs_tree(g, 0)?;
    let width = BitWidth::for_cut_classes(g.n(), g.m());
    for attempt in 1..=max_attempts {
        let phi = random_circulation(g, &t, width, rng);
        if let Verdict::Accept(cert) = certify_cut_classes(g, &phi)? {
            let classes = cert.classes.into_iter().map(|c| (phi.value(c[0]), c)).collect();
            return Ok((classes, phi, attempt));
        }
    }
    Err(LvError::GaveUp {
        stage: "cut classes",
        attempts: max_attempts,
    })
}

pub fn seq_blocks_lv(g: &Graph, rng: &mut Prng, max_attempts: usize) -> Result<Verified<BlockStructure>, LvError> {
    let t = spanning_tree(g)?;
    let width = BitWidth::for_cut_vertices(g.n(), g.max_degree());
    for attempt in 1..=max_attempts {
        let phi = random_circulation(g, &t, width, rng);
        if let Ok(b) = verify_blocks(g, &t, &phi) {
            return Ok((b, phi, attempt));
        }
    }
    Err(LvError::GaveUp {
        stage: "blocks",
        attempts: max_attempts,
    })
}

/// Report of a graph with no edges.
fn edgeless_report(g: &Graph, algo: Algo, verified: bool) -> CutReport {
    let mut r = CutReport::empty(g);
    let none = EdgeSet::new(0);
    if algo.needs_edges() {
        r.cut_edges = Some(Vec::new());
        r.two_ecc = Some((0..g.n()).collect());
    }
    if algo.needs_pairs() {
        r.set_classes(Vec::new());
    }
    if algo.needs_three_ecc() {
        r.three_ecc = Some(three_ecc_labels(g, &none, &none));
    }
    if algo.needs_vertices() {
        r.cut_vertices = Some(Vec::new());
        r.blocks = Some(Vec::new());
    }
    r.verified = Some(verified);
    restrict(&mut r, algo);
    r
}

/// Drop fields computed only as inputs to the requested output.
fn restrict(r: &mut CutReport, algo: Algo) {
    match algo {
        Algo::TwoEcc => r.cut_edges = None,
        Algo::ThreeEcc => {
            r.cut_edges = None;
            r.two_ecc = None;
            r.cut_classes = None;
            r.cut_pair_edges = None;
        }
        Algo::CutPairs => r.two_ecc = None,
        Algo::CutEdges => r.two_ecc = None,
        _ => {}
    }
}

/// Merge per-component circulations into one on the whole graph. Values are
/// zero-padded to the widest component; cut edges get zero.
pub fn embed_circulations(m: usize, parts: &[(Subgraph, BitCirculation)]) -> BitCirculation {
    let width = parts.iter().map(|(_, p)| p.width()).max().unwrap_or(1);
    let mut out = BitCirculation::zeros(m, BitWidth::new(width).expect("nonzero width"));
    for (sub, phi) in parts {
        for e in 0..phi.m() {
            let mut v = BitString::zeros(width);
            for i in 0..phi.width() {
                v.set(i, phi.bit(e, i));
            }
            out.set(sub.edge_map[e], &v).expect("padded width");
        }
    }
    out
}

/// A pipeline's report with the circulation of its last stage: the block
/// stage when cut vertices were asked for, else the merged cut-class
/// circulations, else the cut-edge circulation.
#[derive(Debug, Clone)]
pub struct SeqRun {
    pub report: CutReport,
    pub attempts: Attempts,
    pub phi: Option<BitCirculation>,
}

/// Sequential pipeline. With `las_vegas`, each stage repeats until verified.
pub fn seq_report(g: &Graph, seed: u64, algo: Algo, las_vegas: bool, max_attempts: usize) -> Result<SeqRun, LvError> {
    g.require_connected()?;
    if g.m() == 0 {
        return Ok(SeqRun {
            report: edgeless_report(g, algo, las_vegas),
            attempts: Attempts::default(),
            phi: None,
        });
    }
    let mut r = CutReport::empty(g);
    let mut attempts = Attempts::default();
    let mut last = None;
    let mut bridges = EdgeSet::new(g.m());
    if algo.needs_edges() {
        let mut rng = Prng::new(derive_seed(seed, EDGE_STAGE));
        let phi;
        if las_vegas {
            let k;
            (bridges, phi, k) = seq_cut_edges_lv(g, &mut rng, max_attempts)?;
            attempts.cut_edges = k;
        } else {
            let t = spanning_tree(g)?;
            phi = random_circulation(g, &t, BitWidth::for_cut_edges(g.n(), g.m()), &mut rng);
            bridges = zero_edges(&phi);
        }
        last = Some(phi);
        r.cut_edges = Some(bridges.to_vec());
        r.two_ecc = Some(two_ecc_labels(g, &bridges));
    }
    if algo.needs_pairs() {
        let mut rng = Prng::new(derive_seed(seed, CLASS_STAGE));
        let mut all = Vec::new();
        let mut parts = Vec::new();
        for sub in edge_components(g, &bridges) {
            let (classes, phi) = if las_vegas {
                let (c, phi, k) = seq_component_classes_lv(&sub.graph, &mut rng, max_attempts)?;
                attempts.cut_classes.push(k);
                (c, phi)
            } else {
                let t = bfs_tree(&sub.graph, 0)?;
                let width = BitWidth::for_cut_classes(sub.graph.n(), sub.graph.m());
                let phi = random_circulation(&sub.graph, &t, width, &mut rng);
                let edges: Vec<EdgeId> = (0..sub.graph.m()).collect();
                (classes_from_phi(&phi, &edges).classes, phi)
            };
            all.extend(lift_classes(&sub, classes));
            parts.push((sub, phi));
        }
        last = Some(embed_circulations(g.m(), &parts));
        fill_classes(&mut r, all);
        if algo.needs_three_ecc() {
            r.three_ecc = Some(three_ecc_labels(g, &bridges, &pair_edges(g, &r)));
        }
    }
    if algo.needs_vertices() {
        let mut rng = Prng::new(derive_seed(seed, BLOCK_STAGE));
        if las_vegas {
            let (b, phi, k) = seq_blocks_lv(g, &mut rng, max_attempts)?;
            attempts.blocks = k;
            r.cut_vertices = Some(b.cut_vertices);
            r.blocks = Some(b.blocks);
            last = Some(phi);
        } else {
            let t = spanning_tree(g)?;
            let width = BitWidth::for_cut_vertices(g.n(), g.max_degree());
            let phi = random_circulation(g, &t, width, &mut rng);
            r.cut_vertices = Some(cut_vertices_from_phi(g, &phi));
            last = Some(phi);
        }
    }
    r.verified = Some(las_vegas);
    restrict(&mut r, algo);
    Ok(SeqRun {
        report: r,
        attempts,
        phi: last,
    })
}

// ------------------------------------------------------------ distributed

/// A distributed pipeline's report with its session (metrics, transcript).
/// `phi` is chosen as in [`SeqRun`].
#[derive(Debug, Clone)]
pub struct DistRun {
    pub report: CutReport,
    pub session: Session,
    pub attempts: Attempts,
    pub phi: Option<BitCirculation>,
}

fn salt(stage: u64, attempt: usize) -> u64 {
    derive_seed(stage, attempt as u64)
}

/// Cut edges, repeated until the verifier accepts. The accepted output also
/// carries the verifier's 2-ecc labels.
pub fn dist_cut_edges_lv(
    session: &mut Session,
    g: &Graph,
    leader: Vertex,
    trees: &[LocalTree],
) -> Result<Verified<(EdgeSet, Vec<Vertex>)>, LvError> {
    let max = session.cfg.max_attempts;
    for attempt in 0..max {
        let (candidate, phi) = dist_cut_edges(session, g, leader, trees, salt(EDGE_STAGE, attempt))?;
        if let Verdict::Accept(tau) = verify_cut_edges(session, g, leader, trees, &candidate)? {
            return Ok(((candidate, tau), phi, attempt + 1));
        }
    }
    Err(LvError::GaveUp {
        stage: "cut edges",
        attempts: max,
    })
}

/// Cut classes of one bridge-free component, lifted to the parent graph's
/// edge ids. The circulation stays on the component.
pub fn dist_component_classes(
    session: &mut Session,
    sub: &Subgraph,
    las_vegas: bool,
) -> Result<Verified<Classes>, LvError> {
    session.relabel = Some(sub.vertex_map.clone());
    let out = component_classes(session, &sub.graph, las_vegas);
    session.relabel = None;
    let (classes, phi, k) = out?;
    Ok((lift_classes(sub, classes), phi, k))
}

fn component_classes(session: &mut Session, g: &Graph, las_vegas: bool) -> Result<Verified<Classes>, LvError> {
    let (trees, _) = dist_bfs(session, g, 0)?;
    let max = if las_vegas { session.cfg.max_attempts } else { 1 };
    for attempt in 0..max {
        let out = dist_cut_pairs(session, g, 0, &trees, salt(CLASS_STAGE, attempt))?;
        if !las_vegas {
            return Ok((out.classes, out.phi, 1));
        }
        if let Verdict::Accept(classes) = verify_cut_pairs(session, g, 0, &trees, &out.phi)? {
            return Ok((classes, out.phi, attempt + 1));
        }
    }
    Err(LvError::GaveUp {
        stage: "cut classes",
        attempts: max,
    })
}

pub fn dist_blocks_lv(
    session: &mut Session,
    g: &Graph,
    leader: Vertex,
    trees: &[LocalTree],
) -> Result<Verified<BlockStructure>, LvError> {
    let delta = trees[leader].max_degree;
    let width = session
        .cfg
        .bits
        .unwrap_or_else(|| BitWidth::for_cut_vertices(g.n(), delta).get());
    let max = session.cfg.max_attempts;
    for attempt in 0..max {
        let phi = dist_wide_circulation(session, g, leader, trees, width, salt(BLOCK_STAGE, attempt))?;
        if let Verdict::Accept(out) = verify_cut_vertices(session, g, leader, trees, &phi)? {
            return Ok((out.structure, phi, attempt + 1));
        }
    }
    Err(LvError::GaveUp {
        stage: "blocks",
        attempts: max,
    })
}

/// Distributed pipeline. With `las_vegas`, each stage repeats until its
/// verifier accepts.
pub fn dist_report(g: &Graph, cfg: DistConfig, algo: Algo, las_vegas: bool) -> Result<DistRun, LvError> {
    g.require_connected()?;
    let leader = cfg.leader;
    let mut session = Session::new(cfg);
    if g.m() == 0 {
        return Ok(DistRun {
            report: edgeless_report(g, algo, las_vegas),
            session,
            attempts: Attempts::default(),
            phi: None,
        });
    }
    let mut r = CutReport::empty(g);
    let mut attempts = Attempts::default();
    let mut last = None;
    let (trees, _) = dist_bfs(&mut session, g, leader)?;
    let mut bridges = EdgeSet::new(g.m());
    if algo.needs_edges() {
        let (tau, phi);
        if las_vegas {
            let k;
            ((bridges, tau), phi, k) = dist_cut_edges_lv(&mut session, g, leader, &trees)?;
            attempts.cut_edges = k;
        } else {
            (bridges, phi) = dist_cut_edges(&mut session, g, leader, &trees, salt(EDGE_STAGE, 0))?;
            tau = dist_two_ecc(&mut session, g, leader, &trees, &bridges)?;
        }
        last = Some(phi);
        r.cut_edges = Some(bridges.to_vec());
        r.two_ecc = Some(canonical_labels(&tau));
    }
    if algo.needs_pairs() {
        let mut all = Vec::new();
        let mut parts = Vec::new();
        for sub in edge_components(g, &bridges) {
            let (classes, phi, k) = dist_component_classes(&mut session, &sub, las_vegas)?;
            if las_vegas {
                attempts.cut_classes.push(k);
            }
            all.extend(classes);
            parts.push((sub, phi));
        }
        last = Some(embed_circulations(g.m(), &parts));
        fill_classes(&mut r, all);
        if algo.needs_three_ecc() {
            let labels = dist_three_ecc(&mut session, g, leader, &bridges, &pair_edges(g, &r))?;
            r.three_ecc = Some(canonical_labels(&labels));
        }
    }
    if algo.needs_vertices() {
        if las_vegas {
            let (b, phi, k) = dist_blocks_lv(&mut session, g, leader, &trees)?;
            attempts.blocks = k;
            r.cut_vertices = Some(b.cut_vertices);
            r.blocks = Some(b.blocks);
            last = Some(phi);
        } else {
            let (cut, phi) = dist_cut_vertices(&mut session, g, leader, &trees, salt(BLOCK_STAGE, 0))?;
            r.cut_vertices = Some(cut);
            last = Some(phi);
        }
    }
    r.verified = Some(las_vegas);
    restrict(&mut r, algo);
    Ok(DistRun {
        report: r,
        session,
        attempts,
        phi: last,
    })
}
