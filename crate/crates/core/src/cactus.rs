//! Ear decompositions, pinching and contraction, used to certify a claimed
//! set of cut classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::circulation::{is_bit_circulation, BitCirculation};
use crate::dsu::UnionFind;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("edge {0} is a bridge; an ear decomposition needs a 2-edge-connected graph")]
    NotTwoEdgeConnected(EdgeId),
    #[error("multigraph is disconnected at node {0}")]
    Disconnected(usize),
    #[error("edge {0} is not on the ear")]
    NotOnEar(EdgeId),
    #[error("edge set is empty")]
    EmptyGroup,
}

/// An undirected multigraph whose edge `i` corresponds to original edge `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    /// Original vertices merged into each node, ascending.
    pub nodes: Vec<Vec<Vertex>>,
    pub edges: Vec<MultiEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiEdge {
    pub orig_index: EdgeId,
    pub from: usize,
    pub to: usize,
}

impl MultiGraph {
    pub fn from_graph(g: &Graph) -> Self {
        MultiGraph {
            nodes: (0..g.n()).map(|v| vec![v]).collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| MultiEdge {
                    orig_index: i,
                    from: u,
                    to: v,
                })
                .collect(),
        }
    }

    fn endpoints(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.from, e.to)).collect()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.edges[e].from == self.edges[e].to
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cactus serializes") + "\n"
    }
}

/// One ear `v₀, e₁, v₁, …, e_z, v_z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ear {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

impl Ear {
    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
}

/// Chain decomposition of a connected multigraph on nodes `0..n`: DFS from
/// node 0, then for each node in preorder and each back edge down from it,
/// walk up tree edges until reaching a node already on a chain.
pub fn ear_decomposition_multi(
    n: usize,
    edges: &[(usize, usize)],
) -> Result<EarDecomposition, CactusError> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        if a != b {
            adj[b].push((a, e));
        }
    }
    let mut pre = vec![usize::MAX; n];
    let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; n];
    let mut is_tree = vec![false; edges.len()];
    let mut order = Vec::with_capacity(n);
    if n > 0 {
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        pre[0] = 0;
        order.push(0);
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, i) = stack[top];
            if let Some(&(w, e)) = adj[v].get(i) {
                stack[top].1 += 1;
                if pre[w] == usize::MAX {
                    pre[w] = order.len();
                    order.push(w);
                    parent[w] = Some((v, e));
                    is_tree[e] = true;
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
            }
        }
    }
    if let Some(v) = pre.iter().position(|&p| p == usize::MAX) {
        return Err(CactusError::Disconnected(v));
    }
    let mut on_chain = vec![false; n];
    let mut covered = vec![false; edges.len()];
    let mut ears = Vec::new();
    for &v in &order {
        for &(w, e) in &adj[v] {
            let down = w == v || pre[w] > pre[v];
            if is_tree[e] || !down || covered[e] {
                continue;
            }
            on_chain[v] = true;
            covered[e] = true;
            let mut vertices = vec![v, w];
            let mut ear_edges = vec![e];
            let mut x = w;
            while !on_chain[x] {
                on_chain[x] = true;
                let (p, pe) = parent[x].expect("non-root off chain");
                covered[pe] = true;
                ear_edges.push(pe);
                vertices.push(p);
                x = p;
            }
            ears.push(Ear {
                vertices,
                edges: ear_edges,
            });
        }
    }
    if let Some(e) = covered.iter().position(|c| !c) {
        return Err(CactusError::NotTwoEdgeConnected(e));
    }
    Ok(EarDecomposition { ears })
}

pub fn ear_decomposition(g: &Graph) -> Result<EarDecomposition, CactusError> {
    ear_decomposition_multi(g.n(), g.edges())
}

/// Check an ear decomposition: the first ear starts the graph from one node,
/// every later ear attaches at nodes already present and adds only fresh
/// interior nodes, each ear is a path or cycle, and the ears partition the
/// edges.
pub fn is_valid_ear_decomposition(
    n: usize,
    edges: &[(usize, usize)],
    dec: &EarDecomposition,
) -> bool {
    let mut present = vec![false; n];
    let mut used = vec![false; edges.len()];
    for (i, ear) in dec.ears.iter().enumerate() {
        let z = ear.edges.len();
        if z == 0 || ear.vertices.len() != z + 1 {
            return false;
        }
        for (j, &e) in ear.edges.iter().enumerate() {
            let (a, b) = edges[e];
            let (x, y) = (ear.vertices[j], ear.vertices[j + 1]);
            if !((a, b) == (x, y) || (a, b) == (y, x)) || used[e] {
                return false;
            }
            used[e] = true;
        }
        let (first, last) = (ear.vertices[0], ear.vertices[z]);
        if i == 0 {
            if first != last {
                return false;
            }
            present[first] = true;
        } else if !present[first] || !present[last] {
            return false;
        }
        let interior = &ear.vertices[1..z];
        let mut fresh = interior.to_vec();
        fresh.sort_unstable();
        fresh.dedup();
        if fresh.len() != interior.len() || interior.iter().any(|&x| present[x] || x == first || x == last) {
            return false;
        }
        for &x in interior {
            present[x] = true;
        }
    }
    used.iter().all(|&u| u) && (n <= 1 || present.iter().all(|&p| p))
}

/// The pairs `R_U` that pinch an ear so that `group` becomes a simple cycle.
pub fn pinch_relation(ear: &Ear, group: &[EdgeId]) -> Result<Vec<(usize, usize)>, CactusError> {
    if group.is_empty() {
        return Err(CactusError::EmptyGroup);
    }
    let mut idx = Vec::with_capacity(group.len());
    for &e in group {
        let j = ear
            .edges
            .iter()
            .position(|&f| f == e)
            .ok_or(CactusError::NotOnEar(e))?;
        idx.push(j + 1);
    }
    idx.sort_unstable();
    let v = &ear.vertices;
    let t = idx.len();
    let mut pairs: Vec<(usize, usize)> = (0..t - 1).map(|x| (v[idx[x]], v[idx[x + 1] - 1])).collect();
    pairs.push((v[idx[t - 1]], v[idx[0] - 1]));
    Ok(pairs)
}

/// Close the pinching relations of all equal-value groups within every ear.
pub fn equiv_prime(n: usize, dec: &EarDecomposition, phi: &BitCirculation) -> UnionFind {
    let mut uf = UnionFind::new(n);
    for ear in &dec.ears {
        let mut groups: BTreeMap<BitString, Vec<EdgeId>> = BTreeMap::new();
        for &e in &ear.edges {
            groups.entry(phi.value(e)).or_default().push(e);
        }
        for group in groups.values() {
            for (a, b) in pinch_relation(ear, group).expect("group lies on its ear") {
                uf.union(a, b);
            }
        }
    }
    uf
}

/// `G/R`: one node per class of `r`, ordered by smallest member.
pub fn contract(g: &Graph, r: &mut UnionFind) -> MultiGraph {
    let classes = r.classes();
    let mut node_of = vec![0; g.n()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            node_of[v] = i;
        }
    }
    MultiGraph {
        nodes: classes,
        edges: g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| MultiEdge {
                orig_index: i,
                from: node_of[u],
                to: node_of[v],
            })
            .collect(),
    }
}

/// Every edge lies on exactly one simple cycle: equivalently the graph is
/// 2-edge-connected and every ear of an ear decomposition is closed.
pub fn is_cactuslike(mg: &MultiGraph) -> Result<bool, CactusError> {
    match ear_decomposition_multi(mg.nodes.len(), &mg.endpoints()) {
        Ok(dec) => Ok(dec.ears.iter().all(Ear::is_closed)),
        Err(CactusError::NotTwoEdgeConnected(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// An accepted certificate: the cut classes and the contracted cactus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub classes: Vec<Vec<EdgeId>>,
    pub cactus: MultiGraph,
}

/// Certify that grouping the edges of a 2-edge-connected `g` by `φ` yields
/// exactly its cut classes.
///
/// Contract by `≡'`, require the result to be cactuslike, and require the
/// non-loop cycles of the result to coincide with the groups of equal value.
pub fn certify_cut_classes(
    g: &Graph,
    phi: &BitCirculation,
) -> Result<Verdict<Certificate>, CactusError> {
    let dec = ear_decomposition(g)?;
    if !is_bit_circulation(g, phi) {
        return Ok(Verdict::Reject("values do not form a circulation".into()));
    }
    if let Some(e) = (0..g.m()).find(|&e| phi.is_zero_at(e)) {
        return Ok(Verdict::Reject(format!("edge {e} has value zero")));
    }
    let mut rel = equiv_prime(g.n(), &dec, phi);
    let cactus = contract(g, &mut rel);
    let cdec = match ear_decomposition_multi(cactus.nodes.len(), &cactus.endpoints()) {
        Ok(d) if d.ears.iter().all(Ear::is_closed) => d,
        _ => return Ok(Verdict::Reject("contraction is not cactuslike".into())),
    };
    let mut cycle_of = vec![None; g.m()];
    let mut classes = Vec::new();
    for ear in cdec.ears.iter().filter(|e| e.len() >= 2) {
        let value = phi.value(ear.edges[0]);
        if ear.edges.iter().any(|&e| phi.value(e) != value) {
            return Ok(Verdict::Reject(format!(
                "cycle through edge {} mixes values",
                ear.edges[0]
            )));
        }
        for &e in &ear.edges {
            cycle_of[e] = Some(classes.len());
        }
        let mut c = ear.edges.clone();
        c.sort_unstable();
        classes.push(c);
    }
    let mut groups: BTreeMap<BitString, Vec<EdgeId>> = BTreeMap::new();
    for e in 0..g.m() {
        groups.entry(phi.value(e)).or_default().push(e);
    }
    for group in groups.values().filter(|gr| gr.len() >= 2) {
        let c = cycle_of[group[0]];
        if c.is_none() || group.iter().any(|&e| cycle_of[e] != c) {
            return Ok(Verdict::Reject(format!(
                "edges {} and {} share a value but not a cycle",
                group[0], group[1]
            )));
        }
    }
    classes.sort_by_key(|c| c[0]);
    Ok(Verdict::Accept(Certificate { classes, cactus }))
}
