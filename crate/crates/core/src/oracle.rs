//! Deterministic ground truth: DFS lowpoints, deletion brute force, subset
//! scans and small augmenting-path flows.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::dsu::UnionFind;
use crate::graph::{EdgeId, EdgeSet, Graph, Vertex};
use crate::report::{canonical_labels, CutReport};
use crate::seq::{three_ecc_labels, two_ecc_labels};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subset scan limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
}

pub const SUBSET_SCAN_LIMIT: usize = 24;

struct Lowpoint {
    bridges: EdgeSet,
    articulation: Vec<Vertex>,
    blocks: Vec<usize>,
}

/// Iterative lowpoint DFS collecting bridges, articulation points and blocks.
fn lowpoint_dfs(g: &Graph) -> Lowpoint {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = EdgeSet::new(g.m());
    let mut is_cut = vec![false; n];
    let mut block = vec![usize::MAX; g.m()];
    let mut next_block = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent edge, next adjacency index)
        let mut stack: Vec<(Vertex, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, pe, idx) = stack[top];
            if let Some(inc) = g.incident(v).get(idx).copied() {
                stack[top].2 += 1;
                if Some(inc.edge) == pe {
                    continue;
                }
                let w = inc.neighbor;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push(inc.edge);
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(inc.edge), 0));
                } else if disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push(inc.edge);
                }
            } else {
                stack.pop();
                let Some(pe) = pe else { continue };
                let p = g.other(pe, v);
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] {
                    bridges.insert(pe);
                }
                if low[v] >= disc[p] {
                    if p != root {
                        is_cut[p] = true;
                    }
                    while let Some(e) = edge_stack.pop() {
                        block[e] = next_block;
                        if e == pe {
                            break;
                        }
                    }
                    next_block += 1;
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    Lowpoint {
        bridges,
        articulation: (0..n).filter(|&v| is_cut[v]).collect(),
        blocks: block,
    }
}

/// Bridges and articulation points by lowpoint DFS.
pub fn oracle_bridges_articulations(g: &Graph) -> (EdgeSet, Vec<Vertex>) {
    let lp = lowpoint_dfs(g);
    (lp.bridges, lp.articulation)
}

/// Block label per edge (smallest edge index of its block).
pub fn oracle_blocks(g: &Graph) -> Vec<EdgeId> {
    canonical_labels(&lowpoint_dfs(g).blocks)
}

fn connected_without(g: &Graph, removed: &[EdgeId]) -> bool {
    if g.n() <= 1 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for inc in g.incident(v) {
            if !removed.contains(&inc.edge) && !seen[inc.neighbor] {
                seen[inc.neighbor] = true;
                count += 1;
                queue.push_back(inc.neighbor);
            }
        }
    }
    count == g.n()
}

/// All pairs of non-bridges whose joint removal disconnects `g`.
pub fn oracle_cut_pairs(g: &Graph) -> Vec<(EdgeId, EdgeId)> {
    let (bridges, _) = oracle_bridges_articulations(g);
    let mut out = Vec::new();
    for e in 0..g.m() {
        if bridges.contains(e) {
            continue;
        }
        for f in e + 1..g.m() {
            if !bridges.contains(f) && !connected_without(g, &[e, f]) {
                out.push((e, f));
            }
        }
    }
    out
}

/// Cut classes: connected components of the cut-pair relation.
pub fn oracle_cut_classes(g: &Graph) -> Vec<Vec<EdgeId>> {
    classes_from_pairs(g.m(), &oracle_cut_pairs(g))
}

/// Group edges into classes from a list of related pairs.
pub fn classes_from_pairs(m: usize, pairs: &[(EdgeId, EdgeId)]) -> Vec<Vec<EdgeId>> {
    let mut uf = UnionFind::new(m);
    let mut member = vec![false; m];
    for &(e, f) in pairs {
        uf.union(e, f);
        member[e] = true;
        member[f] = true;
    }
    uf.classes()
        .into_iter()
        .filter(|c| member[c[0]])
        .collect()
}

/// Whether `f = δ(S)` for some vertex set `S`, by scanning all `S` that omit
/// the last vertex in Gray-code order.
pub fn oracle_is_induced_cut(g: &Graph, f: &EdgeSet) -> Result<bool, OracleError> {
    if g.n() > SUBSET_SCAN_LIMIT {
        return Err(OracleError::TooLarge {
            n: g.n(),
            limit: SUBSET_SCAN_LIMIT,
        });
    }
    if f.is_empty() {
        return Ok(true);
    }
    let free = g.n().saturating_sub(1);
    let mut delta = EdgeSet::new(g.m());
    for i in 1u64..(1u64 << free) {
        let v = i.trailing_zeros() as usize;
        for inc in g.incident(v) {
            if delta.contains(inc.edge) {
                delta.remove(inc.edge);
            } else {
                delta.insert(inc.edge);
            }
        }
        if delta == *f {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Polynomial test for `f = δ(S)`: contract the components of `G ∖ f` and
/// check that `f` two-colours the result.
pub fn is_induced_cut_by_components(g: &Graph, f: &EdgeSet) -> bool {
    let comp = g.component_labels(|e| !f.contains(e));
    let mut colour = vec![None::<bool>; g.n()];
    for start in 0..g.n() {
        let root = comp[start];
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            let here = colour[c].expect("coloured");
            for e in f.iter() {
                let (a, b) = g.edge(e);
                let (ca, cb) = (comp[a], comp[b]);
                if ca == cb {
                    return false;
                }
                let other = if ca == c {
                    cb
                } else if cb == c {
                    ca
                } else {
                    continue;
                };
                match colour[other] {
                    None => {
                        colour[other] = Some(!here);
                        queue.push_back(other);
                    }
                    Some(x) if x == here => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Whether three edge-disjoint `u`–`v` paths exist.
pub fn oracle_three_edge_connected(g: &Graph, u: Vertex, v: Vertex) -> bool {
    if u == v {
        return true;
    }
    // flow[e] in {-1, 0, 1}, positive meaning from the smaller endpoint.
    let mut flow = vec![0i8; g.m()];
    for _ in 0..3 {
        let mut via: Vec<Option<(Vertex, EdgeId)>> = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for inc in g.incident(x) {
                let dir: i8 = if g.edge(inc.edge).0 == x { 1 } else { -1 };
                if !seen[inc.neighbor] && flow[inc.edge] * dir < 1 {
                    seen[inc.neighbor] = true;
                    via[inc.neighbor] = Some((x, inc.edge));
                    queue.push_back(inc.neighbor);
                }
            }
        }
        if !seen[v] {
            return false;
        }
        let mut x = v;
        while let Some((p, e)) = via[x] {
            flow[e] += if g.edge(e).0 == p { 1 } else { -1 };
            x = p;
        }
    }
    true
}

/// Classes of the relation "edge-connectivity at least three", labelled by
/// smallest vertex.
pub fn oracle_3ec_classes(g: &Graph) -> Vec<Vertex> {
    let mut uf = UnionFind::new(g.n());
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if !uf.same(a, b) && oracle_three_edge_connected(g, a, b) {
                uf.union(a, b);
            }
        }
    }
    uf.labels()
}

/// Full ground-truth report.
pub fn oracle_report(g: &Graph) -> CutReport {
    let lp = lowpoint_dfs(g);
    let classes = oracle_cut_classes(g);
    let mut r = CutReport::empty(g);
    r.cut_edges = Some(lp.bridges.to_vec());
    r.set_classes(classes.into_iter().map(|c| (None, c)).collect());
    let cp = EdgeSet::from_edges(g.m(), r.cut_pair_edges.clone().unwrap_or_default());
    r.cut_vertices = Some(lp.articulation.clone());
    r.two_ecc = Some(two_ecc_labels(g, &lp.bridges));
    r.three_ecc = Some(three_ecc_labels(g, &lp.bridges, &cp));
    r.blocks = Some(canonical_labels(&lp.blocks));
    r.verified = Some(true);
    r
}

/// Every connected graph on `1..=max_n` vertices up to isomorphism, each in
/// a canonical labelling. Graphs on `k` vertices come from those on `k − 1`
/// by adding a vertex with a nonempty neighbourhood.
pub fn connected_graph_catalog(max_n: usize) -> Vec<Graph> {
    assert!(max_n <= 8, "catalog enumeration is for small graphs");
    let mut out = Vec::new();
    let mut level: BTreeSet<u64> = BTreeSet::new();
    if max_n >= 1 {
        level.insert(0);
        out.push(Graph::new(1, []).expect("single vertex"));
    }
    for k in 2..=max_n {
        let mut next = BTreeSet::new();
        let mut seen = HashSet::new();
        for &code in &level {
            let prev = decode(k - 1, code);
            for mask in 1u32..(1 << (k - 1)) {
                let mut edges = prev.clone();
                edges.extend((0..k - 1).filter(|i| mask >> i & 1 == 1).map(|i| (i, k - 1)));
                let c = canonical_code(k, &edges);
                if seen.insert(c) {
                    next.insert(c);
                }
            }
        }
        out.extend(
            next.iter()
                .map(|&c| Graph::new(k, decode(k, c)).expect("catalog graph")),
        );
        level = next;
    }
    out
}

fn pair_bit(i: usize, j: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    b * (b - 1) / 2 + a
}

fn decode(k: usize, code: u64) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for b in 1..k {
        for a in 0..b {
            if code >> pair_bit(a, b) & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Smallest adjacency code over all relabellings that list vertices in
/// nonincreasing degree order. The admissible relabellings are defined
/// invariantly, so isomorphic graphs get equal codes.
fn canonical_code(k: usize, edges: &[(Vertex, Vertex)]) -> u64 {
    let mut deg = vec![0usize; k];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut order: Vec<Vertex> = (0..k).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j < k && deg[order[j]] == deg[order[i]] {
            j += 1;
        }
        blocks.push((i, j));
        i = j;
    }
    let mut best = u64::MAX;
    let mut pos = vec![0usize; k];
    permute_blocks(&mut order, &blocks, 0, &mut |ord| {
        for (p, &v) in ord.iter().enumerate() {
            pos[v] = p;
        }
        let code = edges
            .iter()
            .fold(0u64, |acc, &(a, b)| acc | 1 << pair_bit(pos[a], pos[b]));
        best = best.min(code);
    });
    best
}

fn permute_blocks(
    order: &mut Vec<Vertex>,
    blocks: &[(usize, usize)],
    bi: usize,
    visit: &mut dyn FnMut(&[Vertex]),
) {
    let Some(&(lo, hi)) = blocks.get(bi) else {
        visit(order);
        return;
    };
    heap_permute(order, lo, hi - lo, &mut |ord| {
        let mut copy = ord.to_vec();
        permute_blocks(&mut copy, blocks, bi + 1, visit)
    });
}

/// Heap's algorithm over `order[lo..lo + k]`.
fn heap_permute(
    order: &mut Vec<Vertex>,
    lo: usize,
    k: usize,
    visit: &mut dyn FnMut(&mut Vec<Vertex>),
) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k {
        heap_permute(order, lo, k - 1, visit);
        if k % 2 == 0 {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
}
