//! Block structure from a circulation: local partitions at each vertex, the
//! global labelling that glues them, and the closure check against the tree.

use std::collections::VecDeque;

use thiserror::Error;

use crate::circulation::{is_bit_circulation, BitCirculation};
use crate::gf2::Gf2Matrix;
use crate::graph::{EdgeId, Graph, RootedTree, Vertex};
use crate::report::canonical_labels;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockReject {
    #[error("columns at vertex {0} do not split into zero-sum sets")]
    NoPartition(Vertex),
    #[error("local parts at vertex {0} have overlapping spans")]
    OverlappingSpans(Vertex),
    #[error("conflicting labels on edge {0}")]
    LabelConflict(EdgeId),
    #[error("edge {0} never received a label")]
    Unlabelled(EdgeId),
    #[error("edges {1} and {2} at vertex {0} must share a block")]
    NotClosed(Vertex, EdgeId, EdgeId),
}

/// A partition of the edges at one vertex, parts numbered by smallest edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPartition {
    /// Parts as ascending edge lists, ordered by first edge.
    pub parts: Vec<Vec<EdgeId>>,
}

impl LocalPartition {
    /// Split columns `(edge, φ(edge))` into minimal zero-sum sets and check
    /// that the parts span independent subspaces.
    pub fn from_columns(
        vertex: Vertex,
        width: usize,
        columns: &[(EdgeId, Vec<u64>)],
    ) -> Result<Self, BlockReject> {
        let mut cols = columns.to_vec();
        cols.sort_by_key(|(e, _)| *e);
        let m = Gf2Matrix::new(width, cols.iter().map(|(_, c)| c.clone()).collect());
        let parts = m
            .zero_sum_partition()
            .ok_or(BlockReject::NoPartition(vertex))?;
        if !m.parts_independent(&parts) {
            return Err(BlockReject::OverlappingSpans(vertex));
        }
        let mut parts: Vec<Vec<EdgeId>> = parts
            .into_iter()
            .map(|p| p.into_iter().map(|j| cols[j].0).collect())
            .collect();
        parts.sort_by_key(|p| p[0]);
        Ok(LocalPartition { parts })
    }

    pub fn part_of(&self, e: EdgeId) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&e))
    }
}

/// Blocks (as canonical edge labels) and the vertices where two or more meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    pub blocks: Vec<EdgeId>,
    pub cut_vertices: Vec<Vertex>,
}

impl BlockStructure {
    pub fn from_labels<L: Ord + Clone>(g: &Graph, labels: &[L]) -> Self {
        let blocks = canonical_labels(labels);
        let cut_vertices = (0..g.n())
            .filter(|&v| {
                let mut seen: Vec<EdgeId> = g.incident(v).iter().map(|i| blocks[i.edge]).collect();
                seen.sort_unstable();
                seen.dedup();
                seen.len() >= 2
            })
            .collect();
        BlockStructure {
            blocks,
            cut_vertices,
        }
    }
}

/// Global label of a local class: the vertex that created it and its index.
pub type BlockLabel = (Vertex, usize);

/// Does the non-tree edge `{v, w}` tie to `v`'s parent edge? True when `w`
/// lies outside the subtree of `v`.
pub fn ties_to_parent(t: &RootedTree, v: Vertex, w: Vertex) -> bool {
    t.parent(v).is_some() && !t.is_descendant(w, v)
}

/// Does child `v`'s parent edge tie to its parent `u`'s parent edge? True when
/// the subtree-neighbourhood of `v` leaves the subtree of `u`.
pub fn child_ties_up(pre_u: usize, desc_u: usize, low_v: usize, high_v: usize) -> bool {
    low_v < pre_u || high_v >= pre_u + desc_u
}

/// Sequential block verification from `φ`: builds local partitions, glues
/// them into global labels from the tree root outward, and checks closure
/// under the tree-derived relations. On success the labels are exactly the
/// blocks.
pub fn verify_blocks(
    g: &Graph,
    t: &RootedTree,
    phi: &BitCirculation,
) -> Result<BlockStructure, BlockReject> {
    if !is_bit_circulation(g, phi) {
        let v = (0..g.n())
            .find(|&v| {
                let mut acc = vec![0u64; phi.words(0).len()];
                for inc in g.incident(v) {
                    acc.iter_mut().zip(phi.words(inc.edge)).for_each(|(a, b)| *a ^= b);
                }
                acc.iter().any(|&w| w != 0)
            })
            .unwrap_or(0);
        return Err(BlockReject::NoPartition(v));
    }
    let mut local = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let cols: Vec<_> = g
            .incident(v)
            .iter()
            .map(|i| (i.edge, phi.words(i.edge).to_vec()))
            .collect();
        local.push(LocalPartition::from_columns(v, phi.width(), &cols)?);
    }
    // label[e][k]: the label set at endpoint k (0 = smaller id) of edge e.
    let mut label: Vec<[Option<BlockLabel>; 2]> = vec![[None, None]; g.m()];
    let side = |e: EdgeId, v: Vertex| usize::from(g.edge(e).0 != v);
    let mut queue = VecDeque::new();
    for v in 0..g.n() {
        let pe = t.parent_edge(v);
        for (i, part) in local[v].parts.iter().enumerate() {
            if pe.is_some_and(|p| part.contains(&p)) {
                continue;
            }
            for &e in part {
                label[e][side(e, v)] = Some((v, i));
                queue.push_back((g.other(e, v), e, (v, i)));
            }
        }
    }
    while let Some((u, e, l)) = queue.pop_front() {
        match label[e][side(e, u)] {
            Some(existing) if existing != l => return Err(BlockReject::LabelConflict(e)),
            Some(_) => {}
            None => {
                let i = local[u].part_of(e).expect("edge at its endpoint");
                for &f in &local[u].parts[i] {
                    label[f][side(f, u)] = Some(l);
                    queue.push_back((g.other(f, u), f, l));
                }
            }
        }
    }
    let mut global = Vec::with_capacity(g.m());
    for (e, l) in label.iter().enumerate() {
        match l {
            [Some(a), Some(b)] if a == b => global.push(*a),
            [Some(_), Some(_)] => return Err(BlockReject::LabelConflict(e)),
            _ => return Err(BlockReject::Unlabelled(e)),
        }
    }
    for v in 0..g.n() {
        let Some(pe) = t.parent_edge(v) else { continue };
        for inc in g.incident(v) {
            if !t.is_tree_edge(inc.edge)
                && ties_to_parent(t, v, inc.neighbor)
                && global[inc.edge] != global[pe]
            {
                return Err(BlockReject::NotClosed(v, inc.edge, pe));
            }
        }
        for &c in t.children(v) {
            let ce = t.parent_edge(c).expect("child has parent edge");
            if child_ties_up(t.pre(v), t.desc(v), t.low(c), t.high(c)) && global[ce] != global[pe] {
                return Err(BlockReject::NotClosed(v, ce, pe));
            }
        }
    }
    Ok(BlockStructure::from_labels(g, &global))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulation::{random_circulation, BitWidth};
    use crate::graph::bfs_tree;
    use crate::rng::Prng;

    #[test]
    fn bowtie_blocks() {
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let t = bfs_tree(&g, 0).unwrap();
        let w = BitWidth::for_cut_vertices(5, 4);
        let phi = random_circulation(&g, &t, w, &mut Prng::new(9));
        let b = verify_blocks(&g, &t, &phi).unwrap();
        assert_eq!(b.blocks, vec![0, 0, 0, 3, 3, 3]);
        assert_eq!(b.cut_vertices, vec![2]);
    }

    #[test]
    fn flipped_bit_rejects() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = bfs_tree(&g, 0).unwrap();
        let mut phi = random_circulation(&g, &t, BitWidth::new(6).unwrap(), &mut Prng::new(1));
        phi.flip(1, 0);
        assert!(verify_blocks(&g, &t, &phi).is_err());
    }
}
