//! Sequential Monte Carlo detection of cut edges, cut classes and cut
//! vertices from random circulations, plus component labelings.

use thiserror::Error;

use crate::bits::BitString;
use crate::circulation::{random_circulation, BitCirculation, BitWidth};
use crate::gf2::Gf2Matrix;
use crate::graph::{bfs_tree, EdgeId, EdgeSet, Graph, GraphError, RootedTree, Vertex};
use crate::rng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The leader's BFS tree, or an error if `g` is disconnected.
pub fn spanning_tree(g: &Graph) -> Result<RootedTree, SeqError> {
    Ok(bfs_tree(g, 0)?)
}

/// Edges with `φ(e) = 0`.
pub fn zero_edges(phi: &BitCirculation) -> EdgeSet {
    EdgeSet::from_edges(phi.m(), (0..phi.m()).filter(|&e| phi.is_zero_at(e)))
}

/// Cut-edge candidates from one random circulation of the default width.
pub fn cut_edges_mc(g: &Graph, rng: &mut Prng) -> Result<EdgeSet, SeqError> {
    let t = spanning_tree(g)?;
    let phi = random_circulation(g, &t, BitWidth::for_cut_edges(g.n(), g.m()), rng);
    Ok(zero_edges(&phi))
}

/// Edges grouped by equal nonzero φ value; only groups of size ≥ 2 are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabels {
    /// Class id per edge (`None` outside every class).
    pub label: Vec<Option<usize>>,
    /// Each class's shared value and its edges in index order. Classes are
    /// ordered by their first edge.
    pub classes: Vec<(BitString, Vec<EdgeId>)>,
}

impl ClassLabels {
    pub fn class_edges(&self) -> EdgeSet {
        EdgeSet::from_edges(
            self.label.len(),
            (0..self.label.len()).filter(|&e| self.label[e].is_some()),
        )
    }
}

/// Edge indices sorted by φ value (stable in edge index).
///
/// Values up to 60 bits are sorted by three passes of LSD counting sort on
/// digits of `⌈b/3⌉` bits; wider values fall back to a comparison sort.
pub fn sort_by_value(phi: &BitCirculation, edges: &[EdgeId]) -> Vec<EdgeId> {
    let b = phi.width();
    let digit = b.div_ceil(3);
    if b > 60 || digit > 20 {
        let mut out = edges.to_vec();
        out.sort_by(|&x, &y| phi.words(x).iter().rev().cmp(phi.words(y).iter().rev()));
        return out;
    }
    let mask = (1u64 << digit) - 1;
    let mut cur = edges.to_vec();
    let mut next = vec![0; cur.len()];
    let mut count = vec![0usize; 1 << digit];
    for pass in 0..3 {
        let key = |e: EdgeId| ((phi.words(e)[0] >> (pass * digit)) & mask) as usize;
        count.iter_mut().for_each(|c| *c = 0);
        for &e in &cur {
            count[key(e)] += 1;
        }
        let mut sum = 0;
        for c in count.iter_mut() {
            let here = *c;
            *c = sum;
            sum += here;
        }
        for &e in &cur {
            let k = key(e);
            next[count[k]] = e;
            count[k] += 1;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Group edges by φ, dropping value zero and singleton groups.
pub fn classes_from_phi(phi: &BitCirculation, edges: &[EdgeId]) -> ClassLabels {
    let sorted = sort_by_value(phi, edges);
    let mut classes: Vec<(BitString, Vec<EdgeId>)> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && phi.words(sorted[j]) == phi.words(sorted[i]) {
            j += 1;
        }
        if j - i >= 2 && !phi.is_zero_at(sorted[i]) {
            let mut group = sorted[i..j].to_vec();
            group.sort_unstable();
            classes.push((phi.value(sorted[i]), group));
        }
        i = j;
    }
    classes.sort_by_key(|(_, g)| g[0]);
    let mut label = vec![None; phi.m()];
    for (id, (_, group)) in classes.iter().enumerate() {
        for &e in group {
            label[e] = Some(id);
        }
    }
    ClassLabels { label, classes }
}

/// Cut-class candidates from one random circulation of the default width.
pub fn cut_classes_mc(g: &Graph, rng: &mut Prng) -> Result<ClassLabels, SeqError> {
    let t = spanning_tree(g)?;
    let phi = random_circulation(g, &t, BitWidth::for_cut_classes(g.n(), g.m()), rng);
    let all: Vec<EdgeId> = (0..g.m()).collect();
    Ok(classes_from_phi(&phi, &all))
}

/// Rank over GF(2).
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// Vertices `v` with `rank(M^[v]) < d(v) − 1`.
pub fn cut_vertices_from_phi(g: &Graph, phi: &BitCirculation) -> Vec<Vertex> {
    (0..g.n())
        .filter(|&v| g.degree(v) >= 2 && Gf2Matrix::at_vertex(g, phi, v).rank() < g.degree(v) - 1)
        .collect()
}

/// Cut-vertex candidates from one random circulation of the default width.
pub fn cut_vertices_mc(g: &Graph, rng: &mut Prng) -> Result<Vec<Vertex>, SeqError> {
    let t = spanning_tree(g)?;
    let phi = random_circulation(
        g,
        &t,
        BitWidth::for_cut_vertices(g.n(), g.max_degree()),
        rng,
    );
    Ok(cut_vertices_from_phi(g, &phi))
}

/// Components of `G ∖ cut_edges`, labelled by smallest vertex.
pub fn two_ecc_labels(g: &Graph, cut_edges: &EdgeSet) -> Vec<Vertex> {
    g.component_labels(|e| !cut_edges.contains(e))
}

/// Components of `G ∖ (cut_edges ∪ cut_pair_edges)`, labelled by smallest vertex.
pub fn three_ecc_labels(g: &Graph, cut_edges: &EdgeSet, cut_pair_edges: &EdgeSet) -> Vec<Vertex> {
    g.component_labels(|e| !cut_edges.contains(e) && !cut_pair_edges.contains(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn path_and_cycle_cut_edges() {
        let p5 = Graph::new(5, (0..4).map(|i| (i, i + 1))).unwrap();
        assert_eq!(cut_edges_mc(&p5, &mut Prng::new(1)).unwrap().len(), 4);
        assert!(cut_edges_mc(&cycle(8), &mut Prng::new(1)).unwrap().is_empty());
    }

    #[test]
    fn c6_one_class() {
        let c = cut_classes_mc(&cycle(6), &mut Prng::new(2)).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].1, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn radix_matches_comparison_sort() {
        let g = cycle(5);
        let mut phi = BitCirculation::zeros(5, BitWidth::new(12).unwrap());
        for (e, v) in [(0, 3000u64), (1, 7), (2, 3000), (3, 4095), (4, 0)] {
            phi.set(e, &BitString::from_u64(12, v)).unwrap();
        }
        let edges: Vec<_> = (0..g.m()).collect();
        let mut expect = edges.clone();
        expect.sort_by_key(|&e| phi.words(e)[0]);
        assert_eq!(sort_by_value(&phi, &edges), expect);
    }

    #[test]
    fn star_and_leaves() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(cut_vertices_mc(&star, &mut Prng::new(3)).unwrap(), vec![0]);
    }

    #[test]
    fn labelings() {
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let all = EdgeSet::from_edges(2, [0, 1]);
        assert_eq!(two_ecc_labels(&p3, &all), vec![0, 1, 2]);
        let c6 = cycle(6);
        let none = EdgeSet::new(6);
        let every = EdgeSet::from_edges(6, 0..6);
        assert_eq!(two_ecc_labels(&c6, &none), vec![0; 6]);
        assert_eq!(three_ecc_labels(&c6, &none, &every), (0..6).collect::<Vec<_>>());
    }
}
