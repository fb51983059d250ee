//! Column matrices over GF(2) with packed columns.

use crate::bits::{tail_mask, words_for};
use crate::circulation::BitCirculation;
use crate::graph::{EdgeId, Graph, Vertex};

/// A matrix with `rows` rows given as a list of packed column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    columns: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    pub fn new(rows: usize, columns: Vec<Vec<u64>>) -> Self {
        let words = words_for(rows);
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.resize(words, 0);
                if let Some(last) = c.last_mut() {
                    *last &= tail_mask(rows);
                }
                c
            })
            .collect();
        Gf2Matrix { rows, columns }
    }

    /// `M^[v]`: one column per edge at `v`, in edge-index order, holding `φ(e)`.
    pub fn at_vertex(g: &Graph, phi: &BitCirculation, v: Vertex) -> Self {
        Gf2Matrix {
            rows: phi.width(),
            columns: g
                .incident(v)
                .iter()
                .map(|inc| phi.words(inc.edge).to_vec())
                .collect(),
        }
    }

    /// The column order used by [`Gf2Matrix::at_vertex`].
    pub fn vertex_columns(g: &Graph, v: Vertex) -> Vec<EdgeId> {
        g.incident(v).iter().map(|inc| inc.edge).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u64] {
        &self.columns[j]
    }

    pub fn rank(&self) -> usize {
        rank_of(self.rows, self.columns.iter().map(Vec::as_slice))
    }

    /// Partition the columns into minimal zero-sum sets, greedily extracting
    /// one circuit at a time. `None` if the columns do not sum to zero.
    pub fn zero_sum_partition(&self) -> Option<Vec<Vec<usize>>> {
        let mut remaining: Vec<usize> = (0..self.cols()).collect();
        let mut parts = Vec::new();
        while !remaining.is_empty() {
            let circuit = self.find_circuit(&remaining)?;
            remaining.retain(|j| !circuit.contains(j));
            parts.push(circuit);
        }
        Some(parts)
    }

    /// A minimal dependent subset of `candidates`: the first column that
    /// reduces to zero against its predecessors, together with the columns of
    /// its unique representation.
    fn find_circuit(&self, candidates: &[usize]) -> Option<Vec<usize>> {
        let k = candidates.len();
        let mut basis = Basis::new(self.rows);
        for (slot, &j) in candidates.iter().enumerate() {
            let mut combo = vec![0u64; words_for(k)];
            combo[slot / 64] |= 1 << (slot % 64);
            if let Some(dep) = basis.insert(&self.columns[j], combo) {
                let mut out: Vec<usize> = (0..k)
                    .filter(|s| dep[s / 64] >> (s % 64) & 1 == 1)
                    .map(|s| candidates[s])
                    .collect();
                out.sort_unstable();
                return Some(out);
            }
        }
        None
    }

    /// True iff the spans of `parts` form a direct sum and each part is a
    /// circuit, i.e. the zero-sum column sets are exactly unions of parts.
    pub fn parts_independent(&self, parts: &[Vec<usize>]) -> bool {
        let expected: usize = parts.iter().map(|p| p.len() - 1).sum();
        let each_minimal = parts.iter().all(|p| {
            rank_of(self.rows, p.iter().map(|&j| self.columns[j].as_slice())) == p.len() - 1
        });
        each_minimal && self.rank() == expected
    }
}

/// Rank of a family of packed `rows`-bit vectors.
pub fn rank_of<'a>(rows: usize, vectors: impl IntoIterator<Item = &'a [u64]>) -> usize {
    let mut basis = Basis::new(rows);
    vectors
        .into_iter()
        .filter(|v| basis.insert(v, Vec::new()).is_none())
        .count()
}

/// XOR basis keyed by lowest set bit, optionally tracking which inputs each
/// basis vector combines.
struct Basis {
    by_pivot: Vec<Option<(Vec<u64>, Vec<u64>)>>,
}

impl Basis {
    fn new(rows: usize) -> Self {
        Basis {
            by_pivot: vec![None; rows],
        }
    }

    /// Insert `v`; on dependence returns the combination that sums to zero.
    fn insert(&mut self, v: &[u64], mut combo: Vec<u64>) -> Option<Vec<u64>> {
        let mut v = v.to_vec();
        loop {
            let Some(p) = lowest_bit(&v) else {
                return Some(combo);
            };
            match &self.by_pivot[p] {
                Some((b, c)) => {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
                    combo.iter_mut().zip(c).for_each(|(x, y)| *x ^= y);
                }
                None => {
                    self.by_pivot[p] = Some((v, combo));
                    return None;
                }
            }
        }
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
