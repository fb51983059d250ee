//! b-bit circulations: completion over a spanning tree, uniform sampling and
//! XOR tests over edge sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::{words_for, BitString};
use crate::graph::{EdgeId, EdgeSet, Graph, RootedTree};
use crate::rng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CirculationError {
    #[error("bit width must be positive")]
    ZeroWidth,
    #[error("value given for tree edge {0}")]
    ValueOnTreeEdge(EdgeId),
    #[error("no value given for non-tree edge {0}")]
    MissingValue(EdgeId),
    #[error("edge {0} out of range")]
    NoSuchEdge(EdgeId),
    #[error("value for edge {edge} has width {found}, expected {expected}")]
    WidthMismatch {
        edge: EdgeId,
        expected: usize,
        found: usize,
    },
}

/// Number of bits per circulation value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWidth(usize);

impl BitWidth {
    pub fn new(bits: usize) -> Result<Self, CirculationError> {
        if bits == 0 {
            Err(CirculationError::ZeroWidth)
        } else {
            Ok(BitWidth(bits))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `⌈log₂(n·m)⌉`, the width used for cut edges.
    pub fn for_cut_edges(n: usize, m: usize) -> Self {
        BitWidth(ceil_log2((n * m) as u128).max(1))
    }

    /// `⌈log₂(n·m²)⌉`, the width used for cut classes.
    pub fn for_cut_classes(n: usize, m: usize) -> Self {
        BitWidth(ceil_log2(n as u128 * (m as u128).pow(2)).max(1))
    }

    /// `⌈Δ + 2·log₂ n⌉`, the width used for cut vertices.
    pub fn for_cut_vertices(n: usize, max_degree: usize) -> Self {
        BitWidth((max_degree + ceil_log2((n as u128).pow(2))).max(1))
    }
}

/// Smallest `k` with `2^k ≥ x` (0 for `x ≤ 1`).
pub fn ceil_log2(x: u128) -> usize {
    if x <= 1 {
        0
    } else {
        (128 - (x - 1).leading_zeros()) as usize
    }
}

/// A map from edges to `width`-bit strings, stored contiguously.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitCirculation {
    width: usize,
    stride: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitCirculation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries((0..self.m()).map(|e| self.value(e)))
            .finish()
    }
}

impl BitCirculation {
    pub fn zeros(m: usize, width: BitWidth) -> Self {
        let stride = words_for(width.0);
        BitCirculation {
            width: width.0,
            stride,
            words: vec![0; m * stride],
        }
    }

    /// Build from one value per edge; all values must share a width.
    pub fn from_values(values: &[BitString]) -> Result<Self, CirculationError> {
        let width = values.first().map_or(1, BitString::width);
        let mut phi = Self::zeros(values.len(), BitWidth::new(width)?);
        for (e, v) in values.iter().enumerate() {
            phi.set(e, v)?;
        }
        Ok(phi)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn m(&self) -> usize {
        self.words.len().checked_div(self.stride).unwrap_or(0)
    }

    /// Packed words of `φ(e)`.
    pub fn words(&self, e: EdgeId) -> &[u64] {
        &self.words[e * self.stride..(e + 1) * self.stride]
    }

    pub fn words_mut(&mut self, e: EdgeId) -> &mut [u64] {
        &mut self.words[e * self.stride..(e + 1) * self.stride]
    }

    pub fn value(&self, e: EdgeId) -> BitString {
        BitString::from_words(self.width, self.words(e))
    }

    pub fn set(&mut self, e: EdgeId, v: &BitString) -> Result<(), CirculationError> {
        if e >= self.m() {
            return Err(CirculationError::NoSuchEdge(e));
        }
        if v.width() != self.width {
            return Err(CirculationError::WidthMismatch {
                edge: e,
                expected: self.width,
                found: v.width(),
            });
        }
        self.words_mut(e).copy_from_slice(v.words());
        Ok(())
    }

    pub fn is_zero_at(&self, e: EdgeId) -> bool {
        self.words(e).iter().all(|&w| w == 0)
    }

    pub fn bit(&self, e: EdgeId, i: usize) -> bool {
        self.words(e)[i / 64] >> (i % 64) & 1 == 1
    }

    /// Flip bit `i` of `φ(e)`.
    pub fn flip(&mut self, e: EdgeId, i: usize) {
        self.words_mut(e)[i / 64] ^= 1 << (i % 64);
    }

    /// Edge-wise XOR of two circulations of equal shape.
    pub fn xor(&self, other: &BitCirculation) -> BitCirculation {
        assert_eq!(
            (self.width, self.words.len()),
            (other.width, other.words.len())
        );
        BitCirculation {
            width: self.width,
            stride: self.stride,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Parse the [`dump`](Self::dump) format. Lines must follow `g`'s edge
    /// order; blank lines and `#` comments are skipped.
    pub fn parse_dump(g: &Graph, text: &str) -> Result<Self, DumpError> {
        let mut values = Vec::with_capacity(g.m());
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |why: &str| DumpError::Line {
                line: i + 1,
                why: why.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [u, v, bits] = fields[..] else {
                return Err(bad("expected `u v bits`"));
            };
            let e = values.len();
            if e >= g.m() {
                return Err(bad("more lines than edges"));
            }
            let (a, b) = g.edge(e);
            if (u.parse(), v.parse()) != (Ok(a), Ok(b)) {
                return Err(bad(&format!("expected edge {e} = {a} {b}")));
            }
            values.push(bits.parse::<BitString>().map_err(|_| bad("bits must be 0/1"))?);
        }
        if values.len() != g.m() {
            return Err(DumpError::Count {
                expected: g.m(),
                found: values.len(),
            });
        }
        Ok(Self::from_values(&values)?)
    }

    /// The dump format: one `u v bits` line per edge in index order.
    pub fn dump(&self, g: &Graph) -> String {
        let mut out = String::new();
        for e in 0..self.m() {
            let (u, v) = g.edge(e);
            let _ = writeln!(out, "{u} {v} {}", self.value(e));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DumpError {
    #[error("line {line}: {why}")]
    Line { line: usize, why: String },
    #[error("expected {expected} edge lines, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Values(#[from] CirculationError),
}

/// Fill in tree-edge values so that `phi` becomes a circulation, keeping the
/// values already present on non-tree edges. Vertices are eliminated level by
/// level from the deepest level up.
pub fn complete_in_place(g: &Graph, t: &RootedTree, phi: &mut BitCirculation) {
    let stride = phi.stride;
    let mut acc = vec![0u64; stride];
    for &v in t.by_level().iter().rev() {
        let Some(pe) = t.parent_edge(v) else { continue };
        acc.iter_mut().for_each(|w| *w = 0);
        for inc in g.incident(v) {
            if inc.edge != pe {
                for (a, b) in acc.iter_mut().zip(phi.words(inc.edge)) {
                    *a ^= b;
                }
            }
        }
        phi.words_mut(pe).copy_from_slice(&acc);
    }
}

/// The unique circulation that agrees with `psi` on the non-tree edges.
pub fn complete_circulation(
    g: &Graph,
    t: &RootedTree,
    width: BitWidth,
    psi: &BTreeMap<EdgeId, BitString>,
) -> Result<BitCirculation, CirculationError> {
    let mut phi = BitCirculation::zeros(g.m(), width);
    for (&e, v) in psi {
        if e >= g.m() {
            return Err(CirculationError::NoSuchEdge(e));
        }
        if t.is_tree_edge(e) {
            return Err(CirculationError::ValueOnTreeEdge(e));
        }
        phi.set(e, v)?;
    }
    if let Some(e) = (0..g.m()).find(|&e| !t.is_tree_edge(e) && !psi.contains_key(&e)) {
        return Err(CirculationError::MissingValue(e));
    }
    complete_in_place(g, t, &mut phi);
    Ok(phi)
}

/// A uniformly random `width`-bit circulation. Non-tree values are drawn in
/// ascending edge order from `rng`.
pub fn random_circulation(
    g: &Graph,
    t: &RootedTree,
    width: BitWidth,
    rng: &mut Prng,
) -> BitCirculation {
    let mut phi = BitCirculation::zeros(g.m(), width);
    for e in 0..g.m() {
        if !t.is_tree_edge(e) {
            let v = rng.bits(width.0);
            phi.words_mut(e).copy_from_slice(v.words());
        }
    }
    complete_in_place(g, t, &mut phi);
    phi
}

/// True iff every bit layer of `phi` has even degree at every vertex.
pub fn is_bit_circulation(g: &Graph, phi: &BitCirculation) -> bool {
    if phi.m() != g.m() {
        return false;
    }
    let mut acc = vec![0u64; phi.stride];
    (0..g.n()).all(|v| {
        acc.iter_mut().for_each(|w| *w = 0);
        for inc in g.incident(v) {
            for (a, b) in acc.iter_mut().zip(phi.words(inc.edge)) {
                *a ^= b;
            }
        }
        acc.iter().all(|&w| w == 0)
    })
}

/// `⊕_{e ∈ f} φ(e)`.
pub fn xor_over(phi: &BitCirculation, f: &EdgeSet) -> BitString {
    let mut out = BitString::zeros(phi.width);
    for e in f.iter() {
        out.xor_words(phi.words(e));
    }
    out
}

/// Fraction of `trials` independent one-bit circulations `φ` for which
/// `|f ∩ φ|` is even.
///
/// Bit layers of a uniform 64-bit circulation are independent uniform one-bit
/// circulations, so trials are drawn 64 at a time.
pub fn sample_even_intersection_rate(
    g: &Graph,
    t: &RootedTree,
    f: &EdgeSet,
    trials: usize,
    rng: &mut Prng,
) -> f64 {
    assert!(trials >= 1, "trials must be positive");
    let mut even = 0usize;
    let mut left = trials;
    while left > 0 {
        let batch = left.min(64);
        let phi = random_circulation(g, t, BitWidth(batch), rng);
        let parity = f.iter().fold(0u64, |acc, e| acc ^ phi.words(e)[0]);
        even += batch - parity.count_ones() as usize;
        left -= batch;
    }
    even as f64 / trials as f64
}
