//! Graph families used in tests, benchmarks and the `gen` subcommand.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::rng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GenError> {
    Err(GenError::Invalid(msg.into()))
}

pub fn path(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return invalid("path needs at least one vertex");
    }
    Ok(Graph::new(n, (1..n).map(|i| (i - 1, i)))?)
}

pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return invalid("cycle needs at least 3 vertices");
    }
    Ok(Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?)
}

pub fn complete(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return invalid("complete graph needs at least one vertex");
    }
    Ok(Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?)
}

/// `rows × cols` grid, vertices in row-major order.
pub fn grid(rows: usize, cols: usize) -> Result<Graph, GenError> {
    if rows == 0 || cols == 0 {
        return invalid("grid dimensions must be positive");
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Ok(Graph::new(rows * cols, edges)?)
}

/// `K₁,leaves` with the centre at 0.
pub fn star(leaves: usize) -> Result<Graph, GenError> {
    if leaves == 0 {
        return invalid("star needs at least one leaf");
    }
    Ok(Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)))?)
}

/// Hubs 0 and 1 joined by internally disjoint paths with the given edge counts.
pub fn theta(lengths: &[usize]) -> Result<Graph, GenError> {
    if lengths.len() < 2 || lengths.contains(&0) {
        return invalid("theta needs at least two paths of positive length");
    }
    if lengths.iter().filter(|&&l| l == 1).count() > 1 {
        return invalid("at most one theta path may be a single edge");
    }
    let mut n = 2;
    let mut edges = Vec::new();
    for &len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Ok(Graph::new(n, edges)?)
}

/// Two triangles sharing vertex 2.
pub fn bowtie() -> Graph {
    Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).expect("valid bowtie")
}

/// Two triangles joined by the bridge `{2, 3}`.
pub fn barbell() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).expect("valid barbell")
}

/// Two `K₄`s joined by two disjoint edges, a 2-edge cut.
pub fn twin_k4() -> Graph {
    let mut edges = Vec::new();
    for base in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.extend([(0, 4), (1, 5)]);
    Graph::new(8, edges).expect("valid twin K4")
}

/// Connected graph with `n` vertices and `m` edges: a random recursive tree
/// plus uniformly chosen extra edges.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return invalid("random graph needs at least one vertex");
    }
    let max = n * (n - 1) / 2;
    if m + 1 < n || m > max {
        return invalid(format!("need {} <= m <= {max}", n - 1));
    }
    let mut rng = Prng::new(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges: Vec<(Vertex, Vertex)> = (1..n)
        .map(|i| {
            let j = rng.gen_range(0..i);
            (order[i].min(order[j]), order[i].max(order[j]))
        })
        .collect();
    let mut present: std::collections::HashSet<(Vertex, Vertex)> = edges.iter().copied().collect();
    if m - edges.len() > max / 2 {
        let mut rest: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|e| !present.contains(e))
            .collect();
        rest.shuffle(&mut rng);
        edges.extend(rest.into_iter().take(m - (n - 1)));
    } else {
        while edges.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let e = (a.min(b), a.max(b));
            if a != b && present.insert(e) {
                edges.push(e);
            }
        }
    }
    edges.shuffle(&mut rng);
    Ok(Graph::new(n, edges)?)
}

/// Random bridge-free connected graph: a random cycle through all vertices
/// plus extra edges up to `m`.
pub fn random_two_edge_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 3 || m < n || m > n * (n - 1) / 2 {
        return invalid("need n >= 3 and n <= m <= n(n-1)/2");
    }
    let mut rng = Prng::new(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        present.insert((a.min(b), a.max(b)));
        edges.push((a.min(b), a.max(b)));
    }
    while edges.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let e = (a.min(b), a.max(b));
        if a != b && present.insert(e) {
            edges.push(e);
        }
    }
    edges.shuffle(&mut rng);
    Ok(Graph::new(n, edges)?)
}

fn attach(base: &Graph, len: usize, at: Vertex, close: bool) -> Result<Graph, GenError> {
    if len < 3 {
        return invalid("attached cycle length must be at least 3");
    }
    if at >= base.n() {
        return invalid(format!("attachment vertex {at} out of range"));
    }
    let n = base.n();
    let mut edges = base.edges().to_vec();
    // v_i gets id n + i − 1 in both graphs.
    let mut prev = at;
    for i in 1..len {
        edges.push((prev, n + i - 1));
        prev = n + i - 1;
    }
    if close {
        edges.push((prev, at));
    }
    Ok(Graph::new(n + len - 1, edges)?)
}

/// `G_c`: an `len`-edge cycle through new vertices `v₁..v_{len−1}` attached at `at`.
pub fn attach_cycle(base: &Graph, len: usize, at: Vertex) -> Result<Graph, GenError> {
    attach(base, len, at, true)
}

/// `G_p`: `G_c` without its closing edge `{v_{len−1}, at}`, leaving a path
/// of `len − 1` edges. Shared vertices and edges keep their indices.
pub fn attach_path(base: &Graph, len: usize, at: Vertex) -> Result<Graph, GenError> {
    attach(base, len, at, false)
}

/// Vertex names of [`fig2`] by id.
pub const FIG2_NAMES: [&str; 6] = ["f", "c", "d", "e", "a", "b"];

/// The six-vertex example with tree `{fc, fd, fe, ca, db}` and non-tree edges
/// `cd, ad, ab, be`. `f` is vertex 0 so it is the default root, and the BFS
/// tree from it is exactly that tree. Edge order: the five tree edges, then
/// the four non-tree edges as listed.
pub fn fig2() -> Graph {
    let id = |name: &str| FIG2_NAMES.iter().position(|&x| x == name).expect("fig2 name");
    let pairs = [
        ("f", "c"),
        ("f", "d"),
        ("f", "e"),
        ("c", "a"),
        ("d", "b"),
        ("c", "d"),
        ("a", "d"),
        ("a", "b"),
        ("b", "e"),
    ];
    Graph::new(6, pairs.map(|(a, b)| (id(a), id(b)))).expect("valid fig2")
}

/// Edge index of `{x, y}` in [`fig2`], by vertex names.
pub fn fig2_edge(g: &Graph, x: &str, y: &str) -> Option<usize> {
    let id = |name: &str| FIG2_NAMES.iter().position(|&n| n == name);
    g.find_edge(id(x)?, id(y)?)
}

/// The 14-vertex tree-and-blocks example: vertices `a..n` are ids `0..13`,
/// `a` is the root, `h` and `k` are the inner block roots. Thirteen tree
/// edges come first, then six non-tree edges. It has five blocks.
pub fn fig6() -> Graph {
    let id = |c: char| c as usize - 'a' as usize;
    let pairs = [
        ('a', 'b'),
        ('a', 'c'),
        ('a', 'd'),
        ('a', 'e'),
        ('c', 'f'),
        ('d', 'g'),
        ('e', 'h'),
        ('g', 'i'),
        ('h', 'j'),
        ('h', 'k'),
        ('j', 'l'),
        ('k', 'm'),
        ('k', 'n'),
        ('b', 'c'),
        ('b', 'f'),
        ('a', 'g'),
        ('h', 'i'),
        ('h', 'l'),
        ('m', 'n'),
    ];
    Graph::new(14, pairs.map(|(a, b)| (id(a), id(b)))).expect("valid fig6")
}

/// A parsed generator request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Grid(usize, usize),
    Star(usize),
    Theta(Vec<usize>),
    Bowtie,
    Barbell,
    TwinK4,
    Random { n: usize, m: usize, seed: u64 },
    AttachCycle { len: usize, at: Vertex },
    AttachPath { len: usize, at: Vertex },
    Fig2,
    Fig6,
}

impl GeneratorSpec {
    /// Parse `family` and its numeric arguments, e.g. `("theta", [2, 2, 2])`.
    pub fn parse(family: &str, args: &[u64]) -> Result<Self, GenError> {
        let want = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                invalid(format!("{family} takes {k} argument(s), got {}", args.len()))
            }
        };
        let a = |i: usize| args[i] as usize;
        Ok(match family {
            "path" => want(1).map(|_| Self::Path(a(0)))?,
            "cycle" => want(1).map(|_| Self::Cycle(a(0)))?,
            "complete" => want(1).map(|_| Self::Complete(a(0)))?,
            "grid" => want(2).map(|_| Self::Grid(a(0), a(1)))?,
            "star" => want(1).map(|_| Self::Star(a(0)))?,
            "theta" => Self::Theta(args.iter().map(|&x| x as usize).collect()),
            "bowtie" => want(0).map(|_| Self::Bowtie)?,
            "barbell" => want(0).map(|_| Self::Barbell)?,
            "twin-k4" => want(0).map(|_| Self::TwinK4)?,
            "random" => want(3).map(|_| Self::Random {
                n: a(0),
                m: a(1),
                seed: args[2],
            })?,
            "attach-cycle" => want(2).map(|_| Self::AttachCycle { len: a(0), at: a(1) })?,
            "attach-path" => want(2).map(|_| Self::AttachPath { len: a(0), at: a(1) })?,
            "fig2" => want(0).map(|_| Self::Fig2)?,
            "fig6" => want(0).map(|_| Self::Fig6)?,
            other => return invalid(format!("unknown family {other}")),
        })
    }

    pub fn needs_base(&self) -> bool {
        matches!(self, Self::AttachCycle { .. } | Self::AttachPath { .. })
    }

    pub fn generate(&self, base: Option<&Graph>) -> Result<Graph, GenError> {
        let base = || base.ok_or_else(|| GenError::Invalid("this family needs a base graph".into()));
        match self {
            Self::Path(n) => path(*n),
            Self::Cycle(n) => cycle(*n),
            Self::Complete(n) => complete(*n),
            Self::Grid(r, c) => grid(*r, *c),
            Self::Star(k) => star(*k),
            Self::Theta(l) => theta(l),
            Self::Bowtie => Ok(bowtie()),
            Self::Barbell => Ok(barbell()),
            Self::TwinK4 => Ok(twin_k4()),
            Self::Random { n, m, seed } => random_connected(*n, *m, *seed),
            Self::AttachCycle { len, at } => attach_cycle(base()?, *len, *at),
            Self::AttachPath { len, at } => attach_path(base()?, *len, *at),
            Self::Fig2 => Ok(fig2()),
            Self::Fig6 => Ok(fig6()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_blocks, oracle_bridges_articulations};

    #[test]
    fn attached_families() {
        let c4 = cycle(4).unwrap();
        let gc = attach_cycle(&c4, 4, 0).unwrap();
        assert_eq!((gc.n(), gc.m()), (7, 8));
        assert!(oracle_bridges_articulations(&gc).0.is_empty());
        let gp = attach_path(&c4, 4, 0).unwrap();
        assert_eq!((gp.n(), gp.m()), (7, 7));
        assert_eq!(oracle_bridges_articulations(&gp).0.to_vec(), vec![4, 5, 6]);
        assert_eq!(&gc.edges()[..7], gp.edges());
    }

    #[test]
    fn fig6_has_five_blocks() {
        let mut b = oracle_blocks(&fig6());
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 5);
    }

    #[test]
    fn random_is_connected_and_sized() {
        for seed in 0..20 {
            let g = random_connected(12, 20, seed).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.m(), 20);
            let h = random_two_edge_connected(12, 18, seed).unwrap();
            assert!(oracle_bridges_articulations(&h).0.is_empty());
        }
        assert_eq!(random_connected(5, 10, 1).unwrap().m(), 10);
    }

    #[test]
    fn theta_shape() {
        let t = theta(&[2, 2, 2]).unwrap();
        assert_eq!((t.n(), t.m()), (5, 6));
        assert!(theta(&[1, 1]).is_err());
    }
}
