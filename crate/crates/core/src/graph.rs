//! Simple undirected graphs, edge bitsets and rooted spanning trees.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Vertex identifier; vertices are `0..n`.
pub type Vertex = usize;
/// Edge identifier; edges are indexed in insertion (file) order.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    Duplicate(Vertex, Vertex),
    #[error("endpoint {vertex} out of range for n = {n}")]
    Dangling { vertex: Vertex, n: usize },
    #[error("graph is disconnected: vertex {unreached} is unreachable from vertex {root}")]
    Disconnected { root: Vertex, unreached: Vertex },
    #[error("edge {0} is a tree edge")]
    TreeEdge(EdgeId),
    #[error("edge {0} is not a tree edge")]
    NotTreeEdge(EdgeId),
    #[error("vertex {0} out of range")]
    NoSuchVertex(Vertex),
    #[error("edge {0} out of range")]
    NoSuchEdge(EdgeId),
    #[error("parent edges do not form a spanning tree: {0}")]
    NotSpanning(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A line that is not two non-negative integers.
    Malformed(String),
    Loop(Vertex),
    Duplicate(Vertex, Vertex),
    Dangling { vertex: Vertex, n: usize },
    /// Header says `declared` edges but the body has `found`.
    CountMismatch { declared: usize, found: usize },
    MissingHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Malformed(s) => write!(f, "malformed line {s:?}"),
            ParseErrorKind::Loop(v) => write!(f, "self-loop at vertex {v}"),
            ParseErrorKind::Duplicate(u, v) => write!(f, "duplicate edge {{{u}, {v}}}"),
            ParseErrorKind::Dangling { vertex, n } => {
                write!(f, "endpoint {vertex} out of range for n = {n}")
            }
            ParseErrorKind::CountMismatch { declared, found } => {
                write!(f, "header declares {declared} edges but {found} were given")
            }
            ParseErrorKind::MissingHeader => write!(f, "missing \"n m\" header"),
        }
    }
}

/// One entry of a vertex's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Incidence {
    pub neighbor: Vertex,
    pub edge: EdgeId,
}

/// A simple undirected graph with indexed edges.
///
/// Edges are stored with the smaller endpoint first. Adjacency lists are in
/// edge-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Incidence>>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        };
        let mut seen = HashSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::Dangling { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::Duplicate(key.0, key.1));
            }
            g.push_edge(key);
        }
        Ok(g)
    }

    fn push_edge(&mut self, (u, v): (Vertex, Vertex)) {
        let e = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push(Incidence { neighbor: v, edge: e });
        self.adj[v].push(Incidence { neighbor: u, edge: e });
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident(&self, v: Vertex) -> &[Incidence] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn find_edge(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.adj
            .get(u)?
            .iter()
            .find(|inc| inc.neighbor == v)
            .map(|inc| inc.edge)
    }

    /// Component label per vertex (smallest vertex of the component) using
    /// only edges accepted by `keep`.
    pub fn component_labels(&self, keep: impl Fn(EdgeId) -> bool) -> Vec<Vertex> {
        let mut label = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = s;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for inc in &self.adj[v] {
                    if keep(inc.edge) && label[inc.neighbor] == usize::MAX {
                        label[inc.neighbor] = s;
                        queue.push_back(inc.neighbor);
                    }
                }
            }
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_labels(|_| true).iter().all(|&l| l == 0)
    }

    /// Error naming an unreachable vertex if the graph is disconnected.
    pub fn require_connected(&self) -> Result<(), GraphError> {
        let labels = self.component_labels(|_| true);
        match labels.iter().position(|&l| l != 0) {
            None => Ok(()),
            Some(v) => Err(GraphError::Disconnected {
                root: 0,
                unreached: v,
            }),
        }
    }

    /// Hop distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn distances(&self, src: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(v) = queue.pop_front() {
            for inc in &self.adj[v] {
                if dist[inc.neighbor] == usize::MAX {
                    dist[inc.neighbor] = dist[v] + 1;
                    queue.push_back(inc.neighbor);
                }
            }
        }
        dist
    }

    /// Exact diameter by all-sources BFS. Assumes connectivity.
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|s| self.distances(s).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Subgraph induced on `vertices` (kept in ascending order) restricted to
    /// edges accepted by `keep`.
    pub fn subgraph(&self, vertices: &[Vertex], keep: impl Fn(EdgeId) -> bool) -> Subgraph {
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let mut graph = Graph {
            n: verts.len(),
            edges: Vec::new(),
            adj: vec![Vec::new(); verts.len()],
        };
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX && keep(e) {
                graph.push_edge((local[u], local[v]));
                edge_map.push(e);
            }
        }
        Subgraph {
            graph,
            vertex_map: verts,
            edge_map,
        }
    }

    /// Serialize in the edge-list text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parse the edge-list text format: a header `n m`, then `m` lines `u v`.
/// Everything after `#` on a line is ignored, as are blank lines.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(ParseError {
        line: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let (n, declared) = parse_pair(header).ok_or_else(|| ParseError {
        line: hline,
        kind: ParseErrorKind::Malformed(header.to_string()),
    })?;
    let mut g = Graph {
        n,
        edges: Vec::new(),
        adj: vec![Vec::new(); n],
    };
    let mut seen = HashSet::new();
    let mut last_line = hline;
    for (line, body) in lines {
        last_line = line;
        let err = |kind| ParseError { line, kind };
        let (u, v) = parse_pair(body).ok_or_else(|| err(ParseErrorKind::Malformed(body.into())))?;
        for x in [u, v] {
            if x >= n {
                return Err(err(ParseErrorKind::Dangling { vertex: x, n }));
            }
        }
        if u == v {
            return Err(err(ParseErrorKind::Loop(u)));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(err(ParseErrorKind::Duplicate(key.0, key.1)));
        }
        g.push_edge(key);
    }
    if g.m() != declared {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::CountMismatch {
                declared,
                found: g.m(),
            },
        });
    }
    Ok(g)
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// A subgraph together with the maps from its local indices to the parent's.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<EdgeId>,
}

/// A set of edges, stored as a bitset over edge indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet(FixedBitSet);

impl EdgeSet {
    pub fn new(m: usize) -> Self {
        EdgeSet(FixedBitSet::with_capacity(m))
    }

    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut s = Self::new(m);
        for e in edges {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.0.insert(e);
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.0.set(e, false);
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.0.clone();
        s.symmetric_difference_with(&other.0);
        EdgeSet(s)
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.0.clone();
        s.intersect_with(&other.0);
        EdgeSet(s)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.0.clone();
        s.union_with(&other.0);
        EdgeSet(s)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A rooted spanning tree with preorder annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    parent_edge: Vec<Option<EdgeId>>,
    level: Vec<usize>,
    children: Vec<Vec<Vertex>>,
    tree_edge: Vec<bool>,
    height: usize,
    by_level: Vec<Vertex>,
    numbering: Preorder,
}

/// Preorder labels, subtree sizes and subtree-neighbourhood extremes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Preorder {
    pub pre: Vec<usize>,
    pub desc: Vec<usize>,
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

impl RootedTree {
    /// Build a tree from each non-root vertex's parent edge.
    pub fn from_parent_edges(
        g: &Graph,
        root: Vertex,
        parent_edge: Vec<Option<EdgeId>>,
    ) -> Result<Self, GraphError> {
        let n = g.n();
        if root >= n {
            return Err(GraphError::NoSuchVertex(root));
        }
        if parent_edge.len() != n || parent_edge[root].is_some() {
            return Err(GraphError::NotSpanning("root must have no parent".into()));
        }
        let mut parent = vec![None; n];
        let mut tree_edge = vec![false; g.m()];
        for v in 0..n {
            if v == root {
                continue;
            }
            let e = parent_edge[v]
                .ok_or_else(|| GraphError::NotSpanning(format!("vertex {v} has no parent")))?;
            if e >= g.m() {
                return Err(GraphError::NoSuchEdge(e));
            }
            let (a, b) = g.edge(e);
            if a != v && b != v {
                return Err(GraphError::NotSpanning(format!(
                    "parent edge {e} is not incident to {v}"
                )));
            }
            parent[v] = Some(g.other(e, v));
            tree_edge[e] = true;
        }
        let mut children = vec![Vec::new(); n];
        for (v, kids) in children.iter_mut().enumerate() {
            for inc in g.incident(v) {
                if parent_edge[inc.neighbor] == Some(inc.edge) && parent[inc.neighbor] == Some(v) {
                    kids.push(inc.neighbor);
                }
            }
        }
        let mut level = vec![usize::MAX; n];
        let mut by_level = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        level[root] = 0;
        while let Some(v) = queue.pop_front() {
            by_level.push(v);
            for &c in &children[v] {
                level[c] = level[v] + 1;
                queue.push_back(c);
            }
        }
        if by_level.len() != n {
            return Err(GraphError::NotSpanning("parent pointers contain a cycle".into()));
        }
        let height = level.iter().copied().max().unwrap_or(0);
        let mut t = RootedTree {
            root,
            parent,
            parent_edge,
            level,
            children,
            tree_edge,
            height,
            by_level,
            numbering: Preorder::default(),
        };
        t.numbering = annotate_preorder(&t, g);
        Ok(t)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn parent_edge(&self, v: Vertex) -> Option<EdgeId> {
        self.parent_edge[v]
    }

    pub fn level(&self, v: Vertex) -> usize {
        self.level[v]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edge[e]
    }

    /// Vertices in nondecreasing level order, root first.
    pub fn by_level(&self) -> &[Vertex] {
        &self.by_level
    }

    pub fn numbering(&self) -> &Preorder {
        &self.numbering
    }

    pub fn pre(&self, v: Vertex) -> usize {
        self.numbering.pre[v]
    }

    pub fn desc(&self, v: Vertex) -> usize {
        self.numbering.desc[v]
    }

    pub fn low(&self, v: Vertex) -> usize {
        self.numbering.low[v]
    }

    pub fn high(&self, v: Vertex) -> usize {
        self.numbering.high[v]
    }

    /// True iff `u` lies in the subtree of `v` (including `u == v`).
    pub fn is_descendant(&self, u: Vertex, v: Vertex) -> bool {
        let (pu, pv) = (self.pre(u), self.pre(v));
        pu >= pv && pu < pv + self.desc(v)
    }

    /// `v` and its ancestors, from `v` up to the root.
    pub fn ancestors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            out.push(p);
            x = p;
        }
        out
    }

    /// The tree path between `u` and `v` as a list of tree edges.
    pub fn path_edges(&self, mut u: Vertex, mut v: Vertex) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while u != v {
            if self.level[u] >= self.level[v] {
                out.push(self.parent_edge[u].expect("non-root"));
                u = self.parent[u].expect("non-root");
            } else {
                out.push(self.parent_edge[v].expect("non-root"));
                v = self.parent[v].expect("non-root");
            }
        }
        out
    }

    pub fn lca(&self, mut u: Vertex, mut v: Vertex) -> Vertex {
        while u != v {
            if self.level[u] >= self.level[v] {
                u = self.parent[u].expect("non-root");
            } else {
                v = self.parent[v].expect("non-root");
            }
        }
        u
    }
}

/// BFS tree from `root`; children appear in adjacency order.
pub fn bfs_tree(g: &Graph, root: Vertex) -> Result<RootedTree, GraphError> {
    if root >= g.n() {
        return Err(GraphError::NoSuchVertex(root));
    }
    let mut parent_edge = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for inc in g.incident(v) {
            if !seen[inc.neighbor] {
                seen[inc.neighbor] = true;
                parent_edge[inc.neighbor] = Some(inc.edge);
                queue.push_back(inc.neighbor);
            }
        }
    }
    if let Some(u) = seen.iter().position(|s| !s) {
        return Err(GraphError::Disconnected { root, unreached: u });
    }
    RootedTree::from_parent_edges(g, root, parent_edge)
}

/// Compute preorder, descendant counts and low/high for `t`.
///
/// `low(v)`/`high(v)` are the extreme preorder labels over the descendants of
/// `v` and their non-tree neighbours.
pub fn annotate_preorder(t: &RootedTree, g: &Graph) -> Preorder {
    let n = t.n();
    let mut pre = vec![0; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![t.root];
    while let Some(v) = stack.pop() {
        pre[v] = order.len();
        order.push(v);
        stack.extend(t.children[v].iter().rev());
    }
    let mut desc = vec![1; n];
    let mut low = pre.clone();
    let mut high = pre.clone();
    for v in 0..n {
        for inc in g.incident(v) {
            if !t.tree_edge[inc.edge] {
                low[v] = low[v].min(pre[inc.neighbor]);
                high[v] = high[v].max(pre[inc.neighbor]);
            }
        }
    }
    for &v in order.iter().rev() {
        if let Some(p) = t.parent[v] {
            desc[p] += desc[v];
            low[p] = low[p].min(low[v]);
            high[p] = high[p].max(high[v]);
        }
    }
    Preorder {
        pre,
        desc,
        low,
        high,
    }
}

/// The fundamental cycle of non-tree edge `e`.
pub fn fundamental_cycle(g: &Graph, t: &RootedTree, e: EdgeId) -> Result<EdgeSet, GraphError> {
    if e >= g.m() {
        return Err(GraphError::NoSuchEdge(e));
    }
    if t.is_tree_edge(e) {
        return Err(GraphError::TreeEdge(e));
    }
    let (u, v) = g.edge(e);
    let mut set = EdgeSet::from_edges(g.m(), t.path_edges(u, v));
    set.insert(e);
    Ok(set)
}

/// The fundamental cut of tree edge `e`: all edges leaving the subtree below `e`.
pub fn fundamental_cut(g: &Graph, t: &RootedTree, e: EdgeId) -> Result<EdgeSet, GraphError> {
    if e >= g.m() {
        return Err(GraphError::NoSuchEdge(e));
    }
    if !t.is_tree_edge(e) {
        return Err(GraphError::NotTreeEdge(e));
    }
    let (a, b) = g.edge(e);
    let below = if t.parent(a) == Some(b) { a } else { b };
    Ok(EdgeSet::from_edges(
        g.m(),
        (0..g.m()).filter(|&f| {
            let (x, y) = g.edge(f);
            t.is_descendant(x, below) != t.is_descendant(y, below)
        }),
    ))
}

/// The edge boundary `δ(S)` of the vertices marked in `inside`.
pub fn boundary(g: &Graph, inside: &[bool]) -> EdgeSet {
    EdgeSet::from_edges(
        g.m(),
        (0..g.m()).filter(|&e| {
            let (u, v) = g.edge(e);
            inside[u] != inside[v]
        }),
    )
}
