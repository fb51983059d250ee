//! Union-find over vertices.

/// Disjoint sets with path compression; the representative of a class is its
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    /// Merge the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Representative (smallest member) of every element.
    pub fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }

    /// Classes as sorted member lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let labels = self.labels();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; labels.len()];
        for (x, &r) in labels.iter().enumerate() {
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representative_is_smallest() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(3, 4);
        uf.union(1, 2);
        assert_eq!(uf.labels(), vec![0, 1, 1, 3, 3, 3]);
        assert_eq!(uf.classes(), vec![vec![0], vec![1, 2], vec![3, 4, 5]]);
        assert!(!uf.union(4, 5));
    }
}
