//! Dense-index adjacency built from a snapshot.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::PageId;

/// Compressed in/out adjacency over node indices `0..n`, where index `i`
/// corresponds to the `i`-th smallest page id.
#[derive(Debug, Clone)]
pub struct IndexedGraph {
    ids: Vec<PageId>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl IndexedGraph {
    /// `ids` must be sorted and unique; edges with unknown endpoints are
    /// ignored.
    pub fn new(ids: &[PageId], edges: &[(PageId, PageId)]) -> Self {
        let n = ids.len();
        let pairs: Vec<(usize, usize)> = edges
            .iter()
            .filter_map(|&(s, d)| Some((ids.binary_search(&s).ok()?, ids.binary_search(&d).ok()?)))
            .collect();
        let (out_offsets, out_targets) = csr(n, pairs.iter().copied());
        let (in_offsets, in_sources) = csr(n, pairs.iter().map(|&(s, d)| (d, s)));
        IndexedGraph {
            ids: ids.to_vec(),
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn ids(&self) -> &[PageId] {
        &self.ids
    }

    pub fn index_of(&self, id: PageId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[u]..self.in_offsets[u + 1]]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_offsets[u + 1] - self.in_offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected simple-graph projection: reciprocal edges collapse to one.
    /// Returns sorted `(a, b)` pairs with `a < b`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.node_count())
            .flat_map(|u| self.out_neighbors(u).iter().map(move |&v| (u.min(v), u.max(v))))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn csr(n: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    for (a, _) in pairs.clone() {
        offsets[a + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0usize; offsets[n]];
    for (a, b) in pairs {
        targets[fill[a]] = b;
        fill[a] += 1;
    }
    for u in 0..n {
        targets[offsets[u]..offsets[u + 1]].sort_unstable();
    }
    (offsets, targets)
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
