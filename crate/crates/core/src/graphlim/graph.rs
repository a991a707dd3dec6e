use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::setfn::bit_iter;

/// Simple undirected graph on nodes `0..n` (n ≤ 64).
///
/// Edges are stored as `(u, v)` with `u < v`, sorted; that order is the
/// ground-set order of the graph's cycle matroid and of edge setfunctions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

pub const MAX_NODES: usize = 64;

impl SimpleGraph {
    /// Rejects loops, duplicate edges and out-of-range endpoints. Edges are
    /// stored as sorted `(min, max)` pairs and edge indices follow that order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::CapExceeded {
                what: "node count",
                value: n,
                cap: MAX_NODES,
            });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge {u}-{v} outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at node {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(Self::from_canonical(n, set.into_iter().collect()))
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![0u64; n];
        for &(u, v) in &edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        SimpleGraph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 nodes");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<_> = (0..a)
            .flat_map(|u| (0..b).map(move |v| (u, a + v)))
            .collect();
        Self::new(a + b, edges).expect("bipartite graph is simple")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self, u: usize) -> u64 {
        self.adj[u]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// `G_X = (V, X)` for an edge mask `X`.
    pub fn edge_subgraph(&self, mask: u64) -> SimpleGraph {
        let edges = bit_iter(mask).map(|e| self.edges[e]).collect();
        Self::from_canonical(self.n, edges)
    }

    /// Ordered incidence count `e(S, T) = #{(u, v) : u ∈ S, v ∈ T, uv ∈ E}`;
    /// an edge inside `S ∩ T` counts twice.
    pub fn e(&self, s: u64, t: u64) -> usize {
        bit_iter(s).map(|u| (self.adj[u] & t).count_ones() as usize).sum()
    }

    /// Relabels nodes: node `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> SimpleGraph {
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("permutation keeps the graph simple")
    }

    /// Node-disjoint union, `other`'s nodes shifted by `self.node_count()`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> Result<SimpleGraph> {
        let off = self.n;
        SimpleGraph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off))),
        )
    }

    /// Sizes of connected components through each node, restricted to the
    /// edge mask.
    pub fn component_sizes(&self, mask: u64) -> Vec<usize> {
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(self.n);
        for e in bit_iter(mask) {
            let (u, v) = self.edges[e];
            uf.union(u, v);
        }
        let labels = uf.into_labeling();
        let mut count = vec![0usize; self.n];
        for &l in &labels {
            count[l] += 1;
        }
        labels.iter().map(|&l| count[l]).collect()
    }
}

/// `G(t)`: each node `u` becomes the independent class
/// `{u·t, …, u·t + t − 1}`, with complete bipartite joins between classes of
/// adjacent nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUp {
    pub graph: SimpleGraph,
    pub base_nodes: usize,
    pub t: usize,
}

impl BlowUp {
    /// Original node owning blow-up node `x`.
    pub fn class_of(&self, x: usize) -> usize {
        x / self.t
    }

    pub fn class_mask(&self, u: usize) -> u64 {
        crate::setfn::full_bits(self.t) << (u * self.t)
    }
}

pub fn blow_up(g: &SimpleGraph, t: usize) -> Result<BlowUp> {
    if t == 0 {
        return Err(Error::Invalid("blow-up factor must be positive".into()));
    }
    let n = g.node_count() * t;
    if n > MAX_NODES {
        return Err(Error::CapExceeded {
            what: "blow-up node count",
            value: n,
            cap: MAX_NODES,
        });
    }
    let mut edges = Vec::with_capacity(g.edge_count() * t * t);
    for &(u, v) in g.edges() {
        for a in 0..t {
            for b in 0..t {
                edges.push((u * t + a, v * t + b));
            }
        }
    }
    Ok(BlowUp {
        graph: SimpleGraph::new(n, edges)?,
        base_nodes: g.node_count(),
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(SimpleGraph::new(3, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn canonical_edge_order() {
        let g = SimpleGraph::new(4, [(3, 2), (1, 0), (0, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (2, 3)]);
        assert_eq!(g.edge_index(2, 0), Some(1));
    }

    #[test]
    fn ordered_incidences_count_twice() {
        let g = SimpleGraph::complete(2);
        assert_eq!(g.e(0b11, 0b11), 2);
        assert_eq!(g.e(0b01, 0b10), 1);
    }

    #[test]
    fn blow_up_identity() {
        let g = SimpleGraph::cycle(5);
        assert_eq!(blow_up(&g, 1).unwrap().graph, g);
    }

    #[test]
    fn blow_up_of_edge_is_four_cycle() {
        let b = blow_up(&SimpleGraph::complete(2), 2).unwrap();
        assert_eq!(b.graph.node_count(), 4);
        assert_eq!(b.graph.edge_count(), 4);
        assert!((0..4).all(|u| b.graph.degree(u) == 2));
    }

    #[test]
    fn blow_up_of_triangle() {
        let b = blow_up(&SimpleGraph::complete(3), 2).unwrap();
        assert_eq!(b.graph.node_count(), 6);
        assert_eq!(b.graph.edge_count(), 12);
        assert_eq!(b.class_of(5), 2);
        assert_eq!(b.class_mask(1), 0b001100);
    }

    #[test]
    fn component_sizes_of_path_split() {
        let g = SimpleGraph::path(4);
        // keep edges 0-1 and 2-3
        assert_eq!(g.component_sizes(0b101), vec![2, 2, 2, 2]);
        assert_eq!(g.component_sizes(0b001), vec![2, 2, 1, 1]);
    }
}
