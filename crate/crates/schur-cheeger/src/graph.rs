//! Weighted undirected graphs and their combinatorial cut quantities:
//! degrees, volumes, cut weights, and fractional conductance.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// An undirected edge with a strictly positive weight. Always stored with
/// `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Immutable weighted undirected graph on vertices `0..n`.
///
/// Parallel input edges are merged by weight addition at construction and
/// self-loops are rejected, so the adjacency structure is simple. Degrees
/// are weighted: `degree(v)` is the sum of incident edge weights.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
    degree: Vec<f64>,
    connected: bool,
}

/// Build a graph from edge triples with arbitrary (possibly sparse) vertex
/// ids. Ids are compacted to `0..n` in ascending order; the returned map
/// sends each compact id to its original id.
pub fn build_graph(triples: &[(usize, usize, f64)]) -> Result<(Graph, Vec<usize>)> {
    let mut ids: Vec<usize> = triples.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let compacted: Vec<(usize, usize, f64)> = triples
        .iter()
        .map(|&(u, v, w)| (index[&u], index[&v], w))
        .collect();
    Ok((Graph::from_triples(&compacted)?, ids))
}

impl Graph {
    /// Build a graph from triples whose ids are already `0..n`-compact;
    /// `n` is inferred from the largest id.
    pub fn from_triples(triples: &[(usize, usize, f64)]) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = triples
            .iter()
            .map(|&(u, v, _)| u.max(v))
            .max()
            .unwrap()
            + 1;
        Self::with_vertices(n, triples)
    }

    /// Build a graph on exactly `n` vertices; vertices without incident
    /// edges are allowed (elimination can strand them).
    pub fn with_vertices(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(u, v, w) in triples {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if w.is_nan() || w <= 0.0 {
                return Err(Error::NonPositiveWeight { u, v, w });
            }
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(u.max(v)));
            }
        }

        // Merge parallel edges; the Laplacian is identical either way.
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(u, v, w) in triples {
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();

        let mut adj = vec![Vec::new(); n];
        let mut degree = vec![0.0; n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
            degree[e.u] += e.w;
            degree[e.v] += e.w;
        }

        let connected = {
            let mut uf = UnionFind::new(n);
            for e in &edges {
                uf.union(e.u, e.v);
            }
            (1..n).all(|v| uf.find(v) == uf.find(0))
        };

        Ok(Graph {
            n,
            edges,
            adj,
            degree,
            connected,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` as `(neighbor, weight)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Weighted degree `c_v`, the sum of incident edge weights.
    pub fn degree(&self, v: usize) -> f64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Total volume `vol(V) = sum_v c_v = 2 * sum_e c_e`.
    pub fn total_volume(&self) -> f64 {
        self.degree.iter().sum()
    }

    /// `vol(S) = sum_{v in S} c_v`.
    pub fn volume(&self, s: &VertexSet) -> f64 {
        s.iter().map(|v| self.degree[v]).sum()
    }

    /// Total weight of edges with one endpoint in `a` and one in `b`.
    pub fn cut_weight(&self, a: &VertexSet, b: &VertexSet) -> Result<f64> {
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingSets);
        }
        let in_b = b.mask(self.n);
        let mut total = 0.0;
        for u in a.iter() {
            for &(v, w) in &self.adj[u] {
                if in_b[v] {
                    total += w;
                }
            }
        }
        Ok(total)
    }

    /// Boundary weight `c(\partial A)`, the cut between `a` and its
    /// complement.
    pub fn boundary_weight(&self, a: &VertexSet) -> f64 {
        let in_a = a.mask(self.n);
        let mut total = 0.0;
        for u in a.iter() {
            for &(v, w) in &self.adj[u] {
                if !in_a[v] {
                    total += w;
                }
            }
        }
        total
    }

    /// Fractional conductance `phi_A = c(\partial A) / min(vol(A), vol(V \ A))`.
    pub fn phi_set(&self, a: &VertexSet) -> Result<f64> {
        if a.is_empty() || a.len() >= self.n {
            return Err(Error::EmptyOrFullSet);
        }
        let vol_a = self.volume(a);
        let vol_rest = self.total_volume() - vol_a;
        Ok(self.boundary_weight(a) / vol_a.min(vol_rest))
    }

    /// The full vertex set `0..n`.
    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_sorted((0..self.n).collect())
    }

    /// Complement of `s` within `0..n`.
    pub fn complement(&self, s: &VertexSet) -> VertexSet {
        let mask = s.mask(self.n);
        VertexSet::from_sorted((0..self.n).filter(|&v| !mask[v]).collect())
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet { members: ids }
    }

    /// Wrap an already sorted, duplicate-free id list.
    pub fn from_sorted(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members: ids }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet { members: vec![v] }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn max(&self) -> Option<usize> {
        self.members.last().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        // Merge walk over the two sorted lists.
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut ids: Vec<usize> = self
            .members
            .iter()
            .chain(other.members.iter())
            .copied()
            .collect();
        ids.sort_unstable();
        ids.dedup();
        VertexSet { members: ids }
    }

    /// Membership bitmask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            assert!(v < n, "vertex id {v} out of range (n = {n})");
            mask[v] = true;
        }
        mask
    }
}

/// Two disjoint nonempty vertex sets.
#[derive(Clone, Debug)]
pub struct CutPair {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl CutPair {
    pub fn new(a: VertexSet, b: VertexSet) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        if !a.is_disjoint(&b) {
            return Err(Error::OverlappingSets);
        }
        Ok(CutPair { a, b })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    fn union(&mut self, u: usize, v: usize) {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru != rv {
            self.parent[ru] = rv;
        }
    }
}
