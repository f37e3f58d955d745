//! Schur complements of graphs onto vertex subsets (star-mesh
//! elimination), contraction, effective resistance between vertex sets,
//! and the conductance quantities `rho` and `sigma` built from them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::VertexSet;
use crate::{spectral, Error, Graph, Result};

/// A graph obtained by eliminating vertices, together with the mapping
/// back to the source graph's vertex ids.
///
/// `graph` uses compact ids `0..k`; `retained` holds the corresponding
/// original ids in ascending order, so compact id `i` is original id
/// `retained.as_slice()[i]`.
#[derive(Clone, Debug)]
pub struct SchurGraph {
    pub graph: Graph,
    pub retained: VertexSet,
}

impl SchurGraph {
    /// Compact id of an original vertex, if retained.
    pub fn compact_id(&self, original: usize) -> Option<usize> {
        self.retained.as_slice().binary_search(&original).ok()
    }

    pub fn original_id(&self, compact: usize) -> usize {
        self.retained.as_slice()[compact]
    }

    /// Volume of a set given in original ids.
    pub fn volume_original(&self, s: &VertexSet) -> f64 {
        s.iter()
            .filter_map(|v| self.compact_id(v))
            .map(|c| self.graph.degree(c))
            .sum()
    }
}

/// Conductance quantities of a cut pair `(A, B)` through
/// `I = Schur(G, A u B)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConductanceReport {
    /// Schur complement fractional conductance `c^I(A,B) / min(vol_I)`.
    pub rho: f64,
    /// Mixed fractional conductance `c^I(A,B) / min(vol_G)`.
    pub sigma: f64,
    /// Schur complement cut weight `c^I(A,B)`.
    pub schur_cut: f64,
    pub vol_i_a: f64,
    pub vol_i_b: f64,
    pub vol_g_a: f64,
    pub vol_g_b: f64,
}

/// Mutable adjacency-map view of a graph used during elimination.
struct WorkGraph {
    adj: Vec<BTreeMap<usize, f64>>,
    alive: Vec<bool>,
}

impl WorkGraph {
    fn new(g: &Graph) -> Self {
        let mut adj = vec![BTreeMap::new(); g.n()];
        for e in g.edges() {
            adj[e.u].insert(e.v, e.w);
            adj[e.v].insert(e.u, e.w);
        }
        WorkGraph {
            adj,
            alive: vec![true; g.n()],
        }
    }

    fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v].values().sum()
    }

    /// Star-mesh transform: remove `v`, adding `c_uv * c_vw / c_v` between
    /// every pair of its neighbors. Self-contributions (`u == w`) are
    /// dropped.
    fn eliminate(&mut self, v: usize) {
        let cv = self.weighted_degree(v);
        let neighbors: Vec<(usize, f64)> =
            self.adj[v].iter().map(|(&u, &w)| (u, w)).collect();
        for &(u, _) in &neighbors {
            self.adj[u].remove(&v);
        }
        if cv > 0.0 {
            for i in 0..neighbors.len() {
                let (u, cu) = neighbors[i];
                for &(w, cw) in &neighbors[i + 1..] {
                    let fill = cu * cw / cv;
                    *self.adj[u].entry(w).or_insert(0.0) += fill;
                    *self.adj[w].entry(u).or_insert(0.0) += fill;
                }
            }
        }
        self.adj[v].clear();
        self.alive[v] = false;
    }

    /// Edges among currently alive vertices, in original ids.
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adj.iter().enumerate() {
            if !self.alive[u] {
                continue;
            }
            for (&v, &w) in nbrs {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }
}

fn compact_graph(edges: &[(usize, usize, f64)], retained: &VertexSet) -> Result<Graph> {
    let index: BTreeMap<usize, usize> = retained
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let compacted: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(u, v, w)| (index[&u], index[&v], w))
        .collect();
    Graph::with_vertices(retained.len(), &compacted)
}

/// Eliminate a single vertex by the star-mesh transform. The remaining
/// vertices are compacted, keeping their relative order.
pub fn eliminate_vertex(g: &Graph, v: usize) -> Result<Graph> {
    if g.n() == 1 {
        return Err(Error::LastVertex);
    }
    if v >= g.n() {
        return Err(Error::UnknownVertex(v));
    }
    let mut work = WorkGraph::new(g);
    work.eliminate(v);
    let retained = VertexSet::from_sorted((0..g.n()).filter(|&u| u != v).collect());
    compact_graph(&work.edges(), &retained)
}

/// Schur complement of `g` onto the retained set `x`, eliminating the
/// complement one vertex at a time in minimum-degree order (current
/// neighbor count, ties by smallest id).
pub fn schur_complement(g: &Graph, x: &VertexSet) -> Result<SchurGraph> {
    schur_complement_ordered(g, x, None)
}

/// Schur complement with an explicit elimination order (original ids of
/// `V \ X`); used by tests to confirm order-invariance. `None` selects
/// minimum-degree order.
pub fn schur_complement_ordered(
    g: &Graph,
    x: &VertexSet,
    order: Option<&[usize]>,
) -> Result<SchurGraph> {
    if x.is_empty() {
        return Err(Error::EmptyRetainedSet);
    }
    if let Some(max) = x.max() {
        if max >= g.n() {
            return Err(Error::UnknownVertex(max));
        }
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let keep = x.mask(g.n());
    let mut work = WorkGraph::new(g);
    match order {
        Some(order) => {
            for &v in order {
                work.eliminate(v);
            }
        }
        None => loop {
            // Lazy min-degree: rescan the candidates each round. The
            // eliminated sets at desk scale keep this cheap.
            let next = (0..g.n())
                .filter(|&v| !keep[v] && work.alive[v])
                .min_by_key(|&v| (work.adj[v].len(), v));
            match next {
                Some(v) => work.eliminate(v),
                None => break,
            }
        },
    }
    let graph = compact_graph(&work.edges(), x)?;
    Ok(SchurGraph {
        graph,
        retained: x.clone(),
    })
}

/// Result of contracting `a` (and optionally `b`) each to a single
/// vertex.
///
/// Non-contracted vertices come first in ascending original order,
/// followed by the contracted vertex for `a`, then the one for `b`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// Id of the vertex `a` in the contracted graph, if `a` was nonempty.
    pub a: Option<usize>,
    pub b: Option<usize>,
    /// Map from original vertex id to contracted id.
    pub map: Vec<usize>,
}

/// Contract `a` and `b` each to a single vertex, dropping internal edges
/// (self-loops) and merging parallel edges.
pub fn contract(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Contraction> {
    if !a.is_disjoint(b) {
        return Err(Error::OverlappingSets);
    }
    let in_a = a.mask(g.n());
    let in_b = b.mask(g.n());
    let mut map = vec![usize::MAX; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        if !in_a[v] && !in_b[v] {
            map[v] = next;
            next += 1;
        }
    }
    let a_id = if a.is_empty() {
        None
    } else {
        let id = next;
        next += 1;
        Some(id)
    };
    let b_id = if b.is_empty() {
        None
    } else {
        let id = next;
        next += 1;
        Some(id)
    };
    if let Some(id) = a_id {
        for v in a.iter() {
            map[v] = id;
        }
    }
    if let Some(id) = b_id {
        for v in b.iter() {
            map[v] = id;
        }
    }
    let triples: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter(|e| map[e.u] != map[e.v])
        .map(|e| (map[e.u], map[e.v], e.w))
        .collect();
    let graph = Graph::with_vertices(next, &triples)?;
    Ok(Contraction {
        graph,
        a: a_id,
        b: b_id,
        map,
    })
}

/// Effective resistance between the super-vertices obtained by
/// contracting `s1` and `s2`, via one Laplacian solve.
pub fn effective_resistance(g: &Graph, s1: &VertexSet, s2: &VertexSet) -> Result<f64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptySet);
    }
    if !s1.is_disjoint(s2) {
        return Err(Error::OverlappingSets);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let con = contract(g, s1, s2)?;
    let (a, b) = (con.a.unwrap(), con.b.unwrap());
    let n = con.graph.n();
    let mut rhs = vec![0.0; n];
    rhs[a] = 1.0;
    rhs[b] = -1.0;
    let x = spectral::solve_laplacian(&con.graph, &rhs)?;
    Ok(x[a] - x[b])
}

/// Schur complement cut weight `c^I(A,B)` for `I = Schur(G, A u B)`,
/// computed as the reciprocal of the effective resistance.
pub fn schur_cut_weight(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<f64> {
    Ok(1.0 / effective_resistance(g, a, b)?)
}

/// Materialize `I = Schur(G, A u B)` and report the cut weight and both
/// conductance quantities of the pair.
pub fn conductance_pair(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<ConductanceReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_disjoint(b) {
        return Err(Error::OverlappingSets);
    }
    let schur = schur_complement(g, &a.union(b))?;
    let in_a = a.mask(g.n());
    let in_b = b.mask(g.n());
    let mut cut = 0.0;
    let mut vol_i_a = 0.0;
    let mut vol_i_b = 0.0;
    for e in schur.graph.edges() {
        let (ou, ov) = (schur.original_id(e.u), schur.original_id(e.v));
        if (in_a[ou] && in_b[ov]) || (in_b[ou] && in_a[ov]) {
            cut += e.w;
        }
    }
    for c in 0..schur.graph.n() {
        let o = schur.original_id(c);
        if in_a[o] {
            vol_i_a += schur.graph.degree(c);
        } else if in_b[o] {
            vol_i_b += schur.graph.degree(c);
        }
    }
    let vol_g_a = g.volume(a);
    let vol_g_b = g.volume(b);
    Ok(ConductanceReport {
        rho: cut / vol_i_a.min(vol_i_b),
        sigma: cut / vol_g_a.min(vol_g_b),
        schur_cut: cut,
        vol_i_a,
        vol_i_b,
        vol_g_a,
        vol_g_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn path(n: usize) -> Graph {
        let triples: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        Graph::from_triples(&triples).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let triples: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Graph::from_triples(&triples).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_triples(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn eliminate_path_midpoint() {
        // Series conductance rule: two unit resistors give 1/2.
        let g = eliminate_vertex(&path(3), 1).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
        assert_relative_eq!(g.edges()[0].w, 0.5);
    }

    #[test]
    fn eliminate_triangle_vertex() {
        let g = eliminate_vertex(&triangle(), 2).unwrap();
        assert_eq!(g.m(), 1);
        assert_relative_eq!(g.edges()[0].w, 1.5);
    }

    #[test]
    fn eliminate_star_center() {
        // Star with center 3 and leaves 0,1,2 becomes a 1/3-weighted
        // triangle.
        let star = Graph::from_triples(&[(3, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0)]).unwrap();
        let g = eliminate_vertex(&star, 3).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        for e in g.edges() {
            assert_relative_eq!(e.w, 1.0 / 3.0);
        }
    }

    #[test]
    fn eliminate_last_vertex_fails() {
        let g = eliminate_vertex(&path(2), 0).unwrap();
        assert!(matches!(eliminate_vertex(&g, 0), Err(Error::LastVertex)));
    }

    #[test]
    fn schur_path4_endpoints() {
        let s = schur_complement(&path(4), &VertexSet::new(vec![0, 3])).unwrap();
        assert_eq!(s.graph.m(), 1);
        assert_relative_eq!(s.graph.edges()[0].w, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn schur_cycle_opposite() {
        let s = schur_complement(&cycle(4), &VertexSet::new(vec![0, 2])).unwrap();
        assert_eq!(s.graph.m(), 1);
        assert_relative_eq!(s.graph.edges()[0].w, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn schur_identity() {
        let g = triangle();
        let s = schur_complement(&g, &g.vertices()).unwrap();
        assert_eq!(s.graph.m(), g.m());
        for (a, b) in s.graph.edges().iter().zip(g.edges()) {
            assert_eq!(a.u, b.u);
            assert_eq!(a.v, b.v);
            assert_relative_eq!(a.w, b.w);
        }
    }

    #[test]
    fn schur_empty_retained_fails() {
        assert!(matches!(
            schur_complement(&triangle(), &VertexSet::new(vec![])),
            Err(Error::EmptyRetainedSet)
        ));
    }

    #[test]
    fn contract_triangle_pair() {
        let con = contract(
            &triangle(),
            &VertexSet::new(vec![0, 1]),
            &VertexSet::new(vec![]),
        )
        .unwrap();
        assert_eq!(con.graph.n(), 2);
        assert_eq!(con.graph.m(), 1);
        assert_relative_eq!(con.graph.edges()[0].w, 2.0);
    }

    #[test]
    fn contract_cycle_singletons() {
        let con = contract(
            &cycle(4),
            &VertexSet::singleton(0),
            &VertexSet::singleton(2),
        )
        .unwrap();
        // Pure relabeling: vertices {1, 3, a, b} with the four cycle
        // edges intact.
        assert_eq!(con.graph.n(), 4);
        assert_eq!(con.graph.m(), 4);
        for e in con.graph.edges() {
            assert_relative_eq!(e.w, 1.0);
        }
    }

    #[test]
    fn contract_path_endpoints() {
        let con = contract(&path(3), &VertexSet::new(vec![0, 2]), &VertexSet::new(vec![]))
            .unwrap();
        assert_eq!(con.graph.n(), 2);
        assert_relative_eq!(con.graph.edges()[0].w, 2.0);
    }

    #[test]
    fn reff_series() {
        for k in [1usize, 3, 6] {
            let g = path(k + 1);
            let r = effective_resistance(&g, &VertexSet::singleton(0), &VertexSet::singleton(k))
                .unwrap();
            assert_relative_eq!(r, k as f64, max_relative = 1e-8);
        }
    }

    #[test]
    fn reff_cycle_opposite() {
        let r = effective_resistance(
            &cycle(4),
            &VertexSet::singleton(0),
            &VertexSet::singleton(2),
        )
        .unwrap();
        assert_relative_eq!(r, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn reff_triangle_set() {
        let r = effective_resistance(
            &triangle(),
            &VertexSet::singleton(0),
            &VertexSet::new(vec![1, 2]),
        )
        .unwrap();
        assert_relative_eq!(r, 0.5, max_relative = 1e-8);
    }

    #[test]
    fn schur_cut_weights() {
        let p = path(3);
        assert_relative_eq!(
            schur_cut_weight(&p, &VertexSet::singleton(0), &VertexSet::singleton(2)).unwrap(),
            0.5,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            schur_cut_weight(&p, &VertexSet::singleton(0), &VertexSet::singleton(1)).unwrap(),
            1.0,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            schur_cut_weight(&cycle(4), &VertexSet::singleton(0), &VertexSet::singleton(2))
                .unwrap(),
            1.0,
            max_relative = 1e-8
        );
    }

    #[test]
    fn conductance_pair_path_endpoints() {
        let rep = conductance_pair(&path(3), &VertexSet::singleton(0), &VertexSet::singleton(2))
            .unwrap();
        assert_relative_eq!(rep.schur_cut, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rep.rho, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rep.sigma, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn conductance_pair_path_adjacent() {
        let rep = conductance_pair(&path(3), &VertexSet::singleton(0), &VertexSet::singleton(1))
            .unwrap();
        assert_relative_eq!(rep.rho, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rep.sigma, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conductance_pair_two_vertices() {
        let g = path(2);
        let rep = conductance_pair(&g, &VertexSet::singleton(0), &VertexSet::singleton(1))
            .unwrap();
        assert_relative_eq!(rep.rho, 1.0);
        assert_relative_eq!(rep.sigma, 1.0);
    }

    #[test]
    fn sigma_le_rho() {
        let g = cycle(8);
        let a = VertexSet::new(vec![0, 1]);
        let b = VertexSet::new(vec![4, 5]);
        let rep = conductance_pair(&g, &a, &b).unwrap();
        assert!(rep.sigma <= rep.rho + 1e-12);
        assert!(rep.rho <= 1.0 + 1e-12);
    }
}
