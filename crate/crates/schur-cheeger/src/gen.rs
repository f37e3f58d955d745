//! Graph family generators for benchmarks and test suites.

use rand::Rng;

use crate::{Error, Graph, Result};

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::BadParams(format!("cycle needs n >= 3, got {n}")));
    }
    let triples: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Graph::from_triples(&triples)
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::BadParams(format!("path needs n >= 2, got {n}")));
    }
    let triples: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Graph::from_triples(&triples)
}

/// `rows x cols` grid with unit weights.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows * cols < 2 {
        return Err(Error::BadParams(format!(
            "grid needs at least 2 vertices, got {rows}x{cols}"
        )));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut triples = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                triples.push((id(r, c), id(r, c + 1), 1.0));
            }
            if r + 1 < rows {
                triples.push((id(r, c), id(r + 1, c), 1.0));
            }
        }
    }
    Graph::from_triples(&triples)
}

/// Two unit-weight `k`-cliques joined by a single bridge edge.
pub fn dumbbell(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::BadParams(format!("dumbbell needs k >= 2, got {k}")));
    }
    let mut triples = Vec::new();
    for side in 0..2 {
        let base = side * k;
        for i in 0..k {
            for j in i + 1..k {
                triples.push((base + i, base + j, 1.0));
            }
        }
    }
    triples.push((k - 1, k, 1.0));
    Graph::from_triples(&triples)
}

/// Erdos-Renyi graph with integer weights in `1..=max_w`, rejection
/// sampled until connected.
pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64, max_w: u32) -> Result<Graph> {
    if n < 2 || !(0.0..=1.0).contains(&p) || max_w == 0 {
        return Err(Error::BadParams(format!(
            "random needs n >= 2, p in [0,1], max_w >= 1 (got n={n}, p={p}, max_w={max_w})"
        )));
    }
    for _ in 0..10_000 {
        let mut triples = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    triples.push((u, v, rng.gen_range(1..=max_w) as f64));
                }
            }
        }
        if triples.is_empty() {
            continue;
        }
        let g = Graph::with_vertices(n, &triples)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::BadParams(format!(
        "could not sample a connected graph with n={n}, p={p}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families() {
        assert_eq!(cycle(4).unwrap().m(), 4);
        let p = path(3).unwrap();
        assert_eq!(p.m(), 2);
        assert_eq!(grid(2, 3).unwrap().m(), 7);
        let d = dumbbell(3).unwrap();
        assert_eq!(d.n(), 6);
        assert_eq!(d.m(), 7);
        assert!(d.is_connected());
    }

    #[test]
    fn random_is_deterministic_and_connected() {
        let g1 = random_connected(&mut ChaCha8Rng::seed_from_u64(9), 8, 0.5, 4).unwrap();
        let g2 = random_connected(&mut ChaCha8Rng::seed_from_u64(9), 8, 0.5, 4).unwrap();
        assert!(g1.is_connected());
        assert_eq!(g1.m(), g2.m());
        for (a, b) in g1.edges().iter().zip(g2.edges()) {
            assert_eq!((a.u, a.v, a.w), (b.u, b.v, b.w));
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(cycle(2), Err(Error::BadParams(_))));
        assert!(matches!(
            random_connected(&mut ChaCha8Rng::seed_from_u64(0), 5, 1.5, 4),
            Err(Error::BadParams(_))
        ));
    }
}
