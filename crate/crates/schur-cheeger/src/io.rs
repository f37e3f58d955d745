//! Edge-list text format shared with the CLI: one edge per line
//! `u v w`, whitespace separated, `#` starts a comment line. Vertex ids
//! may be arbitrary strings; a stable string-to-index map is built at
//! ingestion in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::{Error, Graph, Result};

/// Parse an edge list, returning the graph and the label of each compact
/// vertex id.
pub fn parse_edge_list(text: &str) -> Result<(Graph, Vec<String>)> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut triples: Vec<(usize, usize, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (u, v, w) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), Some(w), None) => (u, v, w),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected 'u v w', got '{line}'"),
                })
            }
        };
        let w: f64 = w.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("bad weight '{w}'"),
        })?;
        let mut id_of = |label: &str| -> usize {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (ui, vi) = (id_of(u), id_of(v));
        triples.push((ui, vi, w));
    }
    if triples.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Graph::with_vertices(labels.len(), &triples)?;
    Ok((graph, labels))
}

/// Render a graph in the edge-list format. `labels` defaults to the
/// numeric ids when `None`.
pub fn write_edge_list(g: &Graph, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let (u, v) = match labels {
            Some(l) => (l[e.u].clone(), l[e.v].clone()),
            None => (e.u.to_string(), e.v.to_string()),
        };
        writeln!(out, "{u} {v} {}", e.w).unwrap();
    }
    out
}
