//! Plain-text adjacency format and DOT export.
//!
//! The adjacency format is one line per vertex, `id: n1 n2 ...`, ids dense
//! from 0. Both directions of every edge must be present; the parser
//! re-validates symmetry, loop-freeness, and connectivity.

use super::{UnitGraph, VertexId};
use crate::error::{Error, Result};

/// Serializes a graph in adjacency format.
pub fn write_adjacency(g: &UnitGraph) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() as u32 {
        out.push_str(&v.to_string());
        out.push(':');
        for &w in g.neighbors(VertexId(v)) {
            out.push(' ');
            out.push_str(&w.to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses the adjacency format produced by [`write_adjacency`].
pub fn parse_adjacency(text: &str) -> Result<UnitGraph> {
    let mut rows: Vec<(u32, Vec<u32>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| Error::input(format!("line {}: missing ':'", lineno + 1)))?;
        let id: u32 = head
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("line {}: bad vertex id {head:?}", lineno + 1)))?;
        let nbrs = tail
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::input(format!("line {}: bad neighbor {t:?}", lineno + 1)))
            })
            .collect::<Result<Vec<u32>>>()?;
        rows.push((id, nbrs));
    }
    let n = rows.len();
    let mut seen = vec![false; n];
    let mut edges = Vec::new();
    for (id, nbrs) in &rows {
        let id = *id;
        if id as usize >= n || seen[id as usize] {
            return Err(Error::input(format!(
                "vertex ids must be dense 0..{n}; saw {id} twice or out of range"
            )));
        }
        seen[id as usize] = true;
        for &w in nbrs {
            if w as usize >= n {
                return Err(Error::input(format!("neighbor {w} out of range")));
            }
            edges.push((id, w));
        }
    }
    // Symmetry: every directed edge needs its reverse.
    let mut directed: Vec<(u32, u32)> = edges.clone();
    directed.sort_unstable();
    directed.dedup();
    for &(a, b) in &directed {
        if directed.binary_search(&(b, a)).is_err() {
            return Err(Error::input(format!(
                "asymmetric adjacency: {a} lists {b} but not vice versa"
            )));
        }
    }
    UnitGraph::from_edges(n, &edges)
}

/// DOT export. Labels, when present, are attached to the nodes.
pub fn write_dot(g: &UnitGraph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    if g.labels().is_some() {
        for v in 0..g.vertex_count() as u32 {
            let label = g.label(VertexId(v)).unwrap().replace('"', "\\\"");
            out.push_str(&format!("  {v} [label=\"{label}\"];\n"));
        }
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    out
}
