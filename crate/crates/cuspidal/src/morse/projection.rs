//! Nearest-point projection onto a geodesic path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId};

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionResult {
    /// Path identifier: endpoint ids of the target geodesic.
    pub target: String,
    pub point: u32,
    /// Every vertex of the path realizing the distance, ascending.
    pub projection: Vec<u32>,
    pub dist_to_path: u32,
}

/// Checks that the claimed path really is a unit-step path of `g`.
pub(crate) fn check_path(g: &UnitGraph, path: &[VertexId]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::input("empty path"));
    }
    for &v in path {
        if v.idx() >= g.vertex_count() {
            return Err(Error::input(format!("path vertex {v} out of range")));
        }
    }
    for w in path.windows(2) {
        if !g.neighbors(w[0]).contains(&w[1].0) {
            return Err(Error::input(format!(
                "path step {} -> {} is not an edge",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Exact nearest-point set via one BFS from `x`.
pub fn project(g: &UnitGraph, gamma: &GeodesicPath, x: VertexId) -> Result<ProjectionResult> {
    check_path(g, gamma.vertices())?;
    if x.idx() >= g.vertex_count() {
        return Err(Error::input(format!("vertex {x} out of range")));
    }
    let dist = g.bfs(x);
    let best = gamma
        .vertices()
        .iter()
        .map(|v| dist[v.idx()])
        .min()
        .expect("path non-empty");
    let mut projection: Vec<u32> = gamma
        .vertices()
        .iter()
        .filter(|v| dist[v.idx()] == best)
        .map(|v| v.0)
        .collect();
    projection.sort_unstable();
    projection.dedup();
    debug_assert!(projection.iter().all(|&p| dist[p as usize] == best));
    Ok(ProjectionResult {
        target: format!("{}..{}", gamma.start(), gamma.end()),
        point: x.0,
        projection,
        dist_to_path: best,
    })
}
