//! Finite connected graphs with unit-length edges, stored as CSR.
//!
//! Everything downstream (Cayley balls, horoballs, cusped spaces, hulls)
//! is a `UnitGraph` plus coordinate data, and every metric quantity in the
//! crate is an exact integer computed by BFS on one of these. Graphs are
//! immutable after construction: symmetric, no self-loops, no parallel
//! edges, connected, neighbor lists sorted ascending.

use crate::error::{Error, Result};
use std::collections::HashMap;

pub mod io;

/// Dense vertex identifier, valid in `0..vertex_count()` of its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub const UNREACHED: u32 = u32::MAX;

/// Immutable undirected graph with unit edge lengths.
#[derive(Debug, Clone)]
pub struct UnitGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl UnitGraph {
    /// Builds a graph from an undirected edge list over vertices `0..n`.
    /// Duplicate edges and both orientations of the same edge are accepted
    /// and deduplicated; self-loops and out-of-range endpoints are errors,
    /// as is a disconnected result. `n == 1` with no edges is legal.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("graph needs at least one vertex"));
        }
        if n > u32::MAX as usize - 1 {
            return Err(Error::input("vertex count exceeds id space"));
        }
        let mut deg = vec![0u32; n];
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::input(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::input(format!("self-loop at vertex {a}")));
            }
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut targets = vec![0u32; offsets[n] as usize];
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        for &(a, b) in edges {
            targets[cursor[a as usize] as usize] = b;
            cursor[a as usize] += 1;
            targets[cursor[b as usize] as usize] = a;
            cursor[b as usize] += 1;
        }
        // Sort and dedup each adjacency run, then recompact.
        let mut clean_targets = Vec::with_capacity(targets.len());
        let mut clean_offsets = vec![0u32; n + 1];
        for v in 0..n {
            let run = &mut targets[offsets[v] as usize..offsets[v + 1] as usize];
            run.sort_unstable();
            let mut prev = UNREACHED;
            for &t in run.iter() {
                if t != prev {
                    clean_targets.push(t);
                    prev = t;
                }
            }
            clean_offsets[v + 1] = clean_targets.len() as u32;
        }
        let g = UnitGraph {
            offsets: clean_offsets,
            targets: clean_targets,
            labels: None,
        };
        let dist = g.bfs(VertexId(0));
        if dist.iter().any(|&d| d == UNREACHED) {
            return Err(Error::input("graph is not connected"));
        }
        Ok(g)
    }

    /// Attaches one label string per vertex (used by the export formats).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::input("label count does not match vertex count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        &self.targets[self.offsets[v.idx()] as usize..self.offsets[v.idx() + 1] as usize]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v.idx()].as_str())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.idx() < self.vertex_count()
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {} out of range (graph has {} vertices)",
                v,
                self.vertex_count()
            )))
        }
    }

    /// Undirected edge list, each edge once with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |a| {
            self.neighbors(VertexId(a))
                .iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    /// BFS distance vector from a single source; `UNREACHED` marks no path.
    pub fn bfs(&self, src: VertexId) -> Vec<u32> {
        self.bfs_multi(std::slice::from_ref(&src))
    }

    /// BFS distance vector from a set of sources (distance to nearest source).
    pub fn bfs_multi(&self, sources: &[VertexId]) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue: Vec<u32> = Vec::with_capacity(sources.len());
        for &s in sources {
            if dist[s.idx()] == UNREACHED {
                dist[s.idx()] = 0;
                queue.push(s.0);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let d = dist[v as usize] + 1;
            for &w in self.neighbors(VertexId(v)) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = d;
                    queue.push(w);
                }
            }
        }
        dist
    }

    /// Exact distance between two vertices.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<u32> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(0);
        }
        // Early-exit BFS from u.
        let mut dist = vec![UNREACHED; self.vertex_count()];
        dist[u.idx()] = 0;
        let mut queue = vec![u.0];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let d = dist[x as usize] + 1;
            for &w in self.neighbors(VertexId(x)) {
                if dist[w as usize] == UNREACHED {
                    if w == v.0 {
                        return Ok(d);
                    }
                    dist[w as usize] = d;
                    queue.push(w);
                }
            }
        }
        Err(Error::input(format!("no path between {u} and {v}")))
    }

    /// The canonical geodesic from `u` to `v`: among all geodesics, the one
    /// whose vertex-id sequence is lexicographically least. Deterministic.
    pub fn some_geodesic(&self, u: VertexId, v: VertexId) -> Result<GeodesicPath> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist_v = self.bfs(v);
        self.some_geodesic_with_dist(u, v, &dist_v)
    }

    /// Same as [`some_geodesic`](Self::some_geodesic) but reuses a
    /// precomputed BFS vector from `v` (callers doing many queries against
    /// one endpoint, or holding an APSP row, avoid the repeated BFS).
    pub fn some_geodesic_with_dist(
        &self,
        u: VertexId,
        v: VertexId,
        dist_v: &[u32],
    ) -> Result<GeodesicPath> {
        if dist_v[u.idx()] == UNREACHED {
            return Err(Error::input(format!("no path between {u} and {v}")));
        }
        let mut path = Vec::with_capacity(dist_v[u.idx()] as usize + 1);
        let mut cur = u;
        path.push(cur);
        while cur != v {
            let d = dist_v[cur.idx()];
            // Neighbor lists are sorted, so the first descent is the least.
            let next = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| dist_v[w as usize] + 1 == d)
                .expect("BFS distance field admits a descent");
            cur = VertexId(next);
            path.push(cur);
        }
        Ok(GeodesicPath { vertices: path })
    }

    /// Enumerates geodesics from `u` to `v` in lexicographic order of their
    /// vertex sequences, up to `cap` paths. The flag reports truncation.
    pub fn all_geodesics(
        &self,
        u: VertexId,
        v: VertexId,
        cap: usize,
    ) -> Result<(Vec<GeodesicPath>, bool)> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist_u = self.bfs(u);
        let dist_v = self.bfs(v);
        if dist_v[u.idx()] == UNREACHED {
            return Err(Error::input(format!("no path between {u} and {v}")));
        }
        let total = dist_v[u.idx()];
        let mut out = Vec::new();
        let mut truncated = false;
        // Iterative DFS over the geodesic DAG, children in ascending id order.
        let mut stack: Vec<VertexId> = vec![u];
        let mut iters: Vec<usize> = vec![0];
        while !stack.is_empty() {
            let cur = *stack.last().unwrap();
            if cur == v {
                if out.len() == cap {
                    truncated = true;
                    break;
                }
                out.push(GeodesicPath {
                    vertices: stack.clone(),
                });
                stack.pop();
                iters.pop();
                continue;
            }
            let start = iters.pop().unwrap();
            let nbrs = self.neighbors(cur);
            let mut advanced = false;
            for (i, &w) in nbrs.iter().enumerate().skip(start) {
                if dist_u[w as usize] == dist_u[cur.idx()] + 1
                    && dist_u[w as usize] + dist_v[w as usize] == total
                {
                    iters.push(i + 1);
                    stack.push(VertexId(w));
                    iters.push(0);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
            }
        }
        Ok((out, truncated))
    }

    /// Number of geodesics from `u` to `v`, saturating at `u64::MAX`.
    pub fn count_geodesics(&self, u: VertexId, v: VertexId) -> Result<u64> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist_u = self.bfs(u);
        let dist_v = self.bfs(v);
        if dist_v[u.idx()] == UNREACHED {
            return Err(Error::input(format!("no path between {u} and {v}")));
        }
        let total = dist_v[u.idx()];
        // DP over vertices sorted by distance from u, restricted to the DAG.
        let mut on_dag: Vec<u32> = (0..self.vertex_count() as u32)
            .filter(|&x| {
                dist_u[x as usize] != UNREACHED
                    && dist_v[x as usize] != UNREACHED
                    && dist_u[x as usize] + dist_v[x as usize] == total
            })
            .collect();
        on_dag.sort_unstable_by_key(|&x| dist_u[x as usize]);
        let mut count: HashMap<u32, u64> = HashMap::new();
        count.insert(u.0, 1);
        for &x in &on_dag {
            let c = match count.get(&x) {
                Some(&c) => c,
                None => continue,
            };
            for &w in self.neighbors(VertexId(x)) {
                if dist_u[w as usize] == dist_u[x as usize] + 1
                    && dist_u[w as usize] + dist_v[w as usize] == total
                {
                    let e = count.entry(w).or_insert(0);
                    *e = e.saturating_add(c);
                }
            }
        }
        Ok(*count.get(&v.0).unwrap_or(&0))
    }

    /// Vertices lying on at least one geodesic from `u` to `v` (the exact
    /// union over all geodesics, no enumeration): `x` qualifies iff
    /// `d(u,x) + d(x,v) = d(u,v)`. Sorted ascending.
    pub fn geodesic_interval(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist_u = self.bfs(u);
        let dist_v = self.bfs(v);
        if dist_v[u.idx()] == UNREACHED {
            return Err(Error::input(format!("no path between {u} and {v}")));
        }
        let total = dist_u[v.idx()];
        Ok((0..self.vertex_count() as u32)
            .filter(|&x| {
                dist_u[x as usize] != UNREACHED
                    && dist_u[x as usize] + dist_v[x as usize] == total
            })
            .map(VertexId)
            .collect())
    }

    /// Vertices at distance exactly `r` from `o`, ascending by id.
    pub fn sphere(&self, o: VertexId, r: u32) -> Result<Vec<VertexId>> {
        self.check_vertex(o)?;
        let dist = self.bfs(o);
        Ok((0..self.vertex_count() as u32)
            .filter(|&x| dist[x as usize] == r)
            .map(VertexId)
            .collect())
    }

    /// Vertices at distance at most `r` from `o`, ascending by id.
    pub fn ball(&self, o: VertexId, r: u32) -> Result<Vec<VertexId>> {
        self.check_vertex(o)?;
        let dist = self.bfs(o);
        Ok((0..self.vertex_count() as u32)
            .filter(|&x| dist[x as usize] <= r)
            .map(VertexId)
            .collect())
    }

    /// Hausdorff distance between two nonempty vertex sets.
    pub fn hausdorff_distance(&self, a: &[VertexId], b: &[VertexId]) -> Result<u32> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::input("hausdorff distance of an empty set"));
        }
        for &v in a.iter().chain(b.iter()) {
            self.check_vertex(v)?;
        }
        let from_a = self.bfs_multi(a);
        let from_b = self.bfs_multi(b);
        let sup_b = b.iter().map(|v| from_a[v.idx()]).max().unwrap();
        let sup_a = a.iter().map(|v| from_b[v.idx()]).max().unwrap();
        if sup_a == UNREACHED || sup_b == UNREACHED {
            return Err(Error::input("sets are not mutually reachable"));
        }
        Ok(sup_a.max(sup_b))
    }

    /// Full distance matrix as a flat row-major `n*n` array of u16.
    /// Guarded: refuses graphs with more than `cap` vertices.
    pub fn apsp_matrix(&self, cap: usize) -> Result<Vec<u16>> {
        let n = self.vertex_count();
        if n > cap {
            return Err(Error::Resource {
                needed: n as u64,
                budget: cap as u64,
            });
        }
        let mut m = vec![0u16; n * n];
        for v in 0..n {
            let dist = self.bfs(VertexId(v as u32));
            for (w, &d) in dist.iter().enumerate() {
                debug_assert!(d != UNREACHED && d <= u16::MAX as u32);
                m[v * n + w] = d as u16;
            }
        }
        Ok(m)
    }

    /// Induced subgraph on `keep` (sorted, deduplicated internally), plus the
    /// map from new ids back to original ids. Errors if the result would be
    /// disconnected.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<(UnitGraph, Vec<VertexId>)> {
        let mut sorted: Vec<VertexId> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            self.check_vertex(v)?;
        }
        let mut back = vec![UNREACHED; self.vertex_count()];
        for (i, &v) in sorted.iter().enumerate() {
            back[v.idx()] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in &sorted {
            for &w in self.neighbors(v) {
                if v.0 < w && back[w as usize] != UNREACHED {
                    edges.push((back[v.idx()], back[w as usize]));
                }
            }
        }
        let mut g = UnitGraph::from_edges(sorted.len(), &edges)?;
        if let Some(labels) = &self.labels {
            g = g.with_labels(sorted.iter().map(|v| labels[v.idx()].clone()).collect())?;
        }
        Ok((g, sorted))
    }
}

/// A distance-realizing path: consecutive vertices adjacent, and the number
/// of edges equals the graph distance between the endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    vertices: Vec<VertexId>,
}

impl GeodesicPath {
    /// Wraps a vertex sequence after verifying it is a geodesic in `g`.
    pub fn new(g: &UnitGraph, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("empty path"));
        }
        for w in vertices.windows(2) {
            if !g.neighbors(w[0]).contains(&w[1].0) {
                return Err(Error::input(format!(
                    "vertices {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        let d = g.distance(vertices[0], *vertices.last().unwrap())?;
        if d as usize != vertices.len() - 1 {
            return Err(Error::input(format!(
                "path of length {} is not distance-realizing (d = {d})",
                vertices.len() - 1
            )));
        }
        Ok(GeodesicPath { vertices })
    }

    /// Wraps without validation; for paths produced by the BFS machinery.
    pub(crate) fn from_trusted(vertices: Vec<VertexId>) -> Self {
        GeodesicPath { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> UnitGraph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        UnitGraph::from_edges(n as usize, &edges).unwrap()
    }

    #[test]
    fn c4_canonical_geodesic_takes_low_ids() {
        let g = cycle(4);
        let p = g.some_geodesic(VertexId(0), VertexId(2)).unwrap();
        let ids: Vec<u32> = p.vertices().iter().map(|v| v.0).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn c4_has_two_geodesics_across() {
        let g = cycle(4);
        let (paths, truncated) = g.all_geodesics(VertexId(0), VertexId(2), 100).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(!truncated);
        assert_eq!(g.count_geodesics(VertexId(0), VertexId(2)).unwrap(), 2);
    }

    #[test]
    fn geodesic_cap_sets_flag() {
        let g = cycle(4);
        let (paths, truncated) = g.all_geodesics(VertexId(0), VertexId(2), 1).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(truncated);
    }

    #[test]
    fn rejects_self_loop_and_disconnection() {
        assert!(UnitGraph::from_edges(2, &[(0, 0)]).is_err());
        assert!(UnitGraph::from_edges(4, &[(0, 1), (2, 3)]).is_err());
    }

    #[test]
    fn parallel_edges_collapse() {
        let g = UnitGraph::from_edges(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(VertexId(0)), &[1]);
    }

    #[test]
    fn unknown_vertex_is_input_error() {
        let g = cycle(4);
        assert!(matches!(
            g.distance(VertexId(0), VertexId(9)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn single_vertex_graph_is_legal() {
        let g = UnitGraph::from_edges(1, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.distance(VertexId(0), VertexId(0)).unwrap(), 0);
    }

    #[test]
    fn hausdorff_on_path() {
        // 0-1-2-3: d_H({0},{3}) = 3; d_H({0,3},{1,2}) = 1.
        let g = UnitGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            g.hausdorff_distance(&[VertexId(0)], &[VertexId(3)]).unwrap(),
            3
        );
        assert_eq!(
            g.hausdorff_distance(&[VertexId(0), VertexId(3)], &[VertexId(1), VertexId(2)])
                .unwrap(),
            1
        );
        assert!(g.hausdorff_distance(&[], &[VertexId(0)]).is_err());
    }

    #[test]
    fn interval_matches_enumeration_on_cycle() {
        let g = cycle(6);
        let interval = g.geodesic_interval(VertexId(0), VertexId(3)).unwrap();
        let (paths, _) = g.all_geodesics(VertexId(0), VertexId(3), 1000).unwrap();
        let mut union: Vec<VertexId> = paths.iter().flat_map(|p| p.vertices().to_vec()).collect();
        union.sort_unstable();
        union.dedup();
        assert_eq!(interval, union);
    }

    #[test]
    fn geodesic_path_validation() {
        let g = cycle(6);
        assert!(GeodesicPath::new(&g, vec![VertexId(0), VertexId(1), VertexId(2)]).is_ok());
        // Adjacent steps but not distance-realizing: 0-1-0.
        assert!(GeodesicPath::new(&g, vec![VertexId(0), VertexId(1), VertexId(0)]).is_err());
        // Non-adjacent step.
        assert!(GeodesicPath::new(&g, vec![VertexId(0), VertexId(2)]).is_err());
    }
}
