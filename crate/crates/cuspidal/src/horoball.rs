//! Truncated combinatorial horoballs.
//!
//! Over a finite base graph H with metric d_H, the horoball has vertices
//! (x, n) for levels n = 0..=depth. Edges: the base edges at level 0,
//! vertical edges (x,n)-(x,n+1), and at each level n >= 1 a horizontal
//! edge (x,n)-(y,n) exactly when 0 < d_H(x,y) <= 2^n. All edges have unit
//! length. Deeper levels shortcut long base distances, which is the
//! source of the logarithmic distortion this crate measures.

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct HoroVertex {
    pub base: VertexId,
    pub level: u32,
}

impl HoroVertex {
    pub fn new(base: VertexId, level: u32) -> Self {
        HoroVertex { base, level }
    }
}

pub struct HoroballGraph {
    base: UnitGraph,
    depth: u32,
    graph: UnitGraph,
}

/// Builds the truncated horoball. Base distances are exact all-pairs BFS;
/// the vertex budget guards the (base vertices) x (depth+1) product.
pub fn build_horoball(base: &UnitGraph, depth: u32, vertex_budget: u64) -> Result<HoroballGraph> {
    if depth == 0 {
        return Err(Error::input("horoball depth must be at least 1"));
    }
    let n = base.vertex_count();
    let total = n as u64 * (depth as u64 + 1);
    if total > vertex_budget {
        return Err(Error::Resource { needed: total, budget: vertex_budget });
    }
    // n^2 u16 distance matrix; 40k vertices = 3.2 GB would be too much.
    let dist = base.apsp_matrix(40_000)?;
    let edges = horoball_edges(n, &dist, base, depth);
    let mut labels = Vec::with_capacity(total as usize);
    for level in 0..=depth {
        for b in 0..n {
            let tag = match base.label(VertexId(b as u32)) {
                Some(l) => l.to_owned(),
                None => b.to_string(),
            };
            labels.push(format!("({tag},{level})"));
        }
    }
    let graph = UnitGraph::from_edges(total as usize, &edges)?.with_labels(labels)?;
    Ok(HoroballGraph { base: base.clone(), depth, graph })
}

/// Edge list for the horoball over a base with `n` vertices and all-pairs
/// distances `dist` (row-major). Shared with the cusped-space assembly,
/// which offsets the ids it gets back.
pub(crate) fn horoball_edges(
    n: usize,
    dist: &[u16],
    base: &UnitGraph,
    depth: u32,
) -> Vec<(u32, u32)> {
    let id = |b: usize, level: u32| -> u32 { level * n as u32 + b as u32 };
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (u, v) in base.edges() {
        edges.push((id(u as usize, 0), id(v as usize, 0)));
    }
    for level in 0..depth {
        for b in 0..n {
            edges.push((id(b, level), id(b, level + 1)));
        }
    }
    for level in 1..=depth {
        let reach: u64 = 1u64 << level.min(32);
        for x in 0..n {
            let row = &dist[x * n..(x + 1) * n];
            for (y, &d) in row.iter().enumerate().skip(x + 1) {
                if d as u64 <= reach {
                    edges.push((id(x, level), id(y, level)));
                }
            }
        }
    }
    edges
}

impl HoroballGraph {
    pub fn graph(&self) -> &UnitGraph {
        &self.graph
    }

    pub fn base(&self) -> &UnitGraph {
        &self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vertex_id(&self, v: HoroVertex) -> Result<VertexId> {
        if v.base.idx() >= self.base.vertex_count() || v.level > self.depth {
            return Err(Error::input("horoball coordinate out of range"));
        }
        Ok(VertexId(v.level * self.base.vertex_count() as u32 + v.base.0))
    }

    pub fn coords_of(&self, v: VertexId) -> HoroVertex {
        let n = self.base.vertex_count() as u32;
        HoroVertex { base: VertexId(v.0 % n), level: v.0 / n }
    }

    pub fn distance(&self, u: HoroVertex, v: HoroVertex) -> Result<u32> {
        self.graph.distance(self.vertex_id(u)?, self.vertex_id(v)?)
    }

    /// The level-monotone path (x,0),(x,1),...,(x,depth). Distance-realizing:
    /// every edge changes level by at most one, so no path climbs faster.
    pub fn vertical_ray(&self, base: VertexId) -> Result<GeodesicPath> {
        let ids = (0..=self.depth)
            .map(|l| self.vertex_id(HoroVertex::new(base, l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeodesicPath::from_trusted(ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> UnitGraph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        UnitGraph::from_edges(n, &edges).unwrap()
    }

    /// Literal restatement of the edge rule, applied pairwise.
    fn brute_force_edges(base: &UnitGraph, depth: u32) -> Vec<(u32, u32)> {
        let n = base.vertex_count();
        let id = |b: usize, level: u32| -> u32 { level * n as u32 + b as u32 };
        let mut out = Vec::new();
        for x in 0..n {
            let dist = base.bfs(VertexId(x as u32));
            for y in 0..n {
                if x == y {
                    continue;
                }
                let d = dist[y] as u64;
                // level 0: base edges only.
                if d == 1 && x < y {
                    out.push((id(x, 0), id(y, 0)));
                }
                for level in 1..=depth {
                    if x < y && d > 0 && d <= (1u64 << level) {
                        out.push((id(x, level), id(y, level)));
                    }
                }
            }
            for level in 0..depth {
                out.push((id(x, level), id(x, level + 1)));
            }
        }
        out.sort_unstable();
        out
    }

    fn norm(mut edges: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    #[test]
    fn path5_depth2_matches_rule() {
        let base = path_graph(5);
        let hb = build_horoball(&base, 2, 1 << 20).unwrap();
        // Level 1: pairs at base distance 1 or 2.
        for (x, y, expect) in [(0u32, 1u32, 1u32), (0, 2, 1), (0, 3, 2), (0, 4, 2)] {
            let u = HoroVertex::new(VertexId(x), 1);
            let v = HoroVertex::new(VertexId(y), 1);
            assert_eq!(hb.distance(u, v).unwrap(), expect, "level1 {x}-{y}");
        }
        // Level 2: all pairs within distance 4 get an edge.
        let u = HoroVertex::new(VertexId(0), 2);
        let v = HoroVertex::new(VertexId(4), 2);
        assert_eq!(hb.distance(u, v).unwrap(), 1);
    }

    #[test]
    fn single_vertex_base_is_spike() {
        let base = UnitGraph::from_edges(1, &[]).unwrap();
        let hb = build_horoball(&base, 4, 1 << 20).unwrap();
        assert_eq!(hb.graph().vertex_count(), 5);
        assert_eq!(hb.graph().edge_count(), 4);
        let ray = hb.vertical_ray(VertexId(0)).unwrap();
        assert_eq!(ray.len(), 4);
    }

    #[test]
    fn edge_set_equals_brute_force_on_path17() {
        let base = path_graph(17);
        let hb = build_horoball(&base, 5, 1 << 20).unwrap();
        let got: Vec<(u32, u32)> = hb.graph().edges().collect();
        assert_eq!(norm(got), brute_force_edges(&base, 5));
    }

    #[test]
    fn vertical_distance_is_level_difference() {
        let base = path_graph(9);
        let hb = build_horoball(&base, 6, 1 << 20).unwrap();
        for k in 0..=6u32 {
            let u = HoroVertex::new(VertexId(3), 0);
            let v = HoroVertex::new(VertexId(3), k);
            assert_eq!(hb.distance(u, v).unwrap(), k);
        }
    }

    #[test]
    fn level0_distance_uses_shortcuts_and_stabilizes() {
        // d((0,0),(4,0)): direct 4 vs up-across-down 1+1+... at level 2 the
        // span-4 edge exists: 2+1+... = path up 2, across 1, down 2 = 5 > 4;
        // level 1 route: up 1, across (spans 2) twice, down 1 = 4. Exact
        // value from BFS; must not change once depth covers log2(4)=2.
        let mut prev = None;
        for depth in 3..=8u32 {
            let base = path_graph(33);
            let hb = build_horoball(&base, depth, 1 << 22).unwrap();
            let d = hb
                .distance(HoroVertex::new(VertexId(0), 0), HoroVertex::new(VertexId(4), 0))
                .unwrap();
            if let Some(p) = prev {
                assert_eq!(d, p, "distance changed at depth {depth}");
            }
            prev = Some(d);
        }
        assert_eq!(prev.unwrap(), 4);
    }

    #[test]
    fn power_of_two_distances_are_two_m() {
        // d((0,0),(2^m,0)) = 2m for m = 4..8: climb m-1, cross 2, descend
        // m-1 realizes 2m; BFS confirms nothing shorter exists.
        let base = path_graph(257);
        let hb = build_horoball(&base, 8, 1 << 22).unwrap();
        for m in 4..=8u32 {
            let target = VertexId(1u32 << m);
            let d = hb
                .distance(HoroVertex::new(VertexId(0), 0), HoroVertex::new(target, 0))
                .unwrap();
            assert_eq!(d, 2 * m, "m={m}");
        }
    }

    #[test]
    fn rays_merge_exactly_at_log_level() {
        let base = path_graph(33);
        let hb = build_horoball(&base, 6, 1 << 22).unwrap();
        for m in 2..=5u32 {
            let x = VertexId(0);
            let y = VertexId(1u32 << m);
            let merge_level = (0..=6u32)
                .find(|&l| {
                    hb.distance(HoroVertex::new(x, l), HoroVertex::new(y, l)).unwrap() <= 1
                })
                .unwrap();
            assert_eq!(merge_level, m, "bases at distance 2^{m}");
        }
    }

    #[test]
    fn depth_monotonicity_of_distances() {
        let base = path_graph(17);
        let shallow = build_horoball(&base, 3, 1 << 20).unwrap();
        let deep = build_horoball(&base, 6, 1 << 20).unwrap();
        for x in 0..17u32 {
            for y in 0..17u32 {
                let u = HoroVertex::new(VertexId(x), 0);
                let v = HoroVertex::new(VertexId(y), 0);
                assert!(deep.distance(u, v).unwrap() <= shallow.distance(u, v).unwrap());
            }
        }
    }

    #[test]
    fn budget_guard() {
        let base = path_graph(100);
        assert!(matches!(
            build_horoball(&base, 9, 500),
            Err(Error::Resource { needed: 1000, budget: 500 })
        ));
    }
}
