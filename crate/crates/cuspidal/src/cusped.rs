//! Cusped spaces: a Cayley ball with a combinatorial horoball glued onto
//! every coset trace of every marked subgroup.
//!
//! The horoball over a trace is built on the trace's intrinsic coset
//! graph (edges = subgroup-generator moves inside the trace), whose BFS
//! metric feeds the 2^n rule. Level-0 vertices are identified with the
//! ball vertices of the trace; positive levels get fresh ids, numbered
//! ball first, then patches in trace order, level-major within a patch.
//!
//! Truncation honesty: the infinite object is cut at the ball radius, at
//! the horoball depth, and at trace ends. `certified_radius` reports the
//! audited wavefront margin: every truncation shell vertex is at least
//! certified_radius + 2 away from the origin. Measurements that leave the
//! certified region must say so.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId, UNREACHED};
use crate::groups::{CayleyBall, Word};

/// One glued horoball: which coset, where its level-0 lives in the ball,
/// and how its positive-level ids are laid out.
pub struct HoroballPatch {
    pub subgroup: String,
    pub trace_index: usize,
    /// Word of the first trace vertex; names the coset in exports.
    pub rep: Word,
    /// Ambient ball ids of the trace, ascending; position = local base index.
    pub level0: Vec<VertexId>,
    pub depth: u32,
    first_positive: u32,
    /// Local base indices with a subgroup-generator move leaving the trace.
    pub boundary_bases: Vec<u32>,
    /// Row-major intrinsic distance matrix of the trace graph.
    intrinsic: Vec<u16>,
}

impl HoroballPatch {
    pub fn base_size(&self) -> usize {
        self.level0.len()
    }

    /// Cusped-graph id of (base index, level).
    pub fn vertex(&self, base_idx: usize, level: u32) -> VertexId {
        debug_assert!(base_idx < self.base_size() && level <= self.depth);
        if level == 0 {
            self.level0[base_idx]
        } else {
            VertexId(self.first_positive + (level - 1) * self.base_size() as u32 + base_idx as u32)
        }
    }

    pub fn intrinsic_distance(&self, i: usize, j: usize) -> u32 {
        self.intrinsic[i * self.base_size() + j] as u32
    }

    /// All cusped ids of this patch, level 0 included.
    pub fn all_vertices(&self) -> Vec<VertexId> {
        let mut out = self.level0.clone();
        let m = self.base_size() as u32;
        for level in 1..=self.depth {
            for b in 0..m {
                out.push(VertexId(self.first_positive + (level - 1) * m + b));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Group,
    Horoball { patch: usize, base_idx: usize, level: u32 },
}

pub struct CuspedBall {
    graph: UnitGraph,
    ball: CayleyBall,
    patches: Vec<HoroballPatch>,
    depth: u32,
    certified: u32,
    shell: Vec<bool>,
    origin_dist: Vec<u32>,
}

pub fn build_cusped_ball(ball: CayleyBall, depth: u32, vertex_budget: u64) -> Result<CuspedBall> {
    let has_traces = ball.trace_sets().iter().any(|t| !t.traces.is_empty());
    if has_traces && depth == 0 {
        return Err(Error::input("cusped depth must be at least 1"));
    }
    let n_ball = ball.vertex_count() as u64;
    let extra: u64 = ball
        .trace_sets()
        .iter()
        .flat_map(|t| t.traces.iter())
        .map(|tr| tr.len() as u64 * depth as u64)
        .sum();
    let total = n_ball + extra;
    if total > vertex_budget {
        return Err(Error::Resource { needed: total, budget: vertex_budget });
    }

    let model = ball.model().clone();
    let mut edges: Vec<(u32, u32)> = ball.graph().edges().collect();
    let mut patches: Vec<HoroballPatch> = Vec::new();
    let mut next_id = n_ball as u32;

    for ts in ball.trace_sets() {
        // Directed subgroup moves for the intrinsic trace graph.
        let mut dir_moves: Vec<Word> = Vec::new();
        for g in &ts.generators {
            let nf = model.normal_form(g);
            if nf.is_empty() {
                continue;
            }
            let inv = model.inverse(&nf);
            if !dir_moves.contains(&nf) {
                dir_moves.push(nf);
            }
            if !dir_moves.contains(&inv) {
                dir_moves.push(inv);
            }
        }
        for (trace_index, trace) in ts.traces.iter().enumerate() {
            let m = trace.len();
            let local: HashMap<&Word, usize> = trace
                .iter()
                .enumerate()
                .map(|(i, &v)| (ball.word_of(v), i))
                .collect();
            let mut local_edges: Vec<(u32, u32)> = Vec::new();
            let mut boundary: Vec<u32> = Vec::new();
            for (i, &v) in trace.iter().enumerate() {
                let w = ball.word_of(v);
                let mut missing = false;
                for mv in &dir_moves {
                    let to = model.multiply(w, mv);
                    match local.get(&to) {
                        Some(&j) => {
                            if i < j {
                                local_edges.push((i as u32, j as u32));
                            }
                        }
                        None => missing = true,
                    }
                }
                if missing {
                    boundary.push(i as u32);
                }
            }
            let trace_graph = UnitGraph::from_edges(m, &local_edges).map_err(|e| {
                Error::input(format!(
                    "trace {trace_index} of subgroup {:?} has a broken intrinsic graph: {e}",
                    ts.subgroup
                ))
            })?;
            let intrinsic = trace_graph.apsp_matrix(40_000)?;

            let first_positive = next_id;
            next_id += (m as u32) * depth;
            let patch = HoroballPatch {
                subgroup: ts.subgroup.clone(),
                trace_index,
                rep: ball.word_of(trace[0]).clone(),
                level0: trace.clone(),
                depth,
                first_positive,
                boundary_bases: boundary,
                intrinsic,
            };

            // Vertical edges.
            for b in 0..m {
                for level in 0..depth {
                    edges.push((patch.vertex(b, level).0, patch.vertex(b, level + 1).0));
                }
            }
            // Horizontal edges, level >= 1: 0 < d <= 2^level.
            for level in 1..=depth {
                let reach = 1u64 << level.min(32);
                for i in 0..m {
                    let row = &patch.intrinsic[i * m..(i + 1) * m];
                    for (j, &d) in row.iter().enumerate().skip(i + 1) {
                        if d as u64 <= reach {
                            edges.push((patch.vertex(i, level).0, patch.vertex(j, level).0));
                        }
                    }
                }
            }
            patches.push(patch);
        }
    }

    let graph = UnitGraph::from_edges(total as usize, &edges)?;

    // Truncation shell: ball boundary, depth caps, and trace-boundary
    // columns reachable by the 2^n rule.
    let mut shell = vec![false; total as usize];
    for v in 0..ball.vertex_count() {
        let w = ball.word_of(VertexId(v as u32));
        let out_of_ball = ball
            .moves()
            .iter()
            .flat_map(|mv| [mv.clone(), model.inverse(mv)])
            .any(|mv| ball.vertex_of(&model.multiply(w, &mv)).is_none());
        if out_of_ball {
            shell[v] = true;
        }
    }
    for p in &patches {
        let m = p.base_size();
        for b in 0..m {
            shell[p.vertex(b, depth).idx()] = true;
        }
        if p.boundary_bases.is_empty() {
            continue;
        }
        let mut dbound = vec![u16::MAX; m];
        for b in 0..m {
            for &bb in &p.boundary_bases {
                dbound[b] = dbound[b].min(p.intrinsic[b * m + bb as usize]);
            }
        }
        for level in 1..=depth {
            let reach = 1u64 << level.min(32);
            for b in 0..m {
                if dbound[b] as u64 <= reach - 1 {
                    shell[p.vertex(b, level).idx()] = true;
                }
            }
        }
    }

    let origin_dist = graph.bfs(VertexId(0));
    let min_shell = shell
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s)
        .map(|(v, _)| origin_dist[v])
        .min();
    let certified = match min_shell {
        Some(d) => {
            debug_assert!(d != UNREACHED);
            d.saturating_sub(2).min(ball.radius())
        }
        None => ball.radius(),
    };

    Ok(CuspedBall {
        graph,
        ball,
        patches,
        depth,
        certified,
        shell,
        origin_dist,
    })
}

impl CuspedBall {
    pub fn graph(&self) -> &UnitGraph {
        &self.graph
    }

    pub fn ball(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn patches(&self) -> &[HoroballPatch] {
        &self.patches
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn radius(&self) -> u32 {
        self.ball.radius()
    }

    pub fn origin(&self) -> VertexId {
        VertexId(0)
    }

    pub fn certified_radius(&self) -> u32 {
        self.certified
    }

    pub fn distance_from_origin(&self, v: VertexId) -> u32 {
        self.origin_dist[v.idx()]
    }

    pub fn is_shell(&self, v: VertexId) -> bool {
        self.shell[v.idx()]
    }

    pub fn is_certified(&self, v: VertexId) -> bool {
        self.origin_dist[v.idx()] <= self.certified
    }

    pub fn certified_vertices(&self) -> Vec<VertexId> {
        (0..self.graph.vertex_count() as u32)
            .map(VertexId)
            .filter(|&v| self.is_certified(v))
            .collect()
    }

    pub fn vertex_kind(&self, v: VertexId) -> VertexKind {
        if v.idx() < self.ball.vertex_count() {
            return VertexKind::Group;
        }
        // Patches are laid out consecutively; binary search by start id.
        let pi = self
            .patches
            .partition_point(|p| p.first_positive <= v.0)
            .saturating_sub(1);
        let p = &self.patches[pi];
        let off = v.0 - p.first_positive;
        let m = p.base_size() as u32;
        VertexKind::Horoball {
            patch: pi,
            base_idx: (off % m) as usize,
            level: off / m + 1,
        }
    }

    /// The level-monotone geodesic over a base, in cusped ids.
    pub fn vertical_ray(&self, patch: usize, base_idx: usize) -> GeodesicPath {
        let p = &self.patches[patch];
        let ids: Vec<VertexId> = (0..=p.depth).map(|l| p.vertex(base_idx, l)).collect();
        GeodesicPath::from_trusted(ids)
    }

    /// Sidecar export: `vertex_id kind coset_id base_word level` per line.
    pub fn write_sidecar(&self, w: &mut impl Write) -> Result<()> {
        let model = self.ball.model();
        for v in 0..self.graph.vertex_count() as u32 {
            let vid = VertexId(v);
            match self.vertex_kind(vid) {
                VertexKind::Group => {
                    let word = model.display_word(self.ball.word_of(vid));
                    writeln!(w, "{v} base - {word} 0")?;
                }
                VertexKind::Horoball { patch, base_idx, level } => {
                    let p = &self.patches[patch];
                    let word = model.display_word(self.ball.word_of(p.level0[base_idx]));
                    writeln!(w, "{v} horo {patch} {word} {level}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cayley_ball, GroupModel, SubgroupSpec, DEFAULT_VERTEX_BUDGET};

    fn sub(model: &GroupModel, name: &str, gens: &[&str]) -> SubgroupSpec {
        SubgroupSpec {
            name: name.into(),
            generators: gens.iter().map(|g| model.parse_word(g).unwrap()).collect(),
        }
    }

    fn f2_rel_a(radius: u32, depth: u32) -> CuspedBall {
        let m = GroupModel::free(2);
        let s = sub(&m, "A", &["a"]);
        let ball = cayley_ball(&m, radius, &[s], DEFAULT_VERTEX_BUDGET).unwrap();
        build_cusped_ball(ball, depth, DEFAULT_VERTEX_BUDGET).unwrap()
    }

    #[test]
    fn no_subgroups_is_plain_ball() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let n = ball.vertex_count();
        let e = ball.graph().edge_count();
        let cb = build_cusped_ball(ball, 3, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(cb.graph().vertex_count(), n);
        assert_eq!(cb.graph().edge_count(), e);
        assert_eq!(cb.certified_radius(), 2); // R - 2
    }

    #[test]
    fn horoball_count_matches_coset_count() {
        let cb = f2_rel_a(4, 3);
        // Cosets of <a> meeting B_4: reps are words not ending in a-letters.
        // Counts: 1 (e) + 2 + 6 + 18 + 54.
        assert_eq!(cb.patches().len(), 81);
        // Vertex accounting: trace sizes sum to ball size; each trace adds
        // size * depth new vertices.
        let ball_n = cb.ball().vertex_count();
        let extra: usize = cb.patches().iter().map(|p| p.base_size() * 3).sum();
        assert_eq!(cb.graph().vertex_count(), ball_n + extra);
    }

    #[test]
    fn gluing_identifies_level0_with_trace() {
        let cb = f2_rel_a(4, 3);
        let p = &cb.patches()[0];
        assert_eq!(p.base_size(), 9); // a^-4..a^4
        for b in 0..p.base_size() {
            assert_eq!(p.vertex(b, 0), p.level0[b]);
            assert!(p.vertex(b, 0).idx() < cb.ball().vertex_count());
            assert!(p.vertex(b, 1).idx() >= cb.ball().vertex_count());
        }
    }

    #[test]
    fn cusped_distance_never_exceeds_ball_distance() {
        let cb = f2_rel_a(6, 4);
        let ball_dist = cb.ball().graph().bfs(VertexId(0));
        let cusped_dist = cb.graph().bfs(VertexId(0));
        for v in 0..cb.ball().vertex_count() {
            assert!(cusped_dist[v] <= ball_dist[v]);
        }
        // And horoballs genuinely shorten: d(e, a^6) < 6.
        let a6 = cb.ball().vertex_of(&cb.ball().model().parse_word("a^6").unwrap()).unwrap();
        assert!(cusped_dist[a6.idx()] < 6);
    }

    #[test]
    fn single_vertex_trace_is_spike() {
        // In B_2 of F2 rel <a>, the coset of b a has trace {ba, b} ... use
        // radius 2: trace of b<a> is {b a^-1, b, b a}; the coset of ab<a>
        // is the single vertex ab. Find a patch of size 1 and check its
        // column is a path.
        let cb = f2_rel_a(2, 3);
        let spike = cb.patches().iter().find(|p| p.base_size() == 1).unwrap();
        let ray = cb.vertical_ray(
            cb.patches().iter().position(|p| std::ptr::eq(p, spike)).unwrap(),
            0,
        );
        assert_eq!(ray.len(), 3);
        let top = ray.vertices()[3];
        assert_eq!(cb.graph().degree(top), 1);
    }

    #[test]
    fn vertical_ray_is_geodesic_in_cusped_graph() {
        let cb = f2_rel_a(5, 4);
        let ray = cb.vertical_ray(0, 0);
        let d = cb.graph().distance(ray.start(), ray.end()).unwrap();
        assert_eq!(d as usize, ray.len());
        GeodesicPath::new(cb.graph(), ray.vertices().to_vec()).unwrap();
    }

    #[test]
    fn certified_radius_monotone_in_radius_and_depth() {
        let base = f2_rel_a(8, 6);
        let bigger_r = f2_rel_a(10, 6);
        let bigger_d = f2_rel_a(8, 8);
        assert!(bigger_r.certified_radius() >= base.certified_radius());
        assert!(bigger_d.certified_radius() >= base.certified_radius());
        assert!(base.certified_radius() <= base.radius());
    }

    #[test]
    fn certified_distances_stable_under_enlargement() {
        let small = f2_rel_a(6, 5);
        let big = f2_rel_a(8, 7);
        let r = small.certified_radius();
        assert!(r >= 1, "certified radius too small to test: {r}");
        // Certified group vertices of the small build, re-located in the
        // big build by word; distances must agree exactly.
        let mut ids_small = Vec::new();
        let mut ids_big = Vec::new();
        for v in 0..small.ball().vertex_count() {
            let vid = VertexId(v as u32);
            if small.is_certified(vid) {
                let w = small.ball().word_of(vid);
                ids_small.push(vid);
                ids_big.push(big.ball().vertex_of(w).unwrap());
            }
        }
        for (i, &u_small) in ids_small.iter().enumerate() {
            let du_small = small.graph().bfs(u_small);
            let du_big = big.graph().bfs(ids_big[i]);
            for (j, &v_small) in ids_small.iter().enumerate() {
                assert_eq!(
                    du_small[v_small.idx()],
                    du_big[ids_big[j].idx()],
                    "pair {i},{j}"
                );
            }
        }
    }

    #[test]
    fn shell_and_kind_bookkeeping() {
        let cb = f2_rel_a(4, 3);
        // Depth-cap vertices are shell; level-0 identity is not.
        let p0 = &cb.patches()[0];
        assert!(cb.is_shell(p0.vertex(0, 3)));
        assert!(!cb.is_shell(VertexId(0)));
        match cb.vertex_kind(p0.vertex(2, 1)) {
            VertexKind::Horoball { patch, base_idx, level } => {
                assert_eq!((patch, base_idx, level), (0, 2, 1));
            }
            k => panic!("wrong kind {k:?}"),
        }
        assert_eq!(cb.vertex_kind(VertexId(3)), VertexKind::Group);
    }

    #[test]
    fn zxz2_cusped_over_flat_subgroup() {
        use crate::groups::Family;
        let m = GroupModel::free_product(vec![
            Family::Free { rank: 1 },
            Family::FreeAbelian { rank: 2 },
        ]);
        let s = sub(&m, "H1", &["b", "c"]);
        let ball = cayley_ball(&m, 3, &[s], DEFAULT_VERTEX_BUDGET).unwrap();
        let cb = build_cusped_ball(ball, 3, DEFAULT_VERTEX_BUDGET).unwrap();
        // The identity trace is the taxicab ball of radius 3 in Z^2.
        let p0 = &cb.patches()[0];
        assert_eq!(p0.base_size(), 25);
        // Intrinsic distances are taxicab: d(b^3, c^3) = 6, through the
        // interior, not around the ambient graph.
        let model = cb.ball().model().clone();
        let b3 = cb.ball().vertex_of(&model.parse_word("b^3").unwrap()).unwrap();
        let c3 = cb.ball().vertex_of(&model.parse_word("c^3").unwrap()).unwrap();
        let i = p0.level0.iter().position(|&v| v == b3).unwrap();
        let j = p0.level0.iter().position(|&v| v == c3).unwrap();
        assert_eq!(p0.intrinsic_distance(i, j), 6);
    }
}
