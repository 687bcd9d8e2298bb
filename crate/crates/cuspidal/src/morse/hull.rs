//! Weak hulls: unions of all enumerated geodesics between anchored
//! directions, plus the coverage and stability proxies built on them.
//!
//! A direction here is a finite stand-in for a boundary point: a far
//! vertex together with the geodesics to it. The hull of a direction set
//! is the union over direction pairs of every geodesic between them,
//! capped per pair with a truncation flag; its induced subgraph is the
//! object later delta estimates run on.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{UnitGraph, VertexId};
use crate::groups::{geodesic_interval_elements, GroupModel, Word};
use crate::morse::profile::contraction_profile;

pub struct WeakHullResult {
    /// Distinct direction vertices, sorted.
    pub directions: Vec<VertexId>,
    /// Parent-graph ids of all hull vertices, sorted.
    pub hull_vertices: Vec<VertexId>,
    /// Induced subgraph on the hull vertices.
    pub induced: UnitGraph,
    /// Induced index -> parent id.
    pub to_parent: Vec<VertexId>,
    /// Direction pairs whose geodesic enumeration hit the cap.
    pub truncated_pairs: u32,
    pub pair_cap: usize,
}

/// Union of all enumerated geodesics between the given directions.
pub fn weak_hull(
    g: &UnitGraph,
    o: VertexId,
    directions: &[VertexId],
    pair_cap: usize,
) -> Result<WeakHullResult> {
    if o.idx() >= g.vertex_count() {
        return Err(Error::input("hull origin out of range"));
    }
    let mut dirs: Vec<VertexId> = directions.to_vec();
    dirs.sort_unstable();
    dirs.dedup();
    if dirs.len() < 2 {
        return Err(Error::input("weak hull needs at least two distinct directions"));
    }
    for &d in &dirs {
        if d.idx() >= g.vertex_count() {
            return Err(Error::input(format!("direction {d} out of range")));
        }
    }
    let mut keep: Vec<VertexId> = Vec::new();
    let mut truncated_pairs = 0u32;
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let (paths, truncated) = g.all_geodesics(dirs[i], dirs[j], pair_cap)?;
            if truncated {
                truncated_pairs += 1;
            }
            for p in &paths {
                keep.extend_from_slice(p.vertices());
            }
        }
    }
    keep.sort_unstable();
    keep.dedup();
    let (induced, to_parent) = g.induced_subgraph(&keep)?;
    Ok(WeakHullResult {
        directions: dirs,
        hull_vertices: keep,
        induced,
        to_parent,
        truncated_pairs,
        pair_cap,
    })
}

pub struct GroupHullResult {
    /// Normal forms of the direction words, deduplicated, sorted.
    pub directions: Vec<Word>,
    /// Hull members as normal forms, sorted; index = graph vertex id.
    pub members: Vec<Word>,
    /// Generator-move graph on the members.
    pub graph: UnitGraph,
}

/// Weak hull computed at the group level, for ambient balls too large to
/// materialize: the hull between u and v is u * interval(u^-1 v), with
/// intervals taken from normal forms. Exact (every geodesic element is
/// included); `interval_cap` only guards against combinatorial blowup.
pub fn group_weak_hull(
    model: &GroupModel,
    directions: &[Word],
    interval_cap: usize,
) -> Result<GroupHullResult> {
    let mut dirs: Vec<Word> = directions.iter().map(|w| model.normal_form(w)).collect();
    dirs.sort();
    dirs.dedup();
    if dirs.len() < 2 {
        return Err(Error::input("weak hull needs at least two distinct directions"));
    }
    let mut members: Vec<Word> = Vec::new();
    for i in 0..dirs.len() {
        for j in 0..dirs.len() {
            if i == j {
                continue;
            }
            let rel = model.multiply(&model.inverse(&dirs[i]), &dirs[j]);
            for x in geodesic_interval_elements(model, &rel, interval_cap)? {
                members.push(model.multiply(&dirs[i], &x));
            }
        }
    }
    members.sort();
    members.dedup();
    let index: HashMap<&Word, u32> =
        members.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let gc = model.generator_count() as i16;
    for (i, w) in members.iter().enumerate() {
        for l in 1..=gc {
            for letter in [l, -l] {
                let step = Word::from_trusted(vec![letter]);
                let next = model.multiply(w, &step);
                if let Some(&j) = index.get(&next) {
                    if (i as u32) < j {
                        edges.push((i as u32, j));
                    }
                }
            }
        }
    }
    let graph = UnitGraph::from_edges(members.len(), &edges)?;
    Ok(GroupHullResult { directions: dirs, members, graph })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageAudit {
    /// OK, or NO-DIRECTIONS when no hull could be built.
    pub verdict: String,
    pub margin: u32,
    pub certified_total: u64,
    pub covered_total: u64,
    pub fraction_total: f64,
    pub certified_base: u64,
    pub covered_base: u64,
    pub fraction_base: f64,
    pub certified_horoball: u64,
    pub covered_horoball: u64,
    pub fraction_horoball: f64,
}

/// Fraction of certified vertices within `margin` of the hull, split by
/// vertex kind. `hull = None` records that no direction set was found.
pub fn hull_coverage_audit(
    cb: &crate::cusped::CuspedBall,
    hull: Option<&WeakHullResult>,
    margin: u32,
) -> CoverageAudit {
    let mut audit = CoverageAudit {
        verdict: "NO-DIRECTIONS".to_string(),
        margin,
        certified_total: 0,
        covered_total: 0,
        fraction_total: 0.0,
        certified_base: 0,
        covered_base: 0,
        fraction_base: 0.0,
        certified_horoball: 0,
        covered_horoball: 0,
        fraction_horoball: 0.0,
    };
    let Some(hull) = hull else {
        return audit;
    };
    audit.verdict = "OK".to_string();
    let dist = cb.graph().bfs_multi(&hull.hull_vertices);
    for v in cb.certified_vertices() {
        let base = matches!(cb.vertex_kind(v), crate::cusped::VertexKind::Group);
        let covered = dist[v.idx()] <= margin;
        audit.certified_total += 1;
        if base {
            audit.certified_base += 1;
        } else {
            audit.certified_horoball += 1;
        }
        if covered {
            audit.covered_total += 1;
            if base {
                audit.covered_base += 1;
            } else {
                audit.covered_horoball += 1;
            }
        }
    }
    let frac = |c: u64, t: u64| if t == 0 { 1.0 } else { c as f64 / t as f64 };
    audit.fraction_total = frac(audit.covered_total, audit.certified_total);
    audit.fraction_base = frac(audit.covered_base, audit.certified_base);
    audit.fraction_horoball = frac(audit.covered_horoball, audit.certified_horoball);
    audit
}

/// True when some enumerated geodesic [e, v] has its contraction profile
/// bounded by c at every measured scale. The profile of a non-decreasing
/// step function is bounded everywhere iff its final value is.
fn some_geodesic_profile_bounded(
    g: &UnitGraph,
    e: VertexId,
    v: VertexId,
    c: u32,
    geo_cap: usize,
    anchors: &[VertexId],
) -> Result<bool> {
    let (geos, _) = g.all_geodesics(e, v, geo_cap)?;
    for geo in geos {
        let prof = contraction_profile(g, &[geo], anchors)?;
        if *prof.rho_hat.last().unwrap() <= c {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Serialize)]
pub struct StableSetProxy {
    pub vertices: Vec<u32>,
    pub c: u32,
    pub r: u32,
    pub geo_cap: usize,
}

/// Finite stand-in for the set of points reachable along geodesics with
/// bounded contraction: all v in the r-ball around e such that some
/// enumerated geodesic [e, v] has profile bounded by c.
pub fn stable_set_proxy(
    g: &UnitGraph,
    e: VertexId,
    c: u32,
    r: u32,
    geo_cap: usize,
) -> Result<StableSetProxy> {
    if e.idx() >= g.vertex_count() {
        return Err(Error::input("basepoint out of range"));
    }
    if geo_cap == 0 {
        return Err(Error::input("geodesic cap must be positive"));
    }
    let dist = g.bfs(e);
    let anchors: Vec<VertexId> = (0..g.vertex_count() as u32).map(VertexId).collect();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() as u32 {
        if dist[v as usize] > r {
            continue;
        }
        if some_geodesic_profile_bounded(g, e, VertexId(v), c, geo_cap, &anchors)? {
            out.push(v);
        }
    }
    Ok(StableSetProxy { vertices: out, c, r, geo_cap })
}

/// Filters direction candidates down to those whose anchored geodesics
/// look contracting: some enumerated geodesic [o, v] has profile bounded
/// by c over the given anchor region.
pub fn contracting_directions(
    g: &UnitGraph,
    o: VertexId,
    candidates: &[VertexId],
    c: u32,
    geo_cap: usize,
    anchors: &[VertexId],
) -> Result<Vec<VertexId>> {
    if geo_cap == 0 {
        return Err(Error::input("geodesic cap must be positive"));
    }
    let mut out = Vec::new();
    for &v in candidates {
        if v.idx() >= g.vertex_count() {
            return Err(Error::input(format!("candidate {v} out of range")));
        }
        if some_geodesic_profile_bounded(g, o, v, c, geo_cap, anchors)? {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cayley_ball, Family, GroupModel, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn antipodal_tree_directions_give_the_spine() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let u = ball.vertex_of(&m.parse_word("a^-4").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^4").unwrap()).unwrap();
        let hull = weak_hull(g, ball.origin(), &[u, v], 8).unwrap();
        assert_eq!(hull.hull_vertices.len(), 9);
        assert_eq!(hull.induced.edge_count(), 8);
        assert_eq!(hull.truncated_pairs, 0);
        assert!(hull.hull_vertices.contains(&u) && hull.hull_vertices.contains(&v));
    }

    #[test]
    fn hull_grows_with_directions_and_flags_truncation() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let at = |s: &str| ball.vertex_of(&m.parse_word(s).unwrap()).unwrap();
        let d1 = at("a^4");
        let d2 = at("b^4");
        let d3 = at("a^-4");
        let small = weak_hull(g, ball.origin(), &[d1, d2], 100).unwrap();
        let big = weak_hull(g, ball.origin(), &[d1, d2, d3], 100).unwrap();
        for v in &small.hull_vertices {
            assert!(big.hull_vertices.binary_search(v).is_ok());
        }
        // C(8,4) = 70 geodesics between a^4 and b^4; cap 2 truncates.
        let capped = weak_hull(g, ball.origin(), &[d1, d2], 2).unwrap();
        assert_eq!(capped.truncated_pairs, 1);
        assert!(capped.hull_vertices.contains(&d1) && capped.hull_vertices.contains(&d2));
    }

    #[test]
    fn rejects_degenerate_direction_sets() {
        let m = GroupModel::free(1);
        let ball = cayley_ball(&m, 3, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let v = ball.vertex_of(&m.parse_word("a^2").unwrap()).unwrap();
        assert!(weak_hull(g, ball.origin(), &[v], 4).is_err());
        assert!(weak_hull(g, ball.origin(), &[v, v], 4).is_err());
    }

    #[test]
    fn group_hull_of_free_group_is_the_path() {
        let m = GroupModel::free(2);
        let dirs = vec![m.parse_word("a^3").unwrap(), m.parse_word("b^3").unwrap()];
        let hull = group_weak_hull(&m, &dirs, 10_000).unwrap();
        // Unique geodesic a^3 .. e .. b^3: 7 members.
        assert_eq!(hull.members.len(), 7);
        assert_eq!(hull.graph.edge_count(), 6);
        assert!(hull.members.contains(&Word::identity()));
    }

    #[test]
    fn group_hull_matches_ball_hull_on_grid() {
        let m = GroupModel::free_abelian(2);
        let dirs = vec![m.parse_word("a^2").unwrap(), m.parse_word("b^2").unwrap()];
        let gh = group_weak_hull(&m, &dirs, 10_000).unwrap();
        let ball = cayley_ball(&m, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let at = |s: &str| ball.vertex_of(&m.parse_word(s).unwrap()).unwrap();
        let bh = weak_hull(ball.graph(), ball.origin(), &[at("a^2"), at("b^2")], 1000).unwrap();
        assert_eq!(gh.members.len(), bh.hull_vertices.len());
        let mut ball_words: Vec<Word> = bh
            .hull_vertices
            .iter()
            .map(|&v| ball.word_of(v).clone())
            .collect();
        ball_words.sort();
        assert_eq!(gh.members, ball_words);
        assert_eq!(gh.graph.edge_count(), bh.induced.edge_count());
    }

    #[test]
    fn free_product_hull_contains_flat_patch() {
        let m = GroupModel::free_product(vec![
            Family::Free { rank: 1 },
            Family::FreeAbelian { rank: 2 },
        ]);
        // Generators: a | b, c. Directions along a^4 and through the
        // abelian factor; the b-c interval is a full box.
        let dirs = vec![m.parse_word("a^4").unwrap(), m.parse_word("b^2 c^2").unwrap()];
        let hull = group_weak_hull(&m, &dirs, 100_000).unwrap();
        for s in ["b", "c", "b c", "b^2 c", "b c^2", "a", "a^2", "a^3"] {
            let w = m.normal_form(&m.parse_word(s).unwrap());
            assert!(hull.members.contains(&w), "missing {s}");
        }
        // Box corner count sanity: interval of b^2 c^2 alone is 3 x 3.
        assert!(hull.members.len() >= 9 + 4);
    }

    #[test]
    fn coverage_audit_splits_by_kind_and_handles_no_directions() {
        let m = GroupModel::free(2);
        let sub = crate::groups::SubgroupSpec {
            name: "A".into(),
            generators: vec![m.parse_word("a").unwrap()],
        };
        let ball = cayley_ball(&m, 4, &[sub], DEFAULT_VERTEX_BUDGET).unwrap();
        let cb = crate::cusped::build_cusped_ball(ball, 3, DEFAULT_VERTEX_BUDGET).unwrap();
        let none = hull_coverage_audit(&cb, None, 2);
        assert_eq!(none.verdict, "NO-DIRECTIONS");
        assert_eq!(none.certified_total, 0);

        let at = |s: &str| cb.ball().vertex_of(&cb.ball().model().parse_word(s).unwrap()).unwrap();
        let hull = weak_hull(cb.graph(), cb.origin(), &[at("a^2"), at("a^-2")], 50).unwrap();
        let audit = hull_coverage_audit(&cb, Some(&hull), 1);
        assert_eq!(audit.verdict, "OK");
        assert_eq!(audit.certified_total, audit.certified_base + audit.certified_horoball);
        assert_eq!(audit.covered_total, audit.covered_base + audit.covered_horoball);
        assert!(audit.fraction_total > 0.0 && audit.fraction_total <= 1.0);
        // Literal recheck of the covered count.
        let dist = cb.graph().bfs_multi(&hull.hull_vertices);
        let expect = cb
            .certified_vertices()
            .into_iter()
            .filter(|v| dist[v.idx()] <= 1)
            .count() as u64;
        assert_eq!(audit.covered_total, expect);
    }

    #[test]
    fn coverage_is_total_when_hull_is_everything() {
        let m = GroupModel::free(2);
        let sub = crate::groups::SubgroupSpec {
            name: "A".into(),
            generators: vec![m.parse_word("a").unwrap()],
        };
        let ball = cayley_ball(&m, 3, &[sub], DEFAULT_VERTEX_BUDGET).unwrap();
        let cb = crate::cusped::build_cusped_ball(ball, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        let n = cb.graph().vertex_count();
        let everything = WeakHullResult {
            directions: vec![VertexId(0), VertexId(1)],
            hull_vertices: (0..n as u32).map(VertexId).collect(),
            induced: cb.graph().clone(),
            to_parent: (0..n as u32).map(VertexId).collect(),
            truncated_pairs: 0,
            pair_cap: 1,
        };
        let audit = hull_coverage_audit(&cb, Some(&everything), 0);
        assert_eq!(audit.fraction_total, 1.0);
        assert_eq!(audit.fraction_base, 1.0);
        assert_eq!(audit.fraction_horoball, 1.0);
    }

    #[test]
    fn stable_set_in_tree_is_whole_ball() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 3, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let proxy = stable_set_proxy(g, ball.origin(), 0, 3, 4).unwrap();
        assert_eq!(proxy.vertices.len(), g.vertex_count());
    }

    #[test]
    fn stable_set_in_grid_hugs_the_basepoint() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 6, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let o = ball.origin();
        let proxy = stable_set_proxy(g, o, 2, 5, 20).unwrap();
        assert!(proxy.vertices.contains(&o.0));
        let a1 = ball.vertex_of(&m.parse_word("a").unwrap()).unwrap();
        assert!(proxy.vertices.contains(&a1.0));
        let far = ball.vertex_of(&m.parse_word("a^5").unwrap()).unwrap();
        assert!(!proxy.vertices.contains(&far.0), "deep flat vertex should fail");
        let diag = ball.vertex_of(&m.parse_word("a^3 b^2").unwrap()).unwrap();
        assert!(!proxy.vertices.contains(&diag.0), "diagonal vertex should fail");
    }

    #[test]
    fn contracting_directions_empty_on_grid_full_on_tree() {
        let mt = GroupModel::free(2);
        let tb = cayley_ball(&mt, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let tree_sphere: Vec<VertexId> = (0..tb.vertex_count() as u32)
            .map(VertexId)
            .filter(|&v| tb.depth_of(v) == 4)
            .collect();
        let anchors: Vec<VertexId> = (0..tb.vertex_count() as u32).map(VertexId).collect();
        let dirs =
            contracting_directions(tb.graph(), tb.origin(), &tree_sphere, 0, 4, &anchors)
                .unwrap();
        assert_eq!(dirs.len(), tree_sphere.len());

        let mg = GroupModel::free_abelian(2);
        let gb = cayley_ball(&mg, 6, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let grid_sphere: Vec<VertexId> = (0..gb.vertex_count() as u32)
            .map(VertexId)
            .filter(|&v| gb.depth_of(v) == 6)
            .collect();
        let ganchors: Vec<VertexId> = (0..gb.vertex_count() as u32).map(VertexId).collect();
        let dirs =
            contracting_directions(gb.graph(), gb.origin(), &grid_sphere, 1, 20, &ganchors)
                .unwrap();
        assert!(dirs.is_empty(), "flat directions must not look contracting: {dirs:?}");
    }
}
