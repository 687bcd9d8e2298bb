//! Quasi-geodesic test families and their verification.
//!
//! A unit-step path p_0..p_m counts as a (K,C)-quasi-geodesic when
//! (j - i) <= K * (d(p_i, p_j) + C) for every i < j; the upper bound
//! d <= j - i holds automatically for unit steps. Families are generated
//! candidates, each verified against the exact inequality before use;
//! rejection is recorded, never silently dropped. The verifier is exact
//! rational arithmetic, so fractional K and C are fine.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId};
use crate::groups::{CayleyBall, Word};
use crate::morse::projection::check_path;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    WaypointDetour,
    LegConcatenation,
    PowerPath,
    ExhaustiveDfs,
    Supplied,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::WaypointDetour => "waypoint_detour",
            FamilyKind::LegConcatenation => "leg_concatenation",
            FamilyKind::PowerPath => "power_path",
            FamilyKind::ExhaustiveDfs => "exhaustive_dfs",
            FamilyKind::Supplied => "supplied",
        }
    }
}

/// A path that passed verification, tagged with the constants it was
/// verified against.
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedPath {
    pub vertices: Vec<u32>,
    pub k: Rational,
    pub c: Rational,
    pub family: FamilyKind,
}

impl VerifiedPath {
    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.iter().map(|&v| VertexId(v)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub pass: bool,
    /// Tightest pair: (i, j, d(p_i,p_j)) maximizing (j-i) - K(d+C).
    pub worst_pair: Option<(usize, usize, u32)>,
}

pub(crate) fn verify_with(
    dist: impl Fn(VertexId, VertexId) -> u32,
    path: &[VertexId],
    k: Rational,
    c: Rational,
) -> VerifyOutcome {
    let mut worst: Option<(Rational, usize, usize, u32)> = None;
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let d = dist(path[i], path[j]);
            let lhs = Rational::from_integer((j - i) as i64);
            let rhs = k * (Rational::from_integer(d as i64) + c);
            let margin = lhs - rhs;
            let replace = match &worst {
                None => true,
                Some((m, ..)) => margin > *m,
            };
            if replace {
                worst = Some((margin, i, j, d));
            }
        }
    }
    match worst {
        None => VerifyOutcome { pass: true, worst_pair: None },
        Some((margin, i, j, d)) => VerifyOutcome {
            pass: margin <= Rational::from_integer(0),
            worst_pair: Some((i, j, d)),
        },
    }
}

/// Exact (K,C) verification of a unit-step path. Runs one BFS per
/// distinct path vertex.
pub fn verify_quasi_geodesic(
    g: &UnitGraph,
    path: &[VertexId],
    k: Rational,
    c: Rational,
) -> Result<VerifyOutcome> {
    if k < Rational::from_integer(1) || c < Rational::from_integer(0) {
        return Err(Error::input("quasi-geodesic constants need K >= 1, C >= 0"));
    }
    check_path(g, path)?;
    let mut rows: HashMap<u32, Vec<u32>> = HashMap::new();
    for &v in path {
        rows.entry(v.0).or_insert_with(|| g.bfs(v));
    }
    Ok(verify_with(|u, v| rows[&u.0][v.idx()], path, k, c))
}

/// Family (a): geodesic legs through one forced waypoint, endpoints on
/// gamma. Draws are sequential from the seed, so a bigger budget extends
/// the family rather than reshuffling it.
pub fn waypoint_detours(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    budget: u64,
    seed: u64,
) -> Vec<Vec<VertexId>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let gv = gamma.vertices();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for _ in 0..budget {
        let mut s = rng.gen_range(0..gv.len());
        let mut t = rng.gen_range(0..gv.len());
        if s == t {
            continue;
        }
        if s > t {
            std::mem::swap(&mut s, &mut t);
        }
        let w = VertexId(rng.gen_range(0..n as u32));
        let leg1 = g.some_geodesic(gv[s], w).expect("connected");
        let leg2 = g.some_geodesic(w, gv[t]).expect("connected");
        let mut path = leg1.vertices().to_vec();
        path.extend_from_slice(&leg2.vertices()[1..]);
        out.push(path);
    }
    out
}

/// Family (b): concatenations of up to four geodesic legs between random
/// pivots, endpoints on gamma.
pub fn leg_concatenations(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    budget: u64,
    seed: u64,
) -> Vec<Vec<VertexId>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let gv = gamma.vertices();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for _ in 0..budget {
        let mut s = rng.gen_range(0..gv.len());
        let mut t = rng.gen_range(0..gv.len());
        if s == t {
            continue;
        }
        if s > t {
            std::mem::swap(&mut s, &mut t);
        }
        let legs = rng.gen_range(2..=4usize);
        let mut anchors = vec![gv[s]];
        for _ in 0..legs - 1 {
            anchors.push(VertexId(rng.gen_range(0..n as u32)));
        }
        anchors.push(gv[t]);
        let mut path: Vec<VertexId> = vec![anchors[0]];
        for pair in anchors.windows(2) {
            let leg = g.some_geodesic(pair[0], pair[1]).expect("connected");
            path.extend_from_slice(&leg.vertices()[1..]);
        }
        out.push(path);
    }
    out
}

/// Family (c): the path through the powers of h, each consecutive pair
/// joined by a geodesic of `g`. `g` must index group vertices like the
/// ball (the cusped graph does). Truncation at the ball edge is flagged.
pub fn power_path(
    ball: &CayleyBall,
    g: &UnitGraph,
    h: &Word,
    n_max: u32,
) -> Result<(Vec<VertexId>, bool)> {
    let model = ball.model();
    let hn = model.normal_form(h);
    if hn.is_empty() {
        return Err(Error::input("power path generator must be non-trivial"));
    }
    let mut cur = Word::identity();
    let mut cur_v = ball.origin();
    let mut path = vec![cur_v];
    let mut truncated = false;
    for _ in 0..n_max {
        let next = model.multiply(&cur, &hn);
        let Some(next_v) = ball.vertex_of(&next) else {
            truncated = true;
            break;
        };
        let leg = g.some_geodesic(cur_v, next_v)?;
        path.extend_from_slice(&leg.vertices()[1..]);
        cur = next;
        cur_v = next_v;
    }
    Ok((path, truncated))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FamilyCensus {
    /// family name -> (generated, verified).
    pub counts: std::collections::BTreeMap<String, (u64, u64)>,
}

impl FamilyCensus {
    pub(crate) fn record(&mut self, family: FamilyKind, verified: bool) {
        let e = self.counts.entry(family.name().to_string()).or_insert((0, 0));
        e.0 += 1;
        if verified {
            e.1 += 1;
        }
    }
}

/// Generates families (a) and (b), verifies them and any supplied extra
/// candidates against (K,C), and returns the survivors with a census of
/// what was tried. Verification uses one APSP table when the graph is
/// small enough, per-path BFS otherwise.
pub fn quasi_geodesic_families(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    k: Rational,
    c: Rational,
    budget: u64,
    seed: u64,
    extra: &[(Vec<VertexId>, FamilyKind)],
) -> Result<(Vec<VerifiedPath>, FamilyCensus)> {
    if k < Rational::from_integer(1) || c < Rational::from_integer(0) {
        return Err(Error::input("quasi-geodesic constants need K >= 1, C >= 0"));
    }
    check_path(g, gamma.vertices())?;
    let n = g.vertex_count();
    let apsp = if n <= 2_000 { Some(g.apsp_matrix(2_000)?) } else { None };
    let verify = |path: &[VertexId]| -> VerifyOutcome {
        match &apsp {
            Some(dist) => verify_with(|u, v| dist[u.idx() * n + v.idx()] as u32, path, k, c),
            None => {
                let mut rows: HashMap<u32, Vec<u32>> = HashMap::new();
                for &v in path {
                    rows.entry(v.0).or_insert_with(|| g.bfs(v));
                }
                verify_with(|u, v| rows[&u.0][v.idx()], path, k, c)
            }
        }
    };

    let mut census = FamilyCensus::default();
    let mut out = Vec::new();
    let half = budget / 2;
    for path in waypoint_detours(g, gamma, half, seed) {
        let ok = verify(&path).pass;
        census.record(FamilyKind::WaypointDetour, ok);
        if ok {
            out.push(VerifiedPath {
                vertices: path.iter().map(|v| v.0).collect(),
                k,
                c,
                family: FamilyKind::WaypointDetour,
            });
        }
    }
    for path in leg_concatenations(g, gamma, budget - half, seed) {
        let ok = verify(&path).pass;
        census.record(FamilyKind::LegConcatenation, ok);
        if ok {
            out.push(VerifiedPath {
                vertices: path.iter().map(|v| v.0).collect(),
                k,
                c,
                family: FamilyKind::LegConcatenation,
            });
        }
    }
    for (path, kind) in extra {
        check_path(g, path)?;
        let ok = verify(path).pass;
        census.record(*kind, ok);
        if ok {
            out.push(VerifiedPath {
                vertices: path.iter().map(|v| v.0).collect(),
                k,
                c,
                family: *kind,
            });
        }
    }
    Ok((out, census))
}
