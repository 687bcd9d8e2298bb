//! δ-hyperbolicity estimation on finite unit graphs.
//!
//! Two estimators, cross-validating each other: the four-point condition
//! (half-integer δ, cheap, distance lookups only) and slim triangles
//! (integer δ, needs geodesics, sensitive to geodesic choice). Both run
//! exhaustively under a vertex cap and by seeded uniform sampling above
//! it. Sampling is reproducible: quadruple/triple streams are derived
//! from (seed, batch index), so the result is independent of worker
//! count, and a larger budget only extends the sample.
//!
//! `plateau_audit` turns a series of δ values over growing truncations
//! into a PLATEAU / GROWING / INCONCLUSIVE verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{UnitGraph, VertexId};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 400;
pub const DEFAULT_SAMPLE_BUDGET: u64 = 1_000_000;
pub const DEFAULT_POOL_SIZE: usize = 192;
/// Samples per RNG stream; budgets split on this boundary.
const BATCH: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    /// Every quadruple / triple. Requires vertex_count <= the cap.
    Exhaustive,
    /// Uniform independent draws, reproducible from the seed.
    Sampled { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub enum GeodesicChooser {
    /// One geodesic per side: the graph-core tie-break rule, walked from
    /// the side's smaller endpoint.
    Canonical,
    /// Min slimness over up to `per_side` enumerated geodesics per side
    /// (clamped to 32). Costs the cube of the enumeration per triangle;
    /// meant for small graphs.
    MinOver { per_side: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Quadruple([u32; 4]),
    Triangle([u32; 3]),
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_four_point: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_slim: Option<u32>,
    pub mode: String,
    pub sample_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub witness: Witness,
}

impl DeltaReport {
    /// The four-point value doubled, exact. None for slim reports.
    pub fn delta_four_point_doubled(&self) -> Option<u32> {
        self.delta_four_point.map(|d| (d * 2.0) as u32)
    }
}

/// Defect of one quadruple, doubled: the largest of the three pair sums
/// minus the middle one.
fn defect_doubled(d01: u32, d23: u32, d02: u32, d13: u32, d03: u32, d12: u32) -> u32 {
    let mut s = [d01 + d23, d02 + d13, d03 + d12];
    s.sort_unstable();
    s[2] - s[1]
}

/// Re-evaluates a quadruple from scratch. Three BFS runs.
pub fn four_point_defect_doubled(g: &UnitGraph, q: [VertexId; 4]) -> Result<u32> {
    let d0 = g.bfs(q[0]);
    let d1 = g.bfs(q[1]);
    let d2 = g.bfs(q[2]);
    for v in q {
        if v.idx() >= g.vertex_count() {
            return Err(Error::input(format!("vertex {v} out of range")));
        }
    }
    Ok(defect_doubled(
        d0[q[1].idx()],
        d2[q[3].idx()],
        d0[q[2].idx()],
        d1[q[3].idx()],
        d0[q[3].idx()],
        d1[q[2].idx()],
    ))
}

/// (defect, witness) pairs reduce by defect, ties to the smaller witness,
/// so parallel reduction is schedule-independent.
fn better(a: (u32, [u32; 4]), b: (u32, [u32; 4])) -> (u32, [u32; 4]) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

pub fn four_point_delta(
    g: &UnitGraph,
    mode: DeltaMode,
    cap: usize,
    pool_size: usize,
) -> Result<DeltaReport> {
    let n = g.vertex_count();
    match mode {
        DeltaMode::Exhaustive => {
            if n > cap {
                return Err(Error::Resource { needed: n as u64, budget: cap as u64 });
            }
            let dist = g.apsp_matrix(cap)?;
            let d = |a: usize, b: usize| dist[a * n + b] as u32;
            let init = (0u32, [0u32; 4]);
            let (best, wit) = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut acc = init;
                    for j in i + 1..n {
                        let dij = d(i, j);
                        for k in j + 1..n {
                            let (dik, djk) = (d(i, k), d(j, k));
                            for l in k + 1..n {
                                let def = defect_doubled(
                                    dij,
                                    d(k, l),
                                    dik,
                                    d(j, l),
                                    d(i, l),
                                    djk,
                                );
                                if def > acc.0 {
                                    acc = (def, [i as u32, j as u32, k as u32, l as u32]);
                                }
                            }
                        }
                    }
                    acc
                })
                .reduce(|| init, better);
            let quadruples = if n >= 4 {
                (n as u64) * (n as u64 - 1) * (n as u64 - 2) * (n as u64 - 3) / 24
            } else {
                0
            };
            Ok(DeltaReport {
                delta_four_point: Some(best as f64 / 2.0),
                delta_slim: None,
                mode: "exhaustive".into(),
                sample_count: quadruples,
                seed: None,
                witness: Witness::Quadruple(wit),
            })
        }
        DeltaMode::Sampled { budget, seed } => {
            let (pool, dist) = sample_pool(g, pool_size, seed);
            let p = pool.len();
            let d = |a: usize, b: usize| dist[a * p + b];
            let batches = budget.div_ceil(BATCH);
            let init = (0u32, [u32::MAX; 4]);
            let (best, wit) = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(b + 1);
                    let len = BATCH.min(budget - b * BATCH);
                    let mut acc = init;
                    for _ in 0..len {
                        let i = rng.gen_range(0..p);
                        let j = rng.gen_range(0..p);
                        let k = rng.gen_range(0..p);
                        let l = rng.gen_range(0..p);
                        let def =
                            defect_doubled(d(i, j), d(k, l), d(i, k), d(j, l), d(i, l), d(j, k));
                        if def > acc.0 {
                            let mut ids = [pool[i].0, pool[j].0, pool[k].0, pool[l].0];
                            ids.sort_unstable();
                            acc = better(acc, (def, ids));
                        }
                    }
                    acc
                })
                .reduce(|| init, better);
            let witness = if wit == [u32::MAX; 4] {
                // Defect 0 everywhere; report the first pool quadruple.
                let mut ids = [
                    pool[0].0,
                    pool[1.min(p - 1)].0,
                    pool[2.min(p - 1)].0,
                    pool[3.min(p - 1)].0,
                ];
                ids.sort_unstable();
                Witness::Quadruple(ids)
            } else {
                Witness::Quadruple(wit)
            };
            Ok(DeltaReport {
                delta_four_point: Some(best as f64 / 2.0),
                delta_slim: None,
                mode: "sampled".into(),
                sample_count: budget,
                seed: Some(seed),
                witness,
            })
        }
    }
}

/// Seeded vertex pool plus its pairwise distance table (row-major, pool
/// indices). Pool draws use the seed's stream 0; sample batches use
/// streams 1 and up.
fn sample_pool(g: &UnitGraph, pool_size: usize, seed: u64) -> (Vec<VertexId>, Vec<u32>) {
    let n = g.vertex_count();
    let k = pool_size.max(4).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = rand::seq::index::sample(&mut rng, n, k).into_vec();
    picks.sort_unstable();
    let pool: Vec<VertexId> = picks.into_iter().map(|i| VertexId(i as u32)).collect();
    let rows: Vec<Vec<u32>> = pool.par_iter().map(|&v| g.bfs(v)).collect();
    let mut dist = vec![0u32; k * k];
    for (i, row) in rows.iter().enumerate() {
        for (j, &u) in pool.iter().enumerate() {
            dist[i * k + j] = row[u.idx()];
        }
    }
    (pool, dist)
}

/// Slimness of the canonical geodesic triangle over a sorted triple:
/// the max over sides of the farthest side vertex from the union of the
/// other two sides. Exact, via three multi-source BFS runs.
pub fn triangle_slimness(g: &UnitGraph, t: [VertexId; 3], chooser: GeodesicChooser) -> Result<u32> {
    let mut t = t;
    t.sort_unstable_by_key(|v| v.0);
    match chooser {
        GeodesicChooser::Canonical => {
            let dist_b = g.bfs(t[1]);
            let dist_c = g.bfs(t[2]);
            let ab = g.some_geodesic_with_dist(t[0], t[1], &dist_b)?;
            let ac = g.some_geodesic_with_dist(t[0], t[2], &dist_c)?;
            let bc = g.some_geodesic_with_dist(t[1], t[2], &dist_c)?;
            Ok(slimness_of_sides(
                g,
                ab.vertices(),
                ac.vertices(),
                bc.vertices(),
            ))
        }
        GeodesicChooser::MinOver { per_side } => slimness_minover(g, t, per_side.clamp(1, 32)),
    }
}

pub(crate) fn slimness_of_sides(
    g: &UnitGraph,
    ab: &[VertexId],
    ac: &[VertexId],
    bc: &[VertexId],
) -> u32 {
    let side_max = |side: &[VertexId], others: (&[VertexId], &[VertexId])| -> u32 {
        let mut sources: Vec<VertexId> = others.0.to_vec();
        sources.extend_from_slice(others.1);
        sources.sort_unstable_by_key(|v| v.0);
        sources.dedup();
        let dist = g.bfs_multi(&sources);
        side.iter().map(|v| dist[v.idx()]).max().unwrap_or(0)
    };
    let a = side_max(ab, (ac, bc));
    let b = side_max(ac, (ab, bc));
    let c = side_max(bc, (ab, ac));
    a.max(b).max(c)
}

/// Min slimness over enumerated geodesic combinations. Distances inside
/// the candidate union are computed once; combinations then cost lookups.
fn slimness_minover(g: &UnitGraph, t: [VertexId; 3], per_side: usize) -> Result<u32> {
    let (sides_ab, _) = g.all_geodesics(t[0], t[1], per_side)?;
    let (sides_ac, _) = g.all_geodesics(t[0], t[2], per_side)?;
    let (sides_bc, _) = g.all_geodesics(t[1], t[2], per_side)?;
    let mut union: Vec<VertexId> = Vec::new();
    for s in sides_ab.iter().chain(&sides_ac).chain(&sides_bc) {
        union.extend_from_slice(s.vertices());
    }
    union.sort_unstable_by_key(|v| v.0);
    union.dedup();
    let local: std::collections::HashMap<u32, usize> =
        union.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
    let u = union.len();
    let rows: Vec<Vec<u32>> = union.par_iter().map(|&v| g.bfs(v)).collect();
    let mut dist = vec![0u32; u * u];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in union.iter().enumerate() {
            dist[i * u + j] = row[v.idx()];
        }
    }
    let loc = |p: &[VertexId]| -> Vec<usize> { p.iter().map(|v| local[&v.0]).collect() };
    let labc: Vec<Vec<usize>> = sides_ab.iter().map(|p| loc(p.vertices())).collect();
    let lacc: Vec<Vec<usize>> = sides_ac.iter().map(|p| loc(p.vertices())).collect();
    let lbcc: Vec<Vec<usize>> = sides_bc.iter().map(|p| loc(p.vertices())).collect();
    let side_max = |side: &[usize], o1: &[usize], o2: &[usize]| -> u32 {
        side.iter()
            .map(|&x| {
                o1.iter()
                    .chain(o2)
                    .map(|&y| dist[x * u + y])
                    .min()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    };
    let mut best = u32::MAX;
    for ab in &labc {
        for ac in &lacc {
            for bc in &lbcc {
                let s = side_max(ab, ac, bc)
                    .max(side_max(ac, ab, bc))
                    .max(side_max(bc, ab, ac));
                best = best.min(s);
            }
        }
    }
    Ok(best)
}

pub fn slim_triangle_delta(
    g: &UnitGraph,
    chooser: GeodesicChooser,
    mode: DeltaMode,
    cap: usize,
) -> Result<DeltaReport> {
    let n = g.vertex_count();
    match mode {
        DeltaMode::Exhaustive => {
            if n > cap {
                return Err(Error::Resource { needed: n as u64, budget: cap as u64 });
            }
            match chooser {
                GeodesicChooser::Canonical => slim_exhaustive_canonical(g, cap),
                GeodesicChooser::MinOver { .. } => {
                    let init = (0u32, [0u32; 3]);
                    let (best, wit) = par_triples(n)
                        .map(|(i, j, k)| {
                            let s = triangle_slimness(
                                g,
                                [VertexId(i), VertexId(j), VertexId(k)],
                                chooser,
                            )
                            .expect("triple in range");
                            (s, [i, j, k])
                        })
                        .reduce(|| init, better3);
                    Ok(slim_report(best, wit, "exhaustive", triple_count(n), None))
                }
            }
        }
        DeltaMode::Sampled { budget, seed } => {
            let batches = budget.div_ceil(BATCH);
            let init = (0u32, [u32::MAX; 3]);
            let (best, wit) = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(b + 1);
                    let len = BATCH.min(budget - b * BATCH);
                    let mut acc = init;
                    for _ in 0..len {
                        let mut t = [
                            rng.gen_range(0..n as u32),
                            rng.gen_range(0..n as u32),
                            rng.gen_range(0..n as u32),
                        ];
                        t.sort_unstable();
                        let s = triangle_slimness(
                            g,
                            [VertexId(t[0]), VertexId(t[1]), VertexId(t[2])],
                            chooser,
                        )
                        .expect("triple in range");
                        acc = better3(acc, (s, t));
                    }
                    acc
                })
                .reduce(|| init, better3);
            let wit = if wit == [u32::MAX; 3] { [0, 0, 0] } else { wit };
            Ok(slim_report(best, wit, "sampled", budget, Some(seed)))
        }
    }
}

fn better3(a: (u32, [u32; 3]), b: (u32, [u32; 3])) -> (u32, [u32; 3]) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn triple_count(n: usize) -> u64 {
    if n >= 3 {
        (n as u64) * (n as u64 - 1) * (n as u64 - 2) / 6
    } else {
        0
    }
}

fn slim_report(
    best: u32,
    wit: [u32; 3],
    mode: &str,
    count: u64,
    seed: Option<u64>,
) -> DeltaReport {
    DeltaReport {
        delta_four_point: None,
        delta_slim: Some(best),
        mode: mode.into(),
        sample_count: count,
        seed,
        witness: Witness::Triangle(wit),
    }
}

fn par_triples(n: usize) -> impl ParallelIterator<Item = (u32, u32, u32)> {
    (0..n as u32).into_par_iter().flat_map_iter(move |i| {
        (i + 1..n as u32)
            .flat_map(move |j| (j + 1..n as u32).map(move |k| (i, j, k)))
    })
}

/// Exhaustive canonical slimness backed by an APSP table: sides are the
/// tie-break geodesics rebuilt from matrix rows, so they coincide with
/// `some_geodesic`.
fn slim_exhaustive_canonical(g: &UnitGraph, cap: usize) -> Result<DeltaReport> {
    let n = g.vertex_count();
    let dist = g.apsp_matrix(cap)?;
    // Canonical side for every ordered pair u < v.
    let side = |u: usize, v: usize| -> Vec<u32> {
        let mut path = Vec::with_capacity(dist[u * n + v] as usize + 1);
        let mut cur = u as u32;
        path.push(cur);
        while cur as usize != v {
            let d = dist[cur as usize * n + v];
            let next = g
                .neighbors(VertexId(cur))
                .iter()
                .copied()
                .find(|&w| dist[w as usize * n + v] + 1 == d)
                .expect("distance field admits a descent");
            cur = next;
            path.push(cur);
        }
        path
    };
    let sides: Vec<Vec<Vec<u32>>> = (0..n)
        .into_par_iter()
        .map(|u| (u + 1..n).map(|v| side(u, v)).collect())
        .collect();
    let side_of = |u: usize, v: usize| -> &[u32] { &sides[u][v - u - 1] };
    let init = (0u32, [0u32; 3]);
    let (best, wit) = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = init;
            for b in a + 1..n {
                let ab = side_of(a, b);
                for c in b + 1..n {
                    let ac = side_of(a, c);
                    let bc = side_of(b, c);
                    let s = slim_from_matrix(&dist, n, ab, ac, bc);
                    if s > acc.0 {
                        acc = (s, [a as u32, b as u32, c as u32]);
                    }
                }
            }
            acc
        })
        .reduce(|| init, better3);
    Ok(slim_report(best, wit, "exhaustive", triple_count(n), None))
}

fn slim_from_matrix(dist: &[u16], n: usize, ab: &[u32], ac: &[u32], bc: &[u32]) -> u32 {
    let side_max = |side: &[u32], o1: &[u32], o2: &[u32]| -> u32 {
        side.iter()
            .map(|&x| {
                let row = &dist[x as usize * n..(x as usize + 1) * n];
                o1.iter()
                    .chain(o2)
                    .map(|&y| row[y as usize] as u32)
                    .min()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    };
    side_max(ab, ac, bc)
        .max(side_max(ac, ab, bc))
        .max(side_max(bc, ab, ac))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlateauVerdict {
    Plateau,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlateauAudit {
    pub verdict: PlateauVerdict,
    pub entries: usize,
    /// (size, delta) of the three largest truncations.
    pub last_three: [(u64, f64); 3],
    pub max_gap_last_three: f64,
}

/// PLATEAU when the last three δ values pairwise differ by at most 1,
/// GROWING when each of the last two steps gains at least 1, otherwise
/// INCONCLUSIVE. Sizes must increase strictly.
pub fn plateau_audit(series: &[(u64, f64)]) -> Result<PlateauAudit> {
    if series.len() < 3 {
        return Err(Error::input(format!(
            "plateau audit needs at least 3 entries, got {}",
            series.len()
        )));
    }
    for w in series.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::input(format!(
                "plateau series sizes must increase strictly: {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    let tail = &series[series.len() - 3..];
    let [a, b, c] = [tail[0].1, tail[1].1, tail[2].1];
    let max_gap = (a - b).abs().max((b - c).abs()).max((a - c).abs());
    let verdict = if max_gap <= 1.0 {
        PlateauVerdict::Plateau
    } else if b - a >= 1.0 && c - b >= 1.0 {
        PlateauVerdict::Growing
    } else {
        PlateauVerdict::Inconclusive
    };
    Ok(PlateauAudit {
        verdict,
        entries: series.len(),
        last_three: [tail[0], tail[1], tail[2]],
        max_gap_last_three: max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};

    fn cycle(n: u32) -> UnitGraph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        UnitGraph::from_edges(n as usize, &edges).unwrap()
    }

    fn grid_ball(r: u32) -> UnitGraph {
        let m = GroupModel::free_abelian(2);
        cayley_ball(&m, r, &[], DEFAULT_VERTEX_BUDGET)
            .unwrap()
            .into_graph()
    }

    fn tree_ball(r: u32) -> UnitGraph {
        let m = GroupModel::free(2);
        cayley_ball(&m, r, &[], DEFAULT_VERTEX_BUDGET)
            .unwrap()
            .into_graph()
    }

    /// Literal restatement of the four-point rule, for oracle use.
    fn brute_four_point_doubled(g: &UnitGraph) -> u32 {
        let n = g.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n).map(|v| g.bfs(VertexId(v as u32))).collect();
        let mut best = 0;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let mut s = [
                            rows[w][x] + rows[y][z],
                            rows[w][y] + rows[x][z],
                            rows[w][z] + rows[x][y],
                        ];
                        s.sort_unstable();
                        best = best.max(s[2] - s[1]);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn tree_is_zero_both_ways() {
        let g = tree_ball(4);
        let fp = four_point_delta(&g, DeltaMode::Exhaustive, 400, 0).unwrap();
        assert_eq!(fp.delta_four_point, Some(0.0));
        let g_small = tree_ball(2);
        let slim = slim_triangle_delta(
            &g_small,
            GeodesicChooser::Canonical,
            DeltaMode::Exhaustive,
            400,
        )
        .unwrap();
        assert_eq!(slim.delta_slim, Some(0));
    }

    #[test]
    fn c8_four_point_matches_brute_force() {
        let g = cycle(8);
        let oracle = brute_four_point_doubled(&g);
        assert_eq!(oracle, 4); // delta = 2
        let rep = four_point_delta(&g, DeltaMode::Exhaustive, 400, 0).unwrap();
        assert_eq!(rep.delta_four_point, Some(2.0));
        assert_eq!(rep.sample_count, 70);
        // Witness re-evaluates to the reported value.
        let Witness::Quadruple(q) = rep.witness else {
            panic!("wrong witness kind")
        };
        let def = four_point_defect_doubled(&g, q.map(VertexId)).unwrap();
        assert_eq!(def, 4);
    }

    #[test]
    fn c6_slim_matches_brute_force() {
        let g = cycle(6);
        // Oracle: all 20 triples through triangle_slimness one at a time.
        let mut oracle = 0;
        for a in 0..6u32 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let s = triangle_slimness(
                        &g,
                        [VertexId(a), VertexId(b), VertexId(c)],
                        GeodesicChooser::Canonical,
                    )
                    .unwrap();
                    oracle = oracle.max(s);
                }
            }
        }
        assert_eq!(oracle, 1);
        let rep =
            slim_triangle_delta(&g, GeodesicChooser::Canonical, DeltaMode::Exhaustive, 400)
                .unwrap();
        assert_eq!(rep.delta_slim, Some(1));
        assert_eq!(rep.sample_count, 20);
        let Witness::Triangle(t) = rep.witness else {
            panic!("wrong witness kind")
        };
        let s = triangle_slimness(&g, t.map(VertexId), GeodesicChooser::Canonical).unwrap();
        assert_eq!(s, 1);
    }

    #[test]
    fn minover_never_exceeds_canonical() {
        let g = grid_ball(3);
        for (a, b, c) in [(1u32, 7, 20), (0, 5, 11), (2, 9, 24)] {
            let canon = triangle_slimness(
                &g,
                [VertexId(a), VertexId(b), VertexId(c)],
                GeodesicChooser::Canonical,
            )
            .unwrap();
            let min = triangle_slimness(
                &g,
                [VertexId(a), VertexId(b), VertexId(c)],
                GeodesicChooser::MinOver { per_side: 8 },
            )
            .unwrap();
            assert!(min <= canon, "{min} > {canon}");
        }
    }

    #[test]
    fn sampled_never_exceeds_exhaustive() {
        let g = grid_ball(4);
        let ex = four_point_delta(&g, DeltaMode::Exhaustive, 400, 0).unwrap();
        let sa = four_point_delta(
            &g,
            DeltaMode::Sampled { budget: 50_000, seed: 11 },
            400,
            DEFAULT_POOL_SIZE,
        )
        .unwrap();
        assert!(sa.delta_four_point <= ex.delta_four_point);
        // With the pool covering the whole 41-vertex ball, 50k draws find
        // the true value.
        assert_eq!(sa.delta_four_point, ex.delta_four_point);
    }

    #[test]
    fn sampled_is_deterministic_and_monotone_in_budget() {
        let g = grid_ball(5);
        let run = |budget| {
            four_point_delta(
                &g,
                DeltaMode::Sampled { budget, seed: 7 },
                400,
                DEFAULT_POOL_SIZE,
            )
            .unwrap()
        };
        let a = run(40_000);
        let b = run(40_000);
        assert_eq!(a.delta_four_point, b.delta_four_point);
        assert_eq!(a.witness, b.witness);
        let c = run(120_000);
        assert!(c.delta_four_point >= a.delta_four_point);
    }

    #[test]
    fn grid_delta_grows_with_radius() {
        let d4 = four_point_delta(&grid_ball(4), DeltaMode::Exhaustive, 400, 0)
            .unwrap()
            .delta_four_point
            .unwrap();
        let d6 = four_point_delta(&grid_ball(6), DeltaMode::Exhaustive, 400, 0)
            .unwrap()
            .delta_four_point
            .unwrap();
        let d8 = four_point_delta(
            &grid_ball(8),
            DeltaMode::Sampled { budget: 2_000_000, seed: 3 },
            400,
            DEFAULT_POOL_SIZE,
        )
        .unwrap()
        .delta_four_point
        .unwrap();
        assert!(d6 > d4, "{d6} vs {d4}");
        assert!(d8 >= d6, "{d8} vs {d6}");
    }

    #[test]
    fn exhaustive_cap_suggests_sampling() {
        let g = grid_ball(8); // 145 vertices
        let err = four_point_delta(&g, DeltaMode::Exhaustive, 100, 0).unwrap_err();
        assert!(matches!(err, Error::Resource { needed: 145, budget: 100 }));
        assert!(err.to_string().contains("sampled"));
    }

    #[test]
    fn sanity_corridor_on_exhaustive_graphs() {
        for g in [cycle(6), cycle(8), grid_ball(3), tree_ball(3)] {
            let fp = four_point_delta(&g, DeltaMode::Exhaustive, 400, 0)
                .unwrap()
                .delta_four_point
                .unwrap();
            let sl = slim_triangle_delta(
                &g,
                GeodesicChooser::Canonical,
                DeltaMode::Exhaustive,
                400,
            )
            .unwrap()
            .delta_slim
            .unwrap() as f64;
            assert!(sl <= 8.0 * fp + 4.0, "slim {sl} vs 4pt {fp}");
            assert!(fp <= 8.0 * sl + 4.0, "4pt {fp} vs slim {sl}");
        }
    }

    #[test]
    fn slim_sampled_on_tree_is_zero() {
        let g = tree_ball(5);
        let rep = slim_triangle_delta(
            &g,
            GeodesicChooser::Canonical,
            DeltaMode::Sampled { budget: 300, seed: 5 },
            400,
        )
        .unwrap();
        assert_eq!(rep.delta_slim, Some(0));
        assert_eq!(rep.mode, "sampled");
    }

    #[test]
    fn plateau_rules() {
        let p = plateau_audit(&[(4, 1.0), (6, 1.0), (8, 1.0)]).unwrap();
        assert_eq!(p.verdict, PlateauVerdict::Plateau);
        let g = plateau_audit(&[(4, 2.0), (6, 4.0), (8, 6.0)]).unwrap();
        assert_eq!(g.verdict, PlateauVerdict::Growing);
        let i = plateau_audit(&[(4, 1.0), (6, 3.0), (8, 3.0)]).unwrap();
        assert_eq!(i.verdict, PlateauVerdict::Inconclusive);
        assert!(plateau_audit(&[(4, 1.0), (6, 1.0)]).is_err());
        assert!(plateau_audit(&[(4, 1.0), (4, 1.0), (8, 1.0)]).is_err());
    }

    #[test]
    fn truncated_horoball_slim_plateaus_over_depth() {
        use crate::horoball::build_horoball;
        let path: Vec<(u32, u32)> = (0..32).map(|i| (i, i + 1)).collect();
        let base = UnitGraph::from_edges(33, &path).unwrap();
        let mut series = Vec::new();
        for depth in [5u32, 6, 7] {
            let h = build_horoball(&base, depth, 100_000).unwrap();
            let rep = slim_triangle_delta(
                h.graph(),
                GeodesicChooser::Canonical,
                DeltaMode::Exhaustive,
                400,
            )
            .unwrap();
            series.push((
                h.graph().vertex_count() as u64,
                rep.delta_slim.unwrap() as f64,
            ));
        }
        let audit = plateau_audit(&series).unwrap();
        assert_eq!(audit.verdict, PlateauVerdict::Plateau, "series {series:?}");
    }
}
