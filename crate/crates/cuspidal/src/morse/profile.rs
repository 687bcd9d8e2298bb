//! Contraction profiles: how far apart nearest-point projections onto a
//! geodesic can drift, as a function of the distance to the geodesic.
//!
//! A pair (x, y) qualifies when d(x,y) <= d(x, gamma); it is bucketed at
//! r = d(x, gamma) with value diam(pi(x) ∪ pi(y)), and rho_hat(r) is the
//! running sup over buckets up to r and over all supplied geodesic
//! representatives. The region restricts the anchor x only; the partner y
//! ranges over the whole graph, so shrinking the region to a trusted core
//! never starves an anchor of its qualifying ball. Everything here is
//! exact, never sampled: projections reduce to position intervals on
//! gamma, and the sup over qualifying partners is computed by three
//! bounded-radius min/max propagations, one graph sweep per radius step.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId, UNREACHED};
use crate::morse::projection::check_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub r: u32,
    pub x: u32,
    pub y: u32,
    /// Index into the supplied geodesic list.
    pub gamma: u32,
    pub diam: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionProfile {
    /// rho_hat[r] for r = 0..=support, non-decreasing.
    pub rho_hat: Vec<u32>,
    pub support: u32,
    /// Worst pair realizing rho_hat[r], per r.
    pub witnesses: Vec<Option<PairWitness>>,
    /// Profiles are exact; kept so reports state the mode explicitly.
    pub subsampled: bool,
}

impl ContractionProfile {
    /// rho_hat as a non-decreasing step function; constant beyond support.
    pub fn value(&self, r: u32) -> u32 {
        self.rho_hat[(r.min(self.support)) as usize]
    }

    /// A profile from raw values, for formula evaluation and tests.
    pub fn synthetic(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("synthetic profile needs at least one value"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::input("synthetic profile must be non-decreasing"));
        }
        let support = values.len() as u32 - 1;
        let witnesses = vec![None; values.len()];
        Ok(ContractionProfile { rho_hat: values, support, witnesses, subsampled: false })
    }
}

/// Projection span of every vertex: interval of gamma positions reached by
/// nearest-point projection. pi(x) = union of pi(z) over neighbors z one
/// step closer to gamma, so spans propagate in BFS level order.
fn projection_spans(g: &UnitGraph, gamma: &[VertexId], dist: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let n = g.vertex_count();
    let mut minpos = vec![u32::MAX; n];
    let mut maxpos = vec![0u32; n];
    for (p, v) in gamma.iter().enumerate() {
        minpos[v.idx()] = p as u32;
        maxpos[v.idx()] = p as u32;
    }
    let maxd = dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0);
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); maxd as usize + 1];
    for v in 0..n {
        if dist[v] != UNREACHED {
            by_level[dist[v] as usize].push(v as u32);
        }
    }
    for level in 1..=maxd as usize {
        for &v in &by_level[level] {
            let mut lo = u32::MAX;
            let mut hi = 0u32;
            for &z in g.neighbors(VertexId(v)) {
                if dist[z as usize] + 1 == level as u32 {
                    lo = lo.min(minpos[z as usize]);
                    hi = hi.max(maxpos[z as usize]);
                }
            }
            minpos[v as usize] = lo;
            maxpos[v as usize] = hi;
        }
    }
    (minpos, maxpos)
}

/// One bucketed sup per r for a single gamma: (value, x, y) with ties to
/// the smaller witness pair.
fn profile_one(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    region: &[VertexId],
) -> Result<Vec<Option<(u32, u32, u32)>>> {
    check_path(g, gamma.vertices())?;
    let n = g.vertex_count();
    let dist = g.bfs_multi(gamma.vertices());
    let (minpos, maxpos) = projection_spans(g, gamma.vertices(), &dist);
    let support = region.iter().map(|v| dist[v.idx()]).max().expect("region non-empty");

    // Three propagated quantities over partners y (any graph vertex):
    //   low:  min over y within k of minpos(y)      (carried witness y)
    //   high: max over y within k of maxpos(y)
    //   wide: max over y within k of span(y)
    const NONE: u32 = u32::MAX;
    let mut low: Vec<(u32, u32)> = vec![(u32::MAX, NONE); n];
    let mut high: Vec<(u32, u32)> = vec![(0, NONE); n];
    let mut wide: Vec<(u32, u32)> = vec![(0, NONE); n];
    for i in 0..n {
        if dist[i] == UNREACHED {
            continue;
        }
        low[i] = (minpos[i], i as u32);
        high[i] = (maxpos[i], i as u32);
        wide[i] = (maxpos[i] - minpos[i], i as u32);
    }

    // Buckets filled at k = d(x, gamma) during the radius sweep.
    let mut bucket: Vec<Option<(u32, u32, u32)>> = vec![None; support as usize + 1];
    let snap = |k: u32,
                    low: &[(u32, u32)],
                    high: &[(u32, u32)],
                    wide: &[(u32, u32)],
                    bucket: &mut Vec<Option<(u32, u32, u32)>>| {
        for &x in region {
            let i = x.idx();
            if dist[i] != k {
                continue;
            }
            let candidates = [
                (maxpos[i].saturating_sub(low[i].0), low[i].1),
                (high[i].0.saturating_sub(minpos[i]), high[i].1),
                wide[i],
            ];
            let (val, y) = candidates
                .into_iter()
                .fold((0u32, NONE), |acc, c| {
                    if c.1 != NONE && (c.0 > acc.0 || (c.0 == acc.0 && c.1 < acc.1) || acc.1 == NONE)
                    {
                        c
                    } else {
                        acc
                    }
                });
            debug_assert!(y != NONE, "region vertex is its own partner");
            let slot = &mut bucket[k as usize];
            let replace = match slot {
                None => true,
                Some((bv, bx, by)) => {
                    val > *bv || (val == *bv && (x.0, y) < (*bx, *by))
                }
            };
            if replace {
                *slot = Some((val, x.0, y));
            }
        }
    };

    snap(0, &low, &high, &wide, &mut bucket);
    for k in 1..=support {
        let step = |old: &Vec<(u32, u32)>, take_min: bool| -> Vec<(u32, u32)> {
            (0..n)
                .into_par_iter()
                .map(|v| {
                    let mut best = old[v];
                    for &z in g.neighbors(VertexId(v as u32)) {
                        let c = old[z as usize];
                        if c.1 == NONE {
                            continue;
                        }
                        let wins = if best.1 == NONE {
                            true
                        } else if take_min {
                            c.0 < best.0 || (c.0 == best.0 && c.1 < best.1)
                        } else {
                            c.0 > best.0 || (c.0 == best.0 && c.1 < best.1)
                        };
                        if wins {
                            best = c;
                        }
                    }
                    best
                })
                .collect()
        };
        low = step(&low, true);
        high = step(&high, false);
        wide = step(&wide, false);
        snap(k, &low, &high, &wide, &mut bucket);
    }
    Ok(bucket)
}

/// Exact contraction profile against one or more geodesic
/// representatives; the sup runs over all of them. `region` is the set
/// of admissible anchors x (say, the certified vertices of a truncated
/// space); partners come from the whole graph.
pub fn contraction_profile(
    g: &UnitGraph,
    gammas: &[GeodesicPath],
    region: &[VertexId],
) -> Result<ContractionProfile> {
    if gammas.is_empty() {
        return Err(Error::input("contraction profile needs at least one geodesic"));
    }
    if region.is_empty() {
        return Err(Error::input("contraction profile needs a non-empty region"));
    }
    let n = g.vertex_count();
    let mut in_region = vec![false; n];
    let mut reg: Vec<VertexId> = Vec::with_capacity(region.len());
    for &v in region {
        if v.idx() >= n {
            return Err(Error::input(format!("region vertex {v} out of range")));
        }
        if !in_region[v.idx()] {
            in_region[v.idx()] = true;
            reg.push(v);
        }
    }
    reg.sort_unstable_by_key(|v| v.0);

    let mut merged: Vec<Option<(u32, u32, u32, u32)>> = Vec::new();
    for (gi, gamma) in gammas.iter().enumerate() {
        let bucket = profile_one(g, gamma, &reg)?;
        if bucket.len() > merged.len() {
            merged.resize(bucket.len(), None);
        }
        for (r, b) in bucket.into_iter().enumerate() {
            if let Some((val, x, y)) = b {
                let replace = match merged[r] {
                    None => true,
                    Some((mv, mx, my, mg)) => {
                        val > mv || (val == mv && (mx, my, mg) > (x, y, gi as u32))
                    }
                };
                if replace {
                    merged[r] = Some((val, x, y, gi as u32));
                }
            }
        }
    }

    let support = merged.len() as u32 - 1;
    let mut rho_hat = Vec::with_capacity(merged.len());
    let mut witnesses = Vec::with_capacity(merged.len());
    let mut best: Option<(u32, u32, u32, u32, u32)> = None;
    for (r, b) in merged.iter().enumerate() {
        if let Some((val, x, y, gi)) = *b {
            let wins = match best {
                None => true,
                Some((bv, ..)) => val > bv,
            };
            if wins {
                best = Some((val, x, y, gi, r as u32));
            }
        }
        match best {
            Some((val, x, y, gi, br)) => {
                rho_hat.push(val);
                witnesses.push(Some(PairWitness { r: br, x, y, gamma: gi, diam: val }));
            }
            None => {
                rho_hat.push(0);
                witnesses.push(None);
            }
        }
    }
    Ok(ContractionProfile { rho_hat, support, witnesses, subsampled: false })
}

/// Recomputes one pair from scratch: (d(x,gamma), d(x,y), diam of the
/// union of the two projections). Used to re-check reported witnesses.
pub fn reevaluate_pair(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    x: VertexId,
    y: VertexId,
) -> Result<(u32, u32, u32)> {
    check_path(g, gamma.vertices())?;
    let dx = g.bfs(x);
    let dy = g.bfs(y);
    let pos = |dist: &[u32]| -> (u32, u32, u32) {
        let best = gamma.vertices().iter().map(|v| dist[v.idx()]).min().unwrap();
        let mut lo = u32::MAX;
        let mut hi = 0;
        for (p, v) in gamma.vertices().iter().enumerate() {
            if dist[v.idx()] == best {
                lo = lo.min(p as u32);
                hi = hi.max(p as u32);
            }
        }
        (best, lo, hi)
    };
    let (dxg, xlo, xhi) = pos(&dx);
    let (_, ylo, yhi) = pos(&dy);
    let diam = xhi.max(yhi) - xlo.min(ylo);
    Ok((dxg, dx[y.idx()], diam))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum TrendVerdict {
    SublinearConsistent,
    LinearConsistent,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub verdict: TrendVerdict,
    pub window: u32,
    /// Least-squares slope of rho_hat(r)/r over the top window.
    pub slope: f64,
    pub top_mean_ratio: f64,
    pub bottom_mean_ratio: f64,
    /// Smallest c with rho_hat(r) >= r - c across the top window.
    pub linear_defect: u32,
}

/// Finite-scale trend call on rho_hat(r)/r. SUBLINEAR-CONSISTENT when the
/// top-window mean ratio is at most half the bottom-window mean;
/// LINEAR-CONSISTENT when rho_hat stays within 4 of r across the top
/// window; INCONCLUSIVE otherwise. Thresholds are artifact conventions,
/// reported verbatim.
pub fn sublinearity_trend(profile: &ContractionProfile, window: u32) -> Result<TrendReport> {
    if window == 0 {
        return Err(Error::input("trend window must be positive"));
    }
    if profile.support < 2 * window {
        return Err(Error::input(format!(
            "trend needs support >= {}, profile has {}",
            2 * window,
            profile.support
        )));
    }
    let ratio = |r: u32| profile.value(r) as f64 / r as f64;
    let bottom: Vec<u32> = (1..=window).collect();
    let top: Vec<u32> = (profile.support - window + 1..=profile.support).collect();
    let mean = |rs: &[u32]| rs.iter().map(|&r| ratio(r)).sum::<f64>() / rs.len() as f64;
    let bottom_mean = mean(&bottom);
    let top_mean = mean(&top);

    let xs: Vec<f64> = top.iter().map(|&r| r as f64).collect();
    let ys: Vec<f64> = top.iter().map(|&r| ratio(r)).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = if den == 0.0 { 0.0 } else { num / den };

    let linear_defect = top
        .iter()
        .map(|&r| r.saturating_sub(profile.value(r)))
        .max()
        .unwrap_or(0);

    let verdict = if top_mean <= 0.5 * bottom_mean {
        TrendVerdict::SublinearConsistent
    } else if linear_defect <= 4 {
        TrendVerdict::LinearConsistent
    } else {
        TrendVerdict::Inconclusive
    };
    Ok(TrendReport {
        verdict,
        window,
        slope,
        top_mean_ratio: top_mean,
        bottom_mean_ratio: bottom_mean,
        linear_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cayley_ball, CayleyBall, GroupModel, DEFAULT_VERTEX_BUDGET};

    fn all_vertices(b: &CayleyBall) -> Vec<VertexId> {
        (0..b.vertex_count() as u32).map(VertexId).collect()
    }

    /// Literal restatement of the definition: loop over all qualifying
    /// pairs, project both by BFS, bucket, prefix-max.
    fn brute_profile(g: &UnitGraph, gamma: &GeodesicPath, region: &[VertexId]) -> Vec<u32> {
        let rows: Vec<Vec<u32>> = (0..g.vertex_count())
            .map(|v| g.bfs(VertexId(v as u32)))
            .collect();
        let dg = |x: VertexId| -> u32 {
            gamma.vertices().iter().map(|v| rows[x.idx()][v.idx()]).min().unwrap()
        };
        let proj = |x: VertexId| -> (u32, u32) {
            let d = dg(x);
            let mut lo = u32::MAX;
            let mut hi = 0;
            for (p, v) in gamma.vertices().iter().enumerate() {
                if rows[x.idx()][v.idx()] == d {
                    lo = lo.min(p as u32);
                    hi = hi.max(p as u32);
                }
            }
            (lo, hi)
        };
        let support = region.iter().map(|&x| dg(x)).max().unwrap();
        let mut bucket = vec![0u32; support as usize + 1];
        for &x in region {
            let r = dg(x);
            let (xlo, xhi) = proj(x);
            for y in 0..g.vertex_count() as u32 {
                let y = VertexId(y);
                if rows[x.idx()][y.idx()] > r {
                    continue;
                }
                let (ylo, yhi) = proj(y);
                let diam = xhi.max(yhi) - xlo.min(ylo);
                bucket[r as usize] = bucket[r as usize].max(diam);
            }
        }
        let mut out = bucket;
        for i in 1..out.len() {
            out[i] = out[i].max(out[i - 1]);
        }
        out
    }

    #[test]
    fn tree_profile_is_zero() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 5, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball.vertex_of(&m.parse_word("a^-5").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^5").unwrap()).unwrap();
        let gamma = ball.graph().some_geodesic(u, v).unwrap();
        let p = contraction_profile(ball.graph(), &[gamma], &all_vertices(&ball)).unwrap();
        assert!(p.rho_hat.iter().all(|&v| v == 0), "{:?}", p.rho_hat);
        assert_eq!(p.support, 5);
        assert!(!p.subsampled);
    }

    #[test]
    fn grid_axis_profile_matches_brute_force_and_grows() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 8, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball.vertex_of(&m.parse_word("a^-8").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^8").unwrap()).unwrap();
        let gamma = ball.graph().some_geodesic(u, v).unwrap();
        let region = all_vertices(&ball);
        let p = contraction_profile(ball.graph(), &[gamma.clone()], &region).unwrap();
        let oracle = brute_profile(ball.graph(), &gamma, &region);
        assert_eq!(p.rho_hat, oracle);
        // Diagonal pairs drag projections linearly.
        for r in 2..=6 {
            assert!(p.value(r) >= r - 2, "rho({r}) = {}", p.value(r));
        }
        // Witnesses re-evaluate exactly and qualify.
        for w in p.witnesses.iter().flatten() {
            let (dxg, dxy, diam) =
                reevaluate_pair(ball.graph(), &gamma, VertexId(w.x), VertexId(w.y)).unwrap();
            assert_eq!(dxg, w.r);
            assert!(dxy <= dxg);
            assert_eq!(diam, w.diam);
        }
    }

    #[test]
    fn profile_monotone_under_region_growth() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 6, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball.vertex_of(&m.parse_word("a^-6").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^6").unwrap()).unwrap();
        let gamma = ball.graph().some_geodesic(u, v).unwrap();
        let inner: Vec<VertexId> = (0..ball.vertex_count() as u32)
            .map(VertexId)
            .filter(|&x| ball.depth_of(x) <= 4)
            .collect();
        let small = contraction_profile(ball.graph(), &[gamma.clone()], &inner).unwrap();
        let big =
            contraction_profile(ball.graph(), &[gamma], &all_vertices(&ball)).unwrap();
        for r in 0..=small.support {
            assert!(big.value(r) >= small.value(r), "r={r}");
        }
    }

    #[test]
    fn multi_gamma_takes_pointwise_sup() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 5, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let region = all_vertices(&ball);
        let mk = |from: &str, to: &str| {
            let u = ball.vertex_of(&m.parse_word(from).unwrap()).unwrap();
            let v = ball.vertex_of(&m.parse_word(to).unwrap()).unwrap();
            g.some_geodesic(u, v).unwrap()
        };
        let ga = mk("a^-5", "a^5");
        let gb = mk("b^-5", "b^5");
        let pa = contraction_profile(g, &[ga.clone()], &region).unwrap();
        let pb = contraction_profile(g, &[gb.clone()], &region).unwrap();
        let both = contraction_profile(g, &[ga, gb], &region).unwrap();
        for r in 0..=both.support {
            assert_eq!(both.value(r), pa.value(r).max(pb.value(r)), "r={r}");
        }
    }

    #[test]
    fn rejects_empty_inputs() {
        let m = GroupModel::free(1);
        let ball = cayley_ball(&m, 2, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let gamma = g.some_geodesic(VertexId(0), VertexId(1)).unwrap();
        assert!(contraction_profile(g, &[], &[VertexId(0)]).is_err());
        assert!(contraction_profile(g, &[gamma], &[]).is_err());
    }

    #[test]
    fn trend_zero_profile_is_sublinear() {
        let p = ContractionProfile::synthetic(vec![0; 13]).unwrap();
        let t = sublinearity_trend(&p, 4).unwrap();
        assert_eq!(t.verdict, TrendVerdict::SublinearConsistent);
    }

    #[test]
    fn trend_linear_profile_is_linear() {
        let vals: Vec<u32> = (0..=12).map(|r: u32| r.saturating_sub(1)).collect();
        let p = ContractionProfile::synthetic(vals).unwrap();
        let t = sublinearity_trend(&p, 4).unwrap();
        assert_eq!(t.verdict, TrendVerdict::LinearConsistent);
        assert_eq!(t.linear_defect, 1);
    }

    #[test]
    fn trend_sqrt_profile_is_sublinear() {
        let vals: Vec<u32> = (0..=36).map(|r| (r as f64).sqrt().ceil() as u32).collect();
        let p = ContractionProfile::synthetic(vals).unwrap();
        let t = sublinearity_trend(&p, 6).unwrap();
        assert_eq!(t.verdict, TrendVerdict::SublinearConsistent);
    }

    #[test]
    fn trend_needs_support() {
        let p = ContractionProfile::synthetic(vec![0; 5]).unwrap();
        assert!(sublinearity_trend(&p, 4).is_err());
    }
}
