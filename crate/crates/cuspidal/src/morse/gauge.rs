//! Excursion gauges: how far verified quasi-geodesics with endpoints on
//! a fixed geodesic stray from it, tabulated per constant pair.
//!
//! The probe produces evidence, not proofs: a sampled entry is a lower
//! bound on the true gauge, an exhaustive entry is exact only when the
//! enumeration saturated. Audits built on a gauge therefore carry the
//! saturation flag, and a failed audit on unsaturated evidence is not a
//! refutation.

use num_rational::Ratio;
use serde::Serialize;

use crate::delta;
use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId};
use crate::morse::projection::check_path;
use crate::morse::qg::{
    quasi_geodesic_families, verify_with, FamilyCensus, FamilyKind, VerifiedPath,
};

pub type Rational = Ratio<i64>;

const EXHAUSTIVE_APSP_CAP: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeMode {
    /// Depth-first enumeration of every unit-step path that satisfies the
    /// constant pair hereditarily, started from each vertex of gamma.
    /// `budget` caps node expansions; exceeding it leaves the entry
    /// unsaturated.
    Exhaustive { budget: u64 },
    /// Seeded random families (waypoint detours, leg concatenations),
    /// verified before use. Never saturates.
    Sampled { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeEntry {
    pub k: Rational,
    pub c: Rational,
    /// Max excursion from gamma over the verified paths seen.
    pub n_hat: u32,
    /// True when an exhaustive enumeration ran to completion.
    pub saturated: bool,
    /// Complete candidate paths checked against (k, c).
    pub paths_tested: u64,
    /// Candidates that passed verification.
    pub paths_verified: u64,
    /// DFS node expansions (exhaustive mode only).
    pub expansions: u64,
    /// A verified path achieving n_hat; empty when nothing verified.
    pub witness: Vec<u32>,
    pub census: FamilyCensus,
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseGaugeTable {
    pub gamma: Vec<u32>,
    pub entries: Vec<GaugeEntry>,
}

impl MorseGaugeTable {
    pub fn lookup(&self, k: Rational, c: Rational) -> Option<&GaugeEntry> {
        self.entries.iter().find(|e| e.k == k && e.c == c)
    }

    /// Exact entry if present, else the dominating entry (k' >= k and
    /// c' >= c) with the smallest gauge value. A dominating class
    /// contains the requested one, so its gauge is a sound stand-in.
    pub fn lookup_dominating(&self, k: Rational, c: Rational) -> Option<&GaugeEntry> {
        if let Some(e) = self.lookup(k, c) {
            return Some(e);
        }
        self.entries
            .iter()
            .filter(|e| e.k >= k && e.c >= c)
            .min_by_key(|e| (e.n_hat, e.k, e.c))
    }

    /// Gauge at (3, 0), the pair the slimness and neighbor checks key on.
    pub fn n30(&self) -> Option<u32> {
        self.lookup(Rational::from_integer(3), Rational::from_integer(0))
            .map(|e| e.n_hat)
    }
}

struct DfsProbe<'a, 'b> {
    g: &'a UnitGraph,
    dist: &'a [u16],
    n: usize,
    dist_gamma: &'a [u32],
    on_gamma: &'a [bool],
    // K = kp/kq, C = cr/cs with positive denominators; the hereditary
    // check runs in integers: (j-i)*kq*cs <= kp*(d*cs + cr).
    kp: i64,
    kq: i64,
    cr: i64,
    cs: i64,
    budget: u64,
    path: Vec<VertexId>,
    exc_stack: Vec<u32>,
    expansions: u64,
    tested: u64,
    best: u32,
    witness: Vec<u32>,
    exhausted: bool,
    on_complete: Option<&'b mut dyn FnMut(&[VertexId])>,
}

impl DfsProbe<'_, '_> {
    fn extension_ok(&self, v: VertexId) -> bool {
        let len = self.path.len() as i64; // index of v once pushed
        let row = v.idx() * self.n;
        for (i, &p) in self.path.iter().enumerate() {
            let d = self.dist[row + p.idx()] as i64;
            if (len - i as i64) * self.kq * self.cs > self.kp * (d * self.cs + self.cr) {
                return false;
            }
        }
        true
    }

    fn run(&mut self, start: VertexId) {
        self.path.push(start);
        self.exc_stack.push(self.dist_gamma[start.idx()]);
        self.step();
        self.path.pop();
        self.exc_stack.pop();
    }

    fn step(&mut self) {
        if self.exhausted {
            return;
        }
        let cur = *self.path.last().unwrap();
        for &nb in self.g.neighbors(cur) {
            if self.exhausted {
                return;
            }
            let v = VertexId(nb);
            if !self.extension_ok(v) {
                continue;
            }
            self.expansions += 1;
            if self.expansions > self.budget {
                self.exhausted = true;
                return;
            }
            let exc = (*self.exc_stack.last().unwrap()).max(self.dist_gamma[v.idx()]);
            self.exc_stack.push(exc);
            self.path.push(v);
            if self.on_gamma[v.idx()] {
                self.tested += 1;
                if exc > self.best {
                    self.best = exc;
                    self.witness = self.path.iter().map(|u| u.0).collect();
                }
                if let Some(cb) = self.on_complete.as_mut() {
                    cb(&self.path);
                }
            }
            self.step();
            self.path.pop();
            self.exc_stack.pop();
        }
    }
}

fn probe_exhaustive(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    dist: &[u16],
    dist_gamma: &[u32],
    k: Rational,
    c: Rational,
    budget: u64,
    extra: &[(Vec<VertexId>, FamilyKind)],
    on_complete: Option<&mut dyn FnMut(&[VertexId])>,
) -> Result<GaugeEntry> {
    let n = g.vertex_count();
    let mut on_gamma = vec![false; n];
    for &v in gamma.vertices() {
        on_gamma[v.idx()] = true;
    }
    // The i = 0 pair bounds every path's length by K(diam + C), so the
    // recursion terminates without an explicit cap.
    let mut probe = DfsProbe {
        g,
        dist,
        n,
        dist_gamma,
        on_gamma: &on_gamma,
        kp: *k.numer(),
        kq: *k.denom(),
        cr: *c.numer(),
        cs: *c.denom(),
        budget,
        path: Vec::new(),
        exc_stack: Vec::new(),
        expansions: 0,
        tested: 0,
        best: 0,
        witness: Vec::new(),
        exhausted: false,
        on_complete,
    };
    for &s in gamma.vertices() {
        if probe.exhausted {
            break;
        }
        probe.run(s);
    }

    let mut census = FamilyCensus::default();
    let mut verified = probe.tested;
    let mut n_hat = probe.best;
    let mut witness = std::mem::take(&mut probe.witness);
    let mut tested = probe.tested;
    for (path, kind) in extra {
        check_path(g, path)?;
        let out = verify_with(|u, v| dist[u.idx() * n + v.idx()] as u32, path, k, c);
        census.record(*kind, out.pass);
        tested += 1;
        if out.pass {
            verified += 1;
            let e = path.iter().map(|v| dist_gamma[v.idx()]).max().unwrap_or(0);
            if e > n_hat {
                n_hat = e;
                witness = path.iter().map(|v| v.0).collect();
            }
        }
    }

    Ok(GaugeEntry {
        k,
        c,
        n_hat,
        saturated: !probe.exhausted,
        paths_tested: tested,
        paths_verified: verified,
        expansions: probe.expansions,
        witness,
        census,
    })
}

fn probe_sampled(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    dist_gamma: &[u32],
    k: Rational,
    c: Rational,
    budget: u64,
    seed: u64,
    extra: &[(Vec<VertexId>, FamilyKind)],
) -> Result<GaugeEntry> {
    let (paths, census) = quasi_geodesic_families(g, gamma, k, c, budget, seed, extra)?;
    let tested: u64 = census.counts.values().map(|v| v.0).sum();
    let verified = paths.len() as u64;
    let mut n_hat = 0u32;
    let mut witness: Vec<u32> = Vec::new();
    for p in &paths {
        let e = p
            .vertices
            .iter()
            .map(|&v| dist_gamma[v as usize])
            .max()
            .unwrap_or(0);
        if e > n_hat || witness.is_empty() {
            n_hat = n_hat.max(e);
            if e >= n_hat {
                witness = p.vertices.clone();
            }
        }
    }
    Ok(GaugeEntry {
        k,
        c,
        n_hat,
        saturated: false,
        paths_tested: tested,
        paths_verified: verified,
        expansions: 0,
        witness,
        census,
    })
}

/// Tabulates the excursion gauge of `gamma` over a grid of constant
/// pairs. `extra` supplies caller-built candidate paths (power paths,
/// translated rays); they are verified per entry like everything else.
pub fn morse_gauge_probe(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    grid: &[(Rational, Rational)],
    mode: ProbeMode,
    extra: &[(Vec<VertexId>, FamilyKind)],
) -> Result<MorseGaugeTable> {
    if grid.is_empty() {
        return Err(Error::input("gauge probe needs at least one (K, C) pair"));
    }
    check_path(g, gamma.vertices())?;
    for (k, c) in grid {
        if *k < Rational::from_integer(1) || *c < Rational::from_integer(0) {
            return Err(Error::input("gauge grid needs K >= 1, C >= 0"));
        }
    }
    let dist_gamma = g.bfs_multi(gamma.vertices());
    let apsp = match mode {
        ProbeMode::Exhaustive { .. } => Some(g.apsp_matrix(EXHAUSTIVE_APSP_CAP)?),
        ProbeMode::Sampled { .. } => None,
    };
    let mut entries = Vec::with_capacity(grid.len());
    for (idx, &(k, c)) in grid.iter().enumerate() {
        let entry = match mode {
            ProbeMode::Exhaustive { budget } => probe_exhaustive(
                g,
                gamma,
                apsp.as_deref().expect("matrix built for exhaustive mode"),
                &dist_gamma,
                k,
                c,
                budget,
                extra,
                None,
            )?,
            ProbeMode::Sampled { budget, seed } => probe_sampled(
                g,
                gamma,
                &dist_gamma,
                k,
                c,
                budget,
                seed.wrapping_add(idx as u64),
                extra,
            )?,
        };
        entries.push(entry);
    }
    Ok(MorseGaugeTable {
        gamma: gamma.vertices().iter().map(|v| v.0).collect(),
        entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityAudit {
    pub lambda: Rational,
    pub epsilon: Rational,
    pub hausdorff: u32,
    /// Grid pair the gauge value was read from.
    pub entry_used: (Rational, Rational),
    pub n_hat_used: u32,
    /// 2 N(lambda, 2(lambda+epsilon)) + (lambda + epsilon).
    pub bound: Rational,
    /// 2 N(lambda, epsilon) + (lambda + epsilon), when the grid has the
    /// plain pair too.
    pub bound_plain_pair: Option<Rational>,
    pub pass: bool,
    pub saturated: bool,
    /// PASS, FAIL, or EVIDENCE-ONLY (failed against unsaturated gauge).
    pub verdict: String,
}

/// Audits one verified quasi-geodesic with gamma's endpoints against the
/// stability bound read from the gauge table.
pub fn verify_stability_bound(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    gauge: &MorseGaugeTable,
    beta: &VerifiedPath,
) -> Result<StabilityAudit> {
    let gv = gamma.vertices();
    if gauge.gamma.len() != gv.len() || gauge.gamma.iter().zip(gv).any(|(a, b)| *a != b.0) {
        return Err(Error::input("gauge table was probed on a different geodesic"));
    }
    let bv = beta.vertex_ids();
    check_path(g, &bv)?;
    let ends_match = (bv.first() == gv.first() && bv.last() == gv.last())
        || (bv.first() == gv.last() && bv.last() == gv.first());
    if !ends_match {
        return Err(Error::input("stability audit needs matching endpoints"));
    }
    let lambda = beta.k;
    let epsilon = beta.c;
    let slack = lambda + epsilon;
    let c_wide = Rational::from_integer(2) * slack;
    let entry = gauge.lookup_dominating(lambda, c_wide).ok_or_else(|| {
        Error::input("no gauge entry dominates (lambda, 2(lambda+epsilon))")
    })?;
    let hausdorff = g.hausdorff_distance(&bv, gv)?;
    let bound = Rational::from_integer(2 * entry.n_hat as i64) + slack;
    let bound_plain_pair = gauge
        .lookup(lambda, epsilon)
        .map(|e| Rational::from_integer(2 * e.n_hat as i64) + slack);
    let pass = Rational::from_integer(hausdorff as i64) <= bound;
    let verdict = if pass {
        "PASS"
    } else if entry.saturated {
        "FAIL"
    } else {
        "EVIDENCE-ONLY"
    };
    Ok(StabilityAudit {
        lambda,
        epsilon,
        hausdorff,
        entry_used: (entry.k, entry.c),
        n_hat_used: entry.n_hat,
        bound,
        bound_plain_pair,
        pass,
        saturated: entry.saturated,
        verdict: verdict.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlimPairAudit {
    pub slimness: u32,
    pub n_hat_30: u32,
    /// 4 N(3, 0).
    pub bound: u32,
    pub pass: bool,
    pub saturated: bool,
    pub verdict: String,
}

/// Checks the triangle on two geodesics out of a common basepoint
/// against 4 N(3,0): each side within that bound of the other two. The
/// closing side is the canonical geodesic between the far endpoints.
pub fn slim_check_morse_pair(
    g: &UnitGraph,
    p: VertexId,
    alpha1: &GeodesicPath,
    alpha2: &GeodesicPath,
    gauge: &MorseGaugeTable,
) -> Result<SlimPairAudit> {
    check_path(g, alpha1.vertices())?;
    check_path(g, alpha2.vertices())?;
    if alpha1.vertices().first() != Some(&p) || alpha2.vertices().first() != Some(&p) {
        return Err(Error::input("slim pair check needs both sides to start at p"));
    }
    let n30 = gauge
        .n30()
        .ok_or_else(|| Error::input("gauge table has no (3, 0) entry"))?;
    let e1 = *alpha1.vertices().last().unwrap();
    let e2 = *alpha2.vertices().last().unwrap();
    let (lo, hi) = if e1.0 <= e2.0 { (e1, e2) } else { (e2, e1) };
    let third = g.some_geodesic(lo, hi)?;
    let slimness = delta::slimness_of_sides(
        g,
        alpha1.vertices(),
        alpha2.vertices(),
        third.vertices(),
    );
    let bound = 4 * n30;
    let saturated = gauge
        .lookup(Rational::from_integer(3), Rational::from_integer(0))
        .map(|e| e.saturated)
        .unwrap_or(false);
    let pass = slimness <= bound;
    let verdict = if pass {
        "PASS"
    } else if saturated {
        "FAIL"
    } else {
        "EVIDENCE-ONLY"
    };
    Ok(SlimPairAudit {
        slimness,
        n_hat_30: n30,
        bound,
        pass,
        saturated,
        verdict: verdict.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub k: Rational,
    pub c: Rational,
    /// Gauge value at the widened pair (k, 2(k+c)).
    pub n_hat: u32,
    /// The widened-pair probe ran to completion.
    pub saturated: bool,
    /// The audited enumeration at (k, c) ran to completion.
    pub enumeration_complete: bool,
    pub paths_audited: u64,
    pub violations: u64,
    pub bound: Rational,
    pub worst_hausdorff: u32,
    /// Path realizing worst_hausdorff.
    pub worst_path: Vec<u32>,
}

/// Enumerates every (k, c)-verified path with both endpoints on gamma and
/// audits each against 2 N(k, 2(k+c)) + (k+c), measuring Hausdorff
/// distance to the gamma subsegment its endpoints span. The gauge at the
/// widened pair is probed first from the same enumeration machinery, so a
/// saturated sweep audits against an exact gauge.
pub fn stability_sweep(
    g: &UnitGraph,
    gamma: &GeodesicPath,
    k: Rational,
    c: Rational,
    budget: u64,
) -> Result<SweepReport> {
    if k < Rational::from_integer(1) || c < Rational::from_integer(0) {
        return Err(Error::input("stability sweep needs K >= 1, C >= 0"));
    }
    check_path(g, gamma.vertices())?;
    let dist = g.apsp_matrix(EXHAUSTIVE_APSP_CAP)?;
    let dist_gamma = g.bfs_multi(gamma.vertices());
    let slack = k + c;
    let c_wide = Rational::from_integer(2) * slack;
    let wide = probe_exhaustive(g, gamma, &dist, &dist_gamma, k, c_wide, budget, &[], None)?;
    let bound = Rational::from_integer(2 * wide.n_hat as i64) + slack;

    let n = g.vertex_count();
    let gv = gamma.vertices();
    let mut pos = vec![u32::MAX; n];
    for (i, &v) in gv.iter().enumerate() {
        pos[v.idx()] = i as u32;
    }
    let mut audited = 0u64;
    let mut violations = 0u64;
    let mut worst_h = 0u32;
    let mut worst_path: Vec<u32> = Vec::new();
    let mut audit = |path: &[VertexId]| {
        audited += 1;
        let a = pos[path.first().unwrap().idx()];
        let b = pos[path.last().unwrap().idx()];
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let seg = &gv[lo as usize..=hi as usize];
        let mut h = 0u32;
        for &p in path {
            let m = seg
                .iter()
                .map(|&s| dist[p.idx() * n + s.idx()] as u32)
                .min()
                .unwrap();
            h = h.max(m);
        }
        for &s in seg {
            let m = path
                .iter()
                .map(|&p| dist[s.idx() * n + p.idx()] as u32)
                .min()
                .unwrap();
            h = h.max(m);
        }
        if h > worst_h {
            worst_h = h;
            worst_path = path.iter().map(|v| v.0).collect();
        }
        if Rational::from_integer(h as i64) > bound {
            violations += 1;
        }
    };
    let narrow =
        probe_exhaustive(g, gamma, &dist, &dist_gamma, k, c, budget, &[], Some(&mut audit))?;
    Ok(SweepReport {
        k,
        c,
        n_hat: wide.n_hat,
        saturated: wide.saturated,
        enumeration_complete: narrow.saturated,
        paths_audited: audited,
        violations,
        bound,
        worst_hausdorff: worst_h,
        worst_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn tree_with_spine(radius: u32) -> (crate::groups::CayleyBall, GeodesicPath) {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, radius, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball
            .vertex_of(&m.parse_word(&format!("a^-{radius}")).unwrap())
            .unwrap();
        let v = ball
            .vertex_of(&m.parse_word(&format!("a^{radius}")).unwrap())
            .unwrap();
        let gamma = ball.graph().some_geodesic(u, v).unwrap();
        (ball, gamma)
    }

    #[test]
    fn tree_gauge_three_zero_is_zero_and_saturates() {
        let (ball, gamma) = tree_with_spine(4);
        let table = morse_gauge_probe(
            ball.graph(),
            &gamma,
            &[(q(3), q(0))],
            ProbeMode::Exhaustive { budget: 10_000_000 },
            &[],
        )
        .unwrap();
        let e = &table.entries[0];
        assert!(e.saturated);
        assert_eq!(e.n_hat, 0);
        assert!(e.paths_verified > 0);
        assert_eq!(table.n30(), Some(0));
    }

    #[test]
    fn tree_gauge_three_one_sees_unit_spikes() {
        // A detour off the spine must revisit its exit vertex, so the
        // pair constraint 2m <= 3(0+1) pins the excursion to exactly 1.
        let (ball, gamma) = tree_with_spine(3);
        let table = morse_gauge_probe(
            ball.graph(),
            &gamma,
            &[(q(3), q(1))],
            ProbeMode::Exhaustive { budget: 50_000_000 },
            &[],
        )
        .unwrap();
        let e = &table.entries[0];
        assert!(e.saturated, "expansions {}", e.expansions);
        assert_eq!(e.n_hat, 1);
        assert!(!e.witness.is_empty());
    }

    #[test]
    fn tiny_budget_reports_unsaturated() {
        let (ball, gamma) = tree_with_spine(4);
        let table = morse_gauge_probe(
            ball.graph(),
            &gamma,
            &[(q(3), q(1))],
            ProbeMode::Exhaustive { budget: 50 },
            &[],
        )
        .unwrap();
        assert!(!table.entries[0].saturated);
    }

    #[test]
    fn sampled_probe_is_deterministic() {
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 6, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball.vertex_of(&m.parse_word("a^-6").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^6").unwrap()).unwrap();
        let gamma = ball.graph().some_geodesic(u, v).unwrap();
        let run = || {
            morse_gauge_probe(
                ball.graph(),
                &gamma,
                &[(q(2), q(2)), (q(3), q(0))],
                ProbeMode::Sampled { budget: 200, seed: 11 },
                &[],
            )
            .unwrap()
        };
        let t1 = run();
        let t2 = run();
        for (a, b) in t1.entries.iter().zip(&t2.entries) {
            assert_eq!(a.n_hat, b.n_hat);
            assert_eq!(a.witness, b.witness);
            assert_eq!(a.paths_verified, b.paths_verified);
        }
        assert!(t1.entries[0].paths_verified > 0);
    }

    #[test]
    fn stability_audit_passes_on_tree_detour() {
        let (ball, gamma) = tree_with_spine(3);
        let g = ball.graph();
        let table = morse_gauge_probe(
            g,
            &gamma,
            &[(q(1), q(2)), (q(3), q(0))],
            ProbeMode::Exhaustive { budget: 50_000_000 },
            &[],
        )
        .unwrap();
        assert!(table.entries.iter().all(|e| e.saturated));

        // beta: the spine itself, a (1, 0)-quasi-geodesic (so epsilon' = 2).
        let beta = VerifiedPath {
            vertices: gamma.vertices().iter().map(|v| v.0).collect(),
            k: q(1),
            c: q(0),
            family: crate::morse::qg::FamilyKind::Supplied,
        };
        let audit = verify_stability_bound(g, &gamma, &table, &beta).unwrap();
        assert!(audit.pass);
        assert_eq!(audit.verdict, "PASS");
        assert_eq!(audit.entry_used, (q(1), q(2)));
        assert_eq!(audit.hausdorff, 0);
        // N(1,2) = 1 on the tree: single off-spine spikes qualify.
        assert_eq!(audit.n_hat_used, 1);
    }

    #[test]
    fn stability_audit_needs_a_dominating_entry() {
        let (ball, gamma) = tree_with_spine(3);
        let g = ball.graph();
        let table = morse_gauge_probe(
            g,
            &gamma,
            &[(q(3), q(0))],
            ProbeMode::Exhaustive { budget: 1_000_000 },
            &[],
        )
        .unwrap();
        let beta = VerifiedPath {
            vertices: gamma.vertices().iter().map(|v| v.0).collect(),
            k: q(2),
            c: q(0),
            family: crate::morse::qg::FamilyKind::Supplied,
        };
        // Needs (2, 4); (3, 0) has smaller c, so nothing dominates.
        let err = verify_stability_bound(g, &gamma, &table, &beta).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn slim_pair_check_on_tree_is_tight() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 3, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let o = ball.origin();
        let a3 = ball.vertex_of(&m.parse_word("a^3").unwrap()).unwrap();
        let b3 = ball.vertex_of(&m.parse_word("b^3").unwrap()).unwrap();
        let gamma = g.some_geodesic(o, a3).unwrap();
        let table = morse_gauge_probe(
            g,
            &gamma,
            &[(q(3), q(0))],
            ProbeMode::Exhaustive { budget: 10_000_000 },
            &[],
        )
        .unwrap();
        let alpha1 = g.some_geodesic(o, a3).unwrap();
        let alpha2 = g.some_geodesic(o, b3).unwrap();
        let audit = slim_check_morse_pair(g, o, &alpha1, &alpha2, &table).unwrap();
        assert_eq!(audit.slimness, 0);
        assert_eq!(audit.bound, 0);
        assert!(audit.pass);
        assert!(audit.saturated);
    }

    #[test]
    fn staircase_as_extra_candidate_raises_the_gauge() {
        // Staircase over the a-axis: up to (3,3), down to (6,0). Every
        // two steps gain one a-coordinate, so d(p_i, p_j) >= (j-i)/2 - 1/2
        // and the path verifies at (2, 2). Excursion off the axis is 3.
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 8, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let o = ball.origin();
        let end = ball.vertex_of(&m.parse_word("a^6").unwrap()).unwrap();
        let gamma = g.some_geodesic(o, end).unwrap();
        let moves = ["a", "b", "a", "b", "a", "b", "a", "b^-1", "a", "b^-1", "a", "b^-1"];
        let mut w = crate::groups::Word::identity();
        let mut detour = vec![o];
        for mv in moves {
            w = m.multiply(&w, &m.parse_word(mv).unwrap());
            detour.push(ball.vertex_of(&w).unwrap());
        }
        let table = morse_gauge_probe(
            g,
            &gamma,
            &[(q(2), q(2))],
            ProbeMode::Sampled { budget: 10, seed: 5 },
            &[(detour, FamilyKind::Supplied)],
        )
        .unwrap();
        let e = &table.entries[0];
        assert!(e.n_hat >= 3, "n_hat {}", e.n_hat);
        assert_eq!(e.census.counts["supplied"], (1, 1));
    }

    #[test]
    fn sweep_over_tree_geodesics_audits_every_subsegment() {
        let m = GroupModel::free(2);
        let ball = cayley_ball(&m, 3, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let u = ball.vertex_of(&m.parse_word("a^-3").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^3").unwrap()).unwrap();
        let gamma = g.some_geodesic(u, v).unwrap();
        let report = stability_sweep(g, &gamma, q(1), q(0), 50_000_000).unwrap();
        // Strict geodesics between gamma vertices in a tree are exactly
        // the ordered subsegments: 7 * 6 of them, all at Hausdorff 0.
        assert_eq!(report.paths_audited, 42);
        assert_eq!(report.violations, 0);
        assert_eq!(report.worst_hausdorff, 0);
        assert!(report.saturated && report.enumeration_complete);
        // Widened pair is (1, 2); unit spikes push its gauge to 1.
        assert_eq!(report.n_hat, 1);
        assert_eq!(report.bound, q(3));
    }

    #[test]
    fn sweep_over_grid_geodesics_sees_bulges_within_bound() {
        // Diagonal gamma: 70 staircases share its endpoints, so audited
        // geodesics genuinely leave gamma. Axis-aligned pairs would not:
        // grid geodesics between same-row points stay in the row.
        let m = GroupModel::free_abelian(2);
        let ball = cayley_ball(&m, 4, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let u = ball.vertex_of(&m.parse_word("a^-2 b^-2").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a^2 b^2").unwrap()).unwrap();
        let gamma = g.some_geodesic(u, v).unwrap();
        let report = stability_sweep(g, &gamma, q(1), q(0), 50_000_000).unwrap();
        assert!(report.saturated && report.enumeration_complete);
        assert!(report.worst_hausdorff >= 1);
        assert!(report.paths_audited > 70);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn sweep_rejects_bad_constants() {
        let m = GroupModel::free(1);
        let ball = cayley_ball(&m, 2, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let g = ball.graph();
        let u = ball.vertex_of(&m.parse_word("a^-1").unwrap()).unwrap();
        let v = ball.vertex_of(&m.parse_word("a").unwrap()).unwrap();
        let gamma = g.some_geodesic(u, v).unwrap();
        assert!(stability_sweep(g, &gamma, Rational::new(1, 2), q(0), 100).is_err());
        assert!(stability_sweep(g, &gamma, q(1), q(-1), 100).is_err());
    }
}
