//! Experiment orchestrator. Builds every configured ball, certifies it,
//! runs the selected analyses in config order, and assembles a report
//! that is byte-identical across runs apart from the `timings` map.
//!
//! Stage failures (a build that blows its budget, an analysis that
//! rejects its inputs) do not abort the run: they are recorded as FAILED
//! stages and the remaining work continues, so a partial report always
//! lands on disk.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::config::{
    parse_rational, AnalysisSelection, DeltaModeSel, ExperimentConfig, GroupSource,
    SyntheticProfile,
};
use crate::cusped::{build_cusped_ball, CuspedBall};
use crate::delta::{
    four_point_delta, plateau_audit, slim_triangle_delta, DeltaMode, DeltaReport,
    GeodesicChooser, PlateauAudit,
};
use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId, UNREACHED};
use crate::groups::{cayley_ball, GroupSpecFile, Word};
use crate::horoball::{build_horoball, HoroVertex};
use crate::morse::{
    contracting_directions, contraction_profile, group_weak_hull, hull_coverage_audit, k_of,
    morse_gauge_probe, power_path_distortion, slim_check_morse_pair, stability_sweep,
    sublinearity_trend, vertical_ray_contraction_audit, weak_hull, ContractionProfile,
    ProbeMode, TrendReport,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildRecord {
    pub radius: u32,
    pub depth: u32,
    pub ball_vertices: usize,
    pub cusped_vertices: usize,
    pub cusped_edges: usize,
    pub patches: usize,
    pub certified_radius: u32,
    pub certified_vertices: usize,
    /// The certified radius fell short of the requested one.
    pub truncated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisRecord {
    /// "{index:02}-{kind}", stable across runs.
    pub name: String,
    pub kind: &'static str,
    /// OK or FAILED.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub group_display: String,
    pub builds: Vec<BuildRecord>,
    pub analyses: Vec<AnalysisRecord>,
    /// Names of stages that FAILED, in execution order.
    pub failed_stages: Vec<String>,
    /// Wall-clock seconds per stage. The only non-reproducible field.
    pub timings: BTreeMap<String, f64>,
}

impl AnalysisReport {
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn has_failures(&self) -> bool {
        !self.failed_stages.is_empty()
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn load_spec(source: &GroupSource) -> Result<GroupSpecFile> {
    match source {
        GroupSource::Inline(spec) => Ok(spec.clone()),
        GroupSource::Path(p) => GroupSpecFile::parse(&std::fs::read_to_string(p)?),
    }
}

/// Farthest vertex from the distance row, smallest id on ties.
fn far_vertex(dist: &[u32]) -> VertexId {
    let mut best = 0usize;
    let mut best_d = 0u32;
    for (i, &d) in dist.iter().enumerate() {
        if d != UNREACHED && d > best_d {
            best = i;
            best_d = d;
        }
    }
    VertexId(best as u32)
}

/// Canonical diameter geodesic: farthest vertex from the origin, then
/// farthest from that, ties to the smallest id.
fn diameter_geodesic(g: &UnitGraph, origin: VertexId) -> Result<GeodesicPath> {
    let u = far_vertex(&g.bfs(origin));
    let v = far_vertex(&g.bfs(u));
    g.some_geodesic(u, v)
}

/// The two-sided prefix path of w through the origin: w^-1, ..., e, ..., w
/// stepped letter by letter. Errors unless it is geodesic in the graph.
pub fn axis_path(cb: &CuspedBall, w: &Word) -> Result<GeodesicPath> {
    let ball = cb.ball();
    let model = ball.model();
    let nf = model.normal_form(w);
    if nf.is_empty() {
        return Err(Error::input("axis direction must be non-trivial"));
    }
    let prefix_vertices = |w: &Word| -> Result<Vec<VertexId>> {
        let mut cur = Word::identity();
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            cur = model.multiply(&cur, &Word::single(l));
            let v = ball
                .vertex_of(&cur)
                .ok_or_else(|| Error::input("axis leaves the ball; shrink the direction"))?;
            out.push(v);
        }
        Ok(out)
    };
    let pos = prefix_vertices(&nf)?;
    let neg = prefix_vertices(&model.inverse(&nf))?;
    let mut vs: Vec<VertexId> = neg.into_iter().rev().collect();
    vs.push(cb.origin());
    vs.extend(pos);
    GeodesicPath::new(cb.graph(), vs)
}

fn delta_mode(sel: &DeltaModeSel, seed: Option<u64>) -> DeltaMode {
    match sel {
        DeltaModeSel::Exhaustive => DeltaMode::Exhaustive,
        DeltaModeSel::Sampled { budget } => {
            DeltaMode::Sampled { budget: *budget, seed: seed.expect("seed checked by validate") }
        }
    }
}

#[derive(Serialize)]
struct DeltaSeriesPayload {
    per_radius: Vec<RadiusDelta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plateau: Option<PlateauAudit>,
}

#[derive(Serialize)]
struct RadiusDelta {
    radius: u32,
    depth: u32,
    vertices: usize,
    report: DeltaReport,
}

#[derive(Serialize)]
struct AxisProfilePayload {
    direction: String,
    axis_len: usize,
    region: String,
    anchor_count: usize,
    profile: ContractionProfile,
    trend: TrendReport,
}

#[derive(Serialize)]
struct RandomProfilesPayload {
    count: u32,
    seed: u64,
    region: String,
    /// Largest final profile value over all sampled geodesics.
    max_rho_hat: u32,
    all_zero: bool,
    /// Endpoints realizing max_rho_hat.
    worst_pair: (u32, u32),
}

#[derive(Serialize)]
struct RepProfile {
    rep: String,
    patch: usize,
    profile: ContractionProfile,
    trend: TrendReport,
}

#[derive(Serialize)]
struct VerticalProfilesPayload {
    region: String,
    depth: u32,
    per_rep: Vec<RepProfile>,
}

#[derive(Serialize)]
struct BoundaryProxyPayload {
    region: String,
    candidate_count: usize,
    contracting_count: usize,
    coverage: crate::morse::CoverageAudit,
}

#[derive(Serialize)]
struct HullStagePayload {
    stage: u32,
    directions: Vec<String>,
    members: usize,
    edges: usize,
    slim_delta: u32,
}

#[derive(Serialize)]
struct HullFamilyPayload {
    name: String,
    stages: Vec<HullStagePayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plateau: Option<PlateauAudit>,
}

#[derive(Serialize)]
struct RadiusGauge {
    radius: u32,
    depth: u32,
    gamma_len: usize,
    table: crate::morse::MorseGaugeTable,
}

#[derive(Serialize)]
struct GaugePayload {
    per_radius: Vec<RadiusGauge>,
}

#[derive(Serialize)]
struct RadiusSweep {
    radius: u32,
    depth: u32,
    gamma_len: usize,
    sweeps: Vec<crate::morse::SweepReport>,
}

#[derive(Serialize)]
struct SweepPayload {
    per_radius: Vec<RadiusSweep>,
    total_audited: u64,
    total_violations: u64,
    /// Audited paths whose widened gauge probe ran to completion.
    saturated_audited: u64,
}

#[derive(Serialize)]
struct RadiusSlimPairSweep {
    radius: u32,
    depth: u32,
    gamma_len: usize,
    n_hat_30: u32,
    gauge_saturated: bool,
    bound: u32,
    audited: u64,
    violations: u64,
    max_slimness: u32,
    truncated: bool,
}

#[derive(Serialize)]
struct SlimPairSweepPayload {
    per_radius: Vec<RadiusSlimPairSweep>,
    total_audited: u64,
    total_violations: u64,
}

#[derive(Serialize)]
struct HoroballExactnessPayload {
    base_vertices: usize,
    depth: u32,
    vertices: usize,
    edges: usize,
    /// Edges present in exactly one of {built graph, level rule}.
    discrepancies: u64,
}

#[derive(Serialize)]
struct FqCasePayload {
    profile: SyntheticProfile,
    support: u32,
    params: crate::morse::FqParams,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    builds: &'a [((u32, u32), CuspedBall)],
}

impl<'a> Ctx<'a> {
    fn primary(&self) -> &CuspedBall {
        &self.builds.last().expect("at least one build").1
    }

    /// Deepest build at each radius, ascending.
    fn per_radius(&self) -> Vec<&((u32, u32), CuspedBall)> {
        let deepest = self.builds.iter().map(|b| b.0 .1).max().unwrap();
        self.builds.iter().filter(|b| b.0 .1 == deepest).collect()
    }

    fn patch_by_rep(&self, cb: &CuspedBall, rep: &str) -> Result<usize> {
        let model = cb.ball().model();
        let nf = model.normal_form(&model.parse_word(rep)?);
        cb.patches()
            .iter()
            .position(|p| p.rep == nf)
            .ok_or_else(|| Error::input(format!("no horoball patch with representative {rep:?}")))
    }
}

fn run_analysis(ctx: &Ctx, sel: &AnalysisSelection) -> Result<Value> {
    let cfg = ctx.cfg;
    let budgets = &cfg.budgets;
    match sel {
        AnalysisSelection::FourPointDelta { mode } => {
            let mut per_radius = Vec::new();
            let mut series = Vec::new();
            for ((r, d), cb) in ctx.per_radius() {
                let g = cb.graph();
                let report = four_point_delta(
                    g,
                    delta_mode(mode, cfg.seed),
                    budgets.exhaustive_cap,
                    budgets.delta_pool,
                )?;
                series.push((*r as u64, report.delta_four_point.unwrap_or(0.0)));
                per_radius.push(RadiusDelta {
                    radius: *r,
                    depth: *d,
                    vertices: g.vertex_count(),
                    report,
                });
            }
            let plateau =
                if series.len() >= 3 { Some(plateau_audit(&series)?) } else { None };
            to_value(&DeltaSeriesPayload { per_radius, plateau })
        }
        AnalysisSelection::SlimDelta { mode } => {
            let mut per_radius = Vec::new();
            let mut series = Vec::new();
            for ((r, d), cb) in ctx.per_radius() {
                let g = cb.graph();
                let report = slim_triangle_delta(
                    g,
                    GeodesicChooser::Canonical,
                    delta_mode(mode, cfg.seed),
                    budgets.exhaustive_cap,
                )?;
                series.push((*r as u64, report.delta_slim.unwrap_or(0) as f64));
                per_radius.push(RadiusDelta {
                    radius: *r,
                    depth: *d,
                    vertices: g.vertex_count(),
                    report,
                });
            }
            let plateau =
                if series.len() >= 3 { Some(plateau_audit(&series)?) } else { None };
            to_value(&DeltaSeriesPayload { per_radius, plateau })
        }
        AnalysisSelection::AxisProfile { direction, anchor_radius, window } => {
            let cb = ctx.primary();
            let model = cb.ball().model();
            let axis = axis_path(cb, &model.parse_word(direction)?)?;
            let anchors: Vec<VertexId> = (0..cb.graph().vertex_count())
                .map(|i| VertexId(i as u32))
                .filter(|&v| cb.distance_from_origin(v) <= *anchor_radius)
                .collect();
            let profile = contraction_profile(cb.graph(), &[axis.clone()], &anchors)?;
            let trend = sublinearity_trend(&profile, *window)?;
            to_value(&AxisProfilePayload {
                direction: direction.clone(),
                axis_len: axis.len(),
                region: format!("ball<={anchor_radius}"),
                anchor_count: anchors.len(),
                profile,
                trend,
            })
        }
        AnalysisSelection::RandomGeodesicProfiles { count } => {
            let cb = ctx.primary();
            let g = cb.graph();
            let n = g.vertex_count();
            if n < 2 {
                return Err(Error::input("graph too small for random geodesics"));
            }
            let seed = cfg.seed.expect("seed checked by validate");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let region: Vec<VertexId> = (0..n).map(|i| VertexId(i as u32)).collect();
            let mut max_rho = 0u32;
            let mut worst = (0u32, 0u32);
            let mut all_zero = true;
            let mut done = 0u32;
            while done < *count {
                let u = VertexId(rng.gen_range(0..n as u32));
                let v = VertexId(rng.gen_range(0..n as u32));
                if u == v {
                    continue;
                }
                let gamma = g.some_geodesic(u, v)?;
                let profile = contraction_profile(g, &[gamma], &region)?;
                let last = profile.value(profile.support);
                if last > 0 {
                    all_zero = false;
                }
                if last > max_rho {
                    max_rho = last;
                    worst = (u.0, v.0);
                }
                done += 1;
            }
            to_value(&RandomProfilesPayload {
                count: *count,
                seed,
                region: "all".into(),
                max_rho_hat: max_rho,
                all_zero,
                worst_pair: worst,
            })
        }
        AnalysisSelection::VerticalProfiles { reps, window } => {
            let cb = ctx.primary();
            let region = cb.certified_vertices();
            if region.is_empty() {
                return Err(Error::input("certified region is empty; grow the radius"));
            }
            let mut per_rep = Vec::new();
            for rep in reps {
                let pi = ctx.patch_by_rep(cb, rep)?;
                let p = &cb.patches()[pi];
                let rep_v = cb
                    .ball()
                    .vertex_of(&p.rep)
                    .ok_or_else(|| Error::input("patch representative missing from ball"))?;
                let base_idx = p
                    .level0
                    .iter()
                    .position(|&v| v == rep_v)
                    .ok_or_else(|| Error::input("patch representative missing from trace"))?;
                let ray = cb.vertical_ray(pi, base_idx);
                let profile = contraction_profile(cb.graph(), &[ray], &region)?;
                let trend = sublinearity_trend(&profile, *window)?;
                per_rep.push(RepProfile { rep: rep.clone(), patch: pi, profile, trend });
            }
            to_value(&VerticalProfilesPayload {
                region: "certified".into(),
                depth: cb.depth(),
                per_rep,
            })
        }
        AnalysisSelection::VerticalAudit { reps, depth_used } => {
            let cb = ctx.primary();
            let mut idxs = Vec::new();
            for rep in reps {
                idxs.push(ctx.patch_by_rep(cb, rep)?);
            }
            let audit = vertical_ray_contraction_audit(cb, &idxs, *depth_used)?;
            to_value(&audit)
        }
        AnalysisSelection::Distortion { word, n_max } => {
            let cb = ctx.primary();
            let w = cb.ball().model().parse_word(word)?;
            let series = power_path_distortion(cb, &w, *n_max)?;
            to_value(&series)
        }
        AnalysisSelection::BoundaryProxy { c, margin } => {
            let cb = ctx.primary();
            let g = cb.graph();
            let certified = cb.certified_vertices();
            if certified.is_empty() {
                return Err(Error::input("certified region is empty; grow the radius"));
            }
            let cr = cb.certified_radius();
            let candidates: Vec<VertexId> = certified
                .iter()
                .copied()
                .filter(|&v| cb.distance_from_origin(v) == cr)
                .collect();
            let dirs = contracting_directions(
                g,
                cb.origin(),
                &candidates,
                *c,
                budgets.geo_cap,
                &certified,
            )?;
            let hull = if dirs.len() >= 2 {
                Some(weak_hull(g, cb.origin(), &dirs, budgets.pair_cap)?)
            } else {
                None
            };
            let coverage = hull_coverage_audit(cb, hull.as_ref(), *margin);
            to_value(&BoundaryProxyPayload {
                region: "certified".into(),
                candidate_count: candidates.len(),
                contracting_count: dirs.len(),
                coverage,
            })
        }
        AnalysisSelection::GroupHullDeltas { families } => {
            let cb = ctx.primary();
            let model = cb.ball().model();
            let mut out = Vec::new();
            for fam in families {
                let mut stages = Vec::new();
                let mut series = Vec::new();
                for (i, stage) in fam.stages.iter().enumerate() {
                    let mut dirs = Vec::new();
                    for s in stage {
                        dirs.push(model.parse_word(s)?);
                    }
                    let hull = group_weak_hull(model, &dirs, budgets.interval_cap)?;
                    let report = slim_triangle_delta(
                        &hull.graph,
                        GeodesicChooser::Canonical,
                        DeltaMode::Exhaustive,
                        budgets.exhaustive_cap,
                    )?;
                    let delta = report.delta_slim.unwrap_or(0);
                    series.push((i as u64 + 1, delta as f64));
                    stages.push(HullStagePayload {
                        stage: i as u32 + 1,
                        directions: stage.clone(),
                        members: hull.members.len(),
                        edges: hull.graph.edge_count(),
                        slim_delta: delta,
                    });
                }
                let plateau =
                    if series.len() >= 3 { Some(plateau_audit(&series)?) } else { None };
                out.push(HullFamilyPayload { name: fam.name.clone(), stages, plateau });
            }
            to_value(&out)
        }
        AnalysisSelection::GaugeProbe { grid, budget } => {
            let mut pairs = Vec::new();
            for p in grid {
                pairs.push(p.parse()?);
            }
            let mut per_radius = Vec::new();
            for ((r, d), cb) in ctx.per_radius() {
                let g = cb.graph();
                let gamma = diameter_geodesic(g, cb.origin())?;
                let table = morse_gauge_probe(
                    g,
                    &gamma,
                    &pairs,
                    ProbeMode::Exhaustive { budget: *budget },
                    &[],
                )?;
                per_radius.push(RadiusGauge {
                    radius: *r,
                    depth: *d,
                    gamma_len: gamma.len(),
                    table,
                });
            }
            to_value(&GaugePayload { per_radius })
        }
        AnalysisSelection::StabilitySweep { pairs, budget } => {
            let mut grid = Vec::new();
            for p in pairs {
                grid.push(p.parse()?);
            }
            let mut per_radius = Vec::new();
            let mut total_audited = 0u64;
            let mut total_violations = 0u64;
            let mut saturated_audited = 0u64;
            for ((r, d), cb) in ctx.per_radius() {
                let g = cb.graph();
                let gamma = diameter_geodesic(g, cb.origin())?;
                let mut sweeps = Vec::new();
                for &(k, c) in &grid {
                    let sweep = stability_sweep(g, &gamma, k, c, *budget)?;
                    total_audited += sweep.paths_audited;
                    total_violations += sweep.violations;
                    if sweep.saturated && sweep.enumeration_complete {
                        saturated_audited += sweep.paths_audited;
                    }
                    sweeps.push(sweep);
                }
                per_radius.push(RadiusSweep {
                    radius: *r,
                    depth: *d,
                    gamma_len: gamma.len(),
                    sweeps,
                });
            }
            to_value(&SweepPayload {
                per_radius,
                total_audited,
                total_violations,
                saturated_audited,
            })
        }
        AnalysisSelection::SlimPairSweep { probe_budget, pair_budget } => {
            let three = parse_rational("3")?;
            let zero = parse_rational("0")?;
            let mut per_radius = Vec::new();
            let mut total_audited = 0u64;
            let mut total_violations = 0u64;
            for ((rad, dep), cb) in ctx.per_radius() {
                let g = cb.graph();
                let o = cb.origin();
                let gamma = diameter_geodesic(g, o)?;
                let table = morse_gauge_probe(
                    g,
                    &gamma,
                    &[(three, zero)],
                    ProbeMode::Exhaustive { budget: *probe_budget },
                    &[],
                )?;
                let entry = &table.entries[0];
                let n = g.vertex_count() as u32;
                let mut audited = 0u64;
                let mut violations = 0u64;
                let mut max_slim = 0u32;
                let mut bound = 0u32;
                let mut truncated = false;
                'outer: for q in 0..n {
                    for r in (q + 1)..n {
                        if audited >= *pair_budget {
                            truncated = true;
                            break 'outer;
                        }
                        let a1 = g.some_geodesic(o, VertexId(q))?;
                        let a2 = g.some_geodesic(o, VertexId(r))?;
                        let audit = slim_check_morse_pair(g, o, &a1, &a2, &table)?;
                        audited += 1;
                        max_slim = max_slim.max(audit.slimness);
                        bound = audit.bound;
                        if !audit.pass {
                            violations += 1;
                        }
                    }
                }
                total_audited += audited;
                total_violations += violations;
                per_radius.push(RadiusSlimPairSweep {
                    radius: *rad,
                    depth: *dep,
                    gamma_len: gamma.len(),
                    n_hat_30: entry.n_hat,
                    gauge_saturated: entry.saturated,
                    bound,
                    audited,
                    violations,
                    max_slimness: max_slim,
                    truncated,
                });
            }
            to_value(&SlimPairSweepPayload {
                per_radius,
                total_audited,
                total_violations,
            })
        }
        AnalysisSelection::HoroballExactness { depth } => {
            let cb = ctx.primary();
            let base = cb.ball().graph();
            horoball_exactness(base, *depth, budgets.vertex_budget)
        }
        AnalysisSelection::FqConstants { cases } => {
            let mut out = Vec::new();
            for case in cases {
                let values: Vec<u32> = match case.profile {
                    SyntheticProfile::Zero => vec![0; case.support as usize + 1],
                    SyntheticProfile::CeilSqrt => {
                        (0..=case.support).map(|r| (r as f64).sqrt().ceil() as u32).collect()
                    }
                };
                let profile = ContractionProfile::synthetic(values)?;
                let l = parse_rational(&case.l)?;
                let a = parse_rational(&case.a)?;
                let params = k_of(&profile, l, a)?;
                out.push(FqCasePayload {
                    profile: case.profile.clone(),
                    support: case.support,
                    params,
                });
            }
            to_value(&out)
        }
    }
}

/// Independent rebuild of the horoball edge set straight from the level
/// rule: vertical edges between consecutive levels, and a level-l edge
/// between distinct base vertices at base distance <= 2^l.
fn horoball_exactness(base: &UnitGraph, depth: u32, budget: u64) -> Result<Value> {
    let hb = build_horoball(base, depth, budget)?;
    let g = hb.graph();
    let nb = base.vertex_count();
    let mut expected: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
    let rows: Vec<Vec<u32>> = (0..nb).map(|i| base.bfs(VertexId(i as u32))).collect();
    let key = |a: VertexId, b: VertexId| (a.0.min(b.0), a.0.max(b.0));
    for l in 0..=depth {
        let reach = 1u64 << l.min(63);
        for x in 0..nb {
            let vx = hb.vertex_id(HoroVertex::new(VertexId(x as u32), l))?;
            if l < depth {
                let up = hb.vertex_id(HoroVertex::new(VertexId(x as u32), l + 1))?;
                expected.insert(key(vx, up));
            }
            for y in (x + 1)..nb {
                let d = rows[x][y];
                if d != UNREACHED && d > 0 && (d as u64) <= reach {
                    let vy = hb.vertex_id(HoroVertex::new(VertexId(y as u32), l))?;
                    expected.insert(key(vx, vy));
                }
            }
        }
    }
    let mut actual: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
    for (u, v) in g.edges() {
        actual.insert((u.min(v), u.max(v)));
    }
    let discrepancies = expected.symmetric_difference(&actual).count() as u64;
    to_value(&HoroballExactnessPayload {
        base_vertices: nb,
        depth,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        discrepancies,
    })
}

/// Runs the whole experiment. Stage failures are captured in the report;
/// an Err return means the config or group source itself was unusable.
pub fn run(config: &ExperimentConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let spec = load_spec(&config.group)?;
    let (model, subs) = spec.build()?;
    let group_display = {
        let gens = model.generator_names().join(", ");
        let mut s = format!("generators: {gens}");
        if !subs.is_empty() {
            let names: Vec<String> = subs
                .iter()
                .map(|sg| {
                    let gens: Vec<String> =
                        sg.generators.iter().map(|w| model.display_word(w)).collect();
                    format!("{} = <{}>", sg.name, gens.join(", "))
                })
                .collect();
            s.push_str(&format!("; subgroups: {}", names.join(", ")));
        }
        s
    };

    let effective_depths: Vec<u32> = if subs.is_empty() {
        vec![0]
    } else if config.depths.is_empty() {
        return Err(Error::input("group has subgroups; config needs at least one depth"));
    } else {
        config.depths.clone()
    };

    let mut report = AnalysisReport {
        tool: ToolInfo::default(),
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        group_display,
        builds: Vec::new(),
        analyses: Vec::new(),
        failed_stages: Vec::new(),
        timings: BTreeMap::new(),
    };

    let total_start = Instant::now();
    let mut builds: Vec<((u32, u32), CuspedBall)> = Vec::new();
    for &r in &config.radii {
        for &d in &effective_depths {
            let stage = format!("build[r={r},d={d}]");
            let t = Instant::now();
            let outcome = cayley_ball(&model, r, &subs, config.budgets.vertex_budget)
                .and_then(|ball| build_cusped_ball(ball, d, config.budgets.vertex_budget));
            report.timings.insert(stage.clone(), t.elapsed().as_secs_f64());
            match outcome {
                Ok(cb) => {
                    report.builds.push(BuildRecord {
                        radius: r,
                        depth: d,
                        ball_vertices: cb.ball().vertex_count(),
                        cusped_vertices: cb.graph().vertex_count(),
                        cusped_edges: cb.graph().edge_count(),
                        patches: cb.patches().len(),
                        certified_radius: cb.certified_radius(),
                        certified_vertices: cb.certified_vertices().len(),
                        truncated: cb.certified_radius() < r,
                    });
                    builds.push(((r, d), cb));
                }
                Err(e) => {
                    report.failed_stages.push(format!("{stage}: {e}"));
                }
            }
        }
    }

    if builds.is_empty() {
        report.timings.insert("total".into(), total_start.elapsed().as_secs_f64());
        return Ok(report);
    }

    let ctx = Ctx { cfg: config, builds: &builds };
    for (i, sel) in config.analyses.iter().enumerate() {
        let name = format!("{:02}-{}", i, sel.kind_name());
        let t = Instant::now();
        let outcome = run_analysis(&ctx, sel);
        report.timings.insert(name.clone(), t.elapsed().as_secs_f64());
        match outcome {
            Ok(result) => report.analyses.push(AnalysisRecord {
                name,
                kind: sel.kind_name(),
                status: "OK".into(),
                error: None,
                result: Some(result),
            }),
            Err(e) => {
                report.failed_stages.push(format!("{name}: {e}"));
                report.analyses.push(AnalysisRecord {
                    name,
                    kind: sel.kind_name(),
                    status: "FAILED".into(),
                    error: Some(e.to_string()),
                    result: None,
                });
            }
        }
    }
    report.timings.insert("total".into(), total_start.elapsed().as_secs_f64());
    Ok(report)
}

/// Writes the report JSON and CSV sidecars per the config's output spec,
/// with optional overrides. Returns the written JSON path, if any.
pub fn write_outputs(
    report: &AnalysisReport,
    json_override: Option<&str>,
    csv_override: Option<&str>,
) -> Result<Option<String>> {
    let json_path = json_override
        .map(str::to_string)
        .or_else(|| report.config.output.json.clone());
    if let Some(p) = &json_path {
        if let Some(dir) = std::path::Path::new(p).parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(p, report.emit())?;
    }
    let csv_dir = csv_override
        .map(str::to_string)
        .or_else(|| report.config.output.csv_dir.clone());
    if let Some(dir) = &csv_dir {
        std::fs::create_dir_all(dir)?;
        write_csv_sidecars(report, dir)?;
    }
    Ok(json_path)
}

fn push_profile_csv(out: &mut String, label: &str, profile: &Value) {
    if let Some(rho) = profile.get("rho_hat").and_then(Value::as_array) {
        for (r, v) in rho.iter().enumerate() {
            out.push_str(&format!("{label},{r},{v}\n"));
        }
    }
}

/// One CSV per series-bearing analysis, named after the stage.
fn write_csv_sidecars(report: &AnalysisReport, dir: &str) -> Result<()> {
    for rec in &report.analyses {
        let Some(result) = &rec.result else { continue };
        let mut body = String::new();
        match rec.kind {
            "four-point-delta" | "slim-delta" => {
                body.push_str("radius,vertices,delta\n");
                if let Some(rows) = result.get("per_radius").and_then(Value::as_array) {
                    for row in rows {
                        let r = row.get("radius").and_then(Value::as_u64).unwrap_or(0);
                        let n = row.get("vertices").and_then(Value::as_u64).unwrap_or(0);
                        let rep = &row["report"];
                        let d = rep
                            .get("delta_four_point")
                            .and_then(Value::as_f64)
                            .or_else(|| rep.get("delta_slim").and_then(Value::as_f64))
                            .unwrap_or(0.0);
                        body.push_str(&format!("{r},{n},{d}\n"));
                    }
                }
            }
            "axis-profile" => {
                body.push_str("series,r,rho_hat\n");
                push_profile_csv(&mut body, "axis", &result["profile"]);
            }
            "vertical-profiles" => {
                body.push_str("series,r,rho_hat\n");
                if let Some(rows) = result.get("per_rep").and_then(Value::as_array) {
                    for row in rows {
                        let rep = row.get("rep").and_then(Value::as_str).unwrap_or("?");
                        push_profile_csv(&mut body, rep, &row["profile"]);
                    }
                }
            }
            "vertical-audit" => {
                body.push_str("series,r,rho_hat\n");
                if let Some(rows) = result.get("per_coset").and_then(Value::as_array) {
                    for row in rows {
                        let rep = row.get("rep").and_then(Value::as_str).unwrap_or("?");
                        push_profile_csv(&mut body, rep, &row["profile"]);
                    }
                }
            }
            "distortion" => {
                body.push_str("n,distance,ratio\n");
                let dist = result.get("distances").and_then(Value::as_array);
                let ratios = result.get("ratios").and_then(Value::as_array);
                if let Some(dist) = dist {
                    for pair in dist {
                        let n = pair[0].as_u64().unwrap_or(0);
                        let d = pair[1].as_u64().unwrap_or(0);
                        let ratio = ratios
                            .and_then(|rs| {
                                rs.iter().find(|p| p[0].as_u64() == Some(n))
                            })
                            .map(|p| p[1].as_f64().unwrap_or(0.0));
                        match ratio {
                            Some(x) => body.push_str(&format!("{n},{d},{x}\n")),
                            None => body.push_str(&format!("{n},{d},\n")),
                        }
                    }
                }
            }
            "group-hull-deltas" => {
                body.push_str("family,stage,members,slim_delta\n");
                if let Some(fams) = result.as_array() {
                    for fam in fams {
                        let name = fam.get("name").and_then(Value::as_str).unwrap_or("?");
                        if let Some(stages) = fam.get("stages").and_then(Value::as_array) {
                            for st in stages {
                                let s = st.get("stage").and_then(Value::as_u64).unwrap_or(0);
                                let m = st.get("members").and_then(Value::as_u64).unwrap_or(0);
                                let d =
                                    st.get("slim_delta").and_then(Value::as_u64).unwrap_or(0);
                                body.push_str(&format!("{name},{s},{m},{d}\n"));
                            }
                        }
                    }
                }
            }
            _ => continue,
        }
        let path = format!("{dir}/{}.csv", rec.name);
        std::fs::write(path, body)?;
    }
    Ok(())
}
