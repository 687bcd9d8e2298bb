//! Thin command-line front end. Every subcommand builds a scene from the
//! library and prints one JSON report to stdout; `run` and `recipe`
//! delegate to the experiment orchestrator.
//!
//! Exit codes: 0 success, 2 bad input, 3 budget exceeded, 4 analysis or
//! batch failure.

use clap::{Parser, Subcommand};
use serde::Serialize;

use cuspidal::cusped::{build_cusped_ball, CuspedBall};
use cuspidal::delta::{four_point_delta, slim_triangle_delta, DeltaMode, GeodesicChooser};
use cuspidal::error::{Error, Result};
use cuspidal::graph::{GeodesicPath, VertexId};
use cuspidal::groups::{cayley_ball, GroupModel, GroupSpecFile, SubgroupSpec, SubgroupSpecFile};
use cuspidal::morse::fq::Rational;
use cuspidal::morse::{
    contraction_profile, dl_neighbor_test, fq_neighbor_test, group_weak_hull,
    hull_coverage_audit, k_of, morse_gauge_probe, power_path_distortion, project,
    stability_sweep, stable_set_proxy, sublinearity_trend, vertical_ray_contraction_audit,
    weak_hull, ContractionProfile, ProbeMode,
};
use cuspidal::report::{
    axis_path, recipe_by_name, recipes, run as run_experiment, validate_report_value,
    write_outputs, ExperimentConfig, RationalPair,
};

#[derive(Parser)]
#[command(name = "cuspidal", version, about = "Cusped-space and Morse-audit toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every scene-building subcommand.
#[derive(clap::Args)]
struct SceneArgs {
    /// Group source: a JSON file path, an inline JSON object, or the
    /// shorthands free:N / abelian:N.
    #[arg(long)]
    group: String,
    /// Adds a peripheral subgroup generated by these comma-separated
    /// words.
    #[arg(long)]
    rel: Option<String>,
    #[arg(long)]
    radius: u32,
    /// Horoball depth; required whenever the group has subgroups.
    #[arg(long, default_value_t = 0)]
    depth: u32,
    /// Vertex budget for construction.
    #[arg(long, default_value_t = 5_000_000)]
    vertex_budget: u64,
}

impl SceneArgs {
    fn model(&self) -> Result<(GroupModel, Vec<SubgroupSpec>)> {
        let text = self.group.trim();
        let json = if text.starts_with('{') {
            text.to_string()
        } else if let Some(rank) = text.strip_prefix("free:") {
            format!(r#"{{"family":"free","rank":{rank}}}"#)
        } else if let Some(rank) = text.strip_prefix("abelian:") {
            format!(r#"{{"family":"free_abelian","rank":{rank}}}"#)
        } else {
            std::fs::read_to_string(text)?
        };
        let mut spec = GroupSpecFile::parse(&json)?;
        if let Some(rel) = &self.rel {
            spec.subgroups.push(SubgroupSpecFile {
                name: "P".into(),
                generators: rel.split(',').map(|s| s.trim().to_string()).collect(),
            });
        }
        spec.build()
    }

    fn build(&self) -> Result<CuspedBall> {
        let (model, subs) = self.model()?;
        let ball = cayley_ball(&model, self.radius, &subs, self.vertex_budget)?;
        build_cusped_ball(ball, self.depth, self.vertex_budget)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its report.
    Run {
        #[arg(long)]
        config: String,
        /// Report JSON path; overrides the config's output section.
        #[arg(long)]
        json: Option<String>,
        /// CSV sidecar directory; overrides the config's output section.
        #[arg(long)]
        csv_dir: Option<String>,
    },
    /// Run a named preset; lists presets when no name is given.
    Recipe {
        name: Option<String>,
        /// Output directory for the report and CSV sidecars.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Write the graph as an edge list, plus a vertex annotation sidecar.
    ExportGraph {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        out: String,
        #[arg(long)]
        sidecar: Option<String>,
    },
    /// Four-point or slim-triangle hyperbolicity estimate.
    Delta {
        #[command(flatten)]
        scene: SceneArgs,
        /// Measure slim-triangle delta instead of four-point.
        #[arg(long)]
        slim: bool,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Exhaustive-mode vertex cap.
        #[arg(long, default_value_t = 400)]
        cap: usize,
        /// Sampled-mode distance pool size.
        #[arg(long, default_value_t = 192)]
        pool: usize,
    },
    /// Nearest-point projection of a vertex onto a canonical geodesic.
    Project {
        #[command(flatten)]
        scene: SceneArgs,
        /// Far endpoint of the target geodesic (from the origin).
        #[arg(long)]
        gamma: String,
        /// The vertex to project.
        #[arg(long)]
        x: String,
    },
    /// Contraction profile of the two-sided axis of a word, with trend.
    Profile {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        direction: String,
        #[arg(long)]
        anchor_radius: u32,
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
    /// Excursion gauge table over a constant-pair grid.
    Gauge {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated K:C pairs, rationals allowed: "3:0,3/2:1".
        #[arg(long, default_value = "3:0")]
        pairs: String,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
    /// Audit every enumerated (K, C) quasi-geodesic against the
    /// stability bound.
    AuditStability {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value = "0")]
        c: String,
        #[arg(long, default_value_t = 20_000_000)]
        budget: u64,
    },
    /// All-pairs slim triangle audit from the origin against the gauge.
    AuditSlim {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 2_000_000)]
        probe_budget: u64,
        #[arg(long, default_value_t = 100_000)]
        pair_budget: u64,
    },
    /// Fellow-travelling constant and tail test for a path pair.
    FqTest {
        #[command(flatten)]
        scene: SceneArgs,
        /// Far endpoint of alpha (geodesic from the origin).
        #[arg(long)]
        alpha: String,
        /// Far endpoint of beta (geodesic from the origin).
        #[arg(long)]
        beta: String,
        #[arg(long, default_value = "1")]
        l: String,
        #[arg(long, default_value = "0")]
        a: String,
        /// Anchor radius; defaults to the computed tail radius.
        #[arg(long)]
        anchor_r: Option<u32>,
    },
    /// Pointwise fellow-travelling of two paths from a common basepoint.
    DlTest {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        gamma: String,
        /// Drift bound; defaults to 4 N(3,0) + 1 from the probed gauge.
        #[arg(long)]
        delta_n: Option<u32>,
        #[arg(long, default_value_t = 2_000_000)]
        probe_budget: u64,
    },
    /// Weak hull of direction vertices, with certified coverage audit.
    Hull {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated direction words.
        #[arg(long)]
        directions: String,
        #[arg(long, default_value_t = 512)]
        pair_cap: usize,
        #[arg(long, default_value_t = 2)]
        margin: u32,
        /// Compute the hull at the group level instead of in the ball.
        #[arg(long)]
        group_level: bool,
        #[arg(long, default_value_t = 200_000)]
        interval_cap: usize,
    },
    /// Coarse stable-set proxy around the origin.
    StableSet {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 64)]
        geo_cap: usize,
    },
    /// Vertical-ray contraction audit across horoball patches.
    VerticalAudit {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated patch representative words.
        #[arg(long)]
        reps: String,
        #[arg(long)]
        depth_used: u32,
    },
    /// Distance growth of powers of a word in the cusped metric.
    Distortion {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 256)]
        n_max: u32,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn parse_pair(text: &str) -> Result<(Rational, Rational)> {
    let (k, c) = text
        .split_once(':')
        .ok_or_else(|| Error::input(format!("bad pair {text:?}; expected K:C")))?;
    RationalPair { k: k.trim().into(), c: c.trim().into() }.parse()
}

fn vertex_of_word(cb: &CuspedBall, text: &str) -> Result<VertexId> {
    let model = cb.ball().model();
    let w = model.parse_word(text)?;
    cb.ball()
        .vertex_of(&w)
        .ok_or_else(|| Error::input(format!("word {text:?} lies outside the ball")))
}

fn geodesic_from_origin(cb: &CuspedBall, text: &str) -> Result<GeodesicPath> {
    let v = vertex_of_word(cb, text)?;
    cb.graph().some_geodesic(cb.origin(), v)
}

fn patch_indices(cb: &CuspedBall, reps: &str) -> Result<Vec<usize>> {
    let model = cb.ball().model();
    let mut out = Vec::new();
    for rep in reps.split(',') {
        let nf = model.normal_form(&model.parse_word(rep.trim())?);
        let pi = cb
            .patches()
            .iter()
            .position(|p| p.rep == nf)
            .ok_or_else(|| Error::input(format!("no horoball patch with representative {rep:?}")))?;
        out.push(pi);
    }
    Ok(out)
}

fn diameter_geodesic(cb: &CuspedBall) -> Result<GeodesicPath> {
    let g = cb.graph();
    let far = |dist: &[u32]| {
        let mut best = 0usize;
        let mut best_d = 0u32;
        for (i, &d) in dist.iter().enumerate() {
            if d != cuspidal::graph::UNREACHED && d > best_d {
                best = i;
                best_d = d;
            }
        }
        VertexId(best as u32)
    };
    let u = far(&g.bfs(cb.origin()));
    let v = far(&g.bfs(u));
    g.some_geodesic(u, v)
}

fn whole_region(cb: &CuspedBall) -> Vec<VertexId> {
    (0..cb.graph().vertex_count()).map(|i| VertexId(i as u32)).collect()
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Run { config, json, csv_dir } => {
            let cfg = ExperimentConfig::parse(&std::fs::read_to_string(&config)?)?;
            let report = run_experiment(&cfg)?;
            validate_report_value(&serde_json::to_value(&report)?)?;
            let written = write_outputs(&report, json.as_deref(), csv_dir.as_deref())?;
            match written {
                Some(path) => eprintln!("report written to {path}"),
                None => print_json(&report)?,
            }
            if report.has_failures() {
                eprintln!("failed stages: {}", report.failed_stages.join("; "));
                return Ok(4);
            }
            Ok(0)
        }
        Command::Recipe { name, out } => {
            let Some(name) = name else {
                for r in recipes() {
                    println!("{:26} {}", r.name, r.description);
                }
                return Ok(0);
            };
            let recipe = recipe_by_name(&name)
                .ok_or_else(|| Error::input(format!("no recipe named {name:?}")))?;
            let report = run_experiment(&recipe.config)?;
            validate_report_value(&serde_json::to_value(&report)?)?;
            std::fs::create_dir_all(&out)?;
            let json_path = format!("{out}/{name}.json");
            let csv_dir = format!("{out}/{name}-csv");
            write_outputs(&report, Some(&json_path), Some(&csv_dir))?;
            eprintln!("report written to {json_path}");
            if report.has_failures() {
                eprintln!("failed stages: {}", report.failed_stages.join("; "));
                return Ok(4);
            }
            Ok(0)
        }
        Command::ExportGraph { scene, out, sidecar } => {
            let cb = scene.build()?;
            let g = cb.graph();
            let mut body = String::new();
            for (u, v) in g.edges() {
                body.push_str(&format!("{u} {v}\n"));
            }
            std::fs::write(&out, body)?;
            if let Some(side) = &sidecar {
                let mut f = std::fs::File::create(side)?;
                cb.write_sidecar(&mut f)?;
            }
            #[derive(Serialize)]
            struct Summary {
                vertices: usize,
                edges: usize,
                patches: usize,
                certified_radius: u32,
                out: String,
            }
            print_json(&Summary {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                patches: cb.patches().len(),
                certified_radius: cb.certified_radius(),
                out,
            })?;
            Ok(0)
        }
        Command::Delta { scene, slim, mode, budget, seed, cap, pool } => {
            let cb = scene.build()?;
            let g = cb.graph();
            let mode = match mode.as_str() {
                "exhaustive" => DeltaMode::Exhaustive,
                "sampled" => DeltaMode::Sampled {
                    budget,
                    seed: seed.ok_or_else(|| Error::input("sampled mode needs --seed"))?,
                },
                other => return Err(Error::input(format!("unknown mode {other:?}"))),
            };
            let report = if slim {
                slim_triangle_delta(g, GeodesicChooser::Canonical, mode, cap)?
            } else {
                four_point_delta(g, mode, cap, pool)?
            };
            print_json(&report)?;
            Ok(0)
        }
        Command::Project { scene, gamma, x } => {
            let cb = scene.build()?;
            let path = geodesic_from_origin(&cb, &gamma)?;
            let xv = vertex_of_word(&cb, &x)?;
            print_json(&project(cb.graph(), &path, xv)?)?;
            Ok(0)
        }
        Command::Profile { scene, direction, anchor_radius, window } => {
            let cb = scene.build()?;
            let model = cb.ball().model();
            let axis = axis_path(&cb, &model.parse_word(&direction)?)?;
            let anchors: Vec<VertexId> = whole_region(&cb)
                .into_iter()
                .filter(|&v| cb.distance_from_origin(v) <= anchor_radius)
                .collect();
            let profile = contraction_profile(cb.graph(), &[axis], &anchors)?;
            let trend = sublinearity_trend(&profile, window)?;
            #[derive(Serialize)]
            struct Out {
                profile: ContractionProfile,
                trend: cuspidal::morse::TrendReport,
            }
            print_json(&Out { profile, trend })?;
            Ok(0)
        }
        Command::Gauge { scene, pairs, budget } => {
            let cb = scene.build()?;
            let gamma = diameter_geodesic(&cb)?;
            let mut grid = Vec::new();
            for p in pairs.split(',') {
                grid.push(parse_pair(p.trim())?);
            }
            let table = morse_gauge_probe(
                cb.graph(),
                &gamma,
                &grid,
                ProbeMode::Exhaustive { budget },
                &[],
            )?;
            print_json(&table)?;
            Ok(0)
        }
        Command::AuditStability { scene, k, c, budget } => {
            let cb = scene.build()?;
            let gamma = diameter_geodesic(&cb)?;
            let (kq, cq) = parse_pair(&format!("{k}:{c}"))?;
            let sweep = stability_sweep(cb.graph(), &gamma, kq, cq, budget)?;
            let code = if sweep.violations > 0 { 4 } else { 0 };
            print_json(&sweep)?;
            Ok(code)
        }
        Command::AuditSlim { scene, probe_budget, pair_budget } => {
            let cb = scene.build()?;
            let g = cb.graph();
            let o = cb.origin();
            let gamma = diameter_geodesic(&cb)?;
            let grid = [parse_pair("3:0")?];
            let table =
                morse_gauge_probe(g, &gamma, &grid, ProbeMode::Exhaustive { budget: probe_budget }, &[])?;
            let n = g.vertex_count() as u32;
            let mut audited = 0u64;
            let mut violations = 0u64;
            let mut max_slimness = 0u32;
            'outer: for q in 0..n {
                for r in (q + 1)..n {
                    if audited >= pair_budget {
                        break 'outer;
                    }
                    let a1 = g.some_geodesic(o, VertexId(q))?;
                    let a2 = g.some_geodesic(o, VertexId(r))?;
                    let audit = cuspidal::morse::slim_check_morse_pair(g, o, &a1, &a2, &table)?;
                    audited += 1;
                    max_slimness = max_slimness.max(audit.slimness);
                    if !audit.pass {
                        violations += 1;
                    }
                }
            }
            #[derive(Serialize)]
            struct Out {
                audited: u64,
                violations: u64,
                max_slimness: u32,
                n_hat_30: u32,
                saturated: bool,
            }
            let entry = &table.entries[0];
            let code = if violations > 0 { 4 } else { 0 };
            print_json(&Out {
                audited,
                violations,
                max_slimness,
                n_hat_30: entry.n_hat,
                saturated: entry.saturated,
            })?;
            Ok(code)
        }
        Command::FqTest { scene, alpha, beta, l, a, anchor_r } => {
            let cb = scene.build()?;
            let g = cb.graph();
            let alpha_path = geodesic_from_origin(&cb, &alpha)?;
            let beta_path = geodesic_from_origin(&cb, &beta)?;
            let region = whole_region(&cb);
            let profile = contraction_profile(g, &[alpha_path.clone()], &region)?;
            let (lq, aq) = parse_pair(&format!("{l}:{a}"))?;
            let params = k_of(&profile, lq, aq)?;
            let r = anchor_r.unwrap_or(params.r);
            let report =
                fq_neighbor_test(g, cb.origin(), &alpha_path, r, beta_path.vertices(), lq, aq, &profile)?;
            let code = if report.pass { 0 } else { 4 };
            print_json(&report)?;
            Ok(code)
        }
        Command::DlTest { scene, alpha, gamma, delta_n, probe_budget } => {
            let cb = scene.build()?;
            let g = cb.graph();
            let alpha_path = geodesic_from_origin(&cb, &alpha)?;
            let gamma_path = geodesic_from_origin(&cb, &gamma)?;
            let grid = [parse_pair("3:0")?];
            let table = morse_gauge_probe(
                g,
                &alpha_path,
                &grid,
                ProbeMode::Exhaustive { budget: probe_budget },
                &[],
            )?;
            let n30 = table.n30().ok_or_else(|| Error::analysis("gauge probe has no (3,0) entry"))?;
            let bound = delta_n.unwrap_or(4 * n30 + 1);
            let n = alpha_path.vertices().len().min(gamma_path.vertices().len());
            let report = dl_neighbor_test(
                g,
                cb.origin(),
                alpha_path.vertices(),
                n,
                gamma_path.vertices(),
                bound,
                &table,
            )?;
            let code = if report.pass { 0 } else { 4 };
            print_json(&report)?;
            Ok(code)
        }
        Command::Hull { scene, directions, pair_cap, margin, group_level, interval_cap } => {
            if group_level {
                let (model, _) = scene.model()?;
                let mut dirs = Vec::new();
                for d in directions.split(',') {
                    dirs.push(model.parse_word(d.trim())?);
                }
                let hull = group_weak_hull(&model, &dirs, interval_cap)?;
                let delta = slim_triangle_delta(
                    &hull.graph,
                    GeodesicChooser::Canonical,
                    DeltaMode::Exhaustive,
                    2_000,
                )?;
                #[derive(Serialize)]
                struct Out {
                    members: usize,
                    edges: usize,
                    slim_delta: Option<u32>,
                }
                print_json(&Out {
                    members: hull.members.len(),
                    edges: hull.graph.edge_count(),
                    slim_delta: delta.delta_slim,
                })?;
                return Ok(0);
            }
            let cb = scene.build()?;
            let mut dirs = Vec::new();
            for d in directions.split(',') {
                dirs.push(vertex_of_word(&cb, d.trim())?);
            }
            let hull = weak_hull(cb.graph(), cb.origin(), &dirs, pair_cap)?;
            let coverage = hull_coverage_audit(&cb, Some(&hull), margin);
            #[derive(Serialize)]
            struct Out {
                hull_vertices: usize,
                hull_edges: usize,
                truncated_pairs: u32,
                coverage: cuspidal::morse::CoverageAudit,
            }
            print_json(&Out {
                hull_vertices: hull.hull_vertices.len(),
                hull_edges: hull.induced.edge_count(),
                truncated_pairs: hull.truncated_pairs,
                coverage,
            })?;
            Ok(0)
        }
        Command::StableSet { scene, c, r, geo_cap } => {
            let cb = scene.build()?;
            let proxy = stable_set_proxy(cb.graph(), cb.origin(), c, r, geo_cap)?;
            print_json(&proxy)?;
            Ok(0)
        }
        Command::VerticalAudit { scene, reps, depth_used } => {
            let cb = scene.build()?;
            let idxs = patch_indices(&cb, &reps)?;
            let audit = vertical_ray_contraction_audit(&cb, &idxs, depth_used)?;
            print_json(&audit)?;
            Ok(0)
        }
        Command::Distortion { scene, word, n_max } => {
            let cb = scene.build()?;
            let w = cb.ball().model().parse_word(&word)?;
            let series = power_path_distortion(&cb, &w, n_max)?;
            print_json(&series)?;
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
