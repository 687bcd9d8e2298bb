//! Preset experiment configs. Each one pins every knob, so a recipe run
//! twice lands byte-identical reports modulo timings.

use super::config::{
    AnalysisSelection, Budgets, DeltaModeSel, ExperimentConfig, FqCaseSel, GroupSource,
    HullFamily, OutputSpec, RationalPair, SyntheticProfile,
};
use crate::groups::GroupSpecFile;

#[derive(Clone, Debug)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

fn group(json: &str) -> GroupSource {
    GroupSource::Inline(GroupSpecFile::parse(json).expect("recipe group spec parses"))
}

fn pair(k: &str, c: &str) -> RationalPair {
    RationalPair { k: k.into(), c: c.into() }
}

fn base(group_json: &str, radii: Vec<u32>, depths: Vec<u32>) -> ExperimentConfig {
    ExperimentConfig {
        group: group(group_json),
        radii,
        depths,
        analyses: Vec::new(),
        budgets: Budgets::default(),
        seed: None,
        output: OutputSpec::default(),
    }
}

pub fn recipes() -> Vec<Recipe> {
    let mut out = Vec::new();

    let mut cfg = base(r#"{"family":"free","rank":2}"#, vec![8], vec![]);
    cfg.seed = Some(11);
    cfg.analyses = vec![
        AnalysisSelection::FourPointDelta { mode: DeltaModeSel::Sampled { budget: 200_000 } },
        AnalysisSelection::SlimDelta { mode: DeltaModeSel::Sampled { budget: 50_000 } },
        AnalysisSelection::RandomGeodesicProfiles { count: 100 },
    ];
    out.push(Recipe {
        name: "tree-baseline",
        description: "Rank-2 free group ball: zero hyperbolicity estimates and \
                      identically zero contraction profiles on random geodesics.",
        config: cfg,
    });

    let mut cfg = base(r#"{"family":"free_abelian","rank":2}"#, vec![24], vec![]);
    cfg.analyses = vec![AnalysisSelection::AxisProfile {
        direction: "a^24".into(),
        anchor_radius: 12,
        window: 6,
    }];
    out.push(Recipe {
        name: "flat-obstruction",
        description: "Rank-2 free abelian ball: the generator axis fails to contract, \
                      with a linearly growing profile as the obstruction witness.",
        config: cfg,
    });

    // Certified radius of this cusped plane is floor(log2 r) - 1: the
    // column over the origin is shell from the first level whose
    // horizontal reach outruns the trace. r = 64 at depth 7 certifies 5,
    // enough support for a window-2 trend call.
    let mut cfg = base(
        r#"{"family":"free_abelian","rank":2,
            "subgroups":[{"name":"B","generators":["b"]}]}"#,
        vec![64],
        vec![7],
    );
    cfg.analyses = vec![
        AnalysisSelection::VerticalProfiles { reps: vec!["e".into(), "a".into()], window: 2 },
        AnalysisSelection::BoundaryProxy { c: 1, margin: 2 },
    ];
    // Nothing contracts here, so every candidate exhausts its geodesic
    // budget; one geodesic per candidate keeps the sweep affordable.
    cfg.budgets.geo_cap = 1;
    out.push(Recipe {
        name: "intro-z2-empty-boundary",
        description: "Free abelian plane cusped along one line direction: vertical rays \
                      keep linear profiles and the contracting-direction filter comes \
                      back empty, so the boundary proxy reports NO-DIRECTIONS.",
        config: cfg,
    });

    let mut cfg = base(
        r#"{"family":"free","rank":1,
            "subgroups":[{"name":"A","generators":["a"]}]}"#,
        vec![1024],
        vec![12],
    );
    cfg.analyses =
        vec![AnalysisSelection::Distortion { word: "a".into(), n_max: 1024 }];
    out.push(Recipe {
        name: "thm41-distortion",
        description: "Cusped line: distance from the origin to a^n grows like \
                      2 log2 n, the logarithmic distortion of a parabolic ray.",
        config: cfg,
    });

    let mut cfg = base(
        r#"{"family":"free_product",
            "factors":[{"family":"free","rank":1},{"family":"free_abelian","rank":2}]}"#,
        vec![2],
        vec![],
    );
    cfg.analyses = vec![AnalysisSelection::GroupHullDeltas {
        families: vec![
            HullFamily {
                name: "single-flat-syllable".into(),
                stages: vec![
                    vec!["e".into(), "a^12".into(), "a^2 b^2 a^8".into()],
                    vec![
                        "e".into(),
                        "a^12".into(),
                        "a^2 b^2 a^8".into(),
                        "a^3 b^3 a^6".into(),
                    ],
                    vec![
                        "e".into(),
                        "a^12".into(),
                        "a^2 b^2 a^8".into(),
                        "a^3 b^3 a^6".into(),
                        "a^4 b^4 a^4".into(),
                    ],
                ],
            },
            HullFamily {
                name: "two-flat-syllables".into(),
                stages: vec![
                    vec!["e".into(), "a^12".into(), "a^2 b^2 c^2 a^6".into()],
                    vec![
                        "e".into(),
                        "a^12".into(),
                        "a^2 b^2 c^2 a^6".into(),
                        "a^3 b^3 c^3 a^3".into(),
                    ],
                    vec![
                        "e".into(),
                        "a^12".into(),
                        "a^2 b^2 c^2 a^6".into(),
                        "a^3 b^3 c^3 a^3".into(),
                        "a^4 b^4 c^4".into(),
                    ],
                ],
            },
        ],
    }];
    out.push(Recipe {
        name: "paper-remark-zxz2",
        description: "Free product of a line with a plane: hulls of directions that \
                      bend through one flat syllable stay tree-thin as the family \
                      grows, while directions crossing a two-generator flat force \
                      hull slimness to grow with the box size.",
        config: cfg,
    });

    let mut cfg = base(
        r#"{"family":"free","rank":2,
            "subgroups":[{"name":"A","generators":["a"]}]}"#,
        vec![6, 8, 10],
        vec![8],
    );
    cfg.seed = Some(23);
    cfg.analyses = vec![
        AnalysisSelection::FourPointDelta { mode: DeltaModeSel::Sampled { budget: 200_000 } },
        AnalysisSelection::VerticalAudit {
            reps: vec!["a b".into(), "a^-1 b".into(), "a b^-1".into(), "a^-1 b^-1".into()],
            depth_used: 4,
        },
    ];
    out.push(Recipe {
        name: "relhyp-positive-control",
        description: "Rank-2 free group cusped along a generator line: hyperbolicity \
                      estimates plateau across growing radii, and vertical rays over \
                      four symmetric cosets contract identically.",
        config: cfg,
    });

    // Sweep budgets are sized so the widened gauge probe at (1, 6)
    // saturates on every instance; wider pairs would not saturate inside
    // the runtime gate.
    let mut cfg = base(r#"{"family":"free","rank":2}"#, vec![3, 4, 5], vec![]);
    cfg.analyses = vec![
        AnalysisSelection::GaugeProbe {
            grid: vec![pair("3", "0"), pair("3", "1"), pair("1", "2")],
            budget: 3_000_000,
        },
        AnalysisSelection::StabilitySweep {
            pairs: vec![pair("1", "0"), pair("1", "2")],
            budget: 400_000_000,
        },
        AnalysisSelection::SlimPairSweep { probe_budget: 3_000_000, pair_budget: 200_000 },
    ];
    out.push(Recipe {
        name: "morse-audit-tree",
        description: "Tree balls: excursion gauges along the diameter geodesic, an \
                      exhaustive stability audit of every enumerated quasi-geodesic \
                      with endpoints on it, and all-pairs slim triangle checks.",
        config: cfg,
    });

    let mut cfg = base(r#"{"family":"free_abelian","rank":2}"#, vec![3, 4, 5], vec![]);
    cfg.analyses = vec![
        AnalysisSelection::GaugeProbe {
            grid: vec![pair("3", "0"), pair("3", "1"), pair("1", "2")],
            budget: 2_000_000,
        },
        AnalysisSelection::StabilitySweep {
            pairs: vec![pair("1", "0"), pair("1", "2")],
            budget: 400_000_000,
        },
        AnalysisSelection::SlimPairSweep { probe_budget: 20_000_000, pair_budget: 200_000 },
    ];
    out.push(Recipe {
        name: "morse-audit-grid",
        description: "Small flat balls: the same gauge, stability, and slim-pair \
                      audits as the tree recipe, run where geodesics are far from \
                      unique.",
        config: cfg,
    });

    let mut cfg = base(r#"{"family":"free","rank":1}"#, vec![1], vec![]);
    cfg.analyses = vec![AnalysisSelection::FqConstants {
        cases: vec![
            FqCaseSel {
                profile: SyntheticProfile::Zero,
                support: 9,
                l: "1".into(),
                a: "0".into(),
            },
            FqCaseSel {
                profile: SyntheticProfile::Zero,
                support: 9,
                l: "2".into(),
                a: "5".into(),
            },
            FqCaseSel {
                profile: SyntheticProfile::CeilSqrt,
                support: 9,
                l: "1".into(),
                a: "0".into(),
            },
        ],
    }];
    out.push(Recipe {
        name: "fq-constants",
        description: "Fellow-travelling constants from synthetic contraction \
                      profiles: flat-zero profiles at two constant pairs, plus a \
                      square-root profile.",
        config: cfg,
    });

    let mut cfg = base(r#"{"family":"free","rank":1}"#, vec![16], vec![]);
    cfg.analyses = vec![AnalysisSelection::HoroballExactness { depth: 6 }];
    out.push(Recipe {
        name: "horoball-exactness",
        description: "Horoball over a 33-vertex line: the built edge set matches an \
                      independent reconstruction from the level rule, edge for edge.",
        config: cfg,
    });

    out
}

pub fn recipe_by_name(name: &str) -> Option<Recipe> {
    recipes().into_iter().find(|r| r.name == name)
}
