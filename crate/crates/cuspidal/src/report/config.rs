//! Experiment configuration: what to build and which analyses to run
//! over it. Configs are plain JSON, round-trip exactly, and pin every
//! knob an analysis reads so reports are reproducible byte for byte.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupSpecFile;
use crate::morse::fq::Rational;

/// Group description: inline, or a path to a JSON file with the same
/// shape.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GroupSource {
    Path(String),
    Inline(GroupSpecFile),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DeltaModeSel {
    Exhaustive,
    /// Seed comes from the top-level config seed.
    Sampled { budget: u64 },
}

/// A constant pair (K, C) written as rational strings: "3", "1/2".
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RationalPair {
    pub k: String,
    pub c: String,
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let bad = || Error::input(format!("bad rational {s:?}; expected \"n\" or \"n/d\""));
    let num: i64 = n.parse().map_err(|_| bad())?;
    let den: i64 = d.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(Error::input(format!("bad rational {s:?}: zero denominator")));
    }
    Ok(Rational::new(num, den))
}

impl RationalPair {
    pub fn parse(&self) -> Result<(Rational, Rational)> {
        Ok((parse_rational(&self.k)?, parse_rational(&self.c)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticProfile {
    Zero,
    CeilSqrt,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FqCaseSel {
    pub profile: SyntheticProfile,
    pub support: u32,
    pub l: String,
    pub a: String,
}

/// One family of direction sets; stage i's hull is computed over
/// `stages[i]` verbatim.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HullFamily {
    pub name: String,
    pub stages: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "analysis", rename_all = "kebab-case")]
pub enum AnalysisSelection {
    /// Four-point delta at every configured radius (deepest depth), with
    /// a plateau audit across radii when there are at least three.
    FourPointDelta {
        #[serde(flatten)]
        mode: DeltaModeSel,
    },
    /// Slim-triangle delta, same sweep shape as four-point.
    SlimDelta {
        #[serde(flatten)]
        mode: DeltaModeSel,
    },
    /// Contraction profile of the full axis geodesic through the origin
    /// named by a single-generator power, anchored on a sub-ball.
    AxisProfile { direction: String, anchor_radius: u32, window: u32 },
    /// Profiles of canonical geodesics between seeded random endpoint
    /// pairs, anchored everywhere; reports the worst final value.
    RandomGeodesicProfiles { count: u32 },
    /// Vertical-ray profile and trend per named coset representative,
    /// anchored on the certified region.
    VerticalProfiles { reps: Vec<String>, window: u32 },
    /// Cross-coset uniformity of vertical-ray contraction.
    VerticalAudit { reps: Vec<String>, depth_used: u32 },
    /// Distance growth of powers of a word in the cusped metric.
    Distortion { word: String, n_max: u32 },
    /// Filters certified-sphere vertices by contraction, builds the weak
    /// hull of the survivors, and audits certified coverage.
    BoundaryProxy { c: u32, margin: u32 },
    /// Group-level hulls per direction family stage with exhaustive slim
    /// delta on each induced graph and a plateau audit per family.
    GroupHullDeltas { families: Vec<HullFamily> },
    /// Exhaustive excursion-gauge probe on the diameter geodesic.
    GaugeProbe { grid: Vec<RationalPair>, budget: u64 },
    /// Bulk audit of every enumerated quasi-geodesic against the
    /// stability bound, per constant pair, on the diameter geodesic.
    StabilitySweep { pairs: Vec<RationalPair>, budget: u64 },
    /// All-pairs triangle audit from the origin against 4 N(3, 0);
    /// `budget` caps the number of audited pairs.
    SlimPairSweep { probe_budget: u64, pair_budget: u64 },
    /// Rebuilds the horoball over the base ball from the level rule and
    /// counts edge discrepancies.
    HoroballExactness { depth: u32 },
    /// Fellow-travelling constants for synthetic profiles.
    FqConstants { cases: Vec<FqCaseSel> },
}

impl AnalysisSelection {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AnalysisSelection::FourPointDelta { .. } => "four-point-delta",
            AnalysisSelection::SlimDelta { .. } => "slim-delta",
            AnalysisSelection::AxisProfile { .. } => "axis-profile",
            AnalysisSelection::RandomGeodesicProfiles { .. } => "random-geodesic-profiles",
            AnalysisSelection::VerticalProfiles { .. } => "vertical-profiles",
            AnalysisSelection::VerticalAudit { .. } => "vertical-audit",
            AnalysisSelection::Distortion { .. } => "distortion",
            AnalysisSelection::BoundaryProxy { .. } => "boundary-proxy",
            AnalysisSelection::GroupHullDeltas { .. } => "group-hull-deltas",
            AnalysisSelection::GaugeProbe { .. } => "gauge-probe",
            AnalysisSelection::StabilitySweep { .. } => "stability-sweep",
            AnalysisSelection::SlimPairSweep { .. } => "slim-pair-sweep",
            AnalysisSelection::HoroballExactness { .. } => "horoball-exactness",
            AnalysisSelection::FqConstants { .. } => "fq-constants",
        }
    }

    fn needs_seed(&self) -> bool {
        matches!(
            self,
            AnalysisSelection::FourPointDelta { mode: DeltaModeSel::Sampled { .. } }
                | AnalysisSelection::SlimDelta { mode: DeltaModeSel::Sampled { .. } }
                | AnalysisSelection::RandomGeodesicProfiles { .. }
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Budgets {
    /// Vertex cap for ball and cusped-space construction.
    pub vertex_budget: u64,
    /// Exhaustive delta cap (vertices).
    pub exhaustive_cap: usize,
    /// Distance-pool size for sampled delta.
    pub delta_pool: usize,
    /// Geodesic enumeration cap per hull direction pair.
    pub pair_cap: usize,
    /// Geodesic enumeration cap per contraction-filter candidate.
    pub geo_cap: usize,
    /// Element cap per group-level geodesic interval.
    pub interval_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            vertex_budget: crate::groups::DEFAULT_VERTEX_BUDGET,
            exhaustive_cap: 400,
            delta_pool: 192,
            pair_cap: 512,
            geo_cap: 64,
            interval_cap: 200_000,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct OutputSpec {
    /// Report JSON path; CLI flags override.
    pub json: Option<String>,
    /// Directory for CSV series, one file per series-bearing analysis.
    pub csv_dir: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub group: GroupSource,
    pub radii: Vec<u32>,
    #[serde(default)]
    pub depths: Vec<u32>,
    pub analyses: Vec<AnalysisSelection>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn strictly_increasing(xs: &[u32]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::input("config needs at least one radius"));
        }
        if !strictly_increasing(&self.radii) {
            return Err(Error::input("radii must be strictly increasing"));
        }
        if !strictly_increasing(&self.depths) {
            return Err(Error::input("depths must be strictly increasing"));
        }
        if self.seed.is_none() && self.analyses.iter().any(AnalysisSelection::needs_seed) {
            return Err(Error::input(
                "a sampled analysis is selected but the config has no seed",
            ));
        }
        for a in &self.analyses {
            match a {
                AnalysisSelection::GaugeProbe { grid, .. } if grid.is_empty() => {
                    return Err(Error::input("gauge-probe needs a non-empty grid"));
                }
                AnalysisSelection::StabilitySweep { pairs, .. } if pairs.is_empty() => {
                    return Err(Error::input("stability-sweep needs at least one pair"));
                }
                AnalysisSelection::GroupHullDeltas { families } => {
                    if families.is_empty() {
                        return Err(Error::input("group-hull-deltas needs a family"));
                    }
                    for f in families {
                        if f.stages.is_empty() {
                            return Err(Error::input(format!(
                                "hull family {:?} has no stages",
                                f.name
                            )));
                        }
                    }
                }
                AnalysisSelection::FqConstants { cases } if cases.is_empty() => {
                    return Err(Error::input("fq-constants needs at least one case"));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            group: GroupSource::Inline(
                GroupSpecFile::parse(
                    r#"{"family":"free","rank":2,
                        "subgroups":[{"name":"A","generators":["a"]}]}"#,
                )
                .unwrap(),
            ),
            radii: vec![4, 6],
            depths: vec![3],
            analyses: vec![
                AnalysisSelection::FourPointDelta {
                    mode: DeltaModeSel::Sampled { budget: 1000 },
                },
                AnalysisSelection::Distortion { word: "a".into(), n_max: 8 },
            ],
            budgets: Budgets::default(),
            seed: Some(7),
            output: OutputSpec::default(),
        }
    }

    #[test]
    fn config_round_trips() {
        let cfg = sample();
        let text = cfg.emit();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(text, back.emit());
    }

    #[test]
    fn group_source_accepts_path_or_inline() {
        let path: GroupSource = serde_json::from_str(r#""groups/free2.json""#).unwrap();
        assert_eq!(path, GroupSource::Path("groups/free2.json".into()));
        let inline: GroupSource =
            serde_json::from_str(r#"{"family":"free_abelian","rank":2}"#).unwrap();
        assert!(matches!(inline, GroupSource::Inline(_)));
    }

    #[test]
    fn sampled_analysis_requires_seed() {
        let mut cfg = sample();
        cfg.seed = None;
        assert!(cfg.validate().is_err());
        cfg.analyses.remove(0);
        cfg.validate().unwrap();
    }

    #[test]
    fn list_monotonicity_is_enforced() {
        let mut cfg = sample();
        cfg.radii = vec![6, 6];
        assert!(cfg.validate().is_err());
        cfg.radii = vec![6];
        cfg.depths = vec![4, 2];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rationals_parse_and_reject_garbage() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational(" -1/4 ").unwrap(), Rational::new(-1, 4));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
