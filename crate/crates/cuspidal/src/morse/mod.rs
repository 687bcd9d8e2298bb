//! Nearest-point projections, contraction profiles, excursion gauges,
//! and the audits built on them.

pub mod experiments;
pub mod fq;
pub mod gauge;
pub mod hull;
pub mod profile;
pub mod projection;
pub mod qg;

pub use experiments::{
    power_path_distortion, vertical_ray_contraction_audit, CosetRayProfile, DistortionSeries,
    VerticalAudit,
};
pub use fq::{dl_neighbor_test, fq_neighbor_test, k_of, DlTestReport, FqParams, FqTestReport};
pub use hull::{
    contracting_directions, group_weak_hull, hull_coverage_audit, stable_set_proxy, weak_hull,
    CoverageAudit, GroupHullResult, StableSetProxy, WeakHullResult,
};
pub use gauge::{
    morse_gauge_probe, slim_check_morse_pair, stability_sweep, verify_stability_bound,
    GaugeEntry, MorseGaugeTable, ProbeMode, SlimPairAudit, StabilityAudit, SweepReport,
};
pub use profile::{
    contraction_profile, sublinearity_trend, ContractionProfile, PairWitness, TrendReport,
    TrendVerdict,
};
pub use projection::{project, ProjectionResult};
pub use qg::{
    power_path, quasi_geodesic_families, verify_quasi_geodesic, FamilyCensus, FamilyKind,
    VerifiedPath, VerifyOutcome,
};
