//! Experiment configs, the run orchestrator, preset recipes, and report
//! schema validation.

pub mod config;
pub mod recipes;
pub mod run;
pub mod schema;

pub use config::{
    AnalysisSelection, Budgets, DeltaModeSel, ExperimentConfig, FqCaseSel, GroupSource,
    HullFamily, OutputSpec, RationalPair, SyntheticProfile,
};
pub use recipes::{recipe_by_name, recipes, Recipe};
pub use run::{
    axis_path, run, write_outputs, AnalysisRecord, AnalysisReport, BuildRecord, ToolInfo,
    SCHEMA_VERSION,
};
pub use schema::{validate_report_value, REPORT_SCHEMA};
