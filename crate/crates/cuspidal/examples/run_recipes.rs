//! Drive the experiment harness from code: build a config, run it, and
//! poke at the report. Identical configs give byte-identical reports up
//! to timings.

use cuspidal::report::{
    recipes, run, AnalysisSelection, Budgets, DeltaModeSel, ExperimentConfig, GroupSource,
    OutputSpec,
};

fn main() -> cuspidal::Result<()> {
    let cfg = ExperimentConfig {
        group: GroupSource::Inline(
            cuspidal::groups::GroupSpecFile::parse(r#"{"family":"free","rank":2}"#)?,
        ),
        radii: vec![3, 4],
        depths: vec![],
        analyses: vec![
            AnalysisSelection::FourPointDelta { mode: DeltaModeSel::Exhaustive },
            AnalysisSelection::RandomGeodesicProfiles { count: 25 },
        ],
        budgets: Budgets::default(),
        seed: Some(5),
        output: OutputSpec::default(),
    };

    let report = run(&cfg)?;
    println!("group: {}", report.group_display);
    for b in &report.builds {
        println!("built r{} with {} vertices", b.radius, b.ball_vertices);
    }
    for a in &report.analyses {
        println!("stage {} -> {}", a.name, a.status);
    }

    // The config serializes; this is the same format `run --config`
    // accepts on the command line.
    let text = cfg.emit();
    println!("config round-trips: {}", ExperimentConfig::parse(&text)? == cfg);

    println!("\npreset recipes:");
    for r in recipes() {
        println!("  {}", r.name);
    }
    Ok(())
}
