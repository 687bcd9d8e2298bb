//! Probe excursion gauges from below, then audit the stability bound
//! they imply against every enumerated quasi-geodesic.

use cuspidal::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};
use cuspidal::morse::fq::Rational;
use cuspidal::morse::{
    morse_gauge_probe, slim_check_morse_pair, stability_sweep, ProbeMode,
};

fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn main() -> cuspidal::Result<()> {
    let ball = cayley_ball(&GroupModel::free(2), 5, &[], DEFAULT_VERTEX_BUDGET)?;
    let g = ball.graph();
    let o = ball.origin();

    let a5 = ball.vertex_of(&ball.model().parse_word("a^5")?).unwrap();
    let b5 = ball.vertex_of(&ball.model().parse_word("b^5")?).unwrap();
    let gamma = g.some_geodesic(a5, b5)?;

    let grid = [(rat(1), rat(0)), (rat(1), rat(2)), (rat(3), rat(0))];
    let table = morse_gauge_probe(g, &gamma, &grid, ProbeMode::Exhaustive { budget: 10_000_000 }, &[])?;
    for e in &table.entries {
        println!(
            "N({}, {}) >= {}   saturated={} ({} paths tested)",
            e.k, e.c, e.n_hat, e.saturated, e.paths_tested
        );
    }

    let sweep = stability_sweep(g, &gamma, rat(1), rat(2), 100_000_000)?;
    println!(
        "(1,2) sweep: {} paths audited, {} violations, worst Hausdorff {} vs bound {}",
        sweep.paths_audited, sweep.violations, sweep.worst_hausdorff, sweep.bound
    );

    // Triangles of geodesics from a common basepoint stay within the
    // slimness the (3,0) gauge predicts.
    let alpha1 = g.some_geodesic(o, a5)?;
    let alpha2 = g.some_geodesic(o, b5)?;
    let audit = slim_check_morse_pair(g, o, &alpha1, &alpha2, &table)?;
    println!(
        "slim pair: slimness {} <= bound {} -> {}",
        audit.slimness, audit.bound, audit.verdict
    );
    Ok(())
}
