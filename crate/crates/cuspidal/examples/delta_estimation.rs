//! Four-point and slim-triangle hyperbolicity estimates, exhaustive
//! where the graph is small and sampled where it is not.

use cuspidal::delta::{four_point_delta, slim_triangle_delta, DeltaMode, GeodesicChooser};
use cuspidal::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};

fn main() -> cuspidal::Result<()> {
    let tree = cayley_ball(&GroupModel::free(2), 4, &[], DEFAULT_VERTEX_BUDGET)?;
    let grid = cayley_ball(&GroupModel::free_abelian(2), 6, &[], DEFAULT_VERTEX_BUDGET)?;

    for (name, g) in [("tree r4", tree.graph()), ("grid r6", grid.graph())] {
        let four = four_point_delta(g, DeltaMode::Exhaustive, 400, 192)?;
        let slim = slim_triangle_delta(g, GeodesicChooser::Canonical, DeltaMode::Exhaustive, 400)?;
        println!(
            "{name}: four-point delta {:?}, slim delta {:?} (exhaustive over {} vertices)",
            four.delta_four_point,
            slim.delta_slim,
            g.vertex_count()
        );
    }

    // Sampling scales to graphs the exhaustive cap refuses.
    let big = cayley_ball(&GroupModel::free(2), 8, &[], DEFAULT_VERTEX_BUDGET)?;
    let sampled = four_point_delta(
        big.graph(),
        DeltaMode::Sampled { budget: 100_000, seed: 7 },
        400,
        192,
    )?;
    println!(
        "tree r8 sampled: delta {:?} from {} quadruples (seed {:?})",
        sampled.delta_four_point, sampled.sample_count, sampled.seed
    );

    // Witnesses make every reported value replayable.
    println!("worst witness: {:?}", sampled.witness);
    Ok(())
}
