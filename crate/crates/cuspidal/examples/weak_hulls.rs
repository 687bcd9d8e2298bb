//! Weak hulls of direction sets, in a finite ball and at group level.

use cuspidal::delta::{slim_triangle_delta, DeltaMode, GeodesicChooser};
use cuspidal::groups::{cayley_ball, GroupModel, GroupSpecFile, DEFAULT_VERTEX_BUDGET};
use cuspidal::morse::{group_weak_hull, stable_set_proxy, weak_hull};

fn main() -> cuspidal::Result<()> {
    let model = GroupModel::free_abelian(2);
    let ball = cayley_ball(&model, 6, &[], DEFAULT_VERTEX_BUDGET)?;
    let g = ball.graph();

    let dirs: Vec<_> = ["a^6", "a^-6", "b^6"]
        .iter()
        .map(|w| ball.vertex_of(&model.parse_word(w).unwrap()).unwrap())
        .collect();
    let hull = weak_hull(g, ball.origin(), &dirs, 512)?;
    println!(
        "grid hull of 3 directions: {} vertices, {} induced edges, {} truncated pairs",
        hull.hull_vertices.len(),
        hull.induced.edge_count(),
        hull.truncated_pairs
    );

    // Group-level hulls skip the ambient ball entirely; directions that
    // cross a flat drag whole boxes in.
    let (zxz2, _) = GroupSpecFile::parse(
        r#"{"family":"free_product",
            "factors":[{"family":"free","rank":1},{"family":"free_abelian","rank":2}]}"#,
    )?
    .build()?;
    let words = ["e", "a^12", "a^2 b^2 c^2 a^6"]
        .iter()
        .map(|w| zxz2.parse_word(w))
        .collect::<cuspidal::Result<Vec<_>>>()?;
    let gh = group_weak_hull(&zxz2, &words, 200_000)?;
    let delta = slim_triangle_delta(&gh.graph, GeodesicChooser::Canonical, DeltaMode::Exhaustive, 400)?;
    println!(
        "Z*Z^2 hull through a flat: {} members, slim delta {:?}",
        gh.members.len(),
        delta.delta_slim
    );

    // Coarse stable set around the origin of a tree: everything.
    let tree = cayley_ball(&GroupModel::free(2), 4, &[], DEFAULT_VERTEX_BUDGET)?;
    let proxy = stable_set_proxy(tree.graph(), tree.origin(), 0, 4, 16)?;
    println!(
        "tree stable-set proxy (c=0, r=4): {} of {} vertices",
        proxy.vertices.len(),
        tree.graph().vertex_count()
    );
    Ok(())
}
