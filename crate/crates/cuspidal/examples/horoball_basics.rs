//! A combinatorial horoball over a path, and why deep levels shorten
//! long horizontal trips: level l lets one edge cross 2^l base steps.

use cuspidal::graph::UnitGraph;
use cuspidal::horoball::{build_horoball, HoroVertex};

fn main() -> cuspidal::Result<()> {
    // 65-vertex path, vertex i <-> i+1.
    let edges: Vec<(u32, u32)> = (0..64).map(|i| (i, i + 1)).collect();
    let base = UnitGraph::from_edges(65, &edges)?;
    let h = build_horoball(&base, 6, 1_000_000)?;
    println!(
        "horoball over P65, depth 6: {} vertices, {} edges",
        h.graph().vertex_count(),
        h.graph().edge_count()
    );

    let origin = HoroVertex::new(cuspidal::graph::VertexId(0), 0);
    for n in [1u32, 4, 16, 64] {
        let target = HoroVertex::new(cuspidal::graph::VertexId(n), 0);
        let d = h.distance(origin, target)?;
        let flat = n;
        println!("d(0, {n:>2}) = {d:>2}   (base-only distance {flat})");
    }

    // The whole vertical ray under a base vertex.
    let ray = h.vertical_ray(cuspidal::graph::VertexId(32))?;
    println!("vertical ray over 32 has {} vertices", ray.vertices().len());
    Ok(())
}
