//! Contraction profiles tell trees and flats apart: projections onto a
//! tree geodesic barely move, projections onto a grid axis track you.

use cuspidal::graph::VertexId;
use cuspidal::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};
use cuspidal::morse::{contraction_profile, sublinearity_trend};

fn main() -> cuspidal::Result<()> {
    for (name, model, r) in [
        ("tree", GroupModel::free(2), 8u32),
        ("grid", GroupModel::free_abelian(2), 12),
    ] {
        let ball = cayley_ball(&model, r, &[], DEFAULT_VERTEX_BUDGET)?;
        let g = ball.graph();
        let o = ball.origin();

        // Two-sided generator axis through the origin.
        let lo = ball.vertex_of(&model.parse_word(&format!("a^-{r}"))?).unwrap();
        let hi = ball.vertex_of(&model.parse_word(&format!("a^{r}"))?).unwrap();
        let left = g.some_geodesic(lo, o)?;
        let right = g.some_geodesic(o, hi)?;
        let mut vs = left.vertices().to_vec();
        vs.extend_from_slice(&right.vertices()[1..]);
        let axis = cuspidal::graph::GeodesicPath::new(g, vs)?;

        let region: Vec<VertexId> =
            (0..g.vertex_count()).map(|i| VertexId(i as u32)).collect();
        let profile = contraction_profile(g, &[axis], &region)?;
        let trend = sublinearity_trend(&profile, 3)?;
        println!("{name} r{r}: rho_hat = {:?}", profile.rho_hat);
        println!(
            "  verdict {:?}, top/bottom mean ratios {:.2}/{:.2}, linear defect {}",
            trend.verdict, trend.top_mean_ratio, trend.bottom_mean_ratio, trend.linear_defect
        );
    }
    Ok(())
}
