//! The fellow-travelling constant k(rho, L, A) from a contraction
//! profile, and the two neighbourhood tests built on it.

use cuspidal::groups::{cayley_ball, GroupModel, DEFAULT_VERTEX_BUDGET};
use cuspidal::morse::fq::Rational;
use cuspidal::morse::{
    contraction_profile, dl_neighbor_test, fq_neighbor_test, k_of, morse_gauge_probe,
    ContractionProfile, ProbeMode,
};

fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn main() -> cuspidal::Result<()> {
    // Synthetic profiles give the constant in closed form.
    let zero = ContractionProfile::synthetic(vec![0; 10])?;
    for (l, a) in [(1, 0), (2, 5)] {
        let p = k_of(&zero, rat(l), rat(a))?;
        println!("zero profile: k(rho, {l}, {a}) = {} at r = {}", p.k_value, p.r);
    }

    // On a real tree everything is 0-contracting, so the same constants
    // come out of the measured profile.
    let ball = cayley_ball(&GroupModel::free(2), 6, &[], DEFAULT_VERTEX_BUDGET)?;
    let g = ball.graph();
    let o = ball.origin();
    let m = ball.model();
    let alpha_end = ball.vertex_of(&m.parse_word("a^6")?).unwrap();
    let beta_end = ball.vertex_of(&m.parse_word("a^3 b^3")?).unwrap();
    let alpha = g.some_geodesic(o, alpha_end)?;
    let beta = g.some_geodesic(o, beta_end)?;

    let region: Vec<_> =
        (0..g.vertex_count()).map(|i| cuspidal::graph::VertexId(i as u32)).collect();
    let profile = contraction_profile(g, &[alpha.clone()], &region)?;
    let params = k_of(&profile, rat(1), rat(0))?;
    println!("measured tree profile: k = {}, anchor radius {}", params.k_value, params.r);

    let fq = fq_neighbor_test(g, o, &alpha, params.r, beta.vertices(), rat(1), rat(0), &profile)?;
    println!(
        "tail test: distance {} over tail of {} vertices -> pass = {}",
        fq.distance, fq.tail_size, fq.pass
    );

    let table = morse_gauge_probe(
        g,
        &alpha,
        &[(rat(3), rat(0))],
        ProbeMode::Exhaustive { budget: 1_000_000 },
        &[],
    )?;
    let n30 = table.n30().unwrap();
    let dl = dl_neighbor_test(
        g,
        o,
        alpha.vertices(),
        beta.vertices().len().min(alpha.vertices().len()),
        beta.vertices(),
        4 * n30 + 1,
        &table,
    )?;
    println!("pointwise test with delta_N = {}: pass = {}", dl.delta_n, dl.pass);
    Ok(())
}
