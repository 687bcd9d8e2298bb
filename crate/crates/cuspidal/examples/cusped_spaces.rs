//! Glue horoballs onto the peripheral cosets of a ball and look at what
//! the certificate machinery says about the result.

use cuspidal::cusped::build_cusped_ball;
use cuspidal::groups::{cayley_ball, GroupSpecFile, DEFAULT_VERTEX_BUDGET};

fn main() -> cuspidal::Result<()> {
    let (model, subs) = GroupSpecFile::parse(
        r#"{"family":"free","rank":2,
            "subgroups":[{"name":"A","generators":["a"]}]}"#,
    )?
    .build()?;

    let ball = cayley_ball(&model, 8, &subs, DEFAULT_VERTEX_BUDGET)?;
    println!("ball: {} vertices", ball.graph().vertex_count());

    let cb = build_cusped_ball(ball, 8, DEFAULT_VERTEX_BUDGET)?;
    println!(
        "cusped: {} vertices, {} edges, {} horoball patches",
        cb.graph().vertex_count(),
        cb.graph().edge_count(),
        cb.patches().len()
    );
    println!(
        "certified radius {} ({} vertices certified)",
        cb.certified_radius(),
        cb.certified_vertices().len()
    );

    // Every patch knows its coset representative.
    let mut reps: Vec<String> =
        cb.patches().iter().take(6).map(|p| cb.ball().model().display_word(&p.rep)).collect();
    reps.sort();
    println!("first few patch reps: {}", reps.join(", "));

    // The parabolic direction gets cheap: distance to a^n through the
    // horoball beats the flat word length from n = 6 on.
    let w = model.parse_word("a^8")?;
    if let Some(v) = cb.ball().vertex_of(&w) {
        println!("d(e, a^8) in cusped metric = {}", cb.distance_from_origin(v));
    }

    let mut sidecar = Vec::new();
    cb.write_sidecar(&mut sidecar)?;
    println!("sidecar: {} bytes, one annotated vertex per line", sidecar.len());
    Ok(())
}
