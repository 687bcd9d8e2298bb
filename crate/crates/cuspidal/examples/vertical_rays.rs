//! Vertical rays into horoballs: their contraction profiles agree
//! across translated cosets, and powers of the peripheral generator are
//! logarithmically distorted.

use cuspidal::cusped::build_cusped_ball;
use cuspidal::groups::{cayley_ball, GroupSpecFile, DEFAULT_VERTEX_BUDGET};
use cuspidal::morse::{power_path_distortion, vertical_ray_contraction_audit};

fn main() -> cuspidal::Result<()> {
    let (model, subs) = GroupSpecFile::parse(
        r#"{"family":"free","rank":2,
            "subgroups":[{"name":"A","generators":["a"]}]}"#,
    )?
    .build()?;
    let ball = cayley_ball(&model, 8, &subs, DEFAULT_VERTEX_BUDGET)?;
    let cb = build_cusped_ball(ball, 8, DEFAULT_VERTEX_BUDGET)?;

    // The four cosets b a, b^-1 a, ... are swapped by ball symmetries,
    // so their ray profiles must match exactly.
    let mut picked = Vec::new();
    for rep in ["a b", "a^-1 b", "a b^-1", "a^-1 b^-1"] {
        let nf = model.normal_form(&model.parse_word(rep)?);
        let idx = cb.patches().iter().position(|p| p.rep == nf).unwrap();
        picked.push(idx);
    }
    let audit = vertical_ray_contraction_audit(&cb, &picked, 4)?;
    println!("cosets audited: {}", audit.per_coset.len());
    println!("uniformity gap across cosets: {}", audit.uniformity_gap);

    let series = power_path_distortion(&cb, &model.parse_word("a")?, 64)?;
    for n in [4u32, 16, 64] {
        let d = series.distances.iter().find(|(m, _)| *m == n).unwrap().1;
        println!("d(e, a^{n}) = {d}");
    }
    println!("log2-fit slope {:.3}", series.fit_slope);
    Ok(())
}
