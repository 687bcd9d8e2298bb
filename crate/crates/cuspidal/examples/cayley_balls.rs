//! Materialize Cayley balls for the three built-in families and print
//! their growth.

use cuspidal::groups::{cayley_ball, GroupModel, GroupSpecFile, DEFAULT_VERTEX_BUDGET};

fn main() -> cuspidal::Result<()> {
    let free = GroupModel::free(2);
    let flat = GroupModel::free_abelian(2);
    let (mixed, _) = GroupSpecFile::parse(
        r#"{"family":"free_product",
            "factors":[{"family":"free","rank":1},{"family":"free_abelian","rank":2}]}"#,
    )?
    .build()?;

    for (name, model) in [("free(2)", &free), ("Z^2", &flat), ("Z * Z^2", &mixed)] {
        print!("{name:8}");
        for r in 0..=6 {
            let ball = cayley_ball(model, r, &[], DEFAULT_VERTEX_BUDGET)?;
            print!(" {:>6}", ball.graph().vertex_count());
        }
        println!();
    }

    // Sphere sizes fall out of consecutive balls.
    let b5 = cayley_ball(&free, 5, &[], DEFAULT_VERTEX_BUDGET)?;
    let b4 = cayley_ball(&free, 4, &[], DEFAULT_VERTEX_BUDGET)?;
    println!(
        "free(2) sphere(5) = {}",
        b5.graph().vertex_count() - b4.graph().vertex_count()
    );

    let w = free.parse_word("a b a^-1 b^-1 a")?;
    println!("normal form of a b a^-1 b^-1 a: {}", free.display_word(&free.normal_form(&w)));
    Ok(())
}
