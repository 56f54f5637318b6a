// λ-lengths of arcs in a fan, computed by flipping toward the arc.

use std::error::Error;

use superholo::surface::{fan_diagonals, Triangulation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let t = Triangulation::new(5, &fan_diagonals(5))?;
    let reg = t.registry();
    // vertices are 0-based here and 1-based in names
    let l = t.lambda_of_arc(1, 4)?;
    println!("lambda(2,5) = {}", l.to_text(reg));

    let mut flipped = t.clone();
    let new = flipped.flip(0, 2)?;
    println!("flip 1-3 gives arc {}-{}", new.0 + 1, new.1 + 1);
    println!("  lambda = {}", flipped.lambda(new.0, new.1)?.to_text(reg));
    assert_eq!(*flipped.lambda(new.0, new.1)?, t.lambda_of_arc(new.0, new.1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
