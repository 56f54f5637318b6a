// The osp(1|2) connection on a zig-zag: flatness and the holonomy along the long arc.

use std::error::Error;

use superholo::holonomy::{check_flat, holonomy_ab, matrix_text, type_label};
use superholo::surface::{zigzag_diagonals, Frame, Triangulation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut t = Triangulation::new(6, &zigzag_diagonals(6))?;
    let (a, b) = t.longest_arc().ok_or("no long arc")?;
    let f = Frame::new(&t, a, b)?;
    f.apply_default_orientation(&mut t)?;
    check_flat(&t)?;
    println!("flat: every face monodromy is the identity");

    let h = holonomy_ab(&t, &f)?;
    println!("H from {} to {}, type {}:", a + 1, b + 1, type_label(&f));
    println!("{}", matrix_text(&h.matrix, t.registry()));
    assert!(h.matrix.is_in_osp());
    assert_eq!(*h.matrix.get(0, 1), t.lambda_of_arc(a, b)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
