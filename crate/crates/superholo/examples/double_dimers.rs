// Snake graph of an arc, its double dimer covers and the combinatorial holonomy.

use std::error::Error;

use superholo::holonomy::matrix_text;
use superholo::snake::{build_snake, combo_check, combo_matrix, extend};
use superholo::surface::{zigzag_diagonals, Frame, Triangulation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut t = Triangulation::new(6, &zigzag_diagonals(6))?;
    let (a, b) = t.longest_arc().ok_or("no long arc")?;
    let f = Frame::new(&t, a, b)?;
    f.apply_default_orientation(&mut t)?;

    let x = extend(&t, &f)?;
    let g = build_snake(&x);
    let covers = g.covers(None, None);
    let cycles: usize = covers.iter().map(|c| c.cycles.len()).sum();
    println!("{} tiles, {} double dimer covers, {} cycles in total", x.d(), covers.len(), cycles);

    let m = combo_matrix(&t, &f, 8)?;
    println!("{}", matrix_text(&m, t.registry()));
    let r = combo_check(&t, &f, 8)?;
    println!("{r:?}");
    assert!(r.matches && r.corner_identity && r.boundary_free && r.classical);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
