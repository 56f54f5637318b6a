// Closed-form holonomy compared entry by entry with the path product.

use std::error::Error;

use superholo::holonomy::{closed_form_corner_alt, closed_form_h, holonomy_ab, type_label};
use superholo::surface::{strip_diagonals, Frame, Triangulation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for right in [[true, true, false], [false, true, true], [true, false, true]] {
        let mut t = Triangulation::new(7, &strip_diagonals(7, &right))?;
        let (a, b) = t.longest_arc().ok_or("no long arc")?;
        let f = Frame::new(&t, a, b)?;
        f.apply_default_orientation(&mut t)?;
        let h = holonomy_ab(&t, &f)?.matrix;
        let c = closed_form_h(&t, &f)?;
        let corner = closed_form_corner_alt(&t, &f)?;
        println!(
            "{right:?}: {} fans, type {}, entries {}, corner {}",
            f.big_n(),
            type_label(&f),
            if h == c { "agree" } else { "differ" },
            if corner == h.e[2][2] { "agrees" } else { "differs" },
        );
        assert_eq!(h, c);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
