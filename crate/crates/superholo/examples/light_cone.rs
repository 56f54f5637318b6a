// The special light cone: squaring map, invariant pairing, and the triangle statements.

use std::error::Error;

use superholo::lightcone::{appendix_suite, derive_minkowski};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = derive_minkowski()?;
    for row in &m.even {
        println!("even {}", row.iter().map(|c| format!("{c:>3}")).collect::<String>());
    }
    for row in &m.odd {
        println!("odd  {}", row.iter().map(|c| format!("{c:>3}")).collect::<String>());
    }
    for c in appendix_suite()? {
        println!("{} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
        assert!(c.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
