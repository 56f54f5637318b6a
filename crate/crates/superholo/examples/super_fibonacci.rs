use std::error::Error;

use superholo::fib::{fib_table, identities_check, z_seq};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let z = z_seq(6);
    for (n, v) in z.iter().enumerate().skip(1) {
        println!("z_{n} = {v}");
    }
    for row in fib_table(8, 7) {
        println!("n={:2} z={:12} w={:12} lucas={:3} pass={}", row.n, row.z, row.w, row.lucas, row.pass());
        assert!(row.pass());
    }
    assert!(identities_check(8).pass());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
