// Parsing, products with anticommuting generators, exact division and contraction.

use std::error::Error;

use superholo::superalg::{SuperPoly, SuperRat, VarRegistry};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut reg = VarRegistry::new();
    for n in ["a", "b", "c"] {
        reg.even(n)?;
    }
    let s = reg.odd("s")?;
    reg.odd("t")?;

    let p = SuperPoly::parse("a^(1/2)*s + b*t", &reg)?;
    println!("p^2 = {}", p.mul(&p).to_text(&reg));
    let q = SuperPoly::parse("a + b + s.t", &reg)?;
    let r = p.mul(&q);
    println!("p*q = {}", r.to_text(&reg));
    println!("(p*q)/q = {}", r.div_exact(&q)?.to_text(&reg));
    println!("contract s: {}", r.toggle(s).to_text(&reg));

    let x = SuperRat::parse("(a*c + b*c)/(a + b)", &reg)?;
    println!("{} is Laurent: {}", x.to_text(&reg), x.is_laurent());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
