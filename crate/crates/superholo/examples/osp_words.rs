// Random words in the generators ρ, E(h), A(h|θ): membership and Berezinian.

use std::error::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superholo::holonomy::matrix_text;
use superholo::ospmat::random_word;
use superholo::superalg::VarRegistry;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut reg = VarRegistry::new();
    let evens = [reg.even("x")?, reg.even("y")?];
    let odds = [reg.odd("s")?, reg.odd("t")?];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_word(&mut rng, 6, &evens, &odds);
    println!("{}", matrix_text(&g, &reg));
    println!("ber = {}", g.ber()?.to_text(&reg));

    let mut ok = 0;
    for k in 0..100 {
        let g = random_word(&mut rng, 1 + k % 5, &evens, &odds);
        if g.is_in_osp() && g.ber()?.is_one() {
            ok += 1;
        }
    }
    println!("{ok}/100 words in osp(1|2) with Berezinian 1");
    assert_eq!(ok, 100);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
