//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superholo::fib::*;
use superholo::holonomy::*;
use superholo::lightcone::*;
use superholo::ospmat::*;
use superholo::snake::*;
use superholo::superalg::*;
use superholo::surface::*;

const SEED: u64 = 2024;

/// Every triangulation for n <= 8, 200 seeded ones for n = 9.
fn corpus() -> Vec<(u32, Vec<Edge>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for n in 4..=9u32 {
        let all = all_triangulations(n);
        if n <= 8 {
            out.extend(all.into_iter().map(|d| (n, d)));
        } else {
            out.extend(all.choose_multiple(&mut rng, 200).cloned().map(|d| (n, d)));
        }
    }
    out
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn flatness(corpus: &[(u32, Vec<Edge>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut checked = 0usize;
    for (n, d) in corpus {
        let t = Triangulation::new(*n, d).unwrap();
        let mut base = t.clone();
        if let Some((a, b)) = t.longest_arc() {
            Frame::new(&t, a, b).unwrap().apply_default_orientation(&mut base).unwrap();
        }
        if let Err(e) = check_flat(&base) {
            return outcome(false, format!("n={n} {d:?} default: {e}"));
        }
        for k in 0..50 {
            let mut r = base.clone();
            r.randomize_orientation(&mut rng);
            if let Err(e) = check_flat(&r) {
                return outcome(false, format!("n={n} {d:?} orientation {k}: {e}"));
            }
        }
        checked += 51;
    }
    outcome(true, format!("{} triangulations, {checked} orientations", corpus.len()))
}

fn lambda_entry(corpus: &[(u32, Vec<Edge>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut checked = 0usize;
    for (n, d) in corpus {
        let t = Triangulation::new(*n, d).unwrap();
        let g = Fatgraph::build(&t).unwrap();
        for i in 0..*n {
            for j in 0..*n {
                if i == j {
                    continue;
                }
                let l = t.lambda_of_arc(i, j).unwrap();
                let (ni, nj) = (g.near(i), g.near(j));
                for _ in 0..4 {
                    let s = ni[rng.gen_range(0..ni.len())];
                    let e = nj[rng.gen_range(0..nj.len())];
                    let h = g.holonomy(&g.path(s, e)).unwrap();
                    let x = h.get(0, 1);
                    if *x != l && *x != l.neg() {
                        return outcome(false, format!("n={n} {d:?} arc {}-{}", i + 1, j + 1));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} paths"))
}

fn closed_form_agrees(t0: &Triangulation, f: &Frame) -> bool {
    let mut t = t0.clone();
    f.apply_default_orientation(&mut t).unwrap();
    let h = holonomy_ab(&t, f).unwrap().matrix;
    h == closed_form_h(&t, f).unwrap() && h.e[2][2] == closed_form_corner_alt(&t, f).unwrap()
}

fn closed_form() -> Outcome {
    let mut frames = 0usize;
    // zig-zags with N <= 6 fans, both end conventions
    for n in 4..=9u32 {
        let t = Triangulation::new(n, &zigzag_diagonals(n)).unwrap();
        let s = zigzag_sequence(n);
        let (a, b) = (s[0], s[n as usize - 1]);
        let mut ends = vec![(None, None)];
        ends.push((Some(s[1]), Some(s[n as usize - 2])));
        for (c1, cn) in ends {
            let f = Frame::with_ends(&t, a, b, c1, cn).unwrap();
            if !closed_form_agrees(&t, &f) {
                return outcome(false, format!("zig-zag n={n} ends {c1:?} {cn:?}"));
            }
            frames += 1;
        }
    }
    // every path-like triangulation with at most 10 triangles
    for n in 4..=12u32 {
        let k = n as usize - 4;
        for bits in 0..1u32 << k {
            let right: Vec<bool> = (0..k).map(|i| bits >> i & 1 == 1).collect();
            let t = Triangulation::new(n, &strip_diagonals(n, &right)).unwrap();
            let (a, b) = t.longest_arc().unwrap();
            let f = Frame::new(&t, a, b).unwrap();
            if !closed_form_agrees(&t, &f) {
                return outcome(false, format!("fan strip n={n} {right:?}"));
            }
            frames += 1;
        }
    }
    // every frame and end choice for n <= 8
    for n in 4..=8u32 {
        for d in all_triangulations(n) {
            let t = Triangulation::new(n, &d).unwrap();
            for a in 0..n {
                for b in 0..n {
                    for c1 in 0..n {
                        for cn in 0..n {
                            let Ok(f) = Frame::with_ends(&t, a, b, Some(c1), Some(cn)) else { continue };
                            if !closed_form_agrees(&t, &f) {
                                return outcome(false, format!("n={n} {d:?} arc {}-{}", a + 1, b + 1));
                            }
                            frames += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(true, format!("{frames} frames, nine entries and both corner forms"))
}

fn combinatorial(corpus: &[(u32, Vec<Edge>)]) -> Outcome {
    let mut frames = 0usize;
    for (n, d) in corpus {
        let t = Triangulation::new(*n, d).unwrap();
        // arcs from the first three vertices reach every frame shape up to symmetry
        for a in 0..3 {
            for b in 0..*n {
                for c1 in 0..*n {
                    for cn in 0..*n {
                        let Ok(f) = Frame::with_ends(&t, a, b, Some(c1), Some(cn)) else { continue };
                        let mut tt = t.clone();
                        f.apply_default_orientation(&mut tt).unwrap();
                        let r = match combo_check(&tt, &f, 8) {
                            Ok(r) => r,
                            Err(SnakeError::TooLarge(..)) => continue,
                            Err(e) => return outcome(false, format!("n={n} {d:?}: {e}")),
                        };
                        if !(r.matches && r.corner_identity && r.boundary_free && r.classical) {
                            return outcome(false, format!("n={n} {d:?} arc {}-{}: {r:?}", a + 1, b + 1));
                        }
                        frames += 1;
                    }
                }
            }
        }
    }
    outcome(true, format!("{frames} frames up to 8 tiles"))
}

fn fibonacci() -> Outcome {
    let rows = fib_table(12, 9);
    if let Some(r) = rows.iter().find(|r| !r.pass()) {
        return outcome(false, format!("n={}: {r:?}", r.n));
    }
    let z = z_seq(4);
    if z[3].to_string() != "2 + σθ" || z[4].to_string() != "5 + 6σθ" {
        return outcome(false, format!("z3 = {}, z4 = {}", z[3], z[4]));
    }
    // (3,3) entry against the Lucas numbers
    let (_, s, t) = registry();
    let st = SuperRat::odd_var(s).mul(&SuperRat::odd_var(t));
    for n in 3..=12usize {
        let l = lucas(2 * n as i64 - 4) - 2;
        let want = SuperRat::one().sub(&st.scale(Coeff::from_integer(l as i64)));
        if *h_n(n, s, t).get(2, 2) != want {
            return outcome(false, format!("corner entry n={n}"));
        }
    }
    // classical limits from the Fibonacci numbers
    let fibo = |k: i64| -> i128 {
        let (mut a, mut b) = (0i128, 1i128);
        for _ in 0..k {
            (a, b) = (b, a + b);
        }
        a
    };
    let (zs, ws) = zw_coupled(12);
    for n in 2..=12usize {
        if zs[n].x != fibo(2 * n as i64 - 3) || ws[n].x != fibo(2 * n as i64 - 2) {
            return outcome(false, format!("classical limit n={n}"));
        }
        if n >= 3 && zs[n].x != 3 * zs[n - 1].x - zs[n - 2].x {
            return outcome(false, format!("every-other recurrence n={n}"));
        }
    }
    let f: Vec<i128> = (0..=20).map(fibo).collect();
    if (4..=20).any(|k| f[k] != 3 * f[k - 2] - f[k - 4]) {
        return outcome(false, "f_n = 3f_{n-2} - f_{n-4}");
    }
    if (1..20).any(|k| f[k + 1] * f[k - 1] - f[k] * f[k] != if k % 2 == 0 { 1 } else { -1 }) {
        return outcome(false, "Cassini");
    }
    let id = identities_check(12);
    if !id.pass() {
        return outcome(false, format!("{id:?}"));
    }
    outcome(true, "n <= 12 by recurrence and matrix power, n <= 9 by dimers")
}

fn osp_membership(corpus: &[(u32, Vec<Edge>)]) -> Outcome {
    let mut holonomies = 0usize;
    for (n, d) in corpus.iter().filter(|(n, _)| *n <= 7) {
        let t = Triangulation::new(*n, d).unwrap();
        let g = Fatgraph::build(&t).unwrap();
        let m = g.transport(0);
        for h in m {
            if !h.is_in_osp() || !h.ber().map(|b| b.is_one()).unwrap_or(false) {
                return outcome(false, format!("n={n} {d:?}"));
            }
            holonomies += 1;
        }
        if let Some((a, b)) = t.longest_arc() {
            let mut tt = t.clone();
            let f = Frame::new(&t, a, b).unwrap();
            f.apply_default_orientation(&mut tt).unwrap();
            let h = holonomy_ab(&tt, &f).unwrap().matrix;
            if !h.is_in_osp() || !h.ber().map(|b| b.is_one()).unwrap_or(false) {
                return outcome(false, format!("H_ab n={n} {d:?}"));
            }
            holonomies += 1;
        }
    }
    let mut reg = VarRegistry::new();
    let evens = [reg.even("x").unwrap(), reg.even("y").unwrap()];
    let odds = [reg.odd("s").unwrap(), reg.odd("t").unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let words: Vec<SuperMatrix> = (0..500).map(|k| random_word(&mut rng, 1 + k % 6, &evens, &odds)).collect();
    for (k, g) in words.iter().enumerate() {
        if !g.is_in_osp() || !g.ber().unwrap().is_one() {
            return outcome(false, format!("word {k}"));
        }
        let h = &words[(k + 1) % words.len()];
        if g.mul(h).ber().unwrap() != g.ber().unwrap().mul(&h.ber().unwrap()) {
            return outcome(false, format!("multiplicativity at word {k}"));
        }
    }
    outcome(true, format!("{holonomies} holonomies, 500 words"))
}

fn appendix() -> Outcome {
    let mut checks = match appendix_suite() {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (r, v, w) = generic_pair();
    let evens: Vec<u16> = (0..r.n_even() as u16).collect();
    let odds: Vec<u16> = (0..r.n_odd() as u16).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let ws: Vec<SuperMatrix> = (0..100).map(|k| random_word(&mut rng, 1 + k % 4, &evens, &odds)).collect();
    match word_suite(&ws, &v, &w) {
        Ok(c) => checks.extend(c),
        Err(e) => return outcome(false, e.to_string()),
    }
    match checks.iter().find(|c| !c.pass) {
        Some(c) => outcome(false, c.name),
        None => outcome(true, format!("{} statements, 100 words", checks.len())),
    }
}

// Reference product: odd words as index lists, sign by counting swaps.
fn oracle_mul(a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
    let mut out = Vec::new();
    for s in a.terms() {
        for t in b.terms() {
            let mut v: Vec<u16> = s.odd.indices().chain(t.odd.indices()).collect();
            let mut swaps = 0;
            for i in 0..v.len() {
                for j in 0..v.len() - 1 - i {
                    if v[j] > v[j + 1] {
                        v.swap(j, j + 1);
                        swaps += 1;
                    }
                }
            }
            if v.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let c = s.coeff * t.coeff;
            out.push(Term {
                coeff: if swaps % 2 == 1 { -c } else { c },
                mono: s.mono.mul(&t.mono),
                odd: OddWord(v.iter().fold(0, |w, &i| w | 1 << i)),
            });
        }
    }
    SuperPoly::from_terms(out)
}

fn parts(p: &SuperPoly) -> (SuperPoly, SuperPoly) {
    let pick = |odd: u32| SuperPoly::from_terms(p.terms().iter().filter(|t| t.odd.len() % 2 == odd).cloned().collect());
    (pick(0), pick(1))
}

fn kernel() -> Outcome {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let result = runner.run(&any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&mut rng, 3, 4, 4);
        let b = random_poly(&mut rng, 3, 4, 4);
        let c = random_poly(&mut rng, 3, 4, 4);
        prop_assert_eq!(a.mul(&b), oracle_mul(&a, &b));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let (a0, a1) = parts(&a);
        let (b0, b1) = parts(&b);
        prop_assert_eq!(a0.mul(&b), b.mul(&a0));
        prop_assert_eq!(a1.mul(&b1), b1.mul(&a1).neg());
        prop_assert_eq!(a1.mul(&b0), b0.mul(&a1));
        let v = rng.gen_range(0..4u16);
        let leibniz = |x: &SuperPoly, sign: bool| {
            let rhs = x.toggle(v).mul(&b).add(&if sign { x.mul(&b.toggle(v)).neg() } else { x.mul(&b.toggle(v)) });
            x.mul(&b).toggle(v) == rhs
        };
        prop_assert!(leibniz(&a0, false));
        prop_assert!(leibniz(&a1, true));
        if !b.split_body().0.is_zero() {
            prop_assert_eq!(a.mul(&b).div_exact(&b), Ok(a.clone()));
        }
        Ok(())
    });
    match result {
        Ok(()) => outcome(true, "1000 seeded elements"),
        Err(e) => outcome(false, e.to_string()),
    }
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + Sync + 'a>;

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("flatness", Box::new(|| flatness(&corpus))),
        ("lambda entry of holonomy", Box::new(|| lambda_entry(&corpus))),
        ("closed form of H_ab", Box::new(closed_form)),
        ("double dimer matrix", Box::new(|| combinatorial(&corpus))),
        ("super Fibonacci", Box::new(fibonacci)),
        ("osp membership and Berezinian", Box::new(|| osp_membership(&corpus))),
        ("light cone", Box::new(appendix)),
        ("algebra kernel", Box::new(kernel)),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t0 = Instant::now();
                    let r = f();
                    (r, t0.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (outcome(false, "panicked"), 0.0)))
            .collect()
    });
    let mut failed = 0;
    for (k, ((name, _), (r, secs))) in criteria.iter().zip(&results).enumerate() {
        let tag = if r.ok { "PASS" } else { "FAIL" };
        println!("{tag} {}. {name}: {} ({secs:.1}s)", k + 1, r.detail);
        failed += usize::from(!r.ok);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
