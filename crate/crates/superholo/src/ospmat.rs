//! (2|1) supermatrices `[[a,b,γ],[c,d,δ],[α,β,e]]` and the generators of the
//! connection.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::superalg::{AlgError, Coeff, RatJson, SuperRat, VarRegistry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("entry ({0},{1}) has the wrong parity")]
    ParityViolation(usize, usize),
    #[error("matrix is not in osp(1|2)")]
    NotOsp,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

const ODD_SLOTS: [(usize, usize); 4] = [(0, 2), (1, 2), (2, 0), (2, 1)];

fn odd_slot(i: usize, j: usize) -> bool {
    ODD_SLOTS.contains(&(i, j))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    pub e: [[SuperRat; 3]; 3],
}

fn c(n: i64) -> SuperRat {
    SuperRat::from(n)
}

impl SuperMatrix {
    pub fn from_rows(e: [[SuperRat; 3]; 3]) -> Self {
        SuperMatrix { e }
    }

    pub fn identity() -> Self {
        Self::diag(c(1), c(1), c(1))
    }

    pub fn diag(a: SuperRat, d: SuperRat, e: SuperRat) -> Self {
        let z = SuperRat::zero;
        SuperMatrix {
            e: [[a, z(), z()], [z(), d, z()], [z(), z(), e]],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &SuperRat {
        &self.e[i][j]
    }

    /// Checks that even slots hold even elements and odd slots odd ones.
    pub fn check_parity(&self) -> Result<(), MatError> {
        for i in 0..3 {
            for j in 0..3 {
                let x = &self.e[i][j];
                let ok = x.is_zero() || if odd_slot(i, j) { x.is_odd() } else { x.is_even() };
                if !ok {
                    return Err(MatError::ParityViolation(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, o: &SuperMatrix) -> SuperMatrix {
        let mut out: [[SuperRat; 3]; 3] = Default::default();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = SuperRat::zero();
                for k in 0..3 {
                    let (x, y) = (&self.e[i][k], &o.e[k][j]);
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                *slot = acc;
            }
        }
        SuperMatrix { e: out }
    }

    pub fn scale_rows(&self, r: [&SuperRat; 3]) -> SuperMatrix {
        let mut m = self.clone();
        for (i, f) in r.iter().enumerate() {
            for j in 0..3 {
                m.e[i][j] = f.mul(&self.e[i][j]);
            }
        }
        m
    }

    pub fn scale_cols(&self, r: [&SuperRat; 3]) -> SuperMatrix {
        let mut m = self.clone();
        for i in 0..3 {
            for (j, f) in r.iter().enumerate() {
                m.e[i][j] = self.e[i][j].mul(f);
            }
        }
        m
    }

    pub fn neg(&self) -> SuperMatrix {
        let mut m = self.clone();
        for row in m.e.iter_mut() {
            for x in row.iter_mut() {
                *x = x.neg();
            }
        }
        m
    }

    /// `[[Aᵀ, Ψᵀ], [-Ξᵀ, Bᵀ]]`.
    pub fn super_transpose(&self) -> SuperMatrix {
        let e = &self.e;
        SuperMatrix {
            e: [
                [e[0][0].clone(), e[1][0].clone(), e[2][0].clone()],
                [e[0][1].clone(), e[1][1].clone(), e[2][1].clone()],
                [e[0][2].neg(), e[1][2].neg(), e[2][2].clone()],
            ],
        }
    }

    /// Berezinian of a matrix with invertible `e`.
    pub fn ber(&self) -> Result<SuperRat, MatError> {
        let [[a, b, g], [cc, d, dl], [al, be, e]] = &self.e;
        let ei = e.inv()?;
        let ei2 = ei.mul(&ei);
        let ei3 = ei2.mul(&ei);
        let t0 = a.mul(d).sub(&b.mul(cc)).mul(&ei);
        let t1 = al.mul(&d.mul(g).sub(&b.mul(dl))).mul(&ei2);
        let t2 = be.mul(&a.mul(dl).sub(&cc.mul(g))).mul(&ei2);
        let t3 = al.mul(be).mul(g).mul(dl).mul(&ei3).scale(Coeff::from_integer(2));
        Ok(t0.add(&t1).add(&t2).sub(&t3))
    }

    /// The defining relations of `osp(1|2)`, one entry per relation that fails.
    pub fn osp_defects(&self) -> Vec<&'static str> {
        let [[a, b, g], [cc, d, dl], [al, be, e]] = &self.e;
        let mut bad = Vec::new();
        if *e != c(1).add(&al.mul(be)) {
            bad.push("e = 1 + αβ");
        }
        match e.inv() {
            Ok(ei) if ei == a.mul(d).sub(&b.mul(cc)) => {}
            _ => bad.push("1/e = ad - bc"),
        }
        if *al != cc.mul(g).sub(&a.mul(dl)) {
            bad.push("α = cγ - aδ");
        }
        if *be != d.mul(g).sub(&b.mul(dl)) {
            bad.push("β = dγ - bδ");
        }
        if *g != a.mul(be).sub(&b.mul(al)) {
            bad.push("γ = aβ - bα");
        }
        if *dl != cc.mul(be).sub(&d.mul(al)) {
            bad.push("δ = cβ - dα");
        }
        bad
    }

    pub fn is_in_osp(&self) -> bool {
        self.check_parity().is_ok() && self.osp_defects().is_empty()
    }

    /// `Mˢᵗ J M == J`.
    pub fn preserves_j(&self) -> bool {
        self.super_transpose().mul(&gen_j()).mul(self) == gen_j()
    }

    /// Closed-form inverse, valid on `osp(1|2)`.
    pub fn inverse_osp(&self) -> Result<SuperMatrix, MatError> {
        if !self.is_in_osp() {
            return Err(MatError::NotOsp);
        }
        Ok(self.inverse_osp_unchecked())
    }

    pub fn inverse_osp_unchecked(&self) -> SuperMatrix {
        let [[a, b, g], [cc, d, dl], [al, be, e]] = &self.e;
        SuperMatrix {
            e: [
                [d.clone(), b.neg(), be.neg()],
                [cc.neg(), a.clone(), al.clone()],
                [dl.clone(), g.neg(), e.clone()],
            ],
        }
    }

    pub fn to_text(&self, reg: &VarRegistry) -> [[String; 3]; 3] {
        self.e.clone().map(|row| row.map(|x| x.to_text(reg)))
    }

    pub fn to_json(&self, reg: &VarRegistry) -> MatrixJson {
        MatrixJson(self.e.clone().map(|row| row.map(|x| x.to_json(reg))))
    }

    pub fn from_json(j: &MatrixJson, reg: &VarRegistry) -> Result<SuperMatrix, MatError> {
        let mut out: [[SuperRat; 3]; 3] = Default::default();
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] = SuperRat::from_json(&j.0[i][k], reg)?;
            }
        }
        Ok(SuperMatrix { e: out })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson(pub [[RatJson; 3]; 3]);

/// `E(x) = [[0,-x,0],[1/x,0,0],[0,0,1]]`.
pub fn gen_e(x: &SuperRat) -> Result<SuperMatrix, MatError> {
    let z = SuperRat::zero;
    Ok(SuperMatrix {
        e: [[z(), x.neg(), z()], [x.inv()?, z(), z()], [z(), z(), c(1)]],
    })
}

/// `A(h|t) = [[1,0,0],[h,1,-t],[t,0,1]]`.
pub fn gen_a(h: &SuperRat, t: &SuperRat) -> SuperMatrix {
    let z = SuperRat::zero;
    SuperMatrix {
        e: [[c(1), z(), z()], [h.clone(), c(1), t.neg()], [t.clone(), z(), c(1)]],
    }
}

pub fn rho() -> SuperMatrix {
    SuperMatrix::diag(c(-1), c(-1), c(1))
}

pub fn gen_j() -> SuperMatrix {
    let z = SuperRat::zero;
    SuperMatrix {
        e: [[z(), c(1), z()], [c(-1), z(), z()], [z(), z(), c(1)]],
    }
}

/// Product of `len` random generators. `E` and `A` draw their even argument
/// from `evens` or a small nonzero integer, and the odd argument of `A` from
/// `odds` (with a random sign) or zero.
pub fn random_word<R: Rng>(rng: &mut R, len: usize, evens: &[u16], odds: &[u16]) -> SuperMatrix {
    let even = |rng: &mut R| {
        if !evens.is_empty() && rng.gen_bool(0.6) {
            SuperRat::even_var(evens[rng.gen_range(0..evens.len())])
        } else {
            let k = rng.gen_range(1..=3);
            c(if rng.gen_bool(0.5) { k } else { -k })
        }
    };
    let mut m = SuperMatrix::identity();
    for _ in 0..len {
        let g = match rng.gen_range(0..5) {
            0 => rho(),
            1 | 2 => gen_e(&even(rng)).expect("nonzero argument"),
            _ => {
                let h = even(rng);
                let t = if odds.is_empty() || rng.gen_bool(0.2) {
                    SuperRat::zero()
                } else {
                    let t = SuperRat::odd_var(odds[rng.gen_range(0..odds.len())]);
                    if rng.gen_bool(0.5) { t } else { t.neg() }
                };
                gen_a(&h, &t)
            }
        };
        m = g.mul(&m);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::VarRegistry;

    fn setup() -> (VarRegistry, SuperRat, SuperRat, SuperRat) {
        let mut r = VarRegistry::new();
        let x = r.even("x").unwrap();
        let h = r.even("h").unwrap();
        let t = r.odd("t").unwrap();
        (r, SuperRat::even_var(x), SuperRat::even_var(h), SuperRat::odd_var(t))
    }

    #[test]
    fn generator_relations() {
        let (_, x, h, t) = setup();
        let e = gen_e(&x).unwrap();
        let a = gen_a(&h, &t);
        assert_eq!(e.mul(&e), rho());
        assert_eq!(rho().mul(&e), gen_e(&x.neg()).unwrap());
        assert_eq!(e.inverse_osp().unwrap(), rho().mul(&e));
        let ai = gen_a(&h.neg(), &t.neg());
        assert_eq!(a.mul(&ai), SuperMatrix::identity());
        assert_eq!(a.inverse_osp().unwrap(), ai);
        assert_eq!(rho().mul(&a).mul(&rho()), gen_a(&h, &t.neg()));
        for m in [&e, &a, &rho(), &gen_j()] {
            assert!(m.is_in_osp());
            assert!(m.preserves_j());
            assert!(m.ber().unwrap().is_one());
        }
    }

    #[test]
    fn random_words_are_osp() {
        use rand::{rngs::StdRng, SeedableRng};
        let (r, ..) = setup();
        let mut rng = StdRng::seed_from_u64(3);
        let (evens, odds) = ([0, 1], [0]);
        for _ in 0..20 {
            let g = random_word(&mut rng, 5, &evens, &odds);
            let h = random_word(&mut rng, 3, &evens, &odds);
            assert!(g.is_in_osp(), "{:?}", g.to_text(&r));
            assert!(g.ber().unwrap().is_one());
            assert_eq!(g.mul(&h).ber().unwrap(), g.ber().unwrap().mul(&h.ber().unwrap()));
        }
    }

    #[test]
    fn ber_two_odd_variables() {
        use rand::{rngs::StdRng, SeedableRng};
        let mut r = VarRegistry::new();
        let evens = [r.even("x").unwrap(), r.even("y").unwrap()];
        let odds = [r.odd("s").unwrap(), r.odd("t").unwrap()];
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let g = random_word(&mut rng, 5, &evens, &odds);
            let h = random_word(&mut rng, 3, &evens, &odds);
            assert!(g.is_in_osp(), "{:?}", g.to_text(&r));
            assert!(g.ber().unwrap().is_one());
            assert_eq!(g.mul(&h).ber().unwrap(), g.ber().unwrap().mul(&h.ber().unwrap()));
        }
    }

    // ber(MN) = ber(M)ber(N) for unconstrained matrices with two odd variables
    #[test]
    fn ber_multiplicative_general() {
        use rand::{rngs::StdRng, SeedableRng};
        let mut r = VarRegistry::new();
        let x = SuperRat::even_var(r.even("x").unwrap());
        let y = SuperRat::even_var(r.even("y").unwrap());
        let s = SuperRat::odd_var(r.odd("s").unwrap());
        let t = SuperRat::odd_var(r.odd("t").unwrap());
        let mut rng = StdRng::seed_from_u64(5);
        let gen = |rng: &mut StdRng| {
            let mut m = SuperMatrix::identity();
            let pick_even = |rng: &mut StdRng| match rng.gen_range(0..4) {
                0 => x.clone(),
                1 => y.clone(),
                2 => c(rng.gen_range(-3..=3)),
                _ => x.mul(&y).add(&c(1)),
            };
            let pick_odd = |rng: &mut StdRng| match rng.gen_range(0..3) {
                0 => s.clone(),
                1 => t.clone(),
                _ => s.mul(&x).sub(&t),
            };
            for i in 0..2 {
                for j in 0..2 {
                    m.e[i][j] = pick_even(rng);
                }
                m.e[i][2] = pick_odd(rng);
                m.e[2][i] = pick_odd(rng);
            }
            m.e[2][2] = c(rng.gen_range(1..=3)).add(&s.mul(&t));
            m
        };
        for _ in 0..30 {
            let m = gen(&mut rng);
            let n = gen(&mut rng);
            let (bm, bn) = match (m.ber(), n.ber()) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            assert_eq!(m.mul(&n).ber().unwrap(), bm.mul(&bn), "{:?} {:?}", m.to_text(&r), n.to_text(&r));
        }
    }

    #[test]
    fn parity_violation_detected() {
        let (_, x, _, t) = setup();
        let mut m = SuperMatrix::identity();
        m.e[0][2] = x;
        assert_eq!(m.check_parity(), Err(MatError::ParityViolation(1, 3)));
        let mut m = SuperMatrix::identity();
        m.e[0][0] = t;
        assert!(m.check_parity().is_err());
    }
}
