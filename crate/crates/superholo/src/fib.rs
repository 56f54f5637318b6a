//! Super Fibonacci numbers of the annulus: the sequences `z_n`, `w_n` with all
//! λ-lengths equal to 1 and two odd generators `σ`, `θ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::ospmat::{gen_a, gen_e, rho, SuperMatrix};
use crate::snake::{DoubleDimerCover, SnakeGraph};
use crate::superalg::{SuperRat, VarRegistry};

/// `x + y·σθ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FibAlgebra {
    pub x: i128,
    pub y: i128,
}

/// `σθ`.
pub const ST: FibAlgebra = FibAlgebra { x: 0, y: 1 };

impl FibAlgebra {
    pub const fn new(x: i128, y: i128) -> Self {
        FibAlgebra { x, y }
    }

    pub const fn int(x: i128) -> Self {
        FibAlgebra { x, y: 0 }
    }

    pub fn to_super(self, sigma: u16, theta: u16) -> SuperRat {
        let st = SuperRat::odd_var(sigma).mul(&SuperRat::odd_var(theta));
        SuperRat::from(self.x as i64).add(&st.scale((self.y as i64).into()))
    }
}

impl Add for FibAlgebra {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FibAlgebra::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for FibAlgebra {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        FibAlgebra::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for FibAlgebra {
    type Output = Self;
    fn neg(self) -> Self {
        FibAlgebra::new(-self.x, -self.y)
    }
}

impl Mul for FibAlgebra {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        FibAlgebra::new(self.x * o.x, self.x * o.y + self.y * o.x)
    }
}

impl fmt::Display for FibAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, 1) => write!(f, "σθ"),
            (0, -1) => write!(f, "-σθ"),
            (x, 1) => write!(f, "{x} + σθ"),
            (x, -1) => write!(f, "{x} - σθ"),
            (0, y) => write!(f, "{y}σθ"),
            (x, y) if y < 0 => write!(f, "{x} - {}σθ", -y),
            (x, y) => write!(f, "{x} + {y}σθ"),
        }
    }
}

/// Perfect matchings of a strip of `k` tiles, for `k >= -3`
/// (`x_{-3} = 1, x_{-2} = 0, x_{-1} = 1, x_0 = 1, x_1 = 2`).
pub fn x(k: i64) -> i128 {
    assert!(k >= -3, "x_k is tabulated from k = -3");
    let (mut a, mut b) = (1i128, 0i128);
    for _ in -3..k {
        (a, b) = (b, a + b);
    }
    a
}

/// Lucas numbers, `ℓ_1 = 1, ℓ_2 = 3`.
pub fn lucas(k: i64) -> i128 {
    assert!(k >= 0);
    let (mut a, mut b) = (2i128, 1i128);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

/// `z_1 .. z_n` from `z_n = (3+2σθ) z_{n-1} - z_{n-2} - σθ`; index 0 unused.
pub fn z_seq(n: usize) -> Vec<FibAlgebra> {
    let mut z = vec![FibAlgebra::int(0), FibAlgebra::int(1), FibAlgebra::int(1)];
    let c = FibAlgebra::new(3, 2);
    for k in 3..=n {
        let next = c * z[k - 1] - z[k - 2] - ST;
        z.push(next);
    }
    z.truncate(n + 1);
    z
}

/// `(z, w)` for indices `1..=n` from the coupled recurrences
/// `z_n = z_{n-1} + (1+σθ) w_{n-1}` and `w_n = w_{n-1} + (1+σθ) z_n - σθ`,
/// starting at `z_1 = 1, w_1 = 0`.
pub fn zw_coupled(n: usize) -> (Vec<FibAlgebra>, Vec<FibAlgebra>) {
    let one_st = FibAlgebra::new(1, 1);
    let mut z = vec![FibAlgebra::int(0), FibAlgebra::int(1)];
    let mut w = vec![FibAlgebra::int(0), FibAlgebra::int(0)];
    for k in 2..=n {
        let zk = z[k - 1] + one_st * w[k - 1];
        let wk = w[k - 1] + one_st * zk - ST;
        z.push(zk);
        w.push(wk);
    }
    z.truncate(n + 1);
    w.truncate(n + 1);
    (z, w)
}

pub fn w_seq(n: usize) -> Vec<FibAlgebra> {
    zw_coupled(n).1
}

/// Weight of a cover of a straight strip whose triangles alternate
/// `θ, σ, θ, …`: a cycle enclosing an odd number of tiles ends on one `σ` and
/// one `θ` and contributes `σθ`; an even cycle ends on a repeated generator.
pub fn strip_cover_weight(c: &DoubleDimerCover) -> FibAlgebra {
    let mut w = FibAlgebra::int(1);
    for cy in &c.cycles {
        let (s, t) = cy.tiles;
        if (t - s) % 2 == 1 {
            return FibAlgebra::int(0);
        }
        w = w * ST;
    }
    w
}

/// Generating function of the double dimer covers of a strip of `k` tiles.
pub fn strip_series(k: usize) -> FibAlgebra {
    if k == 0 {
        return FibAlgebra::int(1);
    }
    let g = SnakeGraph::strip(k);
    g.covers(None, None).iter().fold(FibAlgebra::int(0), |acc, c| acc + strip_cover_weight(c))
}

/// Registry with the two odd generators, `σ` before `θ`.
pub fn registry() -> (VarRegistry, u16, u16) {
    let mut r = VarRegistry::new();
    let s = r.odd("sigma").expect("fresh registry");
    let t = r.odd("theta").expect("fresh registry");
    (r, s, t)
}

/// `X = E⁻¹ A_θ⁻¹ ρ E A_σ ρ` with `E = E(1)`, `A_t = A(1|t)`.
pub fn step_matrix(sigma: u16, theta: u16) -> SuperMatrix {
    let one = SuperRat::one();
    let e = gen_e(&one).expect("1 is invertible");
    let ei = rho().mul(&e);
    let th = SuperRat::odd_var(theta);
    let at_inv = gen_a(&one.neg(), &th.neg());
    let a_s = gen_a(&one, &SuperRat::odd_var(sigma));
    ei.mul(&at_inv).mul(&rho()).mul(&e).mul(&a_s).mul(&rho())
}

/// `H_n = X^{n-2} E⁻¹`, for `n >= 2`.
pub fn h_n(n: usize, sigma: u16, theta: u16) -> SuperMatrix {
    assert!(n >= 2);
    let xm = step_matrix(sigma, theta);
    let mut m = rho().mul(&gen_e(&SuperRat::one()).expect("1 is invertible"));
    for _ in 2..n {
        m = xm.mul(&m);
    }
    m
}

/// The displayed closed form of `H_n` in terms of `z_n`, `z_{n-1}`,
/// `w_{n-1}` and `ℓ_{2n-4}`, for `n >= 3`.
pub fn closed_form_h_n(n: usize, sigma: u16, theta: u16) -> SuperMatrix {
    assert!(n >= 3);
    let (z, w) = zw_coupled(n);
    let lift = |a: FibAlgebra| a.to_super(sigma, theta);
    let s = SuperRat::odd_var(sigma);
    let t = SuperRat::odd_var(theta);
    let (zn, zp, wp) = (lift(z[n]), lift(z[n - 1]), lift(w[n - 1]));
    let one = SuperRat::one();
    let l = lucas(2 * n as i64 - 4);
    let e33 = lift(FibAlgebra::int(1) - FibAlgebra::new(0, l - 2));
    SuperMatrix::from_rows([
        [wp.neg(), zn.clone(), zn.sub(&one).mul(&s).add(&wp.mul(&t))],
        [zp.neg(), wp.clone(), zp.sub(&one).mul(&t).add(&wp.mul(&s))],
        [
            zp.sub(&one).mul(&s).sub(&wp.mul(&t)),
            zn.sub(&one).mul(&t).sub(&wp.mul(&s)),
            e33,
        ],
    ])
}

/// One row of the three-route comparison.
#[derive(Clone, Debug, Serialize)]
pub struct FibRow {
    pub n: usize,
    pub z: String,
    pub w: String,
    pub lucas: i128,
    /// The two recurrences agree.
    pub recurrences: bool,
    /// `H_n(1,2) = z_n`, `H_n(2,2) = w_{n-1}`, `H_n(2,1) = -z_{n-1}`.
    pub matrix: bool,
    /// Strips `G_{2n-5}` and `G_{2n-4}`; absent when not enumerated.
    pub dimers: Option<bool>,
    pub closed_form: bool,
    pub osp: bool,
}

impl FibRow {
    pub fn pass(&self) -> bool {
        self.recurrences && self.matrix && self.dimers != Some(false) && self.closed_form && self.osp
    }
}

/// Compares every route for `2 <= n <= n_max`, enumerating strips for
/// `n <= dimer_max`.
pub fn fib_table(n_max: usize, dimer_max: usize) -> Vec<FibRow> {
    let (_, s, t) = registry();
    let zr = z_seq(n_max);
    let (z, w) = zw_coupled(n_max);
    let lift = |a: FibAlgebra| a.to_super(s, t);
    (2..=n_max)
        .map(|n| {
            let h = h_n(n, s, t);
            let matrix = *h.get(0, 1) == lift(z[n])
                && *h.get(1, 1) == lift(w[n - 1])
                && *h.get(1, 0) == lift(z[n - 1]).neg();
            let dimers = (n >= 3 && n <= dimer_max)
                .then(|| strip_series(2 * n - 5) == z[n] && strip_series(2 * n - 4) == w[n]);
            FibRow {
                n,
                z: z[n].to_string(),
                w: w[n].to_string(),
                lucas: lucas(2 * n as i64 - 4),
                recurrences: zr[n] == z[n],
                matrix,
                dimers,
                closed_form: n < 3 || h == closed_form_h_n(n, s, t),
                osp: h.is_in_osp(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub cassini: bool,
    pub lucas: bool,
    pub every_other: bool,
    /// Classical limits `z_n|₀ = x_{2n-5}`, `w_n|₀ = x_{2n-4}`.
    pub classical: bool,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.cassini && self.lucas && self.every_other && self.classical
    }
}

pub fn identities_check(n_max: usize) -> IdentityReport {
    let kmax = 2 * n_max as i64;
    let cassini = (-2..=kmax).all(|k| {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        x(k + 1) * x(k - 1) - x(k) * x(k) == sign
    });
    let lucas_ok = (1..=kmax).all(|k| lucas(k) == x(k - 3) + x(k - 1));
    let (z, w) = zw_coupled(n_max);
    let every_other = (3..=n_max).all(|n| z[n].x == 3 * z[n - 1].x - z[n - 2].x);
    let classical = (1..=n_max).all(|n| {
        let n = n as i64;
        z[n as usize].x == x(2 * n - 5) && w[n as usize].x == x(2 * n - 4)
    });
    IdentityReport { cassini, lucas: lucas_ok, every_other, classical }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let z = z_seq(4);
        assert_eq!(z[1], FibAlgebra::int(1));
        assert_eq!(z[2], FibAlgebra::int(1));
        assert_eq!(z[3], FibAlgebra::new(2, 1));
        assert_eq!(z[4], FibAlgebra::new(5, 6));
        assert_eq!(z[4].to_string(), "5 + 6σθ");
        assert_eq!(lucas(1), 1);
        assert_eq!(lucas(2), 3);
        assert_eq!(lucas(4), 7);
        assert_eq!((x(0), x(1), x(2), x(3)), (1, 2, 3, 5));
        assert_eq!(x(3) * x(1) - x(2) * x(2), 1);
    }

    #[test]
    fn strips() {
        assert_eq!(strip_series(1), FibAlgebra::new(2, 1));
        assert_eq!(strip_series(3), FibAlgebra::new(5, 6));
    }

    #[test]
    fn h4() {
        let (_, s, t) = registry();
        let h = h_n(4, s, t);
        assert_eq!(*h.get(0, 1), FibAlgebra::new(5, 6).to_super(s, t));
        assert_eq!(*h.get(2, 2), FibAlgebra::new(1, -5).to_super(s, t));
        assert!(h_n(2, s, t).get(0, 1).is_one());
    }

    #[test]
    fn table_small() {
        for row in fib_table(6, 5) {
            assert!(row.pass(), "{row:?}");
        }
        assert!(identities_check(12).pass());
    }
}
