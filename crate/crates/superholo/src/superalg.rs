//! Exact supercommutative arithmetic.
//!
//! Even generators carry half-integer exponents (stored as half-unit counts) and may
//! appear with negative powers, so a [`SuperPoly`] is a Laurent polynomial in the
//! square roots of the even generators with coefficients in the Grassmann algebra on
//! the odd generators. [`SuperRat`] adds odd-free denominators.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub type Coeff = Ratio<i64>;

pub const MAX_ODD: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("value is not a single monomial")]
    NonMonomial,
    #[error("square root would need a quarter-integer exponent")]
    OddExponent,
    #[error("coefficient is not the square of a rational")]
    NonSquareCoefficient,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("exact division failed")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable name `{0}` already registered")]
    DuplicateName(String),
    #[error("too many odd generators (limit {MAX_ODD})")]
    TooManyOdd,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Names for generators. Odd generators are ordered by creation.
#[derive(Clone, Debug, Default)]
pub struct VarRegistry {
    even: Vec<String>,
    odd: Vec<String>,
    by_name: HashMap<String, (Parity, u16)>,
}

fn valid_name(name: &str) -> bool {
    let mut ch = name.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic())
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '~')
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn even(&mut self, name: &str) -> Result<u16, AlgError> {
        if !valid_name(name) {
            return Err(AlgError::Parse(format!("bad variable name `{name}`")));
        }
        if self.by_name.contains_key(name) {
            return Err(AlgError::DuplicateName(name.to_string()));
        }
        let i = self.even.len() as u16;
        self.even.push(name.to_string());
        self.by_name.insert(name.to_string(), (Parity::Even, i));
        Ok(i)
    }

    pub fn odd(&mut self, name: &str) -> Result<u16, AlgError> {
        if !valid_name(name) {
            return Err(AlgError::Parse(format!("bad variable name `{name}`")));
        }
        if self.by_name.contains_key(name) {
            return Err(AlgError::DuplicateName(name.to_string()));
        }
        if self.odd.len() >= MAX_ODD {
            return Err(AlgError::TooManyOdd);
        }
        let i = self.odd.len() as u16;
        self.odd.push(name.to_string());
        self.by_name.insert(name.to_string(), (Parity::Odd, i));
        Ok(i)
    }

    pub fn lookup(&self, name: &str) -> Option<(Parity, u16)> {
        self.by_name.get(name).copied()
    }

    pub fn even_name(&self, i: u16) -> &str {
        &self.even[i as usize]
    }

    pub fn odd_name(&self, i: u16) -> &str {
        &self.odd[i as usize]
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }
}

/// Product of even generators; exponents are counts of half-units.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(u16, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    /// `var^(half/2)`.
    pub fn var(idx: u16, half: i32) -> Self {
        let mut v = SmallVec::new();
        if half != 0 {
            v.push((idx, half));
        }
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[(u16, i32)] {
        &self.0
    }

    pub fn half_exponent(&self, idx: u16) -> i32 {
        self.0
            .iter()
            .find(|(v, _)| *v == idx)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    fn combine(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, sign * b[j].1));
                j += 1;
            } else {
                let e = a[i].1 + sign * b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Componentwise minimum of exponents (absent variables count as zero).
    pub fn gcd_with(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                if a[i].1 < 0 {
                    out.push(a[i]);
                }
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                if b[j].1 < 0 {
                    out.push(b[j]);
                }
                j += 1;
            } else {
                let e = a[i].1.min(b[j].1);
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// True when every exponent of `self` is at least the matching one of `other`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.div(other).0.iter().all(|(_, e)| *e >= 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            let ea = a.get(i).copied();
            let eb = b.get(j).copied();
            match (ea, eb) {
                (None, None) => return Ordering::Equal,
                (Some((va, xa)), Some((vb, xb))) if va == vb => {
                    if xa != xb {
                        return xa.cmp(&xb);
                    }
                    i += 1;
                    j += 1;
                }
                (Some((va, xa)), Some((vb, _))) if va < vb => return xa.cmp(&0),
                (Some(_), Some((_, xb))) => return 0.cmp(&xb),
                (Some((_, xa)), None) => return xa.cmp(&0),
                (None, Some((_, xb))) => return 0.cmp(&xb),
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strictly increasing word in the odd generators, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OddWord(pub u128);

impl OddWord {
    pub fn empty() -> Self {
        OddWord(0)
    }

    pub fn single(i: u16) -> Self {
        OddWord(1u128 << i)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u16) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = u16> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let i = w.trailing_zeros() as u16;
                w &= w - 1;
                Some(i)
            }
        })
    }

    /// `self * other`: `None` if a generator repeats, else the merged word and
    /// whether the merge flips sign.
    pub fn mul(self, other: OddWord) -> Option<(OddWord, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut neg = false;
        let mut b = other.0;
        while b != 0 {
            let i = b.trailing_zeros();
            let above = if i >= 127 { 0 } else { self.0 >> (i + 1) };
            if above.count_ones() & 1 == 1 {
                neg = !neg;
            }
            b &= b - 1;
        }
        Some((OddWord(self.0 | other.0), neg))
    }

    /// Number of generators in the word that come before `i`.
    pub fn position(self, i: u16) -> u32 {
        let mask = if i == 0 { 0 } else { (1u128 << i) - 1 };
        (self.0 & mask).count_ones()
    }
}

impl Ord for OddWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for OddWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub mono: Monomial,
    pub odd: OddWord,
}

impl Term {
    fn key_cmp(&self, other: &Term) -> Ordering {
        self.mono.cmp(&other.mono).then(self.odd.cmp(&other.odd))
    }

    fn mul(&self, other: &Term) -> Option<Term> {
        let (odd, neg) = self.odd.mul(other.odd)?;
        let c = self.coeff * other.coeff;
        Some(Term {
            coeff: if neg { -c } else { c },
            mono: self.mono.mul(&other.mono),
            odd,
        })
    }
}

/// Sum of terms, kept sorted with the leading term first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperPoly {
    terms: Vec<Term>,
}

fn normalize_terms(mut v: Vec<Term>) -> Vec<Term> {
    v.sort_by(|a, b| b.key_cmp(a));
    let mut out: Vec<Term> = Vec::with_capacity(v.len());
    for t in v {
        if let Some(last) = out.last_mut() {
            if last.mono == t.mono && last.odd == t.odd {
                last.coeff += t.coeff;
                continue;
            }
        }
        out.push(t);
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

impl SuperPoly {
    pub fn zero() -> Self {
        SuperPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, Monomial::one(), OddWord::empty())
    }

    pub fn term(coeff: Coeff, mono: Monomial, odd: OddWord) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        SuperPoly {
            terms: vec![Term { coeff, mono, odd }],
        }
    }

    pub fn even_var(idx: u16) -> Self {
        Self::term(Coeff::one(), Monomial::var(idx, 2), OddWord::empty())
    }

    pub fn odd_var(idx: u16) -> Self {
        Self::term(Coeff::one(), Monomial::one(), OddWord::single(idx))
    }

    pub fn from_terms(v: Vec<Term>) -> Self {
        SuperPoly {
            terms: normalize_terms(v),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].coeff.is_one()
            && self.terms[0].mono.is_one()
            && self.terms[0].odd.is_empty()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [t] if t.mono.is_one() && t.odd.is_empty() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_odd_free(&self) -> bool {
        self.terms.iter().all(|t| t.odd.is_empty())
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|t| t.odd.len() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|t| t.odd.len() % 2 == 1)
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Split into the odd-free part and the nilpotent remainder.
    pub fn split_body(&self) -> (SuperPoly, SuperPoly) {
        let (b, n): (Vec<Term>, Vec<Term>) =
            self.terms.iter().cloned().partition(|t| t.odd.is_empty());
        (SuperPoly { terms: b }, SuperPoly { terms: n })
    }

    pub fn neg(&self) -> SuperPoly {
        SuperPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: Coeff) -> SuperPoly {
        if c.is_zero() {
            return Self::zero();
        }
        SuperPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SuperPoly {
        SuperPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff,
                    mono: t.mono.mul(m),
                    odd: t.odd,
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].key_cmp(&b[j]) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].coeff + b[j].coeff;
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            ..a[i].clone()
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        SuperPoly { terms: out }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SuperPoly) -> SuperPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if let Some(t) = a.mul(b) {
                    v.push(t);
                }
            }
        }
        Self::from_terms(v)
    }

    pub fn pow(&self, k: u32) -> SuperPoly {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Minimum exponent of each variable over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.mono.clone(), |m, t| m.gcd_with(&t.mono))
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn rational_content(&self) -> Coeff {
        let mut n = 0i64;
        let mut d = 1i64;
        for t in &self.terms {
            n = n.gcd(t.coeff.numer());
            d = d.lcm(t.coeff.denom());
        }
        if n == 0 {
            Coeff::one()
        } else {
            Coeff::new(n, d)
        }
    }

    /// Exact quotient `self / b` in the Laurent ring; `b` must have an invertible body.
    pub fn div_exact(&self, b: &SuperPoly) -> Result<SuperPoly, AlgError> {
        if b.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if !b.is_odd_free() {
            let (b0, bn) = b.split_body();
            if b0.is_zero() {
                return Err(AlgError::NotInvertible);
            }
            // solve q·(b0 + n) = a one odd degree at a time
            let top = (self.odd_support().0 | b.odd_support().0).count_ones();
            let degree = |p: &SuperPoly, k: u32| {
                SuperPoly::from_terms(p.terms.iter().filter(|t| t.odd.len() == k).cloned().collect())
            };
            let mut q = Self::zero();
            for k in 0..=top {
                let r = degree(self, k).sub(&degree(&q.mul(&bn), k));
                q = q.add(&r.div_exact(&b0)?);
            }
            if q.mul(b) != *self {
                return Err(AlgError::NotDivisible);
            }
            return Ok(q);
        }
        if b.terms.len() == 1 {
            let t = &b.terms[0];
            let ci = t.coeff.recip();
            let mi = t.mono.inv();
            return Ok(SuperPoly {
                terms: self
                    .terms
                    .iter()
                    .map(|x| Term {
                        coeff: x.coeff * ci,
                        mono: x.mono.mul(&mi),
                        odd: x.odd,
                    })
                    .collect(),
            });
        }
        let mb = b.monomial_content();
        let bp = b.mul_monomial(&mb.inv());
        let mut groups: Vec<(OddWord, Vec<Term>)> = Vec::new();
        for t in &self.terms {
            match groups.iter_mut().find(|(w, _)| *w == t.odd) {
                Some((_, v)) => v.push(t.clone()),
                None => groups.push((t.odd, vec![t.clone()])),
            }
        }
        let mut out = Vec::new();
        for (_, g) in groups {
            let g = SuperPoly { terms: g };
            let ma = g.monomial_content();
            let q = g.mul_monomial(&ma.inv()).div_polynomial(&bp)?;
            out.extend(q.mul_monomial(&ma.mul(&mb.inv())).terms);
        }
        Ok(SuperPoly::from_terms(out))
    }

    /// Division of polynomials with nonnegative exponents sharing one odd word.
    /// In an exact division the smallest term of every remainder equals the
    /// smallest term of the dividend, which lets failures stop early.
    fn div_polynomial(&self, b: &SuperPoly) -> Result<SuperPoly, AlgError> {
        let lb = &b.terms[0];
        let tb = b.terms.last().unwrap();
        let ta = self.terms.last().unwrap().clone();
        if !ta.mono.divisible_by(&tb.mono) || !self.terms[0].mono.divisible_by(&lb.mono) {
            return Err(AlgError::NotDivisible);
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some(lt) = r.terms.first() {
            if !lt.mono.divisible_by(&lb.mono) || r.terms.last() != Some(&ta) {
                return Err(AlgError::NotDivisible);
            }
            let qt = Term {
                coeff: lt.coeff / lb.coeff,
                mono: lt.mono.div(&lb.mono),
                odd: lt.odd,
            };
            let sub = SuperPoly::term(qt.coeff, qt.mono.clone(), qt.odd);
            r = r.sub(&sub.mul(b));
            q.push(qt);
        }
        Ok(SuperPoly::from_terms(q))
    }

    pub fn negate_odds(&self, set: OddWord) -> SuperPoly {
        SuperPoly {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let k = (t.odd.0 & set.0).count_ones();
                    Term {
                        coeff: if k % 2 == 1 { -t.coeff } else { t.coeff },
                        ..t.clone()
                    }
                })
                .collect(),
        }
    }

    /// Left contraction by the odd generator `v`.
    pub fn toggle(&self, v: u16) -> SuperPoly {
        self.contract(v, false)
    }

    /// Right contraction by `v`: `x·v ↦ x`.
    pub fn toggle_right(&self, v: u16) -> SuperPoly {
        self.contract(v, true)
    }

    fn contract(&self, v: u16, right: bool) -> SuperPoly {
        let bit = OddWord::single(v).0;
        SuperPoly::from_terms(
            self.terms
                .iter()
                .filter(|t| t.odd.contains(v))
                .map(|t| {
                    let before = t.odd.position(v);
                    let j = if right { t.odd.len() - 1 - before } else { before };
                    Term {
                        coeff: if j % 2 == 1 { -t.coeff } else { t.coeff },
                        mono: t.mono.clone(),
                        odd: OddWord(t.odd.0 & !bit),
                    }
                })
                .collect(),
        )
    }

    /// Does any term involve the even generator `idx`?
    pub fn mentions_even(&self, idx: u16) -> bool {
        self.terms.iter().any(|t| t.mono.half_exponent(idx) != 0)
    }

    pub fn odd_support(&self) -> OddWord {
        OddWord(self.terms.iter().fold(0, |a, t| a | t.odd.0))
    }
}

/// Normalize an odd-free non-monomial factor; returns (scalar part, primitive factor).
fn normalize_factor(f: &SuperPoly) -> (SuperPoly, Option<SuperPoly>) {
    let m = f.monomial_content();
    let mut c = f.rational_content();
    if f.terms[0].coeff.is_negative() {
        c = -c;
    }
    let p = f.mul_monomial(&m.inv()).scale(c.recip());
    let scalar = SuperPoly::term(c, m, OddWord::empty());
    if p.len() == 1 {
        (f.clone(), None)
    } else {
        (scalar, Some(p))
    }
}

/// `num / prod(den)`; every factor in `den` is odd-free, primitive, non-monomial and
/// has positive leading coefficient.
#[derive(Clone, Debug)]
pub struct SuperRat {
    num: SuperPoly,
    den: Vec<SuperPoly>,
}

impl Default for SuperRat {
    fn default() -> Self {
        SuperRat::zero()
    }
}

impl From<SuperPoly> for SuperRat {
    fn from(p: SuperPoly) -> Self {
        SuperRat {
            num: p,
            den: Vec::new(),
        }
    }
}

impl From<i64> for SuperRat {
    fn from(c: i64) -> Self {
        SuperRat::constant(Coeff::from_integer(c))
    }
}

impl PartialEq for SuperRat {
    fn eq(&self, other: &Self) -> bool {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num == other.num;
        }
        self.sub(other).is_zero()
    }
}

impl SuperRat {
    pub fn zero() -> Self {
        SuperPoly::zero().into()
    }

    pub fn one() -> Self {
        SuperPoly::one().into()
    }

    pub fn constant(c: Coeff) -> Self {
        SuperPoly::constant(c).into()
    }

    pub fn even_var(idx: u16) -> Self {
        SuperPoly::even_var(idx).into()
    }

    pub fn odd_var(idx: u16) -> Self {
        SuperPoly::odd_var(idx).into()
    }

    pub fn monomial(c: Coeff, m: Monomial) -> Self {
        SuperPoly::term(c, m, OddWord::empty()).into()
    }

    /// Build `num / den`; `den` must be odd-free and nonzero.
    pub fn new(num: SuperPoly, den: SuperPoly) -> Result<Self, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if !den.is_odd_free() {
            return SuperRat::from(num).div(&SuperRat::from(den));
        }
        let mut r = SuperRat {
            num,
            den: Vec::new(),
        };
        r.push_den_factor(&den);
        r.cancel();
        Ok(r)
    }

    fn push_den_factor(&mut self, f: &SuperPoly) {
        let (scalar, p) = normalize_factor(f);
        self.num = self.num.div_exact(&scalar).expect("monomial division");
        if let Some(p) = p {
            self.den.push(p);
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            match self.num.div_exact(&self.den[i]) {
                Ok(q) => {
                    self.num = q;
                    self.den.swap_remove(i);
                }
                Err(_) => i += 1,
            }
        }
        self.den.sort_by(|a, b| {
            a.terms
                .len()
                .cmp(&b.terms.len())
                .then_with(|| b.terms[0].key_cmp(&a.terms[0]))
        });
    }

    pub fn num(&self) -> &SuperPoly {
        &self.num
    }

    pub fn den(&self) -> SuperPoly {
        self.den.iter().fold(SuperPoly::one(), |a, f| a.mul(f))
    }

    pub fn den_factors(&self) -> &[SuperPoly] {
        &self.den
    }

    /// The Laurent polynomial, if the denominator has cancelled.
    pub fn as_poly(&self) -> Option<&SuperPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_even(&self) -> bool {
        self.num.is_even()
    }

    pub fn is_odd(&self) -> bool {
        self.num.is_odd()
    }

    pub fn neg(&self) -> SuperRat {
        SuperRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: Coeff) -> SuperRat {
        SuperRat {
            num: self.num.scale(c),
            den: if c.is_zero() { vec![] } else { self.den.clone() },
        }
    }

    fn lcm_den(a: &[SuperPoly], b: &[SuperPoly]) -> (Vec<SuperPoly>, Vec<SuperPoly>, Vec<SuperPoly>) {
        // returns (lcm, lcm / a, lcm / b)
        let mut rest_b: Vec<SuperPoly> = b.to_vec();
        let mut missing_in_b = Vec::new();
        for f in a {
            if let Some(pos) = rest_b.iter().position(|g| g == f) {
                rest_b.swap_remove(pos);
            } else {
                missing_in_b.push(f.clone());
            }
        }
        let mut lcm = a.to_vec();
        lcm.extend(rest_b.iter().cloned());
        (lcm, rest_b, missing_in_b)
    }

    pub fn add(&self, other: &SuperRat) -> SuperRat {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num.add(&other.num).into();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (lcm, fa, fb) = Self::lcm_den(&self.den, &other.den);
        let na = fa.iter().fold(self.num.clone(), |x, f| x.mul(f));
        let nb = fb.iter().fold(other.num.clone(), |x, f| x.mul(f));
        let mut r = SuperRat {
            num: na.add(&nb),
            den: lcm,
        };
        r.cancel();
        r
    }

    pub fn sub(&self, other: &SuperRat) -> SuperRat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SuperRat) -> SuperRat {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num.mul(&other.num).into();
        }
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        let mut r = SuperRat {
            num: self.num.mul(&other.num),
            den,
        };
        r.cancel();
        r
    }

    pub fn inv(&self) -> Result<SuperRat, AlgError> {
        let (b, n) = self.num.split_body();
        if b.is_zero() {
            return Err(AlgError::NotInvertible);
        }
        let base = SuperRat::new(self.den(), b)?;
        if n.is_zero() {
            return Ok(base);
        }
        // 1/(b + n) = (1/b) sum_k (-n/b)^k
        let step = SuperRat::from(n.neg()).mul(&SuperRat::new(SuperPoly::one(), self.num.split_body().0)?);
        let mut acc = SuperRat::one();
        let mut cur = SuperRat::one();
        loop {
            cur = cur.mul(&step);
            if cur.is_zero() {
                break;
            }
            acc = acc.add(&cur);
        }
        Ok(base.mul(&acc))
    }

    pub fn div(&self, other: &SuperRat) -> Result<SuperRat, AlgError> {
        if other.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(self.mul(&other.inv()?))
    }

    /// Exact quotient, required to be a Laurent polynomial.
    pub fn div_exact(&self, other: &SuperRat) -> Result<SuperPoly, AlgError> {
        let q = self.div(other)?;
        q.as_poly().cloned().ok_or(AlgError::NotDivisible)
    }

    /// Square root of a single positive monomial.
    pub fn sqrt_monomial(&self) -> Result<SuperRat, AlgError> {
        let p = self.as_poly().ok_or(AlgError::NonMonomial)?;
        let [t] = p.terms() else {
            return Err(AlgError::NonMonomial);
        };
        if !t.odd.is_empty() {
            return Err(AlgError::NonMonomial);
        }
        let mut out = SmallVec::new();
        for &(v, e) in t.mono.exponents() {
            if e % 2 != 0 {
                return Err(AlgError::OddExponent);
            }
            out.push((v, e / 2));
        }
        let c = t.coeff;
        if c.is_negative() {
            return Err(AlgError::NonSquareCoefficient);
        }
        let (n, d) = (*c.numer(), *c.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if rn * rn != n || rd * rd != d {
            return Err(AlgError::NonSquareCoefficient);
        }
        Ok(SuperRat::monomial(Coeff::new(rn, rd), Monomial(out)))
    }

    pub fn negate_odds(&self, set: OddWord) -> SuperRat {
        SuperRat {
            num: self.num.negate_odds(set),
            den: self.den.clone(),
        }
    }

    pub fn toggle(&self, v: u16) -> SuperRat {
        let mut r = SuperRat {
            num: self.num.toggle(v),
            den: self.den.clone(),
        };
        r.cancel();
        r
    }

    pub fn toggle_right(&self, v: u16) -> SuperRat {
        let mut r = SuperRat {
            num: self.num.toggle_right(v),
            den: self.den.clone(),
        };
        r.cancel();
        r
    }

    pub fn mentions_even(&self, idx: u16) -> bool {
        self.num.mentions_even(idx) || self.den.iter().any(|f| f.mentions_even(idx))
    }

    /// Substitute rational values for some even generators.
    pub fn specialize(&self, values: &HashMap<u16, Coeff>) -> Result<SuperRat, AlgError> {
        let n = specialize_poly(&self.num, values)?;
        let d = specialize_poly(&self.den(), values)?;
        SuperRat::new(n, d)
    }
}

fn coeff_pow_half(v: Coeff, half: i32) -> Result<Coeff, AlgError> {
    if half % 2 == 0 {
        if v.is_zero() && half < 0 {
            return Err(AlgError::DivisionByZero);
        }
        return Ok(num_traits::pow::Pow::pow(v, half / 2));
    }
    let r = SuperRat::constant(v).sqrt_monomial()?;
    let root = r.num().as_constant().unwrap();
    if root.is_zero() && half < 0 {
        return Err(AlgError::DivisionByZero);
    }
    Ok(num_traits::pow::Pow::pow(root, half))
}

fn specialize_poly(p: &SuperPoly, values: &HashMap<u16, Coeff>) -> Result<SuperPoly, AlgError> {
    let mut out = Vec::with_capacity(p.len());
    for t in p.terms() {
        let mut c = t.coeff;
        let mut m = SmallVec::new();
        for &(v, e) in t.mono.exponents() {
            match values.get(&v) {
                Some(&x) => c *= coeff_pow_half(x, e)?,
                None => m.push((v, e)),
            }
        }
        out.push(Term {
            coeff: c,
            mono: Monomial(m),
            odd: t.odd,
        });
    }
    Ok(SuperPoly::from_terms(out))
}

impl std::ops::Add for &SuperRat {
    type Output = SuperRat;
    fn add(self, o: &SuperRat) -> SuperRat {
        SuperRat::add(self, o)
    }
}

impl std::ops::Sub for &SuperRat {
    type Output = SuperRat;
    fn sub(self, o: &SuperRat) -> SuperRat {
        SuperRat::sub(self, o)
    }
}

impl std::ops::Mul for &SuperRat {
    type Output = SuperRat;
    fn mul(self, o: &SuperRat) -> SuperRat {
        SuperRat::mul(self, o)
    }
}

impl std::ops::Neg for &SuperRat {
    type Output = SuperRat;
    fn neg(self) -> SuperRat {
        SuperRat::neg(self)
    }
}

// ---- text form ----

fn fmt_exp(half: i32) -> String {
    if half % 2 == 0 {
        let k = half / 2;
        if k < 0 {
            format!("^({k})")
        } else {
            format!("^{k}")
        }
    } else {
        format!("^({half}/2)")
    }
}

fn fmt_term(t: &Term, reg: &VarRegistry, first: bool) -> String {
    let mut factors = Vec::new();
    for &(v, e) in t.mono.exponents() {
        let name = reg.even_name(v);
        if e == 2 {
            factors.push(name.to_string());
        } else {
            factors.push(format!("{name}{}", fmt_exp(e)));
        }
    }
    if !t.odd.is_empty() {
        let w: Vec<&str> = t.odd.indices().map(|i| reg.odd_name(i)).collect();
        factors.push(w.join("."));
    }
    let neg = t.coeff.is_negative();
    let c = t.coeff.abs();
    let mut s = String::new();
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    if factors.is_empty() {
        s.push_str(&c.to_string());
    } else {
        if !c.is_one() {
            s.push_str(&c.to_string());
            s.push('*');
        }
        s.push_str(&factors.join("*"));
    }
    s
}

impl SuperPoly {
    pub fn to_text(&self, reg: &VarRegistry) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| fmt_term(t, reg, i == 0))
            .collect()
    }

    pub fn parse(s: &str, reg: &VarRegistry) -> Result<SuperPoly, AlgError> {
        let mut p = Parser::new(s, reg);
        let r = p.poly()?;
        p.end()?;
        Ok(r)
    }
}

impl SuperRat {
    pub fn to_text(&self, reg: &VarRegistry) -> String {
        if self.den.is_empty() {
            self.num.to_text(reg)
        } else {
            format!("({})/({})", self.num.to_text(reg), self.den().to_text(reg))
        }
    }

    pub fn parse(s: &str, reg: &VarRegistry) -> Result<SuperRat, AlgError> {
        let mut p = Parser::new(s, reg);
        p.skip_ws();
        let r = if p.peek() == Some('(') {
            let save = p.pos;
            p.pos += 1;
            let num = p.poly()?;
            p.expect(')')?;
            p.skip_ws();
            if p.peek() == Some('/') {
                p.pos += 1;
                p.expect('(')?;
                let den = p.poly()?;
                p.expect(')')?;
                SuperRat::from(num).div(&SuperRat::from(den))?
            } else {
                p.pos = save;
                p.poly()?.into()
            }
        } else {
            p.poly()?.into()
        };
        p.end()?;
        Ok(r)
    }

    pub fn to_json(&self, reg: &VarRegistry) -> RatJson {
        RatJson {
            num: self.num.to_text(reg),
            den: self.den().to_text(reg),
        }
    }

    pub fn from_json(j: &RatJson, reg: &VarRegistry) -> Result<SuperRat, AlgError> {
        let n = SuperPoly::parse(&j.num, reg)?;
        let d = SuperPoly::parse(&j.den, reg)?;
        SuperRat::from(n).div(&SuperRat::from(d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

struct Parser<'a> {
    s: Vec<char>,
    pos: usize,
    reg: &'a VarRegistry,
}

impl<'a> Parser<'a> {
    fn new(s: &str, reg: &'a VarRegistry) -> Self {
        Parser {
            s: s.chars().collect(),
            pos: 0,
            reg,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, AlgError> {
        Err(AlgError::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), AlgError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected `{c}`"))
        }
    }

    fn end(&mut self) -> Result<(), AlgError> {
        self.skip_ws();
        if self.pos == self.s.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn int(&mut self) -> Result<i64, AlgError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().or_else(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Result<String, AlgError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '~')
        {
            self.pos += 1;
        }
        Ok(self.s[start..self.pos].iter().collect())
    }

    fn exponent(&mut self) -> Result<i32, AlgError> {
        self.skip_ws();
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        self.skip_ws();
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = self.int()?;
        let mut d = 1;
        if paren {
            self.skip_ws();
            if self.peek() == Some('/') {
                self.pos += 1;
                d = self.int()?;
            }
            self.expect(')')?;
        }
        let half = match d {
            1 => 2 * n,
            2 => n,
            _ => return self.err("exponent must be a multiple of 1/2"),
        };
        let half = i32::try_from(half).or_else(|_| self.err("exponent out of range"))?;
        Ok(if neg { -half } else { half })
    }

    fn factor(&mut self) -> Result<SuperPoly, AlgError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let mut d = 1;
                if self.peek() == Some('/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                    d = self.int()?;
                }
                if d == 0 {
                    return Err(AlgError::DivisionByZero);
                }
                Ok(SuperPoly::constant(Coeff::new(n, d)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident()?;
                match self.reg.lookup(&name) {
                    Some((Parity::Even, i)) => {
                        let half = if self.peek() == Some('^') {
                            self.pos += 1;
                            self.exponent()?
                        } else {
                            2
                        };
                        Ok(SuperPoly::term(Coeff::one(), Monomial::var(i, half), OddWord::empty()))
                    }
                    Some((Parity::Odd, i)) => {
                        let mut p = SuperPoly::odd_var(i);
                        while self.peek() == Some('.') {
                            self.pos += 1;
                            let name = self.ident()?;
                            match self.reg.lookup(&name) {
                                Some((Parity::Odd, j)) => p = p.mul(&SuperPoly::odd_var(j)),
                                _ => return Err(AlgError::UnknownVariable(name)),
                            }
                        }
                        Ok(p)
                    }
                    None => Err(AlgError::UnknownVariable(name)),
                }
            }
            Some('(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            _ => self.err("expected factor"),
        }
    }

    fn term(&mut self) -> Result<SuperPoly, AlgError> {
        let mut p = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                p = p.mul(&self.factor()?);
            } else {
                return Ok(p);
            }
        }
    }

    fn poly(&mut self) -> Result<SuperPoly, AlgError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }
}

impl fmt::Display for OddWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}

/// Seeded random element over `n_even` even and `n_odd` odd generators, for property
/// checks. Exponents are half-integers in [-2, 2]; coefficients are small.
pub fn random_poly<R: Rng>(rng: &mut R, n_even: u16, n_odd: u16, max_terms: usize) -> SuperPoly {
    let k = rng.gen_range(0..=max_terms);
    let mut v = Vec::with_capacity(k);
    for _ in 0..k {
        let mut m = Monomial::one();
        for var in 0..n_even {
            if rng.gen_bool(0.4) {
                m = m.mul(&Monomial::var(var, rng.gen_range(-4..=4)));
            }
        }
        let mut w = 0u128;
        for o in 0..n_odd {
            if rng.gen_bool(0.3) {
                w |= 1 << o;
            }
        }
        let c = Coeff::new(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        v.push(Term {
            coeff: c,
            mono: m,
            odd: OddWord(w),
        });
    }
    SuperPoly::from_terms(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reg() -> VarRegistry {
        let mut r = VarRegistry::new();
        for n in ["l_01", "l_12", "l_02"] {
            r.even(n).unwrap();
        }
        for n in ["t_012", "t_123"] {
            r.odd(n).unwrap();
        }
        r
    }

    #[test]
    fn odd_anticommute() {
        let a = SuperPoly::odd_var(0);
        let b = SuperPoly::odd_var(1);
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let r = reg();
        let s = "2*l_01^(3/2)*l_12^(-1)*t_012.t_123 - 1/2*t_012 + 3";
        let p = SuperPoly::parse(s, &r).unwrap();
        let back = SuperPoly::parse(&p.to_text(&r), &r).unwrap();
        assert_eq!(p, back);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn inverse_of_nilpotent_shift() {
        let r = reg();
        let x = SuperRat::parse("l_01 + l_12 + t_012.t_123", &r).unwrap();
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
    }

    #[test]
    fn exact_division() {
        let r = reg();
        let a = SuperPoly::parse("l_01 + l_12", &r).unwrap();
        let b = SuperPoly::parse("l_01 - l_02^(1/2) + t_012.t_123", &r).unwrap();
        let q = a.mul(&b).div_exact(&a).unwrap();
        assert_eq!(q, b);
        assert_eq!(b.div_exact(&a), Err(AlgError::NotDivisible));
    }

    #[test]
    fn division_by_nilpotent_perturbation() {
        let r = reg();
        let a = SuperPoly::parse("l_12^(-3)*l_02 + l_01^(-1)*l_12^(-2)", &r).unwrap();
        let b = SuperPoly::parse("-4*l_01^2 - 5*l_12^2 + 3*l_01^(-3/2)*t_012.t_123 - t_012", &r).unwrap();
        assert_eq!(a.mul(&b).div_exact(&b), Ok(a.clone()));
    }

    #[test]
    fn sqrt_errors() {
        let r = reg();
        let ok = SuperRat::parse("9/4*l_01^2*l_12", &r).unwrap();
        assert_eq!(ok.sqrt_monomial().unwrap().to_text(&r), "3/2*l_01*l_12^(1/2)");
        let bad = SuperRat::parse("l_01^(1/2)", &r).unwrap();
        assert_eq!(bad.sqrt_monomial(), Err(AlgError::OddExponent));
        let bad = SuperRat::parse("2*l_01^2", &r).unwrap();
        assert_eq!(bad.sqrt_monomial(), Err(AlgError::NonSquareCoefficient));
        let bad = SuperRat::parse("l_01 + l_12", &r).unwrap();
        assert_eq!(bad.sqrt_monomial(), Err(AlgError::NonMonomial));
    }

    #[test]
    fn toggle_signs() {
        let r = reg();
        let p = SuperPoly::parse("t_012.t_123", &r).unwrap();
        assert_eq!(p.toggle(0).to_text(&r), "t_123");
        assert_eq!(p.toggle(1).to_text(&r), "-t_012");
        assert_eq!(p.toggle_right(1).to_text(&r), "t_012");
        assert_eq!(p.toggle_right(0).to_text(&r), "-t_123");
    }

    #[test]
    fn fractions_cancel() {
        let r = reg();
        let a = SuperRat::parse("(l_01^2 - l_12^2)/(l_01 + l_12)", &r).unwrap();
        assert!(a.is_laurent());
        let b = SuperRat::parse("1/(l_01 + l_12)", &r);
        assert!(b.is_err());
        let b = SuperRat::parse("(1)/(l_01 + l_12)", &r).unwrap();
        let c = SuperRat::parse("(l_01)/(l_01 + l_12)", &r).unwrap();
        let s = b.mul(&SuperRat::even_var(1)).add(&c);
        assert!(s.is_one());
    }

    #[test]
    fn random_ring_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_poly(&mut rng, 3, 3, 4);
            let b = random_poly(&mut rng, 3, 3, 4);
            let c = random_poly(&mut rng, 3, 3, 4);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }
}
