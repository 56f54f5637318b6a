//! Decorated super-triangulations of a convex polygon with vertices `0..n` in
//! counter-clockwise order, super Ptolemy flips, and fan frames for longest arcs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::superalg::{AlgError, Monomial, OddWord, SuperPoly, SuperRat, VarRegistry};

pub type Edge = (u32, u32);

pub fn edge(a: u32, b: u32) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("arc {0}-{1} is not in the triangulation")]
    ArcNotPresent(u32, u32),
    #[error("arc {0}-{1} is not an internal diagonal")]
    NotInternal(u32, u32),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Is `a, b, c` counter-clockwise on the `n`-gon?
pub fn ccw(n: u32, a: u32, b: u32, c: u32) -> bool {
    let rb = (b + n - a) % n;
    let rc = (c + n - a) % n;
    rb < rc
}

/// Do the chords `x` and `y` cross in their interiors?
pub fn crosses(x: Edge, y: Edge) -> bool {
    let (p, q) = edge(x.0, x.1);
    let inside = |v: u32| p < v && v < q;
    let shared = y.0 == p || y.0 == q || y.1 == p || y.1 == q;
    !shared && inside(y.0) != inside(y.1)
}

pub fn sort3(mut v: [u32; 3]) -> [u32; 3] {
    v.sort_unstable();
    v
}

#[derive(Clone, Debug)]
pub struct ArcData {
    pub lambda: SuperRat,
    pub head: u32,
}

/// A triangle with its normalized μ-invariant at its smallest vertex.
#[derive(Clone, Debug)]
pub struct Tri {
    pub v: [u32; 3],
    /// `√(λ_ij λ_jk λ_ik)·θ` for the triangle `(i, j, k)`.
    pub kappa: SuperRat,
}

impl Tri {
    pub fn has(&self, x: u32) -> bool {
        self.v.contains(&x)
    }

    pub fn third(&self, e: Edge) -> u32 {
        *self.v.iter().find(|&&x| x != e.0 && x != e.1).unwrap()
    }

    /// Next vertex counter-clockwise within the triangle.
    pub fn next(&self, x: u32) -> u32 {
        let i = self.v.iter().position(|&y| y == x).unwrap();
        self.v[(i + 1) % 3]
    }

    pub fn prev(&self, x: u32) -> u32 {
        let i = self.v.iter().position(|&y| y == x).unwrap();
        self.v[(i + 2) % 3]
    }
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    n: u32,
    reg: Arc<VarRegistry>,
    arcs: BTreeMap<Edge, ArcData>,
    tris: Vec<Tri>,
    lambda_gen: BTreeMap<Edge, u16>,
    mu_gen: Vec<([u32; 3], u16)>,
}

/// Serialized triangulation with vertices labelled `1..=n`: `orientation`
/// maps `"i-j"` to `"i>j"` or `"j>i"`, `mu_names` maps `"i-j-k"` to a name.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub n: u32,
    pub diagonals: Vec<[u32; 2]>,
    #[serde(default)]
    pub orientation: BTreeMap<String, String>,
    #[serde(default)]
    pub mu_names: BTreeMap<String, String>,
}

// generator names use the labels 1..=n
fn lambda_name(n: u32, e: Edge) -> String {
    if n <= 9 {
        format!("l_{}{}", e.0 + 1, e.1 + 1)
    } else {
        format!("l_{}_{}", e.0 + 1, e.1 + 1)
    }
}

fn mu_name(n: u32, t: [u32; 3]) -> String {
    if n <= 9 {
        format!("t_{}{}{}", t[0] + 1, t[1] + 1, t[2] + 1)
    } else {
        format!("t_{}_{}_{}", t[0] + 1, t[1] + 1, t[2] + 1)
    }
}

/// Faces of the triangulation with the given diagonals, after validation.
pub fn faces(n: u32, diagonals: &[Edge]) -> Result<Vec<[u32; 3]>, SurfaceError> {
    let bad = |m: String| Err(SurfaceError::InvalidTriangulation(m));
    if n < 3 {
        return bad(format!("need at least 3 vertices, got {n}"));
    }
    if diagonals.len() != (n - 3) as usize {
        return bad(format!("{} diagonals given, {} needed", diagonals.len(), n - 3));
    }
    let mut set = BTreeSet::new();
    for &(a, b) in diagonals {
        let e = edge(a, b);
        if e.1 >= n || e.0 == e.1 {
            return bad(format!("diagonal {a}-{b} out of range"));
        }
        if e.1 - e.0 == 1 || (e.0 == 0 && e.1 == n - 1) {
            return bad(format!("{a}-{b} is a boundary edge"));
        }
        if !set.insert(e) {
            return bad(format!("diagonal {a}-{b} repeated"));
        }
    }
    let ds: Vec<Edge> = set.iter().copied().collect();
    for (i, x) in ds.iter().enumerate() {
        for y in &ds[i + 1..] {
            if crosses(*x, *y) {
                return bad(format!("diagonals {:?} and {:?} cross", x, y));
            }
        }
    }
    for i in 0..n {
        set.insert(edge(i, (i + 1) % n));
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !set.contains(&(a, b)) {
                continue;
            }
            for c in b + 1..n {
                if set.contains(&(a, c)) && set.contains(&(b, c)) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    debug_assert_eq!(out.len(), (n - 2) as usize);
    Ok(out)
}

impl Triangulation {
    /// Fresh generators for every edge and triangle; odd generators follow the
    /// sorted order of the triangles.
    pub fn new(n: u32, diagonals: &[Edge]) -> Result<Self, SurfaceError> {
        Self::build(n, diagonals, None, &BTreeMap::new())
    }

    /// Like [`Triangulation::new`] with an explicit creation order for the odd
    /// generators (which fixes their product order) and optional names.
    pub fn build(
        n: u32,
        diagonals: &[Edge],
        mu_order: Option<&[[u32; 3]]>,
        mu_names: &BTreeMap<[u32; 3], String>,
    ) -> Result<Self, SurfaceError> {
        let fs = faces(n, diagonals)?;
        let order: Vec<[u32; 3]> = match mu_order {
            Some(o) => {
                let o: Vec<[u32; 3]> = o.iter().map(|t| sort3(*t)).collect();
                let a: BTreeSet<_> = o.iter().collect();
                let b: BTreeSet<_> = fs.iter().collect();
                if a != b || o.len() != fs.len() {
                    return Err(SurfaceError::InvalidTriangulation(
                        "odd generator order does not list the faces".into(),
                    ));
                }
                o
            }
            None => fs.clone(),
        };
        let mut reg = VarRegistry::new();
        let mut edges: BTreeSet<Edge> = diagonals.iter().map(|&(a, b)| edge(a, b)).collect();
        for i in 0..n {
            edges.insert(edge(i, (i + 1) % n));
        }
        let mut lambda_gen = BTreeMap::new();
        for &e in &edges {
            lambda_gen.insert(e, reg.even(&lambda_name(n, e))?);
        }
        let mut mu_gen = Vec::new();
        for t in &order {
            let name = mu_names.get(t).cloned().unwrap_or_else(|| mu_name(n, *t));
            mu_gen.push((*t, reg.odd(&name)?));
        }
        let arcs = edges
            .iter()
            .map(|&e| {
                (
                    e,
                    ArcData {
                        lambda: SuperRat::even_var(lambda_gen[&e]),
                        head: e.1,
                    },
                )
            })
            .collect();
        let tris = fs
            .iter()
            .map(|&t| {
                let [a, b, c] = t;
                let g = |x, y| lambda_gen[&edge(x, y)];
                let m = Monomial::var(g(b, c), 1)
                    .mul(&Monomial::var(g(a, b), 1))
                    .mul(&Monomial::var(g(a, c), 1));
                let odd = mu_gen.iter().find(|(s, _)| *s == t).unwrap().1;
                Tri {
                    v: t,
                    kappa: SuperPoly::term(1.into(), m, OddWord::single(odd)).into(),
                }
            })
            .collect();
        Ok(Triangulation {
            n,
            reg: Arc::new(reg),
            arcs,
            tris,
            lambda_gen,
            mu_gen,
        })
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self, SurfaceError> {
        let low = |x: u32| {
            x.checked_sub(1)
                .ok_or_else(|| SurfaceError::InvalidTriangulation("vertices are labelled from 1".into()))
        };
        let diags: Vec<Edge> = j
            .diagonals
            .iter()
            .map(|d| Ok((low(d[0])?, low(d[1])?)))
            .collect::<Result<_, SurfaceError>>()?;
        let mut names = BTreeMap::new();
        for (k, v) in &j.mu_names {
            let t = parse_triple(k).ok_or_else(|| {
                SurfaceError::InvalidTriangulation(format!("bad triangle key `{k}`"))
            })?;
            names.insert(sort3([low(t[0])?, low(t[1])?, low(t[2])?]), v.clone());
        }
        let mut t = Self::build(j.n, &diags, None, &names)?;
        for (k, v) in &j.orientation {
            let (a, b) = parse_pair(k).ok_or_else(|| {
                SurfaceError::InvalidTriangulation(format!("bad orientation key `{k}`"))
            })?;
            let (x, y) = parse_arrow(v).ok_or_else(|| {
                SurfaceError::InvalidTriangulation(format!("bad orientation value `{v}`"))
            })?;
            if edge(x, y) != edge(a, b) {
                return Err(SurfaceError::InvalidTriangulation(format!(
                    "orientation `{v}` does not match `{k}`"
                )));
            }
            t.set_head(low(x)?, low(y)?)?;
        }
        Ok(t)
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            n: self.n,
            diagonals: self.diagonals().iter().map(|e| [e.0 + 1, e.1 + 1]).collect(),
            orientation: self
                .arcs
                .iter()
                .map(|(e, d)| {
                    let tail = if d.head == e.0 { e.1 } else { e.0 };
                    (format!("{}-{}", e.0 + 1, e.1 + 1), format!("{}>{}", tail + 1, d.head + 1))
                })
                .collect(),
            mu_names: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn triangles(&self) -> &[Tri] {
        &self.tris
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&Edge, &ArcData)> {
        self.arcs.iter()
    }

    pub fn is_boundary(&self, e: Edge) -> bool {
        let e = edge(e.0, e.1);
        e.1 - e.0 == 1 || (e.0 == 0 && e.1 == self.n - 1)
    }

    pub fn diagonals(&self) -> Vec<Edge> {
        self.arcs.keys().copied().filter(|&e| !self.is_boundary(e)).collect()
    }

    pub fn has_arc(&self, a: u32, b: u32) -> bool {
        self.arcs.contains_key(&edge(a, b))
    }

    pub fn lambda_var(&self, a: u32, b: u32) -> Option<u16> {
        self.lambda_gen.get(&edge(a, b)).copied()
    }

    pub fn mu_var(&self, t: [u32; 3]) -> Option<u16> {
        let t = sort3(t);
        self.mu_gen.iter().find(|(s, _)| *s == t).map(|x| x.1)
    }

    pub fn lambda(&self, a: u32, b: u32) -> Result<&SuperRat, SurfaceError> {
        self.arcs
            .get(&edge(a, b))
            .map(|d| &d.lambda)
            .ok_or(SurfaceError::ArcNotPresent(a, b))
    }

    pub fn head(&self, a: u32, b: u32) -> Result<u32, SurfaceError> {
        self.arcs
            .get(&edge(a, b))
            .map(|d| d.head)
            .ok_or(SurfaceError::ArcNotPresent(a, b))
    }

    /// Orient the arc `a -> b`.
    pub fn set_head(&mut self, a: u32, b: u32) -> Result<(), SurfaceError> {
        let d = self
            .arcs
            .get_mut(&edge(a, b))
            .ok_or(SurfaceError::ArcNotPresent(a, b))?;
        d.head = b;
        Ok(())
    }

    pub fn tri_index(&self, v: [u32; 3]) -> Option<usize> {
        let v = sort3(v);
        self.tris.iter().position(|t| t.v == v)
    }

    pub fn triangles_on(&self, e: Edge) -> Vec<usize> {
        self.tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.has(e.0) && t.has(e.1))
            .map(|(i, _)| i)
            .collect()
    }

    fn lam(&self, a: u32, b: u32) -> &SuperRat {
        &self.arcs[&edge(a, b)].lambda
    }

    /// h-length at corner `v` of triangle `t`.
    pub fn h(&self, t: usize, v: u32) -> SuperRat {
        let tri = &self.tris[t];
        let (x, y) = (tri.next(v), tri.prev(v));
        let den = self.lam(v, x).mul(self.lam(v, y));
        self.lam(x, y).div(&den).expect("nonzero lambda")
    }

    /// Upper normalized μ-invariant at corner `v`.
    pub fn tu(&self, t: usize, v: u32) -> SuperRat {
        let tri = &self.tris[t];
        let (x, y) = (tri.next(v), tri.prev(v));
        let den = self.lam(v, x).mul(self.lam(v, y));
        exact_quotient(&tri.kappa, &den)
    }

    /// Lower normalized μ-invariant at corner `v`.
    pub fn td(&self, t: usize, v: u32) -> SuperRat {
        let tri = &self.tris[t];
        let (x, y) = (tri.next(v), tri.prev(v));
        exact_quotient(&tri.kappa, self.lam(x, y))
    }

    /// Reverse the three arrows of a triangle and negate its μ-invariant.
    pub fn reverse_triangle(&mut self, t: usize) {
        let v = self.tris[t].v;
        for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[0], v[2])] {
            let d = self.arcs.get_mut(&edge(a, b)).unwrap();
            d.head = if d.head == a { b } else { a };
        }
        self.tris[t].kappa = self.tris[t].kappa.neg();
    }

    /// Orient every arc from its smaller to its larger endpoint.
    pub fn orient_low_to_high(&mut self) {
        for (e, d) in self.arcs.iter_mut() {
            d.head = e.1;
        }
    }

    pub fn randomize_orientation<R: Rng>(&mut self, rng: &mut R) {
        for (e, d) in self.arcs.iter_mut() {
            d.head = if rng.gen_bool(0.5) { e.0 } else { e.1 };
        }
    }

    /// Super Ptolemy flip of the diagonal `a-b`; returns the new diagonal.
    pub fn flip(&mut self, a: u32, b: u32) -> Result<Edge, SurfaceError> {
        let e = edge(a, b);
        let data = self.arcs.get(&e).ok_or(SurfaceError::ArcNotPresent(a, b))?;
        let ts = self.triangles_on(e);
        if ts.len() != 2 {
            return Err(SurfaceError::NotInternal(a, b));
        }
        let k = data.head;
        let i = if k == e.0 { e.1 } else { e.0 };
        let (p0, p1) = (self.tris[ts[0]].third(e), self.tris[ts[1]].third(e));
        let (j, l) = if ccw(self.n, i, p0, k) { (p0, p1) } else { (p1, p0) };
        let t_ijk = self.tri_index([i, j, k]).unwrap();
        let t_ikl = self.tri_index([i, k, l]).unwrap();

        let (la, lb, lc, ld, le) = (self.lam(i, l), self.lam(k, l), self.lam(j, k), self.lam(i, j), self.lam(i, k));
        let (k1, k2) = (&self.tris[t_ijk].kappa, &self.tris[t_ikl].kappa);
        let body = ld.mul(lb).add(&la.mul(lc));
        let lam_new = exact_quotient(&exact_quotient(&body.mul(le).add(&k1.mul(k2)), le), le);
        let kappa_ijl = exact_quotient(&k1.mul(la).add(&k2.mul(ld)), le);
        let kappa_jkl = exact_quotient(&k1.mul(lb).sub(&k2.mul(lc)), le);

        self.arcs.remove(&e);
        self.arcs.insert(
            edge(j, l),
            ArcData {
                lambda: lam_new,
                head: l,
            },
        );
        let b_arc = self.arcs.get_mut(&edge(k, l)).unwrap();
        b_arc.head = if b_arc.head == k { l } else { k };

        let (lo, hi) = (t_ijk.min(t_ikl), t_ijk.max(t_ikl));
        self.tris.remove(hi);
        self.tris.remove(lo);
        self.tris.push(Tri {
            v: sort3([i, j, l]),
            kappa: kappa_ijl,
        });
        self.tris.push(Tri {
            v: sort3([j, k, l]),
            kappa: kappa_jkl,
        });
        self.tris.sort_by_key(|t| t.v);
        Ok(edge(j, l))
    }

    /// Flip diagonals crossing `from-to`, always the one opposite `to`, until the
    /// arc `from-to` is present.
    pub fn flip_toward(&mut self, from: u32, to: u32) -> Result<(), SurfaceError> {
        if from == to || from >= self.n || to >= self.n {
            return Err(SurfaceError::ArcNotPresent(from, to));
        }
        let target = edge(from, to);
        while !self.has_arc(from, to) {
            let side = self
                .tris
                .iter()
                .filter(|t| t.has(to))
                .map(|t| {
                    let o: Vec<u32> = t.v.iter().copied().filter(|&x| x != to).collect();
                    edge(o[0], o[1])
                })
                .find(|&s| crosses(s, target))
                .expect("some triangle at the endpoint meets the arc");
            self.flip(side.0, side.1)?;
        }
        Ok(())
    }

    /// The super λ-length of `i-j` in the initial variables.
    pub fn lambda_of_arc(&self, i: u32, j: u32) -> Result<SuperRat, SurfaceError> {
        if self.has_arc(i, j) {
            return Ok(self.lam(i, j).clone());
        }
        let mut t = self.clone();
        t.flip_toward(i, j)?;
        Ok(t.lam(i, j).clone())
    }

    /// Dual-tree neighbours of each triangle.
    pub fn dual_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.tris.len()];
        for e in self.diagonals() {
            let ts = self.triangles_on(e);
            adj[ts[0]].push(ts[1]);
            adj[ts[1]].push(ts[0]);
        }
        adj
    }

    /// Endpoints `(a, b)` of an arc crossing every diagonal, if the dual tree is a path.
    pub fn longest_arc(&self) -> Option<(u32, u32)> {
        if self.n == 3 {
            return Some((0, 2));
        }
        let adj = self.dual_adjacency();
        if adj.iter().any(|x| x.len() > 2) {
            return None;
        }
        let diag_vertices: BTreeSet<u32> =
            self.diagonals().iter().flat_map(|&(a, b)| [a, b]).collect();
        let tips: Vec<u32> = (0..self.tris.len())
            .filter(|&t| adj[t].len() == 1)
            .map(|t| {
                *self.tris[t]
                    .v
                    .iter()
                    .find(|v| !diag_vertices.contains(v))
                    .unwrap()
            })
            .collect();
        Some((tips[0].min(tips[1]), tips[0].max(tips[1])))
    }
}

/// `x / y`, kept as a Laurent polynomial whenever the division is exact.
pub fn exact_quotient(x: &SuperRat, y: &SuperRat) -> SuperRat {
    if let (Some(p), Some(q)) = (x.as_poly(), y.as_poly()) {
        if let Ok(r) = p.div_exact(q) {
            return r.into();
        }
    }
    x.div(y).expect("nonzero lambda")
}

fn parse_pair(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once('-')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_arrow(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once('>')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_triple(s: &str) -> Option<[u32; 3]> {
    let v: Vec<u32> = s.split('-').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
    (v.len() == 3).then(|| sort3([v[0], v[1], v[2]]))
}

/// Fan structure of a triangulation along an arc `a-b` that crosses every diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub a: u32,
    pub b: u32,
    /// `c_1 .. c_N`.
    pub centers: Vec<u32>,
    /// Triangles in order from `a` to `b`.
    pub strip: Vec<[u32; 3]>,
    /// Fan index (1-based) of each triangle in `strip`.
    pub fan_of: Vec<usize>,
    /// `e_0 = (a, c_1)`, the crossed diagonals, `e_m = (c_N, b)`.
    pub sides: Vec<Edge>,
    pub eps_a: u8,
    pub eps_b: u8,
}

fn common(x: Edge, y: Edge) -> Option<u32> {
    [x.0, x.1].into_iter().find(|&v| v == y.0 || v == y.1)
}

impl Frame {
    /// Default frame: the end triangles join the neighbouring fan where possible.
    pub fn new(t: &Triangulation, a: u32, b: u32) -> Result<Frame, SurfaceError> {
        Self::with_ends(t, a, b, None, None)
    }

    /// Frame with explicit `c_1` and `c_N`.
    pub fn with_ends(
        t: &Triangulation,
        a: u32,
        b: u32,
        c1: Option<u32>,
        cn: Option<u32>,
    ) -> Result<Frame, SurfaceError> {
        let bad = |m: &str| Err(SurfaceError::InvalidFrame(m.to_string()));
        let n = t.n();
        if a >= n || b >= n || a == b {
            return bad("endpoints out of range");
        }
        let target = edge(a, b);
        let diags = t.diagonals();
        if diags.iter().any(|&d| !crosses(d, target)) {
            return bad("arc does not cross every diagonal");
        }
        let start: Vec<usize> = (0..t.tris.len()).filter(|&i| t.tris[i].has(a)).collect();
        if start.len() != 1 {
            return bad("first endpoint must lie on exactly one triangle");
        }
        let mut strip = vec![start[0]];
        let mut crossed: Vec<Edge> = Vec::new();
        loop {
            let cur = &t.tris[*strip.last().unwrap()];
            let next = [(cur.v[0], cur.v[1]), (cur.v[1], cur.v[2]), (cur.v[0], cur.v[2])]
                .into_iter()
                .map(|(x, y)| edge(x, y))
                .find(|&s| crosses(s, target) && crossed.last() != Some(&s));
            match next {
                Some(s) => {
                    crossed.push(s);
                    let ts = t.triangles_on(s);
                    let nt = if ts[0] == *strip.last().unwrap() { ts[1] } else { ts[0] };
                    strip.push(nt);
                }
                None => break,
            }
        }
        let m = strip.len();
        if !t.tris[strip[m - 1]].has(b) {
            return bad("strip does not end at the second endpoint");
        }
        let first = &t.tris[strip[0]];
        let last = &t.tris[strip[m - 1]];
        let c1 = match (c1, m) {
            (Some(c), _) => c,
            (None, 1) => first.third(target),
            (None, 2) => crossed[0].0.min(crossed[0].1),
            (None, _) => common(crossed[0], crossed[1]).unwrap(),
        };
        let cn = match (cn, m) {
            (Some(c), _) => c,
            (None, 1) => last.third(target),
            (None, 2) => c1,
            (None, _) => common(crossed[m - 3], crossed[m - 2]).unwrap(),
        };
        if !first.has(c1) || c1 == a || c1 == b || (m >= 2 && !(crossed[0].0 == c1 || crossed[0].1 == c1)) {
            return bad("c_1 must be an endpoint of the first crossed side");
        }
        if !last.has(cn) || cn == a || cn == b || (m >= 2 && !(crossed[m - 2].0 == cn || crossed[m - 2].1 == cn)) {
            return bad("c_N must be an endpoint of the last crossed side");
        }
        let mut sides = vec![edge(a, c1)];
        sides.extend(crossed.iter().copied());
        sides.push(edge(cn, b));
        let mut pivots = Vec::with_capacity(m);
        for s in 1..=m {
            pivots.push(common(sides[s - 1], sides[s]).unwrap());
        }
        let mut centers: Vec<u32> = Vec::new();
        let mut fan_of = Vec::with_capacity(m);
        for &q in &pivots {
            if centers.last() != Some(&q) {
                centers.push(q);
            }
            fan_of.push(centers.len());
        }
        let big_n = centers.len();
        let c2 = if big_n >= 2 { centers[1] } else { b };
        let cprev = if big_n >= 2 { centers[big_n - 2] } else { a };
        let eps_a = if ccw(n, a, centers[0], c2) { 1 } else { 0 };
        let eps_b = if ccw(n, cprev, centers[big_n - 1], b) { 1 } else { 0 };
        Ok(Frame {
            a,
            b,
            centers,
            strip: strip.iter().map(|&i| t.tris[i].v).collect(),
            fan_of,
            sides,
            eps_a,
            eps_b,
        })
    }

    /// `c_k` for `0 <= k <= N+1`.
    pub fn c(&self, k: usize) -> u32 {
        if k == 0 {
            self.a
        } else if k == self.centers.len() + 1 {
            self.b
        } else {
            self.centers[k - 1]
        }
    }

    pub fn big_n(&self) -> usize {
        self.centers.len()
    }

    /// Orientation with arrows `c_1 -> c_2 -> ... -> c_N` and every other arc
    /// leaving the fan center it belongs to.
    pub fn apply_default_orientation(&self, t: &mut Triangulation) -> Result<(), SurfaceError> {
        t.orient_low_to_high();
        let m = self.strip.len();
        // pivots again: pivot of triangle s is the common vertex of sides s-1 and s
        let piv: Vec<u32> = (1..=m)
            .map(|s| common(self.sides[s - 1], self.sides[s]).unwrap())
            .collect();
        for s in 0..=m {
            let e = self.sides[s];
            let (tail, head) = if s == 0 {
                (piv[0], self.a)
            } else if s == m {
                (piv[m - 1], self.b)
            } else if piv[s - 1] != piv[s] {
                (piv[s - 1], piv[s])
            } else {
                let o = if e.0 == piv[s] { e.1 } else { e.0 };
                (piv[s], o)
            };
            debug_assert_eq!(edge(tail, head), e);
            t.set_head(tail, head)?;
        }
        // remaining boundary arcs leave a fan center when they touch one
        let sides: BTreeSet<Edge> = self.sides.iter().copied().collect();
        let keys: Vec<Edge> = t.arcs.keys().copied().collect();
        for e in keys {
            if sides.contains(&e) {
                continue;
            }
            if let Some(c) = self.centers.iter().find(|&&c| c == e.0 || c == e.1) {
                let o = if e.0 == *c { e.1 } else { e.0 };
                t.set_head(*c, o)?;
            }
        }
        Ok(())
    }
}

/// All triangulations of the `n`-gon, as diagonal lists.
pub fn all_triangulations(n: u32) -> Vec<Vec<Edge>> {
    fn rec(lo: u32, hi: u32) -> Vec<Vec<Edge>> {
        if hi - lo < 2 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for k in lo + 1..hi {
            for l in rec(lo, k) {
                for r in rec(k, hi) {
                    let mut d = l.clone();
                    d.extend(r.iter().copied());
                    if k - lo > 1 {
                        d.push((lo, k));
                    }
                    if hi - k > 1 {
                        d.push((k, hi));
                    }
                    out.push(d);
                }
            }
        }
        out
    }
    if n < 3 {
        return vec![];
    }
    rec(0, n - 1)
}

/// Fan at vertex 0.
pub fn fan_diagonals(n: u32) -> Vec<Edge> {
    (2..n.saturating_sub(1)).map(|k| (0, k)).collect()
}

/// Strip vertices `s_0, s_1, ...` of a zig-zag whose triangles are `(s_{i-1}, s_i, s_{i+1})`.
pub fn zigzag_sequence(n: u32) -> Vec<u32> {
    let mut s = vec![0, 1];
    let (mut lo, mut hi) = (2u32, n - 1);
    let mut take_hi = true;
    while s.len() < n as usize {
        if take_hi {
            s.push(hi);
            hi -= 1;
        } else {
            s.push(lo);
            lo += 1;
        }
        take_hi = !take_hi;
    }
    s
}

pub fn zigzag_diagonals(n: u32) -> Vec<Edge> {
    let s = zigzag_sequence(n);
    (1..s.len().saturating_sub(2)).map(|i| edge(s[i], s[i + 1])).collect()
}

/// Triangulation whose dual tree is a path. The first triangle is `(0, 1, n-1)`;
/// each later triangle takes the next free vertex after the right end (`true`) or
/// before the left end (`false`).
pub fn strip_diagonals(n: u32, right: &[bool]) -> Vec<Edge> {
    assert!(n >= 4 && right.len() + 4 == n as usize);
    let (mut r, mut l) = (1u32, n - 1);
    let mut out = vec![edge(r, l)];
    for &go_right in right {
        if go_right {
            r += 1;
        } else {
            l -= 1;
        }
        out.push(edge(r, l));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let c: Vec<usize> = (3..=9).map(|n| all_triangulations(n).len()).collect();
        assert_eq!(c, vec![1, 2, 5, 14, 42, 132, 429]);
        for d in all_triangulations(7) {
            assert!(Triangulation::new(7, &d).is_ok());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Triangulation::new(5, &[(0, 2), (1, 3)]).is_err());
        assert!(Triangulation::new(5, &[(0, 1), (0, 3)]).is_err());
        assert!(Triangulation::new(5, &[(0, 2)]).is_err());
    }

    #[test]
    fn ptolemy_quadrilateral() {
        let t = Triangulation::new(4, &[(0, 2)]).unwrap();
        let r = t.registry().clone();
        let l = t.lambda_of_arc(1, 3).unwrap();
        let want = SuperRat::parse(
            "(l_12*l_34 + l_14*l_23 + l_12^(1/2)*l_14^(1/2)*l_23^(1/2)*l_34^(1/2)*t_123.t_134)/(l_13)",
            &r,
        )
        .unwrap();
        assert_eq!(l, want);
    }

    #[test]
    fn zigzag_shapes() {
        assert_eq!(zigzag_sequence(6), vec![0, 1, 5, 2, 4, 3]);
        assert_eq!(zigzag_diagonals(6), vec![(1, 5), (2, 5), (2, 4)]);
        let t = Triangulation::new(6, &zigzag_diagonals(6)).unwrap();
        assert_eq!(t.longest_arc(), Some((0, 3)));
        assert!(Triangulation::new(6, &[(0, 2), (2, 4), (0, 4)]).unwrap().longest_arc().is_none());
    }
}
