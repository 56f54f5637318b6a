//! Snake graphs of the extended strip and their double dimer covers.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::holonomy::{holonomy_ab, HolonomyError};
use crate::ospmat::SuperMatrix;
use crate::superalg::{AlgError, Monomial, SuperRat, VarRegistry};
use crate::surface::{edge, Edge, Frame, SurfaceError, Triangulation};

#[derive(Debug, Error)]
pub enum SnakeError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
    #[error("snake graph has {0} tiles, limit is {1}")]
    TooLarge(usize, usize),
}

/// Vertex of the extended triangulation: a polygon vertex or one of the two
/// adjoined points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pt {
    V(u32),
    ATilde,
    BTilde,
}

/// Weight label of a snake graph edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    Arc(u32, u32),
    E0,
    E1,
    EN,
    EN1,
    /// Side of a standalone strip.
    Side(u32),
}

/// `T` with the triangles `(ã, c₀, c₁)` and `(c_N, c_{N+1}, b̃)` adjoined.
#[derive(Clone, Debug)]
pub struct ExtendedTriangulation {
    pub base: Triangulation,
    pub frame: Frame,
    /// Registry of `base` plus `e_0, e_1, e_N, e_{N+1}`.
    pub reg: VarRegistry,
    pub e_vars: [u16; 4],
    /// Odd generators of the two adjoined triangles.
    pub theta_ends: [u16; 2],
    /// Crossed arcs `i_1 .. i_d`.
    pub crossed: Vec<Edge>,
    /// Crossed triangles `Δ_0 .. Δ_d`; the first and last are the adjoined ones.
    pub tris: Vec<[Pt; 3]>,
}

pub fn extend(t: &Triangulation, f: &Frame) -> Result<ExtendedTriangulation, SnakeError> {
    let mut reg = (**t.registry()).clone();
    let e_vars = [reg.even("e_0")?, reg.even("e_1")?, reg.even("e_N")?, reg.even("e_N1")?];
    let theta_ends = [reg.odd("t_a")?, reg.odd("t_b")?];
    let n = f.big_n();
    let mut tris = vec![[Pt::ATilde, Pt::V(f.c(0)), Pt::V(f.c(1))]];
    tris.extend(f.strip.iter().map(|s| s.map(Pt::V)));
    tris.push([Pt::V(f.c(n)), Pt::V(f.c(n + 1)), Pt::BTilde]);
    Ok(ExtendedTriangulation {
        base: t.clone(),
        frame: f.clone(),
        reg,
        e_vars,
        theta_ends,
        crossed: f.sides.clone(),
        tris,
    })
}

impl ExtendedTriangulation {
    pub fn d(&self) -> usize {
        self.crossed.len()
    }

    fn label(&self, x: Pt, y: Pt) -> Label {
        let f = &self.frame;
        let n = f.big_n();
        let (p, q) = match (x, y) {
            (Pt::ATilde, q) | (q, Pt::ATilde) => (Pt::ATilde, q),
            (Pt::BTilde, q) | (q, Pt::BTilde) => (Pt::BTilde, q),
            (Pt::V(a), Pt::V(b)) => {
                let (a, b) = edge(a, b);
                return Label::Arc(a, b);
            }
        };
        match (p, q) {
            (Pt::ATilde, Pt::V(v)) if v == f.c(0) => Label::E0,
            (Pt::ATilde, _) => Label::E1,
            (Pt::BTilde, Pt::V(v)) if v == f.c(n) => Label::EN,
            _ => Label::EN1,
        }
    }

    /// Even weight of a label.
    pub fn weight_var(&self, l: Label) -> u16 {
        match l {
            Label::Arc(a, b) => self.base.lambda_var(a, b).expect("arc of the triangulation"),
            Label::E0 => self.e_vars[0],
            Label::E1 => self.e_vars[1],
            Label::EN => self.e_vars[2],
            Label::EN1 => self.e_vars[3],
            Label::Side(_) => panic!("strip sides carry no weight"),
        }
    }

    /// Odd generator of `Δ_j`.
    pub fn theta(&self, j: usize) -> u16 {
        if j == 0 {
            self.theta_ends[0]
        } else if j == self.d() {
            self.theta_ends[1]
        } else {
            self.base.mu_var(self.frame.strip[j - 1]).expect("strip triangle")
        }
    }

    /// Weight of a cover: `√x` per edge occurrence, then for each cycle from
    /// left to right the generators of the triangles just outside its two
    /// ends. `toggle_a` contracts `θ_ã` from the left, `toggle_b` contracts
    /// `θ_b̃` from the right and
    /// `reversed(cycle)` writes that cycle's pair right to left.
    pub fn weight(
        &self,
        g: &SnakeGraph,
        c: &DoubleDimerCover,
        toggle_a: bool,
        toggle_b: bool,
        reversed: &dyn Fn(&Cycle) -> bool,
    ) -> SuperRat {
        let mut m = Monomial::one();
        for (k, &(_, _, l)) in g.edges.iter().enumerate() {
            if c.mult[k] > 0 {
                m = m.mul(&Monomial::var(self.weight_var(l), c.mult[k] as i32));
            }
        }
        let mut w = SuperRat::monomial(1.into(), m);
        for cy in &c.cycles {
            let mut ends = [cy.tiles.0, cy.tiles.1 + 1];
            if reversed(cy) {
                ends.reverse();
            }
            for j in ends {
                w = w.mul(&SuperRat::odd_var(self.theta(j)));
            }
        }
        if toggle_a {
            w = w.toggle(self.theta_ends[0]);
        }
        if toggle_b {
            w = w.toggle_right(self.theta_ends[1]);
        }
        w
    }

    /// Fan index of `Δ_j`, for `1 <= j < d`.
    pub fn fan_of(&self, j: usize) -> usize {
        self.frame.fan_of[j - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dir {
    East,
    North,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tile {
    /// Lower-left corner.
    pub at: (i32, i32),
    pub south: Label,
    pub west: Label,
    pub north: Label,
    pub east: Label,
}

#[derive(Clone, Debug, Serialize)]
pub struct SnakeGraph {
    pub tiles: Vec<Tile>,
    /// Placement of tile `k+1` relative to tile `k`.
    pub turns: Vec<Dir>,
    pub vertices: Vec<(i32, i32)>,
    /// `(u, v, label)` with `u < v`.
    pub edges: Vec<(usize, usize, Label)>,
}

fn opposite(quad: [Pt; 4], s: (Pt, Pt)) -> (Pt, Pt) {
    // quad in cyclic order; the side opposite (q_k, q_{k+1}) is (q_{k+2}, q_{k+3})
    for k in 0..4 {
        let (a, b) = (quad[k], quad[(k + 1) % 4]);
        if (a, b) == s || (b, a) == s {
            return (quad[(k + 2) % 4], quad[(k + 3) % 4]);
        }
    }
    unreachable!("side of the quadrilateral")
}

fn other_two(t: [Pt; 3], e: (Pt, Pt)) -> [(Pt, Pt); 2] {
    let w = t.into_iter().find(|&p| p != e.0 && p != e.1).unwrap();
    [(e.0, w), (e.1, w)]
}

fn same(a: (Pt, Pt), b: (Pt, Pt)) -> bool {
    a == b || (a.1, a.0) == b
}

pub fn build_snake(x: &ExtendedTriangulation) -> SnakeGraph {
    let d = x.d();
    let arc = |j: usize| {
        let (a, b) = x.crossed[j - 1];
        (Pt::V(a), Pt::V(b))
    };
    let mut tiles = Vec::with_capacity(d);
    let mut turns = Vec::new();
    let (mut s, mut w) = {
        let a = (Pt::ATilde, Pt::V(x.frame.c(0)));
        let b = (Pt::ATilde, Pt::V(x.frame.c(1)));
        if x.frame.eps_a == 0 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut at = (0, 0);
    for j in 1..=d {
        let (p, q) = arc(j);
        let lo = x.tris[j - 1].into_iter().find(|&v| v != p && v != q).unwrap();
        let hi = x.tris[j].into_iter().find(|&v| v != p && v != q).unwrap();
        let quad = [p, lo, q, hi];
        let n = opposite(quad, s);
        let e = opposite(quad, w);
        tiles.push(Tile {
            at,
            south: x.label(s.0, s.1),
            west: x.label(w.0, w.1),
            north: x.label(n.0, n.1),
            east: x.label(e.0, e.1),
        });
        if j == d {
            break;
        }
        let next = arc(j + 1);
        let glue = other_two(x.tris[j], (p, q))
            .into_iter()
            .find(|&g| !same(g, next))
            .unwrap();
        // the next tile sits across the glued side; the arc i_j becomes its
        // other lower-left side
        if same(glue, e) {
            turns.push(Dir::East);
            at.0 += 1;
            (s, w) = ((p, q), glue);
        } else {
            turns.push(Dir::North);
            at.1 += 1;
            (s, w) = (glue, (p, q));
        }
    }
    SnakeGraph::from_tiles(tiles, turns)
}

/// Restriction on the two sides meeting at the outer corner of an end tile:
/// the lower label doubled, the higher label doubled, or both used once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Corner {
    Low,
    High,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// First and last enclosed tile, 0-based.
    pub tiles: (usize, usize),
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleDimerCover {
    /// Multiplicity of each edge of the graph.
    pub mult: Vec<u8>,
    /// Cycles ordered by their first tile.
    pub cycles: Vec<Cycle>,
}

impl SnakeGraph {
    fn from_tiles(tiles: Vec<Tile>, turns: Vec<Dir>) -> SnakeGraph {
        let mut vid: HashMap<(i32, i32), usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut id = |p: (i32, i32), vertices: &mut Vec<(i32, i32)>| {
            *vid.entry(p).or_insert_with(|| {
                vertices.push(p);
                vertices.len() - 1
            })
        };
        let mut emap: BTreeMap<(usize, usize), Label> = BTreeMap::new();
        for t in &tiles {
            let (x0, y0) = t.at;
            let c = [(x0, y0), (x0 + 1, y0), (x0 + 1, y0 + 1), (x0, y0 + 1)];
            let ids: Vec<usize> = c.iter().map(|&p| id(p, &mut vertices)).collect();
            for (k, l) in [(0, t.south), (1, t.east), (2, t.north), (3, t.west)] {
                let (u, v) = (ids[k], ids[(k + 1) % 4]);
                let key = (u.min(v), u.max(v));
                if let Some(old) = emap.insert(key, l) {
                    debug_assert_eq!(old, l, "glued sides disagree");
                }
            }
        }
        let edges = emap.into_iter().map(|((u, v), l)| (u, v, l)).collect();
        SnakeGraph { tiles, turns, vertices, edges }
    }

    /// Horizontal row of `k >= 1` tiles with distinct side labels.
    pub fn strip(k: usize) -> SnakeGraph {
        let k = k as u32;
        let tiles = (0..k)
            .map(|j| Tile {
                at: (j as i32, 0),
                south: Label::Side(3 * j),
                west: Label::Side(3 * j + 2),
                north: Label::Side(3 * j + 1),
                east: Label::Side(3 * j + 5),
            })
            .collect();
        SnakeGraph::from_tiles(tiles, vec![Dir::East; k.saturating_sub(1) as usize])
    }
    fn vertex(&self, p: (i32, i32)) -> usize {
        self.vertices.iter().position(|&q| q == p).expect("corner of a tile")
    }

    fn edge_between(&self, u: usize, v: usize) -> usize {
        let k = (u.min(v), u.max(v));
        self.edges.iter().position(|e| (e.0, e.1) == k).expect("edge of a tile")
    }

    /// The two sides at the lower-left corner of the first tile and at the
    /// upper-right corner of the last one.
    pub fn corner_edges(&self) -> ([usize; 2], [usize; 2]) {
        let t0 = &self.tiles[0];
        let (x, y) = t0.at;
        let o = self.vertex((x, y));
        let s = self.edge_between(o, self.vertex((x + 1, y)));
        let w = self.edge_between(o, self.vertex((x, y + 1)));
        let t1 = self.tiles.last().unwrap();
        let (x, y) = t1.at;
        let o = self.vertex((x + 1, y + 1));
        let n = self.edge_between(o, self.vertex((x, y + 1)));
        let e = self.edge_between(o, self.vertex((x + 1, y)));
        (sorted_by_label(self, s, w), sorted_by_label(self, n, e))
    }

    fn cycles_of(&self, mult: &[u8]) -> Vec<Cycle> {
        let nv = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (k, &(u, v, _)) in self.edges.iter().enumerate() {
            if mult[k] == 1 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; nv];
        let mut out = Vec::new();
        for start in 0..nv {
            if seen[start] || adj[start].is_empty() {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let (mut prev, mut cur) = (start, adj[start][0]);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                let nx = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = nx;
            }
            let inside: Vec<usize> = (0..self.tiles.len())
                .filter(|&k| self.encloses(&cyc, self.tiles[k].at))
                .collect();
            let tiles = (inside[0], *inside.last().unwrap());
            debug_assert_eq!(inside.len(), tiles.1 - tiles.0 + 1);
            out.push(Cycle { tiles, vertices: cyc });
        }
        out.sort_by_key(|c| c.tiles);
        out
    }

    fn encloses(&self, cyc: &[usize], at: (i32, i32)) -> bool {
        // horizontal ray from the tile centre to the east
        let mut inside = false;
        for k in 0..cyc.len() {
            let (p, q) = (self.vertices[cyc[k]], self.vertices[cyc[(k + 1) % cyc.len()]]);
            if p.0 == q.0 && p.0 > at.0 && p.1.min(q.1) == at.1 {
                inside = !inside;
            }
        }
        inside
    }

    /// Every double dimer cover, optionally restricted at either end.
    pub fn covers(&self, start: Option<Corner>, end: Option<Corner>) -> Vec<DoubleDimerCover> {
        let ne = self.edges.len();
        let nv = self.vertices.len();
        let mut fixed: Vec<Option<u8>> = vec![None; ne];
        let (a, b) = self.corner_edges();
        for (pair, r) in [(a, start), (b, end)] {
            if let Some(r) = r {
                let (x, y) = match r {
                    Corner::Low => (2, 0),
                    Corner::High => (0, 2),
                    Corner::Mixed => (1, 1),
                };
                fixed[pair[0]] = Some(x);
                fixed[pair[1]] = Some(y);
            }
        }
        // a vertex is complete once its last incident edge is decided
        let mut last = vec![0usize; nv];
        for (k, &(u, v, _)) in self.edges.iter().enumerate() {
            last[u] = last[u].max(k);
            last[v] = last[v].max(k);
        }
        let mut closes: Vec<Vec<usize>> = vec![Vec::new(); ne];
        for v in 0..nv {
            closes[last[v]].push(v);
        }
        let mut out = Vec::new();
        let mut mult = vec![0u8; ne];
        let mut deg = vec![0u8; nv];
        self.search(0, &fixed, &closes, &mut mult, &mut deg, &mut out);
        out
    }

    fn search(
        &self,
        k: usize,
        fixed: &[Option<u8>],
        closes: &[Vec<usize>],
        mult: &mut Vec<u8>,
        deg: &mut Vec<u8>,
        out: &mut Vec<DoubleDimerCover>,
    ) {
        if k == self.edges.len() {
            let cycles = self.cycles_of(mult);
            out.push(DoubleDimerCover { mult: mult.clone(), cycles });
            return;
        }
        let (u, v, _) = self.edges[k];
        let choices: &[u8] = match fixed[k] {
            Some(0) => &[0],
            Some(1) => &[1],
            Some(_) => &[2],
            None => &[0, 1, 2],
        };
        for &m in choices {
            if deg[u] + m > 2 || deg[v] + m > 2 {
                continue;
            }
            deg[u] += m;
            deg[v] += m;
            mult[k] = m;
            if closes[k].iter().all(|&w| deg[w] == 2) {
                self.search(k + 1, fixed, closes, mult, deg, out);
            }
            deg[u] -= m;
            deg[v] -= m;
        }
        mult[k] = 0;
    }
}

fn sorted_by_label(g: &SnakeGraph, x: usize, y: usize) -> [usize; 2] {
    if g.edges[x].2 <= g.edges[y].2 {
        [x, y]
    } else {
        [y, x]
    }
}

/// The nine generating functions `Ã, B̃, γ̃, C̃, D̃, δ̃, α̃, β̃, Ẽ`, laid out
/// as in the middle factor of the combinatorial formula (before the signs
/// `-Ã, -B̃, -C̃, -D̃`).
#[derive(Clone, Debug)]
pub struct Entries {
    pub sums: [[SuperRat; 3]; 3],
    pub counts: [[usize; 3]; 3],
}

const LAYOUT: [[(Corner, Corner); 3]; 3] = {
    use Corner::*;
    [
        [(Low, Low), (High, Low), (Mixed, Low)],
        [(Low, High), (High, High), (Mixed, High)],
        [(Low, Mixed), (High, Mixed), (Mixed, Mixed)],
    ]
};

/// Default tile limit for exhaustive enumeration.
pub const MAX_TILES: usize = 14;

impl ExtendedTriangulation {
    /// A cycle is written right to left when the fan of its left end triangle
    /// has the parity of `ε_a`.
    pub fn cycle_reversed(&self, c: &Cycle) -> bool {
        let l = c.tiles.0;
        l >= 1 && self.fan_of(l) % 2 == self.frame.eps_a as usize % 2
    }

    pub fn cover_weight(&self, g: &SnakeGraph, c: &DoubleDimerCover, toggle_a: bool, toggle_b: bool) -> SuperRat {
        self.weight(g, c, toggle_a, toggle_b, &|cy| self.cycle_reversed(cy))
    }

    pub fn entries(&self, g: &SnakeGraph) -> Entries {
        let mut sums: [[SuperRat; 3]; 3] = Default::default();
        let mut counts = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (st, en) = LAYOUT[i][j];
                let covers = g.covers(Some(st), Some(en));
                counts[i][j] = covers.len();
                let mut acc = SuperRat::zero();
                for c in &covers {
                    acc = acc.add(&self.cover_weight(g, c, j == 2, i == 2));
                }
                sums[i][j] = acc;
            }
        }
        Entries { sums, counts }
    }

    fn x(&self, j: usize, half: i32) -> Monomial {
        let (a, b) = self.crossed[j - 1];
        Monomial::var(self.weight_var(Label::Arc(a, b)), half)
    }

    fn e(&self, k: usize, half: i32) -> Monomial {
        Monomial::var(self.e_vars[k], half)
    }

    /// Product of the square roots of all outer boundary weights.
    pub fn boundary(&self) -> SuperRat {
        let d = self.d();
        let mut m = self.e(0, 1).mul(&self.e(1, 1)).mul(&self.e(2, 1)).mul(&self.e(3, 1));
        m = m.mul(&self.x(1, 1)).mul(&self.x(d, 1));
        for j in 2..d {
            m = m.mul(&self.x(j, 2));
        }
        SuperRat::monomial(1.into(), m)
    }

    /// `R · M̃ · C / (x_{i_2} ⋯ x_{i_{d-1}})`.
    pub fn assemble(&self, en: &Entries) -> SuperMatrix {
        let d = self.d();
        let f = &self.frame;
        let sgn = |e: u8| if e == 1 { 1 } else { -1 };
        let mono = |m: Monomial, s: i64| SuperRat::monomial(s.into(), m);
        let r = [
            mono(self.e(2, -2), 1),
            mono(self.x(d, -2).mul(&self.e(3, -2)), sgn(f.eps_b)),
            mono(self.x(d, -1).mul(&self.e(2, -1)).mul(&self.e(3, -1)), 1),
        ];
        let c = [
            mono(self.e(0, -2).mul(&self.x(1, -2)), 1),
            mono(self.e(1, -2), sgn(f.eps_a)),
            mono(self.e(0, -1).mul(&self.e(1, -1)).mul(&self.x(1, -1)), 1),
        ];
        let mut inner = Monomial::one();
        for j in 2..d {
            inner = inner.mul(&self.x(j, -2));
        }
        let mut out: [[SuperRat; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let s = if i < 2 && j < 2 { -1 } else { 1 };
                out[i][j] = r[i]
                    .mul(&en.sums[i][j])
                    .mul(&c[j])
                    .mul(&mono(inner.clone(), s));
            }
        }
        SuperMatrix::from_rows(out)
    }

    /// `Ẽ - ∂ = (-1)^{ε_a-1} α̃ β̃ / ∂`.
    pub fn corner_identity(&self, en: &Entries) -> Result<bool, SnakeError> {
        let p = self.boundary();
        let lhs = en.sums[2][2].sub(&p);
        let mut rhs = en.sums[2][0].mul(&en.sums[2][1]).div(&p)?;
        if self.frame.eps_a == 0 {
            rhs = rhs.neg();
        }
        Ok(lhs == rhs)
    }
}

/// The holonomy `H_{a,b}` assembled from double dimer covers of the snake
/// graph of the extended strip.
pub fn combo_matrix(t: &Triangulation, f: &Frame, max_tiles: usize) -> Result<SuperMatrix, SnakeError> {
    let x = extend(t, f)?;
    if x.d() > max_tiles {
        return Err(SnakeError::TooLarge(x.d(), max_tiles));
    }
    let g = build_snake(&x);
    Ok(x.assemble(&x.entries(&g)))
}

/// Result of comparing the combinatorial matrix with the holonomy.
#[derive(Clone, Debug, Serialize)]
pub struct ComboReport {
    pub tiles: usize,
    pub covers: usize,
    pub matches: bool,
    pub corner_identity: bool,
    pub boundary_free: bool,
    pub classical: bool,
}

/// Checks every claim about the combinatorial formula for one frame of a
/// default-oriented triangulation.
pub fn combo_check(t: &Triangulation, f: &Frame, max_tiles: usize) -> Result<ComboReport, SnakeError> {
    let x = extend(t, f)?;
    if x.d() > max_tiles {
        return Err(SnakeError::TooLarge(x.d(), max_tiles));
    }
    let g = build_snake(&x);
    let en = x.entries(&g);
    let m = x.assemble(&en);
    let h = holonomy_ab(t, f)?.matrix;
    let boundary_free = m
        .e
        .iter()
        .flatten()
        .all(|v| x.e_vars.iter().all(|&k| !v.mentions_even(k)));
    Ok(ComboReport {
        tiles: x.d(),
        covers: g.covers(None, None).len(),
        matches: m == h,
        corner_identity: x.corner_identity(&en)?,
        boundary_free,
        classical: classical_limit_check(&x, &g, &en)?,
    })
}

/// With every odd generator set to zero the odd entries vanish, `Ẽ` becomes
/// `∂`, and the even entries count perfect matchings with restricted corners.
pub fn classical_limit_check(x: &ExtendedTriangulation, g: &SnakeGraph, en: &Entries) -> Result<bool, SnakeError> {
    let body = |v: &SuperRat| -> SuperRat { v.as_poly().expect("sum of monomials").split_body().0.into() };
    for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
        if !body(&en.sums[i][j]).is_zero() {
            return Ok(false);
        }
    }
    if body(&en.sums[2][2]) != x.boundary() {
        return Ok(false);
    }
    for i in 0..2 {
        for j in 0..2 {
            let (st, e) = LAYOUT[i][j];
            let mut acc = SuperRat::zero();
            for m in perfect_matchings(g) {
                if corner_ok(g, &m, st, e) {
                    let mut mono = Monomial::one();
                    for &k in &m {
                        mono = mono.mul(&Monomial::var(x.weight_var(g.edges[k].2), 2));
                    }
                    acc = acc.add(&SuperRat::monomial(1.into(), mono));
                }
            }
            if body(&en.sums[i][j]) != acc {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn corner_ok(g: &SnakeGraph, m: &[usize], st: Corner, en: Corner) -> bool {
    let (a, b) = g.corner_edges();
    let want = |pair: [usize; 2], c: Corner| match c {
        Corner::Low => m.contains(&pair[0]),
        Corner::High => m.contains(&pair[1]),
        Corner::Mixed => false,
    };
    want(a, st) && want(b, en)
}

/// Perfect matchings as edge index lists.
pub fn perfect_matchings(g: &SnakeGraph) -> Vec<Vec<usize>> {
    fn go(g: &SnakeGraph, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = used.iter().position(|&u| !u) else {
            out.push(cur.clone());
            return;
        };
        for (k, &(a, b, _)) in g.edges.iter().enumerate() {
            let w = if a == v { b } else if b == v { a } else { continue };
            if used[w] {
                continue;
            }
            used[v] = true;
            used[w] = true;
            cur.push(k);
            go(g, used, cur, out);
            cur.pop();
            used[v] = false;
            used[w] = false;
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![false; g.vertices.len()], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::zigzag_diagonals;

    fn zigzag(n: u32) -> (Triangulation, Frame) {
        let mut t = Triangulation::new(n, &zigzag_diagonals(n)).unwrap();
        let (a, b) = t.longest_arc().unwrap();
        let f = Frame::new(&t, a, b).unwrap();
        f.apply_default_orientation(&mut t).unwrap();
        (t, f)
    }

    #[test]
    fn one_tile() {
        let g = SnakeGraph::strip(1);
        let cs = g.covers(None, None);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs.iter().filter(|c| c.cycles.len() == 1).count(), 1);
        assert_eq!(perfect_matchings(&g).len(), 2);
    }

    #[test]
    fn covers_are_two_regular() {
        let g = SnakeGraph::strip(4);
        for c in g.covers(None, None) {
            let mut deg = vec![0; g.vertices.len()];
            for (k, &(u, v, _)) in g.edges.iter().enumerate() {
                deg[u] += c.mult[k];
                deg[v] += c.mult[k];
            }
            assert!(deg.iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn full_boundary_cycle() {
        let (t, f) = zigzag(6);
        let x = extend(&t, &f).unwrap();
        let g = build_snake(&x);
        let d = x.d();
        let full: Vec<_> = g
            .covers(Some(Corner::Mixed), Some(Corner::Mixed))
            .into_iter()
            .filter(|c| c.cycles.len() == 1 && c.cycles[0].tiles == (0, d - 1))
            .collect();
        assert_eq!(full.len(), 1);
        let ends = SuperRat::odd_var(x.theta_ends[0]).mul(&SuperRat::odd_var(x.theta_ends[1]));
        assert_eq!(x.cover_weight(&g, &full[0], false, false), x.boundary().mul(&ends));
        assert_eq!(x.cover_weight(&g, &full[0], true, true), x.boundary());
    }

    #[test]
    fn doubled_matching_weight() {
        let (t, f) = zigzag(5);
        let x = extend(&t, &f).unwrap();
        let g = build_snake(&x);
        let m = &perfect_matchings(&g)[0];
        let mut mult = vec![0u8; g.edges.len()];
        let mut w = Monomial::one();
        for &k in m {
            mult[k] = 2;
            w = w.mul(&Monomial::var(x.weight_var(g.edges[k].2), 2));
        }
        let c = DoubleDimerCover { mult, cycles: vec![] };
        assert_eq!(x.cover_weight(&g, &c, false, false), SuperRat::monomial(1.into(), w));
    }

    #[test]
    fn zigzag_matches_holonomy() {
        for n in 4..=7 {
            let (t, f) = zigzag(n);
            let r = combo_check(&t, &f, MAX_TILES).unwrap();
            assert!(r.matches && r.corner_identity && r.boundary_free && r.classical, "{n}: {r:?}");
        }
    }
}
