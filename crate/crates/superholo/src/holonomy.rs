//! The flat `osp(1|2)` connection on the fatgraph of a triangulation, holonomies
//! between corners, and the closed form along a longest arc.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::ospmat::{gen_a, gen_e, rho, MatError, SuperMatrix};
use crate::superalg::{SuperRat, VarRegistry};
use crate::surface::{edge, sort3, Edge, Frame, SurfaceError, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolonomyError {
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    DisconnectedPath(usize, usize),
    #[error("no fatgraph vertex {0:?}")]
    NoSuchVertex(GVertex),
    #[error("monodromy around {0} is not the identity")]
    NotFlat(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// A fatgraph vertex: the corner `corner` of triangle `tri`, next to side `side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GVertex {
    pub tri: [u32; 3],
    pub corner: u32,
    pub side: Edge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Angle,
    Side,
    Cross,
}

#[derive(Clone, Debug)]
pub struct GEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub forward: SuperMatrix,
    pub backward: SuperMatrix,
}

/// The graph with one hexagon per triangle and two crossing edges per diagonal.
#[derive(Clone, Debug)]
pub struct Fatgraph {
    pub verts: Vec<GVertex>,
    index: HashMap<GVertex, usize>,
    pub edges: Vec<GEdge>,
    adj: Vec<Vec<(usize, usize, bool)>>,
}

impl Fatgraph {
    pub fn build(t: &Triangulation) -> Result<Fatgraph, HolonomyError> {
        let mut g = Fatgraph {
            verts: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            adj: Vec::new(),
        };
        for (ti, tri) in t.triangles().iter().enumerate() {
            for &v in &tri.v {
                let (nx, pv) = (tri.next(v), tri.prev(v));
                let from = g.vertex(GVertex { tri: tri.v, corner: v, side: edge(v, nx) });
                let to = g.vertex(GVertex { tri: tri.v, corner: v, side: edge(v, pv) });
                let a = gen_a(&t.h(ti, v), &t.tu(ti, v));
                let ai = a.inverse_osp_unchecked();
                g.add_edge(from, to, EdgeKind::Angle, a, ai);
            }
            for &v in &tri.v {
                let w = tri.prev(v);
                let s = edge(v, w);
                let from = g.vertex(GVertex { tri: tri.v, corner: v, side: s });
                let to = g.vertex(GVertex { tri: tri.v, corner: w, side: s });
                let e = gen_e(t.lambda(v, w)?)?;
                let ei = rho().mul(&e);
                g.add_edge(from, to, EdgeKind::Side, e, ei);
            }
        }
        for d in t.diagonals() {
            let ts = t.triangles_on(d);
            let (t0, t1) = (t.triangles()[ts[0]].v, t.triangles()[ts[1]].v);
            let head = t.head(d.0, d.1)?;
            for x in [d.0, d.1] {
                let u = g.vertex(GVertex { tri: t0, corner: x, side: d });
                let w = g.vertex(GVertex { tri: t1, corner: x, side: d });
                let m = if x == head { rho() } else { SuperMatrix::identity() };
                g.add_edge(u, w, EdgeKind::Cross, m.clone(), m);
            }
        }
        Ok(g)
    }

    fn vertex(&mut self, v: GVertex) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        self.verts.push(v);
        self.adj.push(Vec::new());
        self.index.insert(v, self.verts.len() - 1);
        self.verts.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, kind: EdgeKind, f: SuperMatrix, b: SuperMatrix) {
        let id = self.edges.len();
        self.edges.push(GEdge { from, to, kind, forward: f, backward: b });
        self.adj[from].push((to, id, true));
        self.adj[to].push((from, id, false));
    }

    pub fn id(&self, v: &GVertex) -> Result<usize, HolonomyError> {
        self.index.get(v).copied().ok_or(HolonomyError::NoSuchVertex(*v))
    }

    /// Matrix carried by the step `u -> w`.
    pub fn step(&self, u: usize, w: usize) -> Result<&SuperMatrix, HolonomyError> {
        self.adj[u]
            .iter()
            .find(|(x, _, _)| *x == w)
            .map(|&(_, id, fwd)| {
                if fwd {
                    &self.edges[id].forward
                } else {
                    &self.edges[id].backward
                }
            })
            .ok_or(HolonomyError::DisconnectedPath(u, w))
    }

    /// Product along a path; later steps multiply on the left.
    pub fn holonomy(&self, path: &[usize]) -> Result<SuperMatrix, HolonomyError> {
        let mut h = SuperMatrix::identity();
        for w in path.windows(2) {
            h = self.step(w[0], w[1])?.mul(&h);
        }
        Ok(h)
    }

    pub fn holonomy_of(&self, path: &[GVertex]) -> Result<SuperMatrix, HolonomyError> {
        let ids: Vec<usize> = path.iter().map(|v| self.id(v)).collect::<Result<_, _>>()?;
        self.holonomy(&ids)
    }

    /// Breadth-first shortest path.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.verts.len()];
        prev[from] = from;
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            if u == to {
                break;
            }
            for &(w, _, _) in &self.adj[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    q.push_back(w);
                }
            }
        }
        let mut p = vec![to];
        while *p.last().unwrap() != from {
            p.push(prev[*p.last().unwrap()]);
        }
        p.reverse();
        p
    }

    /// Holonomy from `from` to every vertex along a breadth-first tree.
    pub fn transport(&self, from: usize) -> Vec<SuperMatrix> {
        let mut out: Vec<Option<SuperMatrix>> = vec![None; self.verts.len()];
        out[from] = Some(SuperMatrix::identity());
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            for &(w, id, fwd) in &self.adj[u] {
                if out[w].is_none() {
                    let e = &self.edges[id];
                    let m = if fwd { &e.forward } else { &e.backward };
                    out[w] = Some(m.mul(out[u].as_ref().unwrap()));
                    q.push_back(w);
                }
            }
        }
        out.into_iter().map(|m| m.unwrap()).collect()
    }

    /// Fatgraph vertices near polygon vertex `v`, in sorted order.
    pub fn near(&self, v: u32) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.verts.len()).filter(|&i| self.verts[i].corner == v).collect();
        ids.sort_by_key(|&i| self.verts[i]);
        ids
    }

    /// Gauge transformation by an involution `g` (`ρ` or the identity) at a
    /// vertex: every step into it is multiplied by `g` on the left, every
    /// step out of it by `g` on the right.
    pub fn gauge(&mut self, v: usize, g: &SuperMatrix) {
        for e in self.edges.iter_mut() {
            if e.to == v {
                e.forward = g.mul(&e.forward);
                e.backward = e.backward.mul(g);
            }
            if e.from == v {
                e.forward = e.forward.mul(g);
                e.backward = g.mul(&e.backward);
            }
        }
    }

    /// Closed faces: one hexagon per triangle, one quadrilateral per diagonal.
    pub fn faces(&self, t: &Triangulation) -> Vec<(String, Vec<GVertex>)> {
        let mut out = Vec::new();
        for tri in t.triangles() {
            let [a, b, c] = tri.v;
            let gv = |corner, x: u32, y: u32| GVertex { tri: tri.v, corner, side: edge(x, y) };
            out.push((
                format!("triangle {a}{b}{c}"),
                vec![
                    gv(a, a, c),
                    gv(c, a, c),
                    gv(c, c, b),
                    gv(b, c, b),
                    gv(b, b, a),
                    gv(a, b, a),
                    gv(a, a, c),
                ],
            ));
        }
        for d in t.diagonals() {
            let ts = t.triangles_on(d);
            let (t0, t1) = (t.triangles()[ts[0]].v, t.triangles()[ts[1]].v);
            let gv = |tri, corner| GVertex { tri, corner, side: d };
            out.push((
                format!("diagonal {}-{}", d.0, d.1),
                vec![gv(t0, d.0), gv(t0, d.1), gv(t1, d.1), gv(t1, d.0), gv(t0, d.0)],
            ));
        }
        out
    }
}

/// Every face monodromy is the identity.
pub fn check_flat(t: &Triangulation) -> Result<(), HolonomyError> {
    let g = Fatgraph::build(t)?;
    for (name, cyc) in g.faces(t) {
        if g.holonomy_of(&cyc)? != SuperMatrix::identity() {
            return Err(HolonomyError::NotFlat(name));
        }
    }
    Ok(())
}

/// The `(ε_a, ε_b)` type of a longest-arc holonomy, as in `"01"`.
pub fn type_label(f: &Frame) -> String {
    format!("{}{}", f.eps_a, f.eps_b)
}

#[derive(Clone, Debug)]
pub struct HolonomyResult {
    pub matrix: SuperMatrix,
    pub eps_a: u8,
    pub eps_b: u8,
    pub path_length: usize,
}

/// Start vertex of `H_{a,b}`: near `a` on the side `a-c_1`.
pub fn frame_start(f: &Frame) -> GVertex {
    GVertex { tri: f.strip[0], corner: f.a, side: edge(f.a, f.c(1)) }
}

/// End vertex of `H_{a,b}`: near `b` on the side `c_N-b`.
pub fn frame_end(f: &Frame) -> GVertex {
    let n = f.big_n();
    GVertex { tri: *f.strip.last().unwrap(), corner: f.b, side: edge(f.c(n), f.b) }
}

/// `H_{a,b}` along a shortest fatgraph path.
pub fn holonomy_ab(t: &Triangulation, f: &Frame) -> Result<HolonomyResult, HolonomyError> {
    let g = Fatgraph::build(t)?;
    let p = g.path(g.id(&frame_start(f))?, g.id(&frame_end(f))?);
    Ok(HolonomyResult {
        matrix: g.holonomy(&p)?,
        eps_a: f.eps_a,
        eps_b: f.eps_b,
        path_length: p.len() - 1,
    })
}

/// Holonomy between two chosen vertices near `i` and near `j`.
pub fn holonomy_between(
    t: &Triangulation,
    i: u32,
    j: u32,
    start_choice: usize,
    end_choice: usize,
) -> Result<HolonomyResult, HolonomyError> {
    let g = Fatgraph::build(t)?;
    let (ni, nj) = (g.near(i), g.near(j));
    if ni.is_empty() || nj.is_empty() {
        return Err(SurfaceError::ArcNotPresent(i, j).into());
    }
    let p = g.path(ni[start_choice % ni.len()], nj[end_choice % nj.len()]);
    Ok(HolonomyResult {
        matrix: g.holonomy(&p)?,
        eps_a: 0,
        eps_b: 0,
        path_length: p.len() - 1,
    })
}

/// Angle and crossing steps around `c` in strip order until the side `to` is reached.
fn rotate(f: &Frame, path: &mut Vec<GVertex>, s: &mut usize, c: u32, to: Edge) {
    loop {
        let cur = *path.last().unwrap();
        if cur.side == to {
            return;
        }
        let tri = f.strip[*s];
        let other = tri
            .iter()
            .filter(|&&x| x != c)
            .map(|&x| edge(c, x))
            .find(|&e| e != cur.side)
            .unwrap();
        path.push(GVertex { tri, corner: c, side: other });
        if other != to {
            cross(f, path, s);
        }
    }
}

fn cross(f: &Frame, path: &mut Vec<GVertex>, s: &mut usize) {
    let cur = *path.last().unwrap();
    *s += 1;
    path.push(GVertex { tri: f.strip[*s], ..cur });
}

fn side_step(f: &Frame, path: &mut Vec<GVertex>, s: usize, to: u32) {
    let cur = *path.last().unwrap();
    path.push(GVertex { tri: f.strip[s], corner: to, side: cur.side });
}

/// Path that crosses each arc `c_k c_{k+1}` near `c_{k+1}`.
pub fn canonical_path_late(f: &Frame) -> Vec<GVertex> {
    let n = f.big_n();
    let mut p = vec![frame_start(f)];
    let mut s = 0;
    side_step(f, &mut p, s, f.c(1));
    for k in 1..=n {
        if k > 1 {
            cross(f, &mut p, &mut s);
        }
        rotate(f, &mut p, &mut s, f.c(k), edge(f.c(k), f.c(k + 1)));
        side_step(f, &mut p, s, f.c(k + 1));
    }
    p
}

/// Path that crosses each arc `c_k c_{k+1}` near `c_k`.
pub fn canonical_path_early(f: &Frame) -> Vec<GVertex> {
    let n = f.big_n();
    let mut p = vec![frame_start(f)];
    let mut s = 0;
    for k in 0..=n {
        side_step(f, &mut p, s, f.c(k + 1));
        if k < n {
            rotate(f, &mut p, &mut s, f.c(k + 1), edge(f.c(k + 1), f.c(k + 2)));
            if k + 1 < n {
                cross(f, &mut p, &mut s);
            }
        }
    }
    p
}

fn sign(x: &SuperRat, odd_power: u32) -> SuperRat {
    if odd_power % 2 == 1 {
        x.neg()
    } else {
        x.clone()
    }
}

fn td_in(t: &Triangulation, tri: [u32; 3], v: u32) -> Result<SuperRat, HolonomyError> {
    let i = t
        .tri_index(tri)
        .ok_or(SurfaceError::ArcNotPresent(tri[0], tri[1]))?;
    Ok(t.td(i, v))
}

/// The closed form of `H_{a,b}` built from flip-oracle values.
pub fn closed_form_h(t: &Triangulation, f: &Frame) -> Result<SuperMatrix, HolonomyError> {
    let n = f.big_n();
    let (c0, c1, cn, cn1) = (f.c(0), f.c(1), f.c(n), f.c(n + 1));
    let (ea, eb) = (f.eps_a as u32, f.eps_b as u32);
    let lam = |i: u32, j: u32| {
        if i == j {
            Ok(SuperRat::zero())
        } else {
            t.lambda_of_arc(i, j)
        }
    };
    let l01 = lam(c0, c1)?;
    let lnn = lam(cn, cn1)?;
    let inv01 = l01.inv().map_err(SurfaceError::from)?;
    let invnn = lnn.inv().map_err(SurfaceError::from)?;

    // rows: flip toward b
    let mut tb = t.clone();
    tb.flip_toward(c0, cn1)?;
    let td_b = td_in(&tb, [c0, c1, cn1], cn1)?;
    let td_n = if cn == c1 {
        SuperRat::zero()
    } else {
        let mut tn = t.clone();
        tn.flip_toward(c0, cn)?;
        td_in(&tn, [c0, c1, cn], cn)?
    };

    // columns: flip toward a
    let mut ta0 = t.clone();
    ta0.flip_toward(cn1, c0)?;
    let td_a0 = td_in(&ta0, [c0, cn, cn1], c0)?;
    let td_a1 = if c1 == cn {
        SuperRat::zero()
    } else {
        let mut ta1 = t.clone();
        ta1.flip_toward(cn1, c1)?;
        td_in(&ta1, [c1, cn, cn1], c1)?
    };
    // a single fan carries -Td at (3,2) for both of its types; a two-fan
    // strip of type 01 flips the sign at (3,1)
    let s31 = if n == 2 && ea == 0 && eb == 1 { 1 } else { 0 };
    let s32 = if n == 1 { 1 } else { ea + 1 };

    let m11 = lam(c1, cn1)?.mul(&inv01).neg();
    let m12 = sign(&lam(c0, cn1)?, ea);
    let m13 = td_b.clone();
    let m21 = sign(&lam(c1, cn)?.mul(&inv01).mul(&invnn), eb);
    let m22 = sign(&lam(c0, cn)?.mul(&invnn), ea + eb + 1);
    let m23 = sign(&td_n.mul(&invnn), eb + 1);
    let m31 = sign(&td_a1.mul(&inv01), s31);
    let m32 = sign(&td_a0, s32);
    let m33 = SuperRat::one().add(&m31.mul(&m32));
    Ok(SuperMatrix::from_rows([[m11, m12, m13], [m21, m22, m23], [m31, m32, m33]]))
}

/// Second expression for the `(3,3)` entry of the closed form.
pub fn closed_form_corner_alt(t: &Triangulation, f: &Frame) -> Result<SuperRat, HolonomyError> {
    let n = f.big_n();
    let (c0, c1, cn, cn1) = (f.c(0), f.c(1), f.c(n), f.c(n + 1));
    let lnn = t.lambda_of_arc(cn, cn1)?;
    let mut tb = t.clone();
    tb.flip_toward(c0, cn1)?;
    let td_b = td_in(&tb, [c0, c1, cn1], cn1)?;
    let td_n = if cn == c1 {
        SuperRat::zero()
    } else {
        let mut tn = t.clone();
        tn.flip_toward(c0, cn)?;
        td_in(&tn, [c0, c1, cn], cn)?
    };
    let x = lnn.inv().map_err(SurfaceError::from)?.mul(&td_b).mul(&td_n);
    Ok(SuperRat::one().add(&sign(&x, f.eps_b as u32 + 1)))
}

/// Matrix text for display.
/// Holonomy around the corner `c` through the consecutive triangles
/// `(c, v_k, v_{k+1})`, from the side `c-v_0` to the side `c-v_m`.
pub fn fan_product(t: &Triangulation, c: u32, nbrs: &[u32]) -> Result<SuperMatrix, HolonomyError> {
    let g = Fatgraph::build(t)?;
    let mut path = Vec::new();
    for w in nbrs.windows(2) {
        let tri = sort3([c, w[0], w[1]]);
        if t.tri_index(tri).is_none() {
            return Err(HolonomyError::NoSuchVertex(GVertex { tri, corner: c, side: edge(c, w[0]) }));
        }
        path.push(GVertex { tri, corner: c, side: edge(c, w[0]) });
        path.push(GVertex { tri, corner: c, side: edge(c, w[1]) });
    }
    g.holonomy_of(&path)
}

/// `A(h|τ)` of the angle at `c` in the triangle `(c, j, l)` after flipping
/// the arc `j-l` in, read from the side `c-j` to the side `c-l`.
pub fn fan_target(t: &Triangulation, c: u32, j: u32, l: u32) -> Result<SuperMatrix, HolonomyError> {
    let mut t = t.clone();
    t.flip_toward(j, l)?;
    let tri = sort3([c, j, l]);
    let ti = t.tri_index(tri).ok_or(SurfaceError::ArcNotPresent(j, l))?;
    let a = gen_a(&t.h(ti, c), &t.tu(ti, c));
    Ok(if t.triangles()[ti].next(c) == j { a } else { a.inverse_osp_unchecked() })
}

/// The fan product equals the flipped angle matrix times `ρ` to the number
/// of interior spokes whose arrow points into `c`.
pub fn fan_collapses(t: &Triangulation, c: u32, nbrs: &[u32]) -> Result<bool, HolonomyError> {
    let (j, l) = (nbrs[0], nbrs[nbrs.len() - 1]);
    let mut want = fan_target(t, c, j, l)?;
    for &v in &nbrs[1..nbrs.len() - 1] {
        if t.head(c, v)? == c {
            want = want.mul(&rho());
        }
    }
    Ok(fan_product(t, c, nbrs)? == want)
}

pub fn matrix_text(m: &SuperMatrix, reg: &VarRegistry) -> String {
    m.to_text(reg)
        .iter()
        .map(|row| format!("[{}]", row.join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{all_triangulations, fan_diagonals, zigzag_diagonals};
    use rand::{rngs::StdRng, SeedableRng};

    fn fan(n: u32) -> Triangulation {
        Triangulation::new(n, &fan_diagonals(n)).unwrap()
    }

    #[test]
    fn two_triangle_products() {
        let mut t = fan(4);
        t.orient_low_to_high();
        // A^0_{23} A^0_{12} = A^0_{13}
        assert_eq!(fan_product(&t, 0, &[1, 2, 3]).unwrap(), fan_target(&t, 0, 1, 3).unwrap());
        // with the spoke reversed a ρ appears on the right
        t.set_head(2, 0).unwrap();
        let p = fan_product(&t, 0, &[1, 2, 3]).unwrap();
        assert_eq!(p, fan_target(&t, 0, 1, 3).unwrap().mul(&rho()));
    }

    #[test]
    fn fan_of_four_collapses() {
        let mut t = fan(6);
        t.orient_low_to_high();
        let p = fan_product(&t, 0, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(p, fan_target(&t, 0, 1, 5).unwrap());
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            t.randomize_orientation(&mut rng);
            for s in 0..4 {
                for e in s + 2..5 {
                    let nb: Vec<u32> = (s as u32 + 1..=e as u32 + 1).collect();
                    assert!(fan_collapses(&t, 0, &nb).unwrap());
                }
            }
        }
    }

    #[test]
    fn gauge_by_rho() {
        let mut t = Triangulation::new(6, &zigzag_diagonals(6)).unwrap();
        let f = Frame::new(&t, 0, 3).unwrap();
        f.apply_default_orientation(&mut t).unwrap();
        let g = Fatgraph::build(&t).unwrap();
        let (s, e) = (g.id(&frame_start(&f)).unwrap(), g.id(&frame_end(&f)).unwrap());
        let path = g.path(s, e);
        let h = g.holonomy(&path).unwrap();
        let mut g2 = g.clone();
        for &v in &path[1..path.len() - 1] {
            g2.gauge(v, &rho());
        }
        assert_eq!(g2.holonomy(&path).unwrap(), h);
        let mut ga = g.clone();
        ga.gauge(s, &rho());
        assert_eq!(ga.holonomy(&path).unwrap(), h.mul(&rho()));
        let mut gb = g.clone();
        gb.gauge(e, &rho());
        assert_eq!(gb.holonomy(&path).unwrap(), rho().mul(&h));
        gb.gauge(s, &rho());
        assert_eq!(gb.holonomy(&path).unwrap(), rho().mul(&h).mul(&rho()));
    }

    #[test]
    fn reversal_is_a_gauge() {
        let mut t = Triangulation::new(6, &zigzag_diagonals(6)).unwrap();
        t.orient_low_to_high();
        let g = Fatgraph::build(&t).unwrap();
        for ti in 0..t.triangles().len() {
            let mut r = t.clone();
            r.reverse_triangle(ti);
            let mut gr = Fatgraph::build(&r).unwrap();
            let tri = t.triangles()[ti].v;
            for v in 0..gr.verts.len() {
                if gr.verts[v].tri == tri {
                    gr.gauge(v, &rho());
                }
            }
            for (a, b) in g.edges.iter().zip(&gr.edges) {
                assert_eq!(a.forward, b.forward);
            }
            check_flat(&r).unwrap();
        }
    }

    #[test]
    fn flat_small() {
        for n in 3..=6 {
            for d in all_triangulations(n) {
                let t = Triangulation::new(n, &d).unwrap();
                check_flat(&t).unwrap();
            }
        }
    }

    #[test]
    fn lambda_entry_small() {
        for n in 4..=6 {
            for d in all_triangulations(n) {
                let t = Triangulation::new(n, &d).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let l = t.lambda_of_arc(i, j).unwrap();
                        let h = holonomy_between(&t, i, j, 0, 0).unwrap();
                        let x = &h.matrix.e[0][1];
                        assert!(*x == l || *x == l.neg(), "n={n} {d:?} {i}->{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn zigzag_frame() {
        let t = Triangulation::new(6, &zigzag_diagonals(6)).unwrap();
        let f = Frame::new(&t, 0, 3).unwrap();
        assert_eq!(f.strip.len(), 4);
        let g = Fatgraph::build(&t).unwrap();
        let late = g.holonomy_of(&canonical_path_late(&f)).unwrap();
        let early = g.holonomy_of(&canonical_path_early(&f)).unwrap();
        assert_eq!(late, early);
    }
}
