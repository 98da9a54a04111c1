//! Exact embedding test of the quotient drawing on the torus `ℂ/T`,
//! rotation systems and face tracing.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::rational::{floor, Rational};
use crate::arith::{IntMatrix, QuadFieldElem, RealQuad, Sign};
use crate::graph::{Graph, OneChain};
use crate::invariants::VanishingSubgroup;
use crate::realization::{base_positions, period_lattice, standard_point, PeriodLattice, StandardPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("VertexCollision: vertices {0} and {1} coincide on the torus")]
    VertexCollision(String, String),
    #[error("EdgeCrossing: edges {0} and {1} meet away from a shared endpoint")]
    EdgeCrossing(String, String),
    #[error("EdgeDegenerate: edge {0} has zero length")]
    EdgeDegenerate(String),
    #[error("period lattice has rank below two")]
    RankNotTwo,
    #[error("BasisCheckFailed: {0}")]
    BasisCheckFailed(String),
}

/// An edge traversed forwards (`o → t`) or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn rev(self) -> Dart {
        Dart { edge: self.edge, forward: !self.forward }
    }

    fn index(self) -> usize {
        2 * self.edge + (!self.forward) as usize
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusEmbedding {
    pub lattice: PeriodLattice,
    /// Base vertex positions reduced into the fundamental parallelogram.
    pub positions: Vec<QuadFieldElem>,
    /// Darts leaving each vertex in counterclockwise order.
    pub rotation: Vec<Vec<Dart>>,
    /// Closed dart sequences, each with its face on the left, shortest
    /// first.
    pub faces: Vec<Vec<Dart>>,
    pub vertex_count: usize,
    pub edge_count: usize,
}

impl TorusEmbedding {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count as i64 + self.faces.len() as i64
    }

    pub fn face_sizes(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Boundary of each face as a 1-chain.
    pub fn face_chains(&self) -> Vec<OneChain> {
        self.faces
            .iter()
            .map(|f| {
                let mut c = OneChain::zero();
                for d in f {
                    c.add_term(d.edge, &BigInt::from(if d.forward { 1 } else { -1 }));
                }
                c
            })
            .collect()
    }
}

/// Plane point `(x, y) = (a, b√D)` of `a + b√−D`.
#[derive(Clone, Debug)]
struct P2 {
    x: RealQuad,
    y: RealQuad,
}

impl P2 {
    fn of(z: &QuadFieldElem) -> P2 {
        let (x, y) = z.planar();
        P2 { x, y }
    }
}

fn orient(p: &P2, q: &P2, r: &P2) -> Sign {
    let a = &(&q.x - &p.x) * &(&r.y - &p.y);
    let b = &(&q.y - &p.y) * &(&r.x - &p.x);
    (&a - &b).sign()
}

fn same_point(p: &P2, q: &P2) -> bool {
    p.x == q.x && p.y == q.y
}

/// Whether `r`, known collinear with `p q`, lies on the closed segment.
fn on_segment(p: &P2, q: &P2, r: &P2) -> bool {
    let within = |a: &RealQuad, b: &RealQuad, c: &RealQuad| {
        let (lo, hi) = if a.cmp_real(b) == Ordering::Greater { (b, a) } else { (a, b) };
        lo.cmp_real(c) != Ordering::Greater && c.cmp_real(hi) != Ordering::Greater
    };
    within(&p.x, &q.x, &r.x) && within(&p.y, &q.y, &r.y)
}

/// Closed segments meet somewhere other than a single shared endpoint.
fn segments_conflict(p1: &P2, p2: &P2, q1: &P2, q2: &P2) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    if o1 == Sign::Zero && o2 == Sign::Zero {
        // collinear: count common points of the two closed segments
        let touching: Vec<&P2> =
            [q1, q2].into_iter().filter(|r| on_segment(p1, p2, r)).chain([p1, p2].into_iter().filter(|r| on_segment(q1, q2, r))).collect();
        if touching.is_empty() {
            return false;
        }
        return !touching.iter().all(|r| same_point(r, touching[0]))
            || !is_endpoint_of_both(touching[0], p1, p2, q1, q2);
    }
    let proper = o1 != o2 && o1 != Sign::Zero && o2 != Sign::Zero && o3 != o4 && o3 != Sign::Zero && o4 != Sign::Zero;
    if proper {
        return true;
    }
    // touching configurations: a point of one on the other
    let checks = [(o1, q1), (o2, q2)];
    for (o, r) in checks {
        if o == Sign::Zero && on_segment(p1, p2, r) && !is_endpoint_of_both(r, p1, p2, q1, q2) {
            return true;
        }
    }
    let checks = [(o3, p1), (o4, p2)];
    for (o, r) in checks {
        if o == Sign::Zero && on_segment(q1, q2, r) && !is_endpoint_of_both(r, p1, p2, q1, q2) {
            return true;
        }
    }
    false
}

fn is_endpoint_of_both(r: &P2, p1: &P2, p2: &P2, q1: &P2, q2: &P2) -> bool {
    (same_point(r, p1) || same_point(r, p2)) && (same_point(r, q1) || same_point(r, q2))
}

/// Counterclockwise angular order of nonzero plane vectors starting from
/// the positive real axis.
fn angle_cmp(u: &QuadFieldElem, v: &QuadFieldElem) -> Ordering {
    let half = |z: &QuadFieldElem| -> u8 {
        let (x, y) = z.planar();
        match (y.sign(), x.sign()) {
            (Sign::Positive, _) | (Sign::Zero, Sign::Positive) => 0,
            _ => 1,
        }
    };
    half(u).cmp(&half(v)).then_with(|| match Sign::of(&u.cross_over_sqrt_d(v)) {
        Sign::Positive => Ordering::Less,
        Sign::Negative => Ordering::Greater,
        Sign::Zero => Ordering::Equal,
    })
}

/// Axis-aligned box of a segment in lattice coordinates.
#[derive(Clone, Debug)]
struct LBox {
    lo: (Rational, Rational),
    hi: (Rational, Rational),
}

fn lbox(a: &(Rational, Rational), b: &(Rational, Rational)) -> LBox {
    let mn = |x: &Rational, y: &Rational| if x < y { x.clone() } else { y.clone() };
    let mx = |x: &Rational, y: &Rational| if x > y { x.clone() } else { y.clone() };
    LBox { lo: (mn(&a.0, &b.0), mn(&a.1, &b.1)), hi: (mx(&a.0, &b.0), mx(&a.1, &b.1)) }
}

fn ceil(x: &Rational) -> BigInt {
    -floor(&-x)
}

/// Integer translates `T` for which `bj + T` can meet `bi` (closed boxes).
fn translate_range(bi: &LBox, bj: &LBox) -> ((i64, i64), (i64, i64)) {
    let r = |lo_i: &Rational, hi_i: &Rational, lo_j: &Rational, hi_j: &Rational| {
        let a = floor(&(lo_i - hi_j));
        let b = ceil(&(hi_i - lo_j));
        (bi_i64(&a), bi_i64(&b))
    };
    (r(&bi.lo.0, &bi.hi.0, &bj.lo.0, &bj.hi.0), r(&bi.lo.1, &bi.hi.1, &bj.lo.1, &bj.hi.1))
}

fn bi_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("translate range fits in i64")
}

/// Embeds the quotient drawing on the torus, or reports why it fails.
pub fn torus_embedding(g: &Graph, z: &StandardPoint) -> Result<TorusEmbedding, EmbeddingError> {
    let coords = z.coords();
    let lattice = period_lattice(coords, &g.homology_basis()).map_err(|_| EmbeddingError::RankNotTwo)?;
    for (e, c) in g.edges().iter().zip(coords) {
        if c.is_zero() {
            return Err(EmbeddingError::EdgeDegenerate(e.id.clone()));
        }
    }
    let raw = base_positions(g, coords);
    let positions: Vec<QuadFieldElem> = raw
        .iter()
        .map(|p| {
            let (s, t) = lattice.lattice_coords(p);
            p - &lattice.point(&floor(&s), &floor(&t))
        })
        .collect();
    let n_v = g.vertex_count();
    for x in 0..n_v {
        for y in x + 1..n_v {
            if lattice.contains(&(&positions[x] - &positions[y])) {
                return Err(EmbeddingError::VertexCollision(g.vertices()[x].clone(), g.vertices()[y].clone()));
            }
        }
    }
    check_crossings(g, coords, &positions, &lattice)?;

    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n_v];
    for (i, e) in g.edges().iter().enumerate() {
        rotation[e.origin].push(Dart { edge: i, forward: true });
        rotation[e.terminus].push(Dart { edge: i, forward: false });
    }
    let vec_of = |d: Dart| if d.forward { coords[d.edge].clone() } else { -&coords[d.edge] };
    for darts in rotation.iter_mut() {
        darts.sort_by(|a, b| angle_cmp(&vec_of(*a), &vec_of(*b)).then(a.cmp(b)));
    }
    let mut faces = trace_faces(g, &rotation);
    faces.sort_by_key(Vec::len);
    Ok(TorusEmbedding { lattice, positions, rotation, faces, vertex_count: n_v, edge_count: g.edge_count() })
}

fn check_crossings(
    g: &Graph,
    coords: &[QuadFieldElem],
    positions: &[QuadFieldElem],
    lattice: &PeriodLattice,
) -> Result<(), EmbeddingError> {
    let edges = g.edges();
    let starts: Vec<(Rational, Rational)> = edges.iter().map(|e| lattice.lattice_coords(&positions[e.origin])).collect();
    let deltas: Vec<(Rational, Rational)> = coords.iter().map(|c| lattice.lattice_coords(c)).collect();
    let ends: Vec<(Rational, Rational)> =
        starts.iter().zip(&deltas).map(|(s, d)| (&s.0 + &d.0, &s.1 + &d.1)).collect();
    let boxes: Vec<LBox> = starts.iter().zip(&ends).map(|(s, e)| lbox(s, e)).collect();
    let seg: Vec<(P2, P2)> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (P2::of(&positions[e.origin]), P2::of(&(&positions[e.origin] + &coords[i]))))
        .collect();
    for i in 0..edges.len() {
        for j in i..edges.len() {
            let ((s0, s1), (t0, t1)) = translate_range(&boxes[i], &boxes[j]);
            for m in s0..=s1 {
                for n in t0..=t1 {
                    if i == j && m == 0 && n == 0 {
                        continue;
                    }
                    let (mq, nq) = (Rational::from_integer(m.into()), Rational::from_integer(n.into()));
                    let b = &boxes[j];
                    let disjoint = b.lo.0.clone() + &mq > boxes[i].hi.0
                        || b.hi.0.clone() + &mq < boxes[i].lo.0
                        || b.lo.1.clone() + &nq > boxes[i].hi.1
                        || b.hi.1.clone() + &nq < boxes[i].lo.1;
                    if disjoint {
                        continue;
                    }
                    let t = lattice.point(&BigInt::from(m), &BigInt::from(n));
                    let (tx, ty) = t.planar();
                    let q1 = P2 { x: &seg[j].0.x + &tx, y: &seg[j].0.y + &ty };
                    let q2 = P2 { x: &seg[j].1.x + &tx, y: &seg[j].1.y + &ty };
                    if segments_conflict(&seg[i].0, &seg[i].1, &q1, &q2) {
                        return Err(EmbeddingError::EdgeCrossing(edges[i].id.clone(), edges[j].id.clone()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Faces from the rotation system: after arriving along `d`, continue with
/// the dart preceding `rev(d)` counterclockwise.
fn trace_faces(g: &Graph, rotation: &[Vec<Dart>]) -> Vec<Vec<Dart>> {
    let n = g.edge_count();
    let mut pos_in_rot = vec![(0usize, 0usize); 2 * n];
    for (x, darts) in rotation.iter().enumerate() {
        for (k, d) in darts.iter().enumerate() {
            pos_in_rot[d.index()] = (x, k);
        }
    }
    let next = |d: Dart| -> Dart {
        let r = d.rev();
        let (x, k) = pos_in_rot[r.index()];
        let m = rotation[x].len();
        rotation[x][(k + m - 1) % m]
    };
    let mut used = vec![false; 2 * n];
    let mut faces = Vec::new();
    for e in 0..n {
        for forward in [true, false] {
            let start = Dart { edge: e, forward };
            if used[start.index()] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !used[d.index()] {
                used[d.index()] = true;
                face.push(d);
                d = next(d);
            }
            faces.push(face);
        }
    }
    faces
}

/// Face boundary cycles, checked to sum to zero and, after dropping the
/// last, to form a ℤ-basis of `H`.
pub fn fundamental_tiles(te: &TorusEmbedding, h: &VanishingSubgroup) -> Result<Vec<OneChain>, EmbeddingError> {
    let chains = te.face_chains();
    let total = chains.iter().fold(OneChain::zero(), |acc, c| &acc + c);
    if !total.is_zero() {
        return Err(EmbeddingError::BasisCheckFailed("face boundaries do not sum to zero".into()));
    }
    let n = te.edge_count;
    let r = chains.len().saturating_sub(1);
    if r != h.rank() {
        return Err(EmbeddingError::BasisCheckFailed(format!("{} faces for a rank {} subgroup", chains.len(), h.rank())));
    }
    let m = IntMatrix::from_rows(chains[..r].iter().map(|c| c.to_dense(n)).collect(), n);
    if m.hermite_normal_form() != h.hnf() {
        return Err(EmbeddingError::BasisCheckFailed("face boundaries do not generate H".into()));
    }
    Ok(chains)
}

/// Outcome of the tiling test.
#[derive(Clone, Debug)]
pub struct TilingVerdict {
    pub is_tiling: bool,
    pub reason: Option<String>,
    pub embedding: Option<TorusEmbedding>,
}

/// Embedding succeeds, Euler relation holds and every face has at least
/// three sides.
pub fn is_tiling(g: &Graph, h: &VanishingSubgroup) -> TilingVerdict {
    let no = |reason: String| TilingVerdict { is_tiling: false, reason: Some(reason), embedding: None };
    let z = match standard_point(g, h) {
        Ok(z) => z,
        Err(e) => return no(e.to_string()),
    };
    let te = match torus_embedding(g, &z) {
        Ok(te) => te,
        Err(e) => return no(e.to_string()),
    };
    if te.euler_characteristic() != 0 {
        return no(format!("Euler characteristic {} != 0", te.euler_characteristic()));
    }
    if let Some(k) = te.face_sizes().into_iter().find(|&k| k < 3) {
        return no(format!("face with {k} sides"));
    }
    TilingVerdict { is_tiling: true, reason: None, embedding: Some(te) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{is_vanishing_subgroup, trivial_subgroup};
    use num_traits::Zero;

    fn theta() -> Graph {
        Graph::from_strs(&["x", "y"], &[("e1", "x", "y"), ("e2", "x", "y"), ("e3", "x", "y")]).unwrap()
    }

    fn bouquet(n: usize) -> Graph {
        let ids: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let edges: Vec<(&str, &str, &str)> = ids.iter().map(|s| (s.as_str(), "o", "o")).collect();
        Graph::from_strs(&["o"], &edges).unwrap()
    }

    fn kagome() -> (Graph, VanishingSubgroup) {
        let g = Graph::from_strs(
            &["A", "B", "C"],
            &[
                ("e1", "B", "A"),
                ("e2", "C", "B"),
                ("e3", "A", "C"),
                ("e4", "A", "B"),
                ("e5", "B", "C"),
                ("e6", "C", "A"),
            ],
        )
        .unwrap();
        let h = is_vanishing_subgroup(
            &g,
            &[OneChain::from_i64(&[1, 1, 1, 0, 0, 0]), OneChain::from_i64(&[0, 0, 0, 1, 1, 1])],
        )
        .unwrap();
        (g, h)
    }

    #[test]
    fn honeycomb_single_hexagon() {
        let g = theta();
        let h = trivial_subgroup(&g).unwrap();
        let v = is_tiling(&g, &h);
        assert!(v.is_tiling, "{:?}", v.reason);
        let te = v.embedding.unwrap();
        assert_eq!(te.face_sizes(), vec![6]);
        assert_eq!(fundamental_tiles(&te, &h).unwrap().len(), 1);
    }

    #[test]
    fn square_and_triangular() {
        let b2 = bouquet(2);
        let v = is_tiling(&b2, &trivial_subgroup(&b2).unwrap());
        assert_eq!(v.embedding.unwrap().face_sizes(), vec![4]);
        let b3 = bouquet(3);
        let h = is_vanishing_subgroup(&b3, &[OneChain::from_i64(&[1, 1, 1])]).unwrap();
        let v = is_tiling(&b3, &h);
        let te = v.embedding.unwrap();
        assert_eq!(te.face_sizes(), vec![3, 3]);
        let tiles = fundamental_tiles(&te, &h).unwrap();
        assert_eq!(tiles[0].l1_norm(), BigInt::from(3));
    }

    #[test]
    fn kagome_faces() {
        let (g, h) = kagome();
        let v = is_tiling(&g, &h);
        assert!(v.is_tiling, "{:?}", v.reason);
        let te = v.embedding.unwrap();
        assert_eq!(te.face_sizes(), vec![3, 3, 6]);
        let tiles = fundamental_tiles(&te, &h).unwrap();
        assert!(tiles[..2].iter().all(|t| t.l1_norm() == BigInt::from(3)));
    }

    #[test]
    fn long_generator_crosses() {
        let b3 = bouquet(3);
        let h = is_vanishing_subgroup(&b3, &[OneChain::from_i64(&[1, 1, 2])]).unwrap();
        let v = is_tiling(&b3, &h);
        assert!(!v.is_tiling);
    }

    #[test]
    fn crossing_predicate() {
        let p = |a: i64, b: i64| P2 {
            x: RealQuad::new(Rational::from_integer(a.into()), Rational::zero(), 1),
            y: RealQuad::new(Rational::from_integer(b.into()), Rational::zero(), 1),
        };
        assert!(segments_conflict(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(!segments_conflict(&p(0, 0), &p(1, 0), &p(1, 0), &p(1, 1)));
        assert!(segments_conflict(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 1)));
        assert!(segments_conflict(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)));
        assert!(!segments_conflict(&p(0, 0), &p(1, 0), &p(1, 0), &p(2, 0)));
        assert!(!segments_conflict(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)));
    }
}
