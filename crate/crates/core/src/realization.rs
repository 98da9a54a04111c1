//! Standard realizations: the harmonic space, the two-dimensional solution
//! space cut out by a vanishing subgroup, its isotropic line, the period
//! lattice, energy and vertex placement.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::linalg::{self, dot, RatMatrix};
use crate::arith::rational::{serde_rational, Rational};
use crate::arith::squarefree::squarefree_decompose;
use crate::arith::{IntMatrix, QuadFieldElem};
use crate::graph::{Graph, HomologyBasis, OneChain};
use crate::invariants::VanishingSubgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("DimensionNotTwo: the constrained harmonic space has dimension {0}")]
    DimensionNotTwo(usize),
    #[error("DegenerateQuadratic: the restricted quadratic form vanishes")]
    DegenerateQuadratic,
    #[error("RealDiscriminant: the restricted quadratic form is indefinite")]
    RealDiscriminant,
    #[error("RankNotTwo: period values span a group of rank {0}")]
    RankNotTwo(usize),
    #[error("coordinate count {got} does not match edge count {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("mixed fields among coordinates")]
    MixedFields,
}

/// Rows of the vertex constraint system: for vertex `x`, `+1` on edges
/// ending at `x` and `−1` on edges leaving it (loops cancel).
pub fn kirchhoff_matrix(g: &Graph) -> RatMatrix {
    let n = g.edge_count();
    let mut m = vec![vec![Rational::zero(); n]; g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        m[e.terminus][i] += Rational::one();
        m[e.origin][i] -= Rational::one();
    }
    m
}

/// Rational basis of the harmonic cochains (the cycle space in edge
/// coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub basis: Vec<Vec<Rational>>,
}

pub fn harmonic_basis(g: &Graph) -> HarmonicBasis {
    let basis = linalg::nullspace(&kirchhoff_matrix(g), g.edge_count());
    assert_eq!(basis.len(), g.betti_number(), "harmonic space has dimension b1");
    HarmonicBasis { basis }
}

fn chain_row(a: &OneChain, n: usize) -> Vec<Rational> {
    a.to_dense(n).into_iter().map(Rational::from_integer).collect()
}

/// Basis `(u, w)` of the harmonic cochains annihilating every generator.
pub fn wh_basis(g: &Graph, h: &VanishingSubgroup) -> Result<(Vec<Rational>, Vec<Rational>), RealizationError> {
    let n = g.edge_count();
    let mut m = kirchhoff_matrix(g);
    m.extend(h.generators().iter().map(|a| chain_row(a, n)));
    let mut ns = linalg::nullspace(&m, n);
    if ns.len() != 2 {
        return Err(RealizationError::DimensionNotTwo(ns.len()));
    }
    let w = ns.pop().expect("two vectors");
    let u = ns.pop().expect("two vectors");
    Ok((u, w))
}

/// A projective point with coordinates in one field `Q(√−D)`, stored with
/// its first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardPoint {
    d: u64,
    coords: Vec<QuadFieldElem>,
}

impl StandardPoint {
    /// Normalizes `coords` projectively. Fails on mixed fields or the zero
    /// vector.
    pub fn new(coords: Vec<QuadFieldElem>) -> Result<Self, RealizationError> {
        let mut d = None;
        for z in &coords {
            if !z.is_rational() {
                match d {
                    None => d = Some(z.d()),
                    Some(x) if x != z.d() => return Err(RealizationError::MixedFields),
                    _ => {}
                }
            }
        }
        let pivot = coords.iter().find(|z| !z.is_zero()).ok_or(RealizationError::DegenerateQuadratic)?;
        let inv = pivot.inv().map_err(|_| RealizationError::DegenerateQuadratic)?;
        let coords = coords.iter().map(|z| z * &inv).collect();
        Ok(StandardPoint { d: d.unwrap_or(1), coords })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn coords(&self) -> &[QuadFieldElem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn conjugate(&self) -> StandardPoint {
        StandardPoint { d: self.d, coords: self.coords.iter().map(QuadFieldElem::conj).collect() }
    }

    /// Equal as points of projective space, or as an unordered conjugate
    /// pair.
    pub fn same_up_to_conjugation(&self, other: &StandardPoint) -> bool {
        self == other || *self == other.conjugate()
    }

    /// The representative of `{z, z̄}` whose first non-real coordinate has
    /// positive imaginary part.
    pub fn canonical(&self) -> StandardPoint {
        match self.coords.iter().find(|z| !z.is_rational()) {
            Some(z) if z.im_coeff().is_negative() => self.conjugate(),
            _ => self.clone(),
        }
    }

    /// Raw coordinates multiplied by `s` (no renormalization), for scale
    /// invariance checks.
    pub fn coords_scaled(&self, s: &QuadFieldElem) -> Vec<QuadFieldElem> {
        self.coords.iter().map(|z| z * s).collect()
    }
}

/// Evaluates a cochain on a chain: `[z](α) = Σ α_e z_e`.
pub fn evaluate(coords: &[QuadFieldElem], a: &OneChain) -> QuadFieldElem {
    a.iter().fold(QuadFieldElem::zero(), |acc, (&e, c)| {
        acc + coords[e].scale(&Rational::from_integer(c.clone()))
    })
}

/// The isotropic vector `u + τw` of `Σz² = 0` on `span(u, w)` with
/// `Im τ > 0`.
pub fn isotropic_point(u: &[Rational], w: &[Rational]) -> Result<StandardPoint, RealizationError> {
    let a = dot(w, w);
    let b = dot(u, w) * Rational::from_integer(BigInt::from(2));
    let c = dot(u, u);
    if a.is_zero() {
        return Err(RealizationError::DegenerateQuadratic);
    }
    let four = Rational::from_integer(BigInt::from(4));
    let disc = &four * &a * &c - &b * &b;
    if !disc.is_positive() {
        return Err(RealizationError::RealDiscriminant);
    }
    // sqrt(-P/Q) = k sqrt(-D) / Q with P·Q = D·k²
    let pq = disc.numer() * disc.denom();
    let (d, k) = squarefree_decompose(&pq).expect("positive");
    let d = d.to_u64().expect("discriminant fits in u64");
    let two_a = &a * Rational::from_integer(BigInt::from(2));
    let re = -&b / &two_a;
    let im = Rational::from_integer(k) / (&two_a * Rational::from_integer(disc.denom().clone()));
    let tau = QuadFieldElem::new(re, im, d).expect("squarefree");
    let coords = u
        .iter()
        .zip(w)
        .map(|(ui, wi)| QuadFieldElem::rational(ui.clone()) + tau.scale(wi))
        .collect();
    StandardPoint::new(coords)
}

/// The standard realization as a point in `Q(√−D)^N`, canonicalized.
pub fn standard_point(g: &Graph, h: &VanishingSubgroup) -> Result<StandardPoint, RealizationError> {
    let (u, w) = wh_basis(g, h)?;
    Ok(isotropic_point(&u, &w)?.canonical())
}

/// Orthogonal projection `Cᵀ(CCᵀ)⁻¹C` onto the row space of `rows`.
pub fn orthogonal_projection(rows: &[Vec<Rational>], n: usize) -> RatMatrix {
    if rows.is_empty() {
        return vec![vec![Rational::zero(); n]; n];
    }
    let c: RatMatrix = rows.to_vec();
    let ct = linalg::transpose(&c, n);
    let gram = linalg::mat_mul(&c, &ct);
    let inv = linalg::inverse(&gram).expect("rows independent");
    linalg::mat_mul(&linalg::mat_mul(&ct, &inv), &c)
}

/// `P_ab − P_H`: projection of `C₁(ℝ)` onto the orthogonal complement of
/// `H` inside the cycle space.
pub fn complement_projection(g: &Graph, h: &VanishingSubgroup) -> RatMatrix {
    let n = g.edge_count();
    let hb = g.homology_basis();
    let cyc: Vec<Vec<Rational>> = hb.cycles.iter().map(|a| chain_row(a, n)).collect();
    let gens: Vec<Vec<Rational>> = h.generators().iter().map(|a| chain_row(a, n)).collect();
    let p_ab = orthogonal_projection(&cyc, n);
    let p_h = orthogonal_projection(&gens, n);
    p_ab.iter()
        .zip(&p_h)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn trace(m: &RatMatrix) -> Rational {
    (0..m.len()).fold(Rational::zero(), |acc, i| acc + &m[i][i])
}

/// The standard point obtained from the column space of the complement
/// projection instead of the constraint system.
pub fn point_via_projection(g: &Graph, h: &VanishingSubgroup) -> Result<StandardPoint, RealizationError> {
    let n = g.edge_count();
    let p = complement_projection(g, h);
    let cols = linalg::transpose(&p, n);
    let mut picked: Vec<Vec<Rational>> = Vec::new();
    for col in cols {
        let mut trial = picked.clone();
        trial.push(col.clone());
        if linalg::rank(&trial, n) > picked.len() {
            picked = trial;
        }
    }
    if picked.len() != 2 {
        return Err(RealizationError::DimensionNotTwo(picked.len()));
    }
    Ok(isotropic_point(&picked[0], &picked[1])?.canonical())
}

/// Complex Kirchhoff law: at every vertex incoming values sum to outgoing.
pub fn verify_harmonic(coords: &[QuadFieldElem], g: &Graph) -> bool {
    if coords.len() != g.edge_count() {
        return false;
    }
    let mut acc = vec![QuadFieldElem::zero(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        let (Ok(t), Ok(o)) = (acc[e.terminus].try_add(&coords[i]), acc[e.origin].try_sub(&coords[i])) else {
            return false;
        };
        acc[e.terminus] = t;
        acc[e.origin] = o;
    }
    acc.iter().all(QuadFieldElem::is_zero)
}

/// `Σ z_i² = 0`.
pub fn verify_tight_frame(coords: &[QuadFieldElem]) -> bool {
    let mut s = QuadFieldElem::zero();
    for z in coords {
        match z.try_mul(z).and_then(|sq| s.try_add(&sq)) {
            Ok(x) => s = x,
            Err(_) => return false,
        }
    }
    s.is_zero()
}

/// `[z](α) = 0` for every generator.
pub fn annihilates(coords: &[QuadFieldElem], h: &VanishingSubgroup) -> bool {
    h.generators().iter().all(|a| evaluate(coords, a).is_zero())
}

/// Not all coordinates are real multiples of a single complex number.
pub fn is_rank_two(coords: &[QuadFieldElem]) -> bool {
    let nz: Vec<&QuadFieldElem> = coords.iter().filter(|z| !z.is_zero()).collect();
    nz.iter().any(|x| nz.iter().any(|y| !x.cross_over_sqrt_d(y).is_zero()))
}

/// ℤ-basis `(w₁, w₂)` of the image of `[z]` on integral homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodLattice {
    pub w1: QuadFieldElem,
    pub w2: QuadFieldElem,
    /// `|w₁w̄₂ − w₂w̄₁|²`, four times the squared covolume.
    #[serde(with = "serde_rational")]
    pub covol_sq_times_4: Rational,
}

impl PeriodLattice {
    pub fn d(&self) -> u64 {
        if self.w1.is_rational() { self.w2.d() } else { self.w1.d() }
    }

    /// Real coordinates `(s, t)` with `p = s·w₁ + t·w₂`.
    pub fn lattice_coords(&self, p: &QuadFieldElem) -> (Rational, Rational) {
        // solve over the (re, im/√D) coordinates
        let (a1, b1) = (self.w1.re(), self.w1.im_coeff());
        let (a2, b2) = (self.w2.re(), self.w2.im_coeff());
        let (pa, pb) = (p.re(), p.im_coeff());
        let det = a1 * b2 - a2 * b1;
        let s = (pa * b2 - a2 * pb) / &det;
        let t = (a1 * pb - pa * b1) / &det;
        (s, t)
    }

    pub fn point(&self, m: &BigInt, n: &BigInt) -> QuadFieldElem {
        self.w1.scale(&Rational::from_integer(m.clone())) + self.w2.scale(&Rational::from_integer(n.clone()))
    }

    pub fn contains(&self, p: &QuadFieldElem) -> bool {
        let (s, t) = self.lattice_coords(p);
        s.is_integer() && t.is_integer()
    }
}

/// Period lattice from the values of `[z]` on a homology basis.
pub fn period_lattice(coords: &[QuadFieldElem], hb: &HomologyBasis) -> Result<PeriodLattice, RealizationError> {
    let vals: Vec<QuadFieldElem> = hb.cycles.iter().map(|c| evaluate(coords, c)).collect();
    let d = vals.iter().find(|v| !v.is_rational()).map_or(1, |v| v.d());
    let den = crate::arith::rational::common_denominator(vals.iter().flat_map(|v| [v.re(), v.im_coeff()]));
    let dq = Rational::from_integer(den.clone());
    let rows: Vec<Vec<BigInt>> = vals
        .iter()
        .map(|v| vec![(v.re() * &dq).to_integer(), (v.im_coeff() * &dq).to_integer()])
        .collect();
    let hnf = IntMatrix::from_rows(rows, 2).hermite_normal_form();
    if hnf.nrows() != 2 {
        return Err(RealizationError::RankNotTwo(hnf.nrows()));
    }
    let elem = |r: usize| {
        QuadFieldElem::new(
            Rational::new(hnf[(r, 0)].clone(), den.clone()),
            Rational::new(hnf[(r, 1)].clone(), den.clone()),
            d,
        )
        .expect("squarefree")
    };
    let (w1, w2) = gauss_reduce(elem(0), elem(1));
    let cross = w1.cross_over_sqrt_d(&w2);
    let covol_sq_times_4 = Rational::from_integer(BigInt::from(4 * d)) * &cross * &cross;
    Ok(PeriodLattice { w1, w2, covol_sq_times_4 })
}

/// Lagrange reduction: `|w₁| ≤ |w₂|` and `|Re(w₁w̄₂)| ≤ |w₁|²/2`.
fn gauss_reduce(mut w1: QuadFieldElem, mut w2: QuadFieldElem) -> (QuadFieldElem, QuadFieldElem) {
    if w2.norm_sq() < w1.norm_sq() {
        std::mem::swap(&mut w1, &mut w2);
    }
    loop {
        let n1 = w1.norm_sq();
        let dot = (&w1 * &w2.conj()).re().clone();
        let q = crate::arith::rational::floor(&(dot / &n1 + Rational::new(1.into(), 2.into())));
        if !q.is_zero() {
            w2 = &w2 - &w1.scale(&Rational::from_integer(q));
        }
        if w2.norm_sq() < n1 {
            std::mem::swap(&mut w1, &mut w2);
        } else {
            return (w1, w2);
        }
    }
}

/// Squared energy `ℰ² = 4(Σ|z_i|²)² / vol(ℂ/T)²`.
pub fn energy(coords: &[QuadFieldElem], pl: &PeriodLattice) -> Rational {
    let s = coords.iter().fold(Rational::zero(), |acc, z| acc + z.norm_sq());
    Rational::from_integer(BigInt::from(16)) * &s * &s / &pl.covol_sq_times_4
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacedVertex {
    pub id: String,
    #[serde(rename = "translate")]
    pub translate: (i64, i64),
    pub position: QuadFieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub edge: String,
    pub translate: (i64, i64),
    pub start: QuadFieldElem,
    pub end: QuadFieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    /// Two base vertices land on the same point modulo the lattice.
    pub coincident_vertices: bool,
    /// Some edge vector is zero.
    pub zero_length_edges: bool,
}

/// A window of the periodic pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacedCrystal {
    pub base_positions: Vec<(String, QuadFieldElem)>,
    pub lattice: PeriodLattice,
    pub vertices: Vec<PlacedVertex>,
    pub segments: Vec<Segment>,
    pub degeneracy: Degeneracy,
}

/// Base vertex positions: the root at 0 and `[z](P(x))` along tree paths.
pub fn base_positions(g: &Graph, coords: &[QuadFieldElem]) -> Vec<QuadFieldElem> {
    g.spanning_tree().root_paths().iter().map(|p| evaluate(coords, p)).collect()
}

/// Lays out all translates `m·w₁ + n·w₂` with `|m|, |n| ≤ radius`, and every
/// edge starting at a vertex of that window.
pub fn place(g: &Graph, z: &StandardPoint, radius: u32) -> Result<PlacedCrystal, RealizationError> {
    let coords = z.coords();
    if coords.len() != g.edge_count() {
        return Err(RealizationError::WrongLength { expected: g.edge_count(), got: coords.len() });
    }
    let hb = g.homology_basis();
    let lattice = period_lattice(coords, &hb)?;
    let pos = base_positions(g, coords);
    let r = radius as i64;
    let mut vertices = Vec::new();
    let mut segments = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            let t = lattice.point(&BigInt::from(m), &BigInt::from(n));
            for (x, id) in g.vertices().iter().enumerate() {
                vertices.push(PlacedVertex { id: id.clone(), translate: (m, n), position: &pos[x] + &t });
            }
            for (i, e) in g.edges().iter().enumerate() {
                let start = &pos[e.origin] + &t;
                let end = &start + &coords[i];
                segments.push(Segment { edge: e.id.clone(), translate: (m, n), start, end });
            }
        }
    }
    let coincident_vertices = (0..pos.len())
        .any(|x| (x + 1..pos.len()).any(|y| lattice.contains(&(&pos[x] - &pos[y]))));
    let zero_length_edges = coords.iter().any(QuadFieldElem::is_zero);
    Ok(PlacedCrystal {
        base_positions: g.vertices().iter().cloned().zip(pos).collect(),
        lattice,
        vertices,
        segments,
        degeneracy: Degeneracy { coincident_vertices, zero_length_edges },
    })
}
