//! The graph quadric: its equations, membership of projective points, field
//! detection, recovery of realizations from points, the reduced form, and
//! secant constructions of new points.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::linalg::{self, RatMatrix};
use crate::arith::rational::{common_denominator, format_rational, Rational};
use crate::arith::{IntMatrix, QuadFieldElem};
use crate::graph::{Graph, OneChain};
use crate::invariants::{is_vanishing_subgroup, SubgroupError, VanishingSubgroup};
use crate::realization::{
    evaluate, is_rank_two, kirchhoff_matrix, period_lattice, PeriodLattice, RealizationError, StandardPoint,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadricError {
    #[error("NotOnQuadric: the point violates the quadric equations")]
    NotOnQuadric,
    #[error("DegenerateRankOne: all coordinates are real multiples of one value")]
    DegenerateRankOne,
    #[error("MixedFields: coordinates lie in different quadratic fields")]
    MixedFields,
    #[error("point has {got} coordinates, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("all coordinates are zero")]
    AllZero,
    #[error("NotALine: direction is proportional to the base point")]
    NotALine,
    #[error("LineInQuadric: the whole line lies on the quadric")]
    LineInQuadric,
    #[error("direction violates the linear equations of the quadric")]
    NotHarmonic,
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
}

/// A point of projective space given by (not necessarily normalized)
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub coords: Vec<QuadFieldElem>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<QuadFieldElem>) -> Result<Self, QuadricError> {
        if coords.iter().all(QuadFieldElem::is_zero) {
            return Err(QuadricError::AllZero);
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn normalized(&self) -> Result<StandardPoint, QuadricError> {
        StandardPoint::new(self.coords.clone()).map_err(|_| QuadricError::MixedFields)
    }
}

impl From<&StandardPoint> for ProjectivePoint {
    fn from(z: &StandardPoint) -> Self {
        ProjectivePoint { coords: z.coords().to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Quadratic(u64),
    Mixed,
}

/// The equations of the quadric and, optionally, of the line cut out by a
/// vanishing subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPresentation {
    pub n: usize,
    /// One row per vertex.
    pub kirchhoff_rows: RatMatrix,
    /// One row per generator of the vanishing subgroup (HNF), possibly none.
    pub subgroup_rows: IntMatrix,
    /// `F = AᵀA` on the harmonic parameters.
    pub reduced_form: IntMatrix,
    /// `N × b` matrix `A` with `z = A·w`; its columns are the fundamental
    /// cycles.
    pub substitution: IntMatrix,
}

pub fn quadric_presentation(g: &Graph, h: Option<&VanishingSubgroup>) -> QuadricPresentation {
    let n = g.edge_count();
    let hb = g.homology_basis();
    let a = IntMatrix::from_rows(hb.cycles.iter().map(|c| c.to_dense(n)).collect(), n).transpose();
    let f = a.transpose().mul(&a);
    QuadricPresentation {
        n,
        kirchhoff_rows: kirchhoff_matrix(g),
        subgroup_rows: h.map_or_else(|| IntMatrix::zeros(0, n), |h| h.hnf()),
        reduced_form: f,
        substitution: a,
    }
}

fn sum_sq(coords: &[QuadFieldElem]) -> Result<QuadFieldElem, QuadricError> {
    let mut s = QuadFieldElem::zero();
    for z in coords {
        s = z.try_mul(z).and_then(|x| s.try_add(&x)).map_err(|_| QuadricError::MixedFields)?;
    }
    Ok(s)
}

fn bilinear(x: &[QuadFieldElem], y: &[QuadFieldElem]) -> Result<QuadFieldElem, QuadricError> {
    let mut s = QuadFieldElem::zero();
    for (a, b) in x.iter().zip(y) {
        s = a.try_mul(b).and_then(|p| s.try_add(&p)).map_err(|_| QuadricError::MixedFields)?;
    }
    Ok(s)
}

fn row_value(row: &[Rational], coords: &[QuadFieldElem]) -> Result<QuadFieldElem, QuadricError> {
    let mut s = QuadFieldElem::zero();
    for (c, z) in row.iter().zip(coords) {
        if !c.is_zero() {
            s = s.try_add(&z.scale(c)).map_err(|_| QuadricError::MixedFields)?;
        }
    }
    Ok(s)
}

impl QuadricPresentation {
    pub fn linear_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = self.kirchhoff_rows.clone();
        rows.extend(
            self.subgroup_rows
                .row_vecs()
                .into_iter()
                .map(|r| r.into_iter().map(Rational::from_integer).collect()),
        );
        rows
    }

    fn satisfies_linear(&self, coords: &[QuadFieldElem]) -> Result<bool, QuadricError> {
        for row in self.linear_rows() {
            if !row_value(&row, coords)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn kirchhoff_rank(&self) -> usize {
        linalg::rank(&self.kirchhoff_rows, self.n)
    }

    /// Projective dimension of the quadric, `b₁ − 2`.
    pub fn dimension(&self) -> usize {
        self.reduced_form.nrows().saturating_sub(2)
    }

    /// Leading principal minors of `F`, all positive for a definite form.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let f = &self.reduced_form;
        (1..=f.nrows())
            .map(|k| {
                let rows = (0..k).map(|i| (0..k).map(|j| f[(i, j)].clone()).collect()).collect();
                IntMatrix::from_rows(rows, k).det()
            })
            .collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(Signed::is_positive)
    }

    /// Kirchhoff rows worth printing: zero rows and rows equal to ± an
    /// earlier row are dropped.
    fn printed_kirchhoff(&self) -> Vec<&Vec<Rational>> {
        let mut out: Vec<&Vec<Rational>> = Vec::new();
        for row in &self.kirchhoff_rows {
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let neg: Vec<Rational> = row.iter().map(|x| -x).collect();
            if out.iter().any(|r| *r == row || **r == neg) {
                continue;
            }
            out.push(row);
        }
        out
    }

    /// One equation per line; coordinates `z1..zN`.
    pub fn equations(&self) -> Vec<String> {
        let mut eqs = vec![format!(
            "{} = 0",
            (1..=self.n).map(|i| format!("z{i}^2")).collect::<Vec<_>>().join(" + ")
        )];
        for row in self.printed_kirchhoff() {
            let pos: Vec<(usize, Rational)> =
                row.iter().enumerate().filter(|(_, c)| c.is_positive()).map(|(i, c)| (i, c.clone())).collect();
            let neg: Vec<(usize, Rational)> =
                row.iter().enumerate().filter(|(_, c)| c.is_negative()).map(|(i, c)| (i, -c)).collect();
            let (lhs, rhs) = if pos.is_empty() { (neg, pos) } else { (pos, neg) };
            eqs.push(format!("{} = {}", linear_text(&lhs, "z"), linear_text(&rhs, "z")));
        }
        for row in self.subgroup_rows.row_vecs() {
            let terms: Vec<(usize, Rational)> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, Rational::from_integer(c.clone())))
                .collect();
            eqs.push(format!("{} = 0", signed_text(&terms, "z")));
        }
        eqs
    }

    /// `F(w1..wb)` with squares first, then cross terms `w_i w_j` (`i < j`).
    pub fn reduced_form_text(&self) -> String {
        let f = &self.reduced_form;
        let b = f.nrows();
        let mut terms: Vec<(BigInt, String)> = Vec::new();
        for i in 0..b {
            terms.push((f[(i, i)].clone(), format!("w{}^2", i + 1)));
        }
        for i in 0..b {
            for j in i + 1..b {
                terms.push((&f[(i, j)] * 2, format!("w{} w{}", i + 1, j + 1)));
            }
        }
        let mut s = String::new();
        for (c, m) in terms.into_iter().filter(|(c, _)| !c.is_zero()) {
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag} ") };
            match (s.is_empty(), c.is_negative()) {
                (true, false) => write!(s, "{coef}{m}"),
                (true, true) => write!(s, "-{coef}{m}"),
                (false, false) => write!(s, " + {coef}{m}"),
                (false, true) => write!(s, " - {coef}{m}"),
            }
            .expect("write to string");
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("F = {s}")
    }

    /// Text rendering; with `reduced`, also `F` and the substitution matrix.
    pub fn to_text(&self, reduced: bool) -> String {
        let mut out = self.equations().join("\n");
        out.push('\n');
        if reduced {
            out.push_str(&self.reduced_form_text());
            out.push('\n');
            for i in 0..self.substitution.nrows() {
                let row: Vec<String> = self.substitution.row(i).iter().map(|x| x.to_string()).collect();
                writeln!(out, "z{} = {}", i + 1, substitution_text(&row)).expect("write to string");
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rat_rows = |m: &RatMatrix| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
        };
        serde_json::json!({
            "n": self.n,
            "equations": self.equations(),
            "kirchhoff_rows": rat_rows(&self.kirchhoff_rows),
            "subgroup_rows": self.subgroup_rows,
            "reduced_form": self.reduced_form,
            "substitution": self.substitution,
            "positive_definite": self.is_positive_definite(),
        })
    }
}

fn substitution_text(row: &[String]) -> String {
    let terms: Vec<(usize, Rational)> = row
        .iter()
        .enumerate()
        .filter_map(|(j, c)| {
            let v: BigInt = c.parse().ok()?;
            (!v.is_zero()).then(|| (j, Rational::from_integer(v)))
        })
        .collect();
    signed_text(&terms, "w")
}

/// Nonnegative terms joined by ` + `, or `0`.
fn linear_text(terms: &[(usize, Rational)], var: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(i, c)| term(c, var, *i)).collect::<Vec<_>>().join(" + ")
}

fn signed_text(terms: &[(usize, Rational)], var: &str) -> String {
    let mut s = String::new();
    for (i, c) in terms {
        let t = term(&c.abs(), var, *i);
        match (s.is_empty(), c.is_negative()) {
            (true, false) => s.push_str(&t),
            (true, true) => s.push_str(&format!("-{t}")),
            (false, false) => s.push_str(&format!(" + {t}")),
            (false, true) => s.push_str(&format!(" - {t}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn term(c: &Rational, var: &str, i: usize) -> String {
    if c.is_one() {
        format!("{var}{}", i + 1)
    } else if c.is_integer() {
        format!("{} {var}{}", c.numer(), i + 1)
    } else {
        format!("({}) {var}{}", format_rational(c), i + 1)
    }
}

/// Exact membership in the quadric (and the subgroup line, if present).
pub fn on_quadric(p: &ProjectivePoint, q: &QuadricPresentation) -> bool {
    if p.len() != q.n {
        return false;
    }
    matches!(sum_sq(&p.coords), Ok(s) if s.is_zero()) && matches!(q.satisfies_linear(&p.coords), Ok(true))
}

/// The field generated by the ratios of the coordinates.
pub fn detect_field(p: &ProjectivePoint) -> FieldKind {
    let mut d = None;
    for z in p.coords.iter().filter(|z| !z.is_rational()) {
        match d {
            None => d = Some(z.d()),
            Some(x) if x != z.d() => return FieldKind::Mixed,
            _ => {}
        }
    }
    let Ok(z) = p.normalized() else {
        return FieldKind::Mixed;
    };
    if z.coords().iter().all(QuadFieldElem::is_rational) {
        FieldKind::Rational
    } else {
        FieldKind::Quadratic(z.d())
    }
}

/// A realization recovered from a point of the quadric.
#[derive(Clone, Debug)]
pub struct RecoveredRealization {
    pub point: StandardPoint,
    pub subgroup: VanishingSubgroup,
    pub lattice: PeriodLattice,
}

/// Reads the point as a building cochain and recovers the vanishing
/// subgroup `Ker [z] ∩ H₁(X₀, ℤ)`.
pub fn point_to_realization(p: &ProjectivePoint, g: &Graph) -> Result<RecoveredRealization, QuadricError> {
    let n = g.edge_count();
    if p.len() != n {
        return Err(QuadricError::WrongLength { expected: n, got: p.len() });
    }
    match detect_field(p) {
        FieldKind::Mixed => return Err(QuadricError::MixedFields),
        FieldKind::Rational => {
            if on_quadric(p, &quadric_presentation(g, None)) {
                return Err(QuadricError::DegenerateRankOne);
            }
            return Err(QuadricError::NotOnQuadric);
        }
        FieldKind::Quadratic(_) => {}
    }
    if !on_quadric(p, &quadric_presentation(g, None)) {
        return Err(QuadricError::NotOnQuadric);
    }
    let point = p.normalized()?;
    if !is_rank_two(point.coords()) {
        return Err(QuadricError::DegenerateRankOne);
    }
    let hb = g.homology_basis();
    let vals: Vec<QuadFieldElem> = hb.cycles.iter().map(|c| evaluate(point.coords(), c)).collect();
    let den = common_denominator(vals.iter().flat_map(|v| [v.re(), v.im_coeff()]));
    let dq = Rational::from_integer(den);
    let re: Vec<BigInt> = vals.iter().map(|v| (v.re() * &dq).to_integer()).collect();
    let im: Vec<BigInt> = vals.iter().map(|v| (v.im_coeff() * &dq).to_integer()).collect();
    let ker = IntMatrix::from_rows(vec![re, im], hb.rank()).integer_kernel();
    let gens: Vec<OneChain> = ker.row_vecs().iter().map(|c| hb.from_coords(c)).collect();
    let subgroup = is_vanishing_subgroup(g, &gens)?;
    let lattice = period_lattice(point.coords(), &hb)?;
    Ok(RecoveredRealization { point: point.canonical(), subgroup, lattice })
}

/// Result of a secant construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantResult {
    pub point: StandardPoint,
    /// The line was tangent and the base point is returned.
    pub tangent: bool,
}

/// Second intersection of the line through `base` with direction `dir`.
///
/// On `[s·base + t·dir]` the restriction of `Σz²` is
/// `t·(2s·(base·dir) + t·(dir·dir))`, so the other root is
/// `(dir·dir)·base − 2(base·dir)·dir`.
pub fn secant_point(
    base: &ProjectivePoint,
    dir: &[QuadFieldElem],
    q: &QuadricPresentation,
) -> Result<SecantResult, QuadricError> {
    if base.len() != q.n || dir.len() != q.n {
        return Err(QuadricError::WrongLength { expected: q.n, got: dir.len().min(base.len()) });
    }
    if !on_quadric(base, q) {
        return Err(QuadricError::NotOnQuadric);
    }
    if !q.satisfies_linear(dir)? {
        return Err(QuadricError::NotHarmonic);
    }
    if proportional(&base.coords, dir)? {
        return Err(QuadricError::NotALine);
    }
    let bd = bilinear(&base.coords, dir)?;
    let dd = bilinear(dir, dir)?;
    if bd.is_zero() {
        if dd.is_zero() {
            return Err(QuadricError::LineInQuadric);
        }
        return Ok(SecantResult { point: base.normalized()?, tangent: true });
    }
    let two_bd = bd.scale(&Rational::from_integer(BigInt::from(2)));
    let coords: Vec<QuadFieldElem> = base
        .coords
        .iter()
        .zip(dir)
        .map(|(b, d)| {
            let x = dd.try_mul(b)?;
            let y = two_bd.try_mul(d)?;
            x.try_sub(&y)
        })
        .collect::<Result<_, _>>()
        .map_err(|_| QuadricError::MixedFields)?;
    let point = ProjectivePoint::new(coords)?.normalized()?;
    Ok(SecantResult { point, tangent: false })
}

/// Rational direction convenience wrapper.
pub fn secant_point_rational(
    base: &ProjectivePoint,
    dir: &[Rational],
    q: &QuadricPresentation,
) -> Result<SecantResult, QuadricError> {
    let d: Vec<QuadFieldElem> = dir.iter().cloned().map(QuadFieldElem::rational).collect();
    secant_point(base, &d, q)
}

fn proportional(x: &[QuadFieldElem], y: &[QuadFieldElem]) -> Result<bool, QuadricError> {
    if y.iter().all(QuadFieldElem::is_zero) {
        return Ok(true);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let l = x[i].try_mul(&y[j]).map_err(|_| QuadricError::MixedFields)?;
            let r = x[j].try_mul(&y[i]).map_err(|_| QuadricError::MixedFields)?;
            if l != r {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of comparing two integral forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Congruence {
    /// `Uᵀ·F·U = G` with `U` unimodular.
    Congruent(IntMatrix),
    /// No unimodular transformation found.
    Differs,
}

/// Searches for a unimodular `U` with `Uᵀ·f·U = g` for positive definite
/// integral forms. Columns of `U` are drawn from the vectors `v` with
/// `vᵀfv = g_jj`, found by enumeration inside the box
/// `|v_i| ≤ sqrt(g_jj · (f⁻¹)_ii)`.
pub fn find_congruence(f: &IntMatrix, g: &IntMatrix) -> Congruence {
    let b = f.nrows();
    if b != g.nrows() || f.det() != g.det() {
        return Congruence::Differs;
    }
    if b == 0 {
        return Congruence::Congruent(IntMatrix::identity(0));
    }
    let frat: RatMatrix =
        (0..b).map(|i| (0..b).map(|j| Rational::from_integer(f[(i, j)].clone())).collect()).collect();
    let Some(finv) = linalg::inverse(&frat) else {
        return Congruence::Differs;
    };
    let form = |u: &[i64], v: &[i64]| -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..b {
            for j in 0..b {
                s += &f[(i, j)] * u[i] * v[j];
            }
        }
        s
    };
    let gmax = (0..b).map(|j| g[(j, j)].clone()).max().expect("nonempty");
    let bounds: Vec<i64> = (0..b)
        .map(|i| {
            let r = Rational::from_integer(gmax.clone()) * &finv[i][i];
            let mut k: i64 = 0;
            while Rational::from_integer(BigInt::from((k + 1) * (k + 1))) <= r {
                k += 1;
            }
            k
        })
        .collect();
    let mut short: Vec<Vec<i64>> = Vec::new();
    let mut v = vec![0i64; b];
    box_enumerate(&bounds, 0, &mut v, &mut |v| {
        if v.iter().any(|&x| x != 0) && form(v, v) <= gmax {
            short.push(v.to_vec());
        }
    });
    let mut chosen: Vec<usize> = Vec::new();
    if congruence_search(&short, g, &form, &mut chosen) {
        let rows: Vec<Vec<BigInt>> = chosen.iter().map(|&k| short[k].iter().map(|&x| BigInt::from(x)).collect()).collect();
        let u = IntMatrix::from_rows(rows, b).transpose();
        if u.det().abs().is_one() {
            return Congruence::Congruent(u);
        }
    }
    Congruence::Differs
}

fn box_enumerate(bounds: &[i64], i: usize, v: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if i == bounds.len() {
        f(v);
        return;
    }
    for x in -bounds[i]..=bounds[i] {
        v[i] = x;
        box_enumerate(bounds, i + 1, v, f);
    }
    v[i] = 0;
}

fn congruence_search(
    short: &[Vec<i64>],
    g: &IntMatrix,
    form: &impl Fn(&[i64], &[i64]) -> BigInt,
    chosen: &mut Vec<usize>,
) -> bool {
    let j = chosen.len();
    if j == g.nrows() {
        return true;
    }
    for k in 0..short.len() {
        let v = &short[k];
        if form(v, v) != g[(j, j)] {
            continue;
        }
        if chosen.iter().enumerate().any(|(i, &c)| form(&short[c], v) != g[(i, j)]) {
            continue;
        }
        chosen.push(k);
        if congruence_search(short, g, form, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
