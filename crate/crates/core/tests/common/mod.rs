//! Generators, oracles and property checks shared by the integration tests.
#![allow(dead_code)]

use crystal_quadric::arith::{quad_sign_real, IntMatrix, QuadFieldElem, Rational, Sign};
use crystal_quadric::graph::{Graph, OneChain};
use crystal_quadric::invariants::{intersection_determinant, is_vanishing_subgroup, tree_number, VanishingSubgroup};
use crystal_quadric::quadric::{on_quadric, point_to_realization, quadric_presentation, ProjectivePoint};
use crystal_quadric::realization::{annihilates, is_rank_two, standard_point, verify_harmonic, verify_tight_frame, StandardPoint};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected multigraph with `v` vertices and `e` edges, loops allowed.
/// Retries until the graph is connected; `None` after too many misses.
pub fn random_connected(rng: &mut Rng8, v: usize, e: usize) -> Option<Graph> {
    let names: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
    for _ in 0..200 {
        let edges: Vec<(String, String, String)> = (0..e)
            .map(|k| {
                let a = rng.gen_range(0..v);
                let b = rng.gen_range(0..v);
                (format!("e{}", k + 1), names[a].clone(), names[b].clone())
            })
            .collect();
        let g = Graph::new(names.clone(), edges).ok()?;
        if g.is_connected() {
            return Some(g);
        }
    }
    None
}

/// Valid base graph (connected, degree ≥ 3) with `b₁ ≥ 2` and at most
/// `max_edges` edges.
pub fn random_base_graph(rng: &mut Rng8, max_edges: usize) -> Graph {
    loop {
        let v = rng.gen_range(1..=5usize);
        let lo = (3 * v).div_ceil(2).max(v + 1).max(2);
        if lo > max_edges {
            continue;
        }
        let e = rng.gen_range(lo..=max_edges);
        if let Some(g) = random_connected(rng, v, e) {
            if g.validate().is_ok() && g.betti_number() >= 2 {
                return g;
            }
        }
    }
}

/// Random vanishing subgroup: `b₁ − 2` small random homology classes,
/// retried until they span a direct summand.
pub fn random_subgroup(rng: &mut Rng8, g: &Graph) -> Option<VanishingSubgroup> {
    let hb = g.homology_basis();
    let b = hb.rank();
    for _ in 0..500 {
        let gens: Vec<OneChain> = (0..b - 2)
            .map(|_| {
                let c: Vec<BigInt> = (0..b).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
                hb.from_coords(&c)
            })
            .collect();
        if let Ok(h) = is_vanishing_subgroup(g, &gens) {
            return Some(h);
        }
    }
    None
}

/// Random `(graph, H)` with a computable standard point.
pub fn random_instance(rng: &mut Rng8, max_edges: usize) -> (Graph, VanishingSubgroup, StandardPoint) {
    loop {
        let g = random_base_graph(rng, max_edges);
        let Some(h) = random_subgroup(rng, &g) else { continue };
        if let Ok(z) = standard_point(&g, &h) {
            return (g, h, z);
        }
    }
}

/// Spanning trees counted by checking every `(v−1)`-subset of non-loop
/// edges with union-find.
pub fn brute_force_tree_number(g: &Graph) -> u64 {
    let v = g.vertex_count();
    let edges: Vec<(usize, usize)> =
        g.edges().iter().filter(|e| !e.is_loop()).map(|e| (e.origin, e.terminus)).collect();
    if v == 1 {
        return 1;
    }
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let m = edges.len();
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != v - 1 {
            continue;
        }
        let mut p: Vec<usize> = (0..v).collect();
        let mut ok = true;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra == rb {
                ok = false;
                break;
            }
            p[ra] = rb;
        }
        count += ok as u64;
    }
    count
}

pub fn small_rational(rng: &mut Rng8, num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

pub const FIELDS: [u64; 8] = [1, 2, 3, 5, 6, 7, 11, 15];

pub fn random_elem(rng: &mut Rng8, d: u64) -> QuadFieldElem {
    QuadFieldElem::new(small_rational(rng, 20, 9), small_rational(rng, 20, 9), d).unwrap()
}

pub fn random_nonzero(rng: &mut Rng8, d: u64) -> QuadFieldElem {
    loop {
        let z = random_elem(rng, d);
        if !z.is_zero() {
            return z;
        }
    }
}

/// Sign of `x + y√d` for integers, by bracketing `|y|√d·10^k` between
/// consecutive integers with an integer square root and raising `k` until
/// the bracket decides.
pub fn sign_oracle_int(x: &BigInt, y: &BigInt, d: u64) -> Sign {
    let of = |v: &BigInt| {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    };
    if y.is_zero() {
        return of(x);
    }
    let mut k = 4u32;
    loop {
        let scale = BigInt::from(10u32).pow(k);
        let t2 = y * y * BigInt::from(d) * &scale * &scale;
        let s = t2.sqrt();
        let xs = x * &scale;
        if &s * &s == t2 {
            // |y|√d·10^k is the integer s
            let v = if y.is_positive() { &xs + &s } else { &xs - &s };
            return of(&v);
        }
        // value lies strictly inside (lo, lo + 1)
        let lo = if y.is_positive() { &xs + &s } else { &xs - &s - 1 };
        if !lo.is_negative() {
            return Sign::Positive;
        }
        if (&lo + 1i32) <= BigInt::zero() {
            return Sign::Negative;
        }
        k *= 2;
    }
}

pub fn sign_oracle(p: &Rational, q: &Rational, d: u64) -> Sign {
    // denominators are positive in lowest terms
    let x = p.numer() * q.denom();
    let y = q.numer() * p.denom();
    sign_oracle_int(&x, &y, d)
}

/// One sign sample; half the time `p` is placed within `1/N` of `−q√d`.
pub fn sign_sample(rng: &mut Rng8) -> (Rational, Rational, u64) {
    let d = rng.gen_range(1..=200u64);
    let q = small_rational(rng, 1000, 97);
    let p = if rng.gen_bool(0.5) {
        let n = BigInt::from(rng.gen_range(1..=10i64.pow(9)));
        let t = q.numer() * q.numer() * BigInt::from(d) * &n * &n;
        let r = t.sqrt() + BigInt::from(rng.gen_range(-1i64..=1));
        let r = if q.is_positive() { -r } else { r };
        Rational::new(r, q.denom() * n)
    } else {
        small_rational(rng, 1000, 97)
    };
    (p, q, d)
}

pub fn check_sign(p: &Rational, q: &Rational, d: u64) -> Result<(), String> {
    let got = quad_sign_real(p, q, d);
    let want = sign_oracle(p, q, d);
    if got == want {
        Ok(())
    } else {
        Err(format!("sign({p} + {q}√{d}): got {got:?}, oracle {want:?}"))
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(what()) }
}

pub fn check_field_axioms(x: &QuadFieldElem, y: &QuadFieldElem, z: &QuadFieldElem) -> Result<(), String> {
    let ctx = || format!("x = {x}, y = {y}, z = {z}");
    let zero = QuadFieldElem::zero();
    let one = QuadFieldElem::one();
    ensure((x + y) == (y + x), || format!("add commutes: {}", ctx()))?;
    ensure((x * y) == (y * x), || format!("mul commutes: {}", ctx()))?;
    ensure((&(x + y) + z) == (x + &(y + z)), || format!("add associates: {}", ctx()))?;
    ensure((&(x * y) * z) == (x * &(y * z)), || format!("mul associates: {}", ctx()))?;
    ensure((x * &(y + z)) == (&(x * y) + &(x * z)), || format!("distributes: {}", ctx()))?;
    ensure(&(x + &zero) == x && &(x * &one) == x, || format!("identities: {}", ctx()))?;
    ensure((x + &(-x)).is_zero(), || format!("additive inverse: {}", ctx()))?;
    ensure(&(&(x - y) + y) == x, || format!("subtraction: {}", ctx()))?;
    if !x.is_zero() {
        let inv = x.inv().map_err(|e| e.to_string())?;
        ensure((x * &inv) == one, || format!("multiplicative inverse: {}", ctx()))?;
        let q = y.try_div(x).map_err(|e| e.to_string())?;
        ensure(&(&q * x) == y, || format!("division: {}", ctx()))?;
    } else {
        ensure(x.inv().is_err(), || "inverse of zero must fail".into())?;
    }
    ensure((x * y).conj() == (&x.conj() * &y.conj()), || format!("conjugation is multiplicative: {}", ctx()))?;
    ensure((x + y).conj() == (&x.conj() + &y.conj()), || format!("conjugation is additive: {}", ctx()))?;
    ensure((x * y).norm_sq() == x.norm_sq() * y.norm_sq(), || format!("norm is multiplicative: {}", ctx()))?;
    let xx = x * &x.conj();
    ensure(xx.is_rational() && xx.re() == &x.norm_sq(), || format!("z·z̄ = |z|²: {}", ctx()))?;
    Ok(())
}

fn int_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
}

pub fn random_matrix(rng: &mut Rng8) -> (Vec<Vec<i64>>, usize) {
    let r = rng.gen_range(1..=5usize);
    let c = rng.gen_range(1..=6usize);
    let m = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-6i64..=6)).collect()).collect();
    (m, c)
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.nrows() == m.ncols() && m.det().abs().is_one()
}

pub fn check_normal_forms(rows: &[Vec<i64>], cols: usize) -> Result<(), String> {
    let a = int_matrix(rows, cols);
    let ctx = || format!("A = {rows:?}");
    let (u, s, v) = a.smith_normal_form();
    ensure(is_unimodular(&u) && is_unimodular(&v), || format!("SNF transforms not unimodular: {}", ctx()))?;
    ensure(u.mul(&a).mul(&v) == s, || format!("U·A·V != S: {}", ctx()))?;
    ensure(s.is_diagonal(), || format!("S not diagonal: {}", ctx()))?;
    let diag: Vec<BigInt> = (0..s.nrows().min(s.ncols())).map(|i| s[(i, i)].clone()).collect();
    for w in diag.windows(2) {
        let ok = !w[0].is_negative()
            && !w[1].is_negative()
            && (if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        ensure(ok, || format!("divisibility chain broken {diag:?}: {}", ctx()))?;
    }
    let (_, s2, _) = s.smith_normal_form();
    ensure(s2 == s, || format!("SNF not idempotent: {}", ctx()))?;

    let h = a.hermite_normal_form();
    ensure(h.hermite_normal_form() == h, || format!("HNF not idempotent: {}", ctx()))?;
    ensure(u.mul(&a).hermite_normal_form() == h, || format!("HNF changes under unimodular rows: {}", ctx()))?;
    ensure(h.nrows() == diag.iter().filter(|x| !x.is_zero()).count(), || format!("HNF rank != SNF rank: {}", ctx()))?;
    // same row lattice: stacking either onto the other adds nothing
    let mut stacked = a.row_vecs();
    stacked.extend(h.row_vecs());
    ensure(IntMatrix::from_rows(stacked, cols).hermite_normal_form() == h, || format!("HNF row lattice differs: {}", ctx()))?;
    // pivot shape
    let mut last = None;
    for i in 0..h.nrows() {
        let p = (0..cols).find(|&j| !h[(i, j)].is_zero()).ok_or_else(|| format!("zero HNF row: {}", ctx()))?;
        ensure(h[(i, p)].is_positive() && last.is_none_or(|l| p > l), || format!("HNF pivots: {}", ctx()))?;
        for k in 0..i {
            ensure(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)], || format!("HNF reduction: {}", ctx()))?;
        }
        last = Some(p);
    }
    Ok(())
}

/// `‖α‖₁` and every invariant of `H` are unchanged when edge `i` is
/// stored reversed and its coefficients negated.
pub fn check_orientation(g: &Graph, h: &VanishingSubgroup, chain: &OneChain, i: usize) -> Result<(), String> {
    let flipped = chain.with_reversed_edge(i);
    ensure(flipped.l1_norm() == chain.l1_norm(), || format!("l1 changes when edge {i} is reversed"))?;
    ensure(flipped.with_reversed_edge(i) == *chain, || "reversal is not an involution".into())?;
    let g2 = g.with_reversed_edge(i);
    let gens: Vec<OneChain> = h.generators().iter().map(|a| a.with_reversed_edge(i)).collect();
    let h2 = is_vanishing_subgroup(&g2, &gens).map_err(|e| format!("reversed subgroup rejected: {e}"))?;
    ensure(tree_number(&g2) == tree_number(g), || "tree number changes".into())?;
    ensure(intersection_determinant(&h2) == intersection_determinant(h), || "I(H) changes".into())?;
    for (a, b) in h.generators().iter().zip(h2.generators()) {
        ensure(a.l1_norm() == b.l1_norm(), || "generator norms change".into())?;
    }
    if let (Ok(z), Ok(z2)) = (standard_point(g, h), standard_point(&g2, &h2)) {
        let mut c = z.coords().to_vec();
        c[i] = -&c[i];
        let expect = StandardPoint::new(c).map_err(|e| e.to_string())?;
        ensure(expect.same_up_to_conjugation(&z2), || "standard point is not the sign-flipped one".into())?;
    }
    Ok(())
}

fn realization_checks(coords: &[QuadFieldElem], g: &Graph, h: &VanishingSubgroup) -> Result<[bool; 5], String> {
    let p = ProjectivePoint::new(coords.to_vec()).map_err(|e| e.to_string())?;
    Ok([
        verify_harmonic(coords, g),
        verify_tight_frame(coords),
        annihilates(coords, h),
        is_rank_two(coords),
        on_quadric(&p, &quadric_presentation(g, Some(h))),
    ])
}

/// Every realization predicate, and the recovered subgroup, agree on
/// `z`, `z̄` and `λz`.
pub fn check_conjugation_scale(g: &Graph, h: &VanishingSubgroup, z: &StandardPoint, lambda: &QuadFieldElem) -> Result<(), String> {
    let base = realization_checks(z.coords(), g, h)?;
    ensure(base == [true; 5], || format!("standard point fails a check: {base:?}"))?;
    let conj = z.conjugate();
    let scaled = z.coords_scaled(lambda);
    let both: Vec<QuadFieldElem> = conj.coords_scaled(lambda);
    for (label, c) in [("conjugate", conj.coords().to_vec()), ("scaled", scaled.clone()), ("scaled conjugate", both)] {
        let r = realization_checks(&c, g, h)?;
        ensure(r == base, || format!("{label} point disagrees: {r:?}"))?;
        let p = ProjectivePoint::new(c).map_err(|e| e.to_string())?;
        let rec = point_to_realization(&p, g).map_err(|e| format!("{label}: {e}"))?;
        ensure(rec.subgroup.same_as(h), || format!("{label} recovers a different subgroup"))?;
        ensure(rec.point == z.canonical(), || format!("{label} normalizes to a different point"))?;
    }
    let p = ProjectivePoint::new(scaled).map_err(|e| e.to_string())?;
    let back = p.normalized().map_err(|e| e.to_string())?;
    ensure(back == *z, || "rescaling does not normalize back".into())?;
    Ok(())
}

/// Random integer chain over the edges of `g`.
pub fn random_chain(rng: &mut Rng8, g: &Graph) -> OneChain {
    let v: Vec<i64> = (0..g.edge_count()).map(|_| rng.gen_range(-5i64..=5)).collect();
    OneChain::from_i64(&v)
}

/// Same graph with shuffled edge storage order and renamed, reordered
/// vertices. Edge ids are kept so subgroups can be mapped back.
pub fn relabeled(rng: &mut Rng8, g: &Graph) -> Graph {
    let mut perm: Vec<usize> = (0..g.edge_count()).collect();
    perm.shuffle(rng);
    let shuffled = g.with_edge_order(&perm);
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(rng);
    let rename = |i: usize| format!("w{}", order[i]);
    let mut vertices: Vec<String> = (0..g.vertex_count()).map(rename).collect();
    vertices.sort();
    let edges = shuffled
        .edges()
        .iter()
        .map(|e| (e.id.clone(), rename(e.origin), rename(e.terminus)))
        .collect();
    Graph::new(vertices, edges).expect("relabeling keeps the graph valid")
}

/// A subgroup of `from` rewritten over the edges of `to` by edge id.
pub fn transport(h: &VanishingSubgroup, from: &Graph, to: &Graph) -> VanishingSubgroup {
    let gens: Vec<OneChain> = h
        .generators()
        .iter()
        .map(|a| {
            let mut c = OneChain::zero();
            for (&e, k) in a.iter() {
                c.add_term(to.edge_index(&from.edge(e).id).expect("same edge ids"), k);
            }
            c
        })
        .collect();
    is_vanishing_subgroup(to, &gens).expect("transported subgroup is valid")
}
