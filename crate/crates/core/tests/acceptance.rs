//! Acceptance run: one pass/fail line per criterion.
//!
//! `cargo test --test acceptance`

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use crystal_quadric::arith::{squarefree_part, QuadFieldElem, Rational};
use crystal_quadric::fixtures::{self, Fixture};
use crystal_quadric::graph::{Graph, OneChain};
use crystal_quadric::invariants::{intersection_determinant, tree_number, VanishingSubgroup};
use crystal_quadric::quadric::{on_quadric, point_to_realization, quadric_presentation, secant_point, ProjectivePoint, QuadricError};
use crystal_quadric::realization::{energy, period_lattice, standard_point, StandardPoint};
use crystal_quadric::tiling::{fundamental_tiles, is_tiling, tiling_census, CensusLimits};
use crystal_quadric::invariants::is_vanishing_subgroup;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

type Outcome = Result<String, String>;
type HnfSet = BTreeSet<Vec<Vec<BigInt>>>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn fixture_instances() -> Vec<(Fixture, Graph, VanishingSubgroup)> {
    fixtures::ALL
        .iter()
        .map(|f| {
            let g = f.graph();
            let h = f.subgroup().expect("fixture subgroup");
            (*f, g, h)
        })
        .collect()
}

fn random_instances(n: usize, seed: u64) -> Vec<(Graph, VanishingSubgroup, StandardPoint)> {
    let mut r = rng(seed);
    (0..n).map(|_| random_instance(&mut r, 8)).collect()
}

fn q(a: &str, b: &str, d: u64) -> QuadFieldElem {
    QuadFieldElem::new(
        crystal_quadric::arith::rational::parse_rational(a).unwrap(),
        crystal_quadric::arith::rational::parse_rational(b).unwrap(),
        d,
    )
    .unwrap()
}

fn criterion_1() -> Outcome {
    // a few points written out literally, independent of the fixture files
    let literal: [(&str, Vec<QuadFieldElem>); 3] = [
        ("honeycomb", vec![q("1", "0", 3), q("-1/2", "1/2", 3), q("-1/2", "-1/2", 3)]),
        ("square", vec![q("1", "0", 1), q("0", "1", 1)]),
        ("sqrt6", vec![q("3", "1", 6), q("-3", "1", 6), q("0", "-1", 6)]),
    ];
    let mut slowest = Duration::ZERO;
    for (f, g, h) in fixture_instances() {
        let t = Instant::now();
        let z = standard_point(&g, &h).map_err(|e| format!("{}: {e}", f.name))?;
        let elapsed = t.elapsed();
        slowest = slowest.max(elapsed);
        let expected = f.point().normalized().map_err(|e| format!("{}: {e}", f.name))?;
        ensure(z.same_up_to_conjugation(&expected), || format!("{}: got {:?}", f.name, z.coords()))?;
        ensure(z == z.canonical(), || format!("{}: result not in canonical form", f.name))?;
        ensure(elapsed < Duration::from_secs(1), || format!("{}: took {elapsed:?}", f.name))?;
        if let Some((_, c)) = literal.iter().find(|(n, _)| *n == f.name) {
            let lit = ProjectivePoint::new(c.clone()).unwrap().normalized().unwrap();
            ensure(z.same_up_to_conjugation(&lit), || format!("{}: differs from the literal point", f.name))?;
        }
    }
    Ok(format!("{} fixtures reproduced exactly, slowest {slowest:?}", fixtures::ALL.len()))
}

fn criterion_2() -> Outcome {
    let check = |g: &Graph, h: &VanishingSubgroup, z: &StandardPoint, what: &str| {
        let ki = tree_number(g) * intersection_determinant(h);
        let want = squarefree_part(&ki).unwrap().to_u64().unwrap();
        ensure(z.d() == want, || format!("{what}: point field D = {}, squarefree(κI) = {want}", z.d()))
    };
    for (f, g, h) in fixture_instances() {
        let z = standard_point(&g, &h).map_err(|e| e.to_string())?;
        check(&g, &h, &z, f.name)?;
    }
    let random = random_instances(150, 2);
    let mut fields = BTreeSet::new();
    for (i, (g, h, z)) in random.iter().enumerate() {
        check(g, h, z, &format!("random #{i}"))?;
        fields.insert(z.d());
    }
    Ok(format!("{} fixtures, {} random instances, fields D in {fields:?}", fixtures::ALL.len(), random.len()))
}

fn check_energy(g: &Graph, h: &VanishingSubgroup, z: &StandardPoint) -> Result<Rational, String> {
    let pl = period_lattice(z.coords(), &g.homology_basis()).map_err(|e| e.to_string())?;
    let e = energy(z.coords(), &pl);
    let want = Rational::from_integer(BigInt::from(16) * intersection_determinant(h)) / Rational::from_integer(tree_number(g));
    ensure(e == want, || format!("energy² = {e}, 16I/κ = {want}"))?;
    Ok(e)
}

fn criterion_3() -> Outcome {
    let specials = [("triangular", Rational::from_integer(48.into())), ("square", Rational::from_integer(16.into())), ("honeycomb", Rational::new(16.into(), 3.into()))];
    for (f, g, h) in fixture_instances() {
        let z = standard_point(&g, &h).map_err(|e| e.to_string())?;
        let e = check_energy(&g, &h, &z).map_err(|m| format!("{}: {m}", f.name))?;
        if let Some((_, v)) = specials.iter().find(|(n, _)| *n == f.name) {
            ensure(&e == v, || format!("{}: energy² {e}, expected {v}", f.name))?;
        }
    }
    let random = random_instances(150, 3);
    for (i, (g, h, z)) in random.iter().enumerate() {
        check_energy(g, h, z).map_err(|m| format!("random #{i}: {m}"))?;
    }
    Ok(format!("energy² = 16I/κ on {} fixtures and {} random instances", fixtures::ALL.len(), random.len()))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut seen = BTreeSet::new();
    let mut count = 0usize;
    // every (v, e) shape with at most 8 edges, several graphs each
    for v in 1..=6usize {
        for e in v.saturating_sub(1).max(1)..=8 {
            for _ in 0..14 {
                let Some(g) = random_connected(&mut r, v, e) else { continue };
                let brute = brute_force_tree_number(&g);
                let fast = tree_number(&g);
                ensure(fast == BigInt::from(brute), || format!("κ = {fast}, brute force {brute} on {:?}", g.edges()))?;
                let key: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.origin, e.terminus)).collect();
                seen.insert(key);
                count += 1;
            }
        }
    }
    for _ in 0..200 {
        let g = random_base_graph(&mut r, 8);
        ensure(tree_number(&g) == BigInt::from(brute_force_tree_number(&g)), || "base graph mismatch".into())?;
        seen.insert(g.edges().iter().map(|e| (e.origin, e.terminus)).collect());
        count += 1;
    }
    ensure(seen.len() >= 500, || format!("only {} distinct graphs generated", seen.len()))?;
    Ok(format!("{count} graphs ({} distinct) with at most 8 edges agree with brute force", seen.len()))
}

fn criterion_5() -> Outcome {
    let fx = fixture_instances();
    let mut checked = 0;
    let recover = |g: &Graph, h: &VanishingSubgroup, z: &StandardPoint, what: &str| -> Result<(), String> {
        let p = ProjectivePoint::from(z);
        ensure(on_quadric(&p, &quadric_presentation(g, Some(h))), || format!("{what}: not on the quadric with H"))?;
        ensure(on_quadric(&p, &quadric_presentation(g, None)), || format!("{what}: not on the graph quadric"))?;
        let rec = point_to_realization(&p, g).map_err(|e| format!("{what}: {e}"))?;
        ensure(rec.subgroup.hnf() == h.hnf(), || format!("{what}: recovered H differs"))?;
        ensure(rec.point == z.canonical(), || format!("{what}: recovered point differs"))
    };
    for (f, g, h) in &fx {
        let z = standard_point(g, h).map_err(|e| e.to_string())?;
        recover(g, h, &z, f.name)?;
        recover(g, h, &f.point().normalized().unwrap(), f.name)?;
        checked += 1;
    }
    for (i, (g, h, z)) in random_instances(100, 5).iter().enumerate() {
        recover(g, h, z, &format!("random #{i}"))?;
        checked += 1;
    }

    let mut r = rng(55);
    let (mut draws, mut tangent, mut skipped) = (0, 0, 0);
    while draws < 1000 {
        let (f, g, h) = &fx[draws % fx.len()];
        let z = standard_point(g, h).map_err(|e| e.to_string())?;
        let base = ProjectivePoint::from(&z);
        let pres = quadric_presentation(g, None);
        let a = &pres.substitution;
        let w: Vec<i64> = (0..a.ncols()).map(|_| r.gen_range(-4i64..=4)).collect();
        let dir: Vec<QuadFieldElem> = (0..a.nrows())
            .map(|i| {
                let s: BigInt = (0..a.ncols()).map(|j| &a[(i, j)] * BigInt::from(w[j])).sum();
                QuadFieldElem::rational(Rational::from_integer(s))
            })
            .collect();
        match secant_point(&base, &dir, &pres) {
            Ok(s) => {
                let p = ProjectivePoint::from(&s.point);
                ensure(on_quadric(&p, &pres), || format!("{}: secant point off the quadric", f.name))?;
                ensure(s.point.d() == z.d(), || format!("{}: secant changed D {} -> {}", f.name, z.d(), s.point.d()))?;
                tangent += s.tangent as usize;
                draws += 1;
            }
            Err(QuadricError::NotALine) => skipped += 1,
            Err(e) => return Err(format!("{}: secant failed: {e}", f.name)),
        }
    }
    Ok(format!("{checked} points recovered H exactly, {draws} secants on the quadric with fixed D ({tangent} tangent, {skipped} degenerate directions redrawn)"))
}

fn criterion_6() -> Outcome {
    let mut shapes = Vec::new();
    for name in ["honeycomb", "square", "triangular", "kagome", "dice"] {
        let f = fixtures::get(name).unwrap();
        let (g, h) = (f.graph(), f.subgroup().unwrap());
        let verdict = is_tiling(&g, &h);
        let te = verdict.embedding.ok_or_else(|| format!("{name}: not a tiling ({:?})", verdict.reason))?;
        let (v, e, b) = (g.vertex_count() as i64, g.edge_count(), g.betti_number());
        let faces = te.face_sizes();
        ensure(te.face_count() == b - 1, || format!("{name}: {} faces, b₁ − 1 = {}", te.face_count(), b - 1))?;
        ensure(v - e as i64 + te.face_count() as i64 == 0, || format!("{name}: Euler characteristic nonzero"))?;
        ensure(te.euler_characteristic() == 0, || format!("{name}: reported Euler characteristic nonzero"))?;
        ensure(faces.iter().sum::<usize>() == 2 * e, || format!("{name}: face sizes {faces:?} do not sum to 2e"))?;
        ensure(faces.iter().all(|&k| (3..=2 * e).contains(&k)), || format!("{name}: face sizes {faces:?}"))?;
        let tiles = fundamental_tiles(&te, &h).map_err(|err| format!("{name}: {err}"))?;
        ensure(tiles.len() == b - 1, || format!("{name}: {} tiles", tiles.len()))?;
        let sum = tiles.iter().fold(OneChain::zero(), |acc, c| &acc + c);
        ensure(sum.is_zero(), || format!("{name}: tile boundaries do not sum to zero"))?;
        let spanned = is_vanishing_subgroup(&g, &tiles[..b - 2]).map_err(|err| format!("{name}: tiles: {err}"))?;
        ensure(spanned.same_as(&h), || format!("{name}: tile boundaries do not form a basis of H"))?;
        for c in te.face_chains() {
            ensure(g.is_cycle(&c).unwrap(), || format!("{name}: face boundary is not a cycle"))?;
        }
        shapes.push(format!("{name} {faces:?}"));
    }
    Ok(shapes.join(", "))
}

fn tiling_set(g: &Graph, back_to: &Graph) -> Result<(usize, HnfSet, Duration), String> {
    let t = Instant::now();
    let rep = tiling_census(g, None, &CensusLimits::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let hnfs: Vec<Vec<Vec<i64>>> = (0..rep.total()).map(|k| rep.census.hnf(k)).collect();
    let distinct: BTreeSet<&Vec<Vec<i64>>> = hnfs.iter().collect();
    ensure(distinct.len() == hnfs.len(), || "census list has duplicates".into())?;
    let set = rep.tilings.iter().map(|(k, _)| transport(&rep.census.subgroup(*k), g, back_to).hnf().row_vecs()).collect();
    Ok((rep.total(), set, elapsed))
}

fn criterion_7() -> Outcome {
    let b3 = fixtures::get("triangular").unwrap().graph();
    let kagome = fixtures::get("kagome").unwrap().graph();
    let mut r = rng(7);
    let mut parts = Vec::new();
    for (name, g) in [("B3", b3), ("kagome", kagome)] {
        let (total, tilings, t1) = tiling_set(&g, &g)?;
        let permuted = relabeled(&mut r, &g);
        let (total2, tilings2, t2) = tiling_set(&permuted, &g)?;
        ensure(total == total2, || format!("{name}: {total} vs {total2} subgroups after relabeling"))?;
        ensure(tilings == tilings2, || format!("{name}: tiling subset changes after relabeling"))?;
        ensure(!tilings.is_empty(), || format!("{name}: no tilings found"))?;
        for t in [t1, t2] {
            ensure(t < Duration::from_secs(60), || format!("{name}: census took {t:?}"))?;
        }
        parts.push(format!("{name}: {total} subgroups, {} tilings, {:.1?}/{:.1?}", tilings.len(), t1, t2));
    }
    Ok(parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut failures = Vec::new();
    let mut note = |res: Result<(), String>| {
        if let Err(e) = res {
            failures.push(e);
        }
    };

    let axioms = 2000;
    for i in 0..axioms {
        let d = FIELDS[i % FIELDS.len()];
        let (x, y, z) = (random_elem(&mut r, d), random_elem(&mut r, d), random_elem(&mut r, d));
        note(check_field_axioms(&x, &y, &z));
    }
    let signs = 10_000;
    for _ in 0..signs {
        let (p, q, d) = sign_sample(&mut r);
        note(check_sign(&p, &q, d));
    }
    let matrices = 1000;
    for _ in 0..matrices {
        let (m, c) = random_matrix(&mut r);
        note(check_normal_forms(&m, c));
    }
    let instances = random_instances(120, 88);
    let mut flips = 0;
    for (g, h, _) in &instances {
        let chain = random_chain(&mut r, g);
        let i = r.gen_range(0..g.edge_count());
        note(check_orientation(g, h, &chain, i));
        flips += 1;
    }
    let mut realizations = 0;
    let fx: Vec<(Graph, VanishingSubgroup, StandardPoint)> = fixture_instances()
        .into_iter()
        .map(|(_, g, h)| {
            let z = standard_point(&g, &h).unwrap();
            (g, h, z)
        })
        .collect();
    for (g, h, z) in fx.iter().chain(&instances) {
        let lambda = random_nonzero(&mut r, z.d());
        note(check_conjugation_scale(g, h, z, &lambda));
        realizations += 1;
    }
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first: {first}", failures.len()));
    }
    Ok(format!(
        "{axioms} field-axiom triples, {signs} sign samples, {matrices} SNF/HNF matrices, {flips} orientation flips, {realizations} conjugate/scaled realizations"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture points", criterion_1),
        ("discriminant identity", criterion_2),
        ("energy identity", criterion_3),
        ("tree number oracle", criterion_4),
        ("quadric round trip", criterion_5),
        ("tiling structure", criterion_6),
        ("census finiteness", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{:.1?}] {detail}", i + 1, t.elapsed()),
            Err(why) => {
                println!("criterion {} ({name}): FAIL [{:.1?}] {why}", i + 1, t.elapsed());
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
