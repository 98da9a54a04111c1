mod common;

use common::*;
use crystal_quadric::arith::{QuadFieldElem, Rational};
use crystal_quadric::quadric::{find_congruence, quadric_presentation, Congruence};
use crystal_quadric::tiling::height;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=30).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn elem_triple() -> impl Strategy<Value = (QuadFieldElem, QuadFieldElem, QuadFieldElem)> {
    (0..FIELDS.len(), prop::array::uniform6(rational())).prop_map(|(i, r)| {
        let d = FIELDS[i];
        let e = |a: &Rational, b: &Rational| QuadFieldElem::new(a.clone(), b.clone(), d).unwrap();
        (e(&r[0], &r[1]), e(&r[2], &r[3]), e(&r[4], &r[5]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn field_axioms((x, y, z) in elem_triple()) {
        prop_assert_eq!(check_field_axioms(&x, &y, &z), Ok(()));
    }

    #[test]
    fn sign_matches_oracle(p in rational(), q in rational(), d in 1u64..500) {
        prop_assert_eq!(check_sign(&p, &q, d), Ok(()));
    }

    #[test]
    fn sign_near_cancellation(seed in any::<u64>()) {
        let mut r = rng(seed);
        for _ in 0..20 {
            let (p, q, d) = sign_sample(&mut r);
            prop_assert_eq!(check_sign(&p, &q, d), Ok(()));
        }
    }

    #[test]
    fn normal_forms(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 1..=6), 1..=5)) {
        let c = rows.iter().map(Vec::len).min().unwrap();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.truncate(c); r }).collect();
        prop_assert_eq!(check_normal_forms(&rows, c), Ok(()));
    }

    #[test]
    fn orientation_independence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h, _) = random_instance(&mut r, 8);
        let chain = random_chain(&mut r, &g);
        let i = r.gen_range(0..g.edge_count());
        prop_assert_eq!(check_orientation(&g, &h, &chain, i), Ok(()));
        // the height only sees ℓ¹ norms, so it is orientation independent too
        let g2 = g.with_reversed_edge(i);
        let gens: Vec<_> = h.generators().iter().map(|a| a.with_reversed_edge(i)).collect();
        let h2 = crystal_quadric::invariants::is_vanishing_subgroup(&g2, &gens).unwrap();
        if let (Ok(a), Ok(b)) = (height(&h), height(&h2)) {
            prop_assert_eq!(a.height, b.height);
        }
    }

    #[test]
    fn conjugation_and_scale(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h, z) = random_instance(&mut r, 8);
        let lambda = random_nonzero(&mut r, z.d());
        prop_assert_eq!(check_conjugation_scale(&g, &h, &z, &lambda), Ok(()));
    }

    #[test]
    fn reduced_form_is_congruent_after_edge_reordering(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_base_graph(&mut r, 8);
        prop_assume!(g.betti_number() <= 5);
        let g2 = relabeled(&mut r, &g);
        let f = quadric_presentation(&g, None).reduced_form;
        let f2 = quadric_presentation(&g2, None).reduced_form;
        prop_assert!(!matches!(find_congruence(&f, &f2), Congruence::Differs));
    }
}

#[test]
fn conjugation_and_scale_on_fixtures() {
    let mut r = rng(1);
    for f in crystal_quadric::fixtures::ALL {
        let (g, h) = (f.graph(), f.subgroup().unwrap());
        let z = crystal_quadric::realization::standard_point(&g, &h).unwrap();
        for _ in 0..5 {
            let lambda = random_nonzero(&mut r, z.d());
            assert_eq!(check_conjugation_scale(&g, &h, &z, &lambda), Ok(()), "{}", f.name);
        }
    }
}

#[test]
fn oracle_self_check() {
    use crystal_quadric::arith::Sign;
    let s = |x: i64, y: i64, d: u64| sign_oracle_int(&BigInt::from(x), &BigInt::from(y), d);
    assert_eq!(s(-3, 1, 9), Sign::Zero);
    assert_eq!(s(-2, 1, 3), Sign::Negative);
    assert_eq!(s(-1, 1, 3), Sign::Positive);
    assert_eq!(s(1_000_000_000, -707_106_781, 2), Sign::Positive);
    assert_eq!(s(1_000_000_000, -707_106_782, 2), Sign::Negative);
    assert_eq!(s(2_000_000_000, -1_414_213_562, 2), Sign::Positive);
}
