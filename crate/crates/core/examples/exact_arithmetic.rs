//! Arithmetic in Q(√−D), the exact sign of p + q√d, and integer normal forms.

use crystal_quadric::arith::rational::rat;
use crystal_quadric::arith::{quad_sign_real, IntMatrix, QuadFieldElem};

fn main() {
    let w = QuadFieldElem::new(rat(-1, 2), rat(1, 2), 3).unwrap();
    println!("w = {w}, w^2 = {}, w^3 = {}", &w * &w, &(&w * &w) * &w);
    println!("|w|^2 = {}, 1/w = {}", w.norm_sq(), w.inv().unwrap());

    // 17 − 12√2 ≈ 0.0294
    println!("sign(17 - 12√2) = {:?}", quad_sign_real(&rat(17, 1), &rat(-12, 1), 2));

    let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    println!("HNF:\n{:?}", m.hermite_normal_form().row_vecs());
    println!("invariant factors: {:?}", m.invariant_factors().iter().map(|x| x.to_string()).collect::<Vec<_>>());
}
