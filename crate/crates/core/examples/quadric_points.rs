//! The graph quadric of the 8-4 example, recovery of a realization from a
//! point, and new rational points by secants.

use crystal_quadric::arith::Rational;
use crystal_quadric::fixtures;
use crystal_quadric::quadric::{on_quadric, point_to_realization, quadric_presentation, secant_point_rational, ProjectivePoint};

fn main() {
    let f = fixtures::get("lattice_8_4").unwrap();
    let g = f.graph();
    let q = quadric_presentation(&g, None);
    print!("{}", q.to_text(true));

    let p = f.point();
    println!("expected point on quadric: {}", on_quadric(&p, &q));
    let rec = point_to_realization(&p, &g).unwrap();
    println!("recovered H = {:?}", rec.subgroup.hnf().row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());

    // directions z = A·w in the harmonic space
    for w in [[1i64, 0, 0], [1, 2, -1], [0, 3, 1]] {
        let dir: Vec<Rational> = (0..q.n)
            .map(|i| {
                let s: i64 = (0..w.len()).map(|j| i64::try_from(&q.substitution[(i, j)]).unwrap() * w[j]).sum();
                Rational::from_integer(s.into())
            })
            .collect();
        match secant_point_rational(&p, &dir, &q) {
            Ok(s) => {
                let coords: Vec<String> = s.point.coords().iter().map(ToString::to_string).collect();
                let on = on_quadric(&ProjectivePoint::from(&s.point), &q);
                println!("w = {w:?}: [{}] on quadric {on}, D = {}", coords.join(", "), s.point.d());
            }
            Err(e) => println!("w = {w:?}: {e}"),
        }
    }
}
