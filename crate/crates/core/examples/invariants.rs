//! Tree number, intersection determinant, predicted field and minimal energy
//! for every shipped example.

use crystal_quadric::fixtures;
use crystal_quadric::invariants::invariant_report;

fn main() {
    println!("{:<12} {:>6} {:>4} {:>4} {:>12}", "fixture", "kappa", "I", "D", "min E^2");
    for f in fixtures::ALL {
        let g = f.graph();
        let h = f.subgroup().unwrap();
        let r = invariant_report(&g, &h);
        println!("{:<12} {:>6} {:>4} {:>4} {:>12}", f.name, r.kappa, r.i_h, r.d, r.min_energy_sq.to_string());
    }
}
