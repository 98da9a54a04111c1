//! Standard points of the shipped examples, computed two ways and compared
//! with the expected points.

use crystal_quadric::fixtures;
use crystal_quadric::realization::{energy, period_lattice, point_via_projection, standard_point};

fn main() {
    for f in fixtures::ALL {
        let g = f.graph();
        let h = f.subgroup().unwrap();
        let z = standard_point(&g, &h).unwrap();
        let expected = f.point().normalized().unwrap();
        let via = point_via_projection(&g, &h).unwrap();
        let lattice = period_lattice(z.coords(), &g.homology_basis()).unwrap();
        let coords: Vec<String> = z.coords().iter().map(ToString::to_string).collect();
        println!("{:<12} Q(√-{}) [{}]", f.name, z.d(), coords.join(", "));
        println!(
            "{:<12} matches expected: {}, projection route agrees: {}, E^2 = {}",
            "",
            z.same_up_to_conjugation(&expected),
            z.same_up_to_conjugation(&via),
            energy(z.coords(), &lattice)
        );
    }
}
