//! Writes an SVG of the kagome pattern (radius 2 window) to stdout or to the
//! path given as the first argument.

use crystal_quadric::fixtures;
use crystal_quadric::realization::{place, standard_point};
use crystal_quadric::svg::{render, SvgOptions};

fn main() {
    let f = fixtures::get("kagome").unwrap();
    let g = f.graph();
    let z = standard_point(&g, &f.subgroup().unwrap()).unwrap();
    let svg = render(&place(&g, &z, 2).unwrap(), SvgOptions { show_lattice: true });
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg).unwrap(),
        None => print!("{svg}"),
    }
}
