//! Vanishing subgroups of B3 up to the default height and the tilings among
//! them.

use crystal_quadric::fixtures;
use crystal_quadric::tiling::{tiling_census, CensusLimits};

fn main() {
    let g = fixtures::get("triangular").unwrap().graph();
    let rep = tiling_census(&g, None, &CensusLimits::default()).unwrap();
    println!("hmax {}: {} subgroups, {} tilings", rep.census.hmax, rep.total(), rep.tilings.len());
    for r in rep.tiling_records() {
        println!("  H = {:?}  height {}  D = {}  faces {:?}", r.hnf, r.height, r.d, r.face_sizes);
    }
}
