//! Torus embedding, rotation system and faces of the kagome, dice and
//! √−6 examples.

use crystal_quadric::fixtures;
use crystal_quadric::tiling::{fundamental_tiles, height, is_tiling};

fn main() {
    for name in ["kagome", "dice", "triangular", "sqrt6"] {
        let f = fixtures::get(name).unwrap();
        let g = f.graph();
        let h = f.subgroup().unwrap();
        let v = is_tiling(&g, &h);
        println!("{name}: tiling {} height {}", v.is_tiling, height(&h).unwrap().height);
        match v.embedding {
            Some(te) => {
                println!("  faces {:?}, Euler {}", te.face_sizes(), te.euler_characteristic());
                for c in fundamental_tiles(&te, &h).unwrap() {
                    println!("  tile boundary {}", c.display(&g));
                }
            }
            None => println!("  {}", v.reason.unwrap_or_default()),
        }
    }
}
