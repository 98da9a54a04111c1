//! Spanning tree, fundamental cycles and ℓ¹ norms of the kagome base graph.

use crystal_quadric::fixtures;

fn main() {
    let g = fixtures::get("kagome").unwrap().graph();
    g.validate().unwrap();
    let t = g.spanning_tree();
    let tree: Vec<&str> = t.edges.iter().map(|&e| g.edge(e).id.as_str()).collect();
    println!("vertices {}, edges {}, b1 = {}", g.vertex_count(), g.edge_count(), g.betti_number());
    println!("spanning tree: {}", tree.join(", "));
    for c in &g.homology_basis().cycles {
        println!("cycle {:<24} |c|_1 = {}  boundary zero: {}", c.display(&g).to_string(), c.l1_norm(), g.is_cycle(c).unwrap());
    }
}
