//! Count k-step walks leaving each vertex.

use arenagraph::walk::reverse_walk;
use arenagraph::DiGraph;

fn main() {
    // A diamond feeding a sink: 0 -> {1, 2} -> 3 -> 4.
    let g = DiGraph::from_edges([(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0), (3, 4, 1.0)]);
    for k in 0..=4 {
        let c = reverse_walk(&g, k);
        println!("k = {k}: {:?} (total {})", c.as_slice(), c.total());
    }
}
