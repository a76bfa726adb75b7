//! Insert and delete edge batches, in place and into new graphs.

use arenagraph::{ops, DiGraph, EdgeBatch};

fn show(label: &str, g: &DiGraph) {
    println!("{label}: {} vertices, {} edges", g.order(), g.size());
    for u in g.vertices() {
        let t: Vec<_> = g.edges(u).iter().map(|e| format!("{}:{}", e.target, e.weight)).collect();
        println!("  {u} -> [{}]", t.join(", "));
    }
}

fn main() {
    let mut g = DiGraph::from_edges([(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 0, 1.0)]);
    show("start", &g);

    // Existing edges take the batch weight; vertex 3 is new.
    let ins = EdgeBatch::from_edges([(0, 1, 5.0), (2, 3, 1.0), (3, 0, 2.0)]);
    let (bigger, d) = ops::add_new(&g, &ins);
    println!("add_new: +{} vertices, +{} edges", d.dn, d.dm);
    show("inserted copy", &bigger);

    let del = EdgeBatch::from_edges([(0, 2, 0.0), (1, 0, 0.0)]);
    let d = ops::subtract_inplace(&mut g, &del);
    println!("subtract_inplace removed {} edge(s); (1, 0) was never there", d.dm);
    show("original after delete", &g);
}
