//! Compare a deep clone of a DiGraph with cloning a vector-of-vectors graph.
//!
//! ```text
//! cargo run --release --example clone_graph -- [vertices] [edges]
//! ```

use std::time::Instant;

use arenagraph::bench::{synth_graph, BaselineGraph};
use arenagraph::{ops, DiGraph};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("expected a number"));
    let n = args.next().unwrap_or(100_000);
    let m = args.next().unwrap_or(1_000_000);

    let g = DiGraph::from_csr(&synth_graph(n, m, 1));
    let base = BaselineGraph::from_graph(&g);
    println!("{n} vertices, {m} edges");

    for _ in 0..3 {
        let (copy, split) = base.clone_split();
        drop(copy);
        println!(
            "vec-of-vecs: {:.4}s (alloc {:.4}s, copy {:.4}s)",
            split.total(),
            split.alloc_seconds,
            split.copy_seconds
        );
    }
    for _ in 0..3 {
        let t = Instant::now();
        let copy = ops::clone_graph(&g);
        let s = t.elapsed().as_secs_f64();
        assert_eq!(copy.size(), g.size());
        println!("digraph:     {s:.4}s");
    }
}
