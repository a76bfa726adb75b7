//! Load a Matrix Market file and print a summary.
//!
//! ```text
//! cargo run --example load_mtx -- path/to/graph.mtx [partitions]
//! ```

use std::time::Instant;

use arenagraph::mtx::{self, LoadOptions};
use arenagraph::DiGraph;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        format!("{}/tests/data/real_symmetric.mtx", env!("CARGO_MANIFEST_DIR"))
    });
    let mut opts = LoadOptions::default();
    if let Some(p) = args.next() {
        opts.partitions = p.parse().expect("partitions must be a number");
    }

    let t = Instant::now();
    let csr = match mtx::load_graph_file(&path, &opts) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    println!(
        "{path}: {} vertices, {} edges, weighted: {} ({:.2?} with {} threads)",
        csr.order(),
        csr.size(),
        csr.is_weighted(),
        t.elapsed(),
        rayon::current_num_threads()
    );

    let g = DiGraph::from_csr(&csr);
    let top = g.vertices().max_by_key(|&u| g.degree(u));
    if let Some(u) = top {
        println!("highest out-degree: vertex {u} with {} edges", g.degree(u));
    }
    for u in g.vertices().take(3) {
        let targets: Vec<_> = g.edges(u).iter().map(|e| (e.target, e.weight)).collect();
        println!("  {u} -> {targets:?}");
    }
}
