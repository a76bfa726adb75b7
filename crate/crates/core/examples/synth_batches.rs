//! Reproducible random graphs and update batches, checked against the
//! vector-of-vectors baseline.

use arenagraph::bench::{batch_size, generate_batch, synth_graph, BaselineGraph, BatchKind, BatchSpec};
use arenagraph::{ops, DiGraph};

fn main() {
    let csr = synth_graph(10_000, 100_000, 42);
    assert_eq!(csr, synth_graph(10_000, 100_000, 42));
    let g = DiGraph::from_csr(&csr);
    println!("graph: {} vertices, {} edges", g.order(), g.size());

    for kind in [BatchKind::Delete, BatchKind::Insert] {
        for fraction in [1e-4, 1e-3, 1e-2] {
            let spec = BatchSpec { kind, fraction, seed: 7 };
            let batch = generate_batch(&g, &spec, 0);
            let mut base = BaselineGraph::from_graph(&g);
            let mut h = g.clone();
            let d = match kind {
                BatchKind::Delete => {
                    base.subtract_inplace(&batch);
                    ops::subtract_inplace(&mut h, &batch)
                }
                BatchKind::Insert => {
                    base.add_inplace(&batch);
                    ops::add_inplace(&mut h, &batch)
                }
            };
            let same = (0..h.span() as u32).all(|u| h.edges(u) == base.edges(u));
            println!(
                "{kind:?} {fraction:e}: batch of {} (target {}), dm = {}, matches baseline: {same}",
                batch.len(),
                batch_size(kind, fraction, g.size()),
                d.dm
            );
        }
    }
}
