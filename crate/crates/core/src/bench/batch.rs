use rand::seq::index;
use rand::Rng;

use crate::digraph::DiGraph;
use crate::edge::VertexId;
use crate::ops::EdgeBatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchKind {
    /// Distinct existing edges, chosen uniformly.
    Delete,
    /// Uniform random vertex pairs, weight 1; may repeat or already exist.
    Insert,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchSpec {
    pub kind: BatchKind,
    /// Batch size as a fraction of the graph's edge count.
    pub fraction: f64,
    pub seed: u64,
}

/// `round(fraction * m)`, at least 1. Deletions are capped at `m`.
pub fn batch_size(kind: BatchKind, fraction: f64, m: usize) -> usize {
    let k = ((fraction * m as f64).round() as usize).max(1);
    match kind {
        BatchKind::Delete => k.min(m),
        BatchKind::Insert => k,
    }
}

/// Draws a batch for `g`; `trial` selects an independent random stream.
pub fn generate_batch(g: &DiGraph, spec: &BatchSpec, trial: u64) -> EdgeBatch {
    let mut rng = super::rng(spec.seed, trial + 1);
    let k = batch_size(spec.kind, spec.fraction, g.size());
    match spec.kind {
        BatchKind::Delete => {
            let mut vertices = Vec::new();
            let mut ends = Vec::new();
            let mut total = 0;
            for u in g.vertices() {
                let d = g.degree(u);
                if d > 0 {
                    total += d;
                    vertices.push(u);
                    ends.push(total);
                }
            }
            let mut picks = index::sample(&mut rng, total, k).into_vec();
            picks.sort_unstable();
            let edges = picks.into_iter().map(|p| {
                let i = ends.partition_point(|&e| e <= p);
                let u = vertices[i];
                let e = g.edges(u)[p - (ends[i] - g.degree(u))];
                (u, e.target, e.weight)
            });
            EdgeBatch::from_edges(edges.collect::<Vec<_>>())
        }
        BatchKind::Insert => {
            let n = g.span() as VertexId;
            if n == 0 {
                return EdgeBatch::new();
            }
            let edges: Vec<_> = (0..k)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n), 1.0))
                .collect();
            EdgeBatch::from_edges(edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph() -> DiGraph {
        DiGraph::from_csr(&crate::bench::synth_graph(100, 1000, 3))
    }

    #[test]
    fn sizes() {
        assert_eq!(batch_size(BatchKind::Delete, 1e-7, 1000), 1);
        assert_eq!(batch_size(BatchKind::Delete, 0.1, 1000), 100);
        assert_eq!(batch_size(BatchKind::Delete, 2.0, 1000), 1000);
        assert_eq!(batch_size(BatchKind::Delete, 0.5, 0), 0);
        assert_eq!(batch_size(BatchKind::Insert, 0.0015, 1000), 2);
    }

    #[test]
    fn deletions_are_existing_distinct_edges() {
        let g = graph();
        let spec = BatchSpec { kind: BatchKind::Delete, fraction: 0.1, seed: 9 };
        let b = generate_batch(&g, &spec, 0);
        assert_eq!(b.len(), 100);
        for (u, v, w) in b.triples() {
            let e = g.edges(u).iter().find(|e| e.target == v).unwrap();
            assert_eq!(e.weight, w);
        }
        assert_eq!(b, generate_batch(&g, &spec, 0));
        assert_ne!(b, generate_batch(&g, &spec, 1));
    }

    #[test]
    fn insertions_stay_in_range() {
        let g = graph();
        let spec = BatchSpec { kind: BatchKind::Insert, fraction: 0.05, seed: 1 };
        let b = generate_batch(&g, &spec, 0);
        assert!(b.len() <= 50 && b.len() > 40);
        assert!(b.triples().iter().all(|&(u, v, _)| u < 100 && v < 100));
    }
}
