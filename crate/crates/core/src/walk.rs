//! Reverse walk counting.

use std::ops::Deref;

use rayon::prelude::*;

use crate::edge::VertexId;
use crate::graph::GraphView;

/// Per-vertex walk counts, indexed by vertex id up to the graph's span.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WalkCounts(Vec<u64>);

impl WalkCounts {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    /// Sum of all counts, wrapping on overflow.
    pub fn total(&self) -> u64 {
        self.0.iter().fold(0u64, |a, &b| a.wrapping_add(b))
    }
}

impl Deref for WalkCounts {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

/// Counts, for every vertex `u`, the walks of exactly `steps` edges that start
/// at `u`.
///
/// Every vertex starts with count 1 (absent ids with 0); each step replaces a
/// vertex's count by the sum of its out-neighbours' counts. Counts wrap on
/// overflow.
///
/// Panics if an edge points at an id at or beyond `g.span()`.
pub fn reverse_walk<G: GraphView>(g: &G, steps: usize) -> WalkCounts {
    let span = g.span();
    let mut cur: Vec<u64> = (0..span)
        .into_par_iter()
        .map(|u| g.has_vertex(u as VertexId) as u64)
        .collect();
    let mut next = vec![0u64; span];
    for _ in 0..steps {
        next.par_iter_mut()
            .enumerate()
            .with_min_len(1024)
            .for_each(|(u, c)| {
                let mut s = 0u64;
                g.for_each_target(u as VertexId, |v| s = s.wrapping_add(cur[v as usize]));
                *c = s;
            });
        std::mem::swap(&mut cur, &mut next);
    }
    WalkCounts(cur)
}
