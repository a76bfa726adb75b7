use rand::seq::index;
use rayon::prelude::*;

use crate::csr::CsrGraph;
use crate::edge::VertexId;

/// Uniform random simple digraph with `n` vertices and `m` distinct edges and
/// no self-loops. Edge lists come out sorted by target.
///
/// Panics if `m > n * (n - 1)` or `n` does not fit a vertex id.
pub fn synth_graph(n: usize, m: usize, seed: u64) -> CsrGraph {
    assert!(n <= VertexId::MAX as usize, "too many vertices");
    let slots = n.saturating_mul(n.saturating_sub(1));
    assert!(m <= slots, "{m} edges do not fit a simple graph on {n} vertices");
    let mut rng = super::rng(seed, 0);
    let mut picks: Vec<usize> = index::sample(&mut rng, slots, m).into_vec();
    picks.par_sort_unstable();

    let mut offsets = vec![0usize; n + 1];
    for &p in &picks {
        offsets[p / (n - 1) + 1] += 1;
    }
    for u in 0..n {
        offsets[u + 1] += offsets[u];
    }
    let keys: Vec<VertexId> = picks
        .par_iter()
        .map(|&p| {
            let (u, v) = (p / (n - 1), p % (n - 1));
            (v + (v >= u) as usize) as VertexId
        })
        .collect();
    CsrGraph::from_parts(offsets, keys, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GraphView;

    #[test]
    fn simple_and_deterministic() {
        let g = synth_graph(50, 600, 7);
        assert_eq!((g.order(), g.size()), (50, 600));
        for u in 0..50 {
            let t = g.targets(u);
            assert!(t.windows(2).all(|w| w[0] < w[1]));
            assert!(!t.contains(&u));
        }
        assert_eq!(g, synth_graph(50, 600, 7));
        assert_ne!(g, synth_graph(50, 600, 8));
    }

    #[test]
    fn complete_graph() {
        let g = synth_graph(4, 12, 1);
        for u in 0..4 {
            assert_eq!(g.degree(u), 3);
        }
        assert_eq!(synth_graph(0, 0, 1).order(), 0);
        assert_eq!(synth_graph(1, 0, 1).size(), 0);
    }

    #[test]
    #[should_panic(expected = "do not fit")]
    fn too_many_edges() {
        synth_graph(3, 7, 0);
    }
}
