//! Whole-graph operations: deep clone, batch deletion and batch insertion.
//!
//! Each batch operation comes in two forms: `*_inplace` edits the graph, and
//! `*_new` leaves it untouched and builds the result as a fresh graph. Both
//! return an [`UpdateDelta`].

use std::mem::MaybeUninit;
use std::ops::Deref;
use std::ptr;

use rayon::prelude::*;

use crate::digraph::{set_difference, set_union, DiGraph};
use crate::edge::{Edge, VertexId, Weight};
use crate::graph::GraphView;

/// A batch of edges to insert or delete, kept as a [`DiGraph`] in sorted,
/// duplicate-free form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeBatch(DiGraph);

impl EdgeBatch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a batch from `(source, target, weight)` triples. Repeated edges
    /// keep their first weight.
    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight)>,
    {
        Self(DiGraph::from_edges(edges))
    }

    /// Wraps a graph, restoring sorted, duplicate-free edge lists first.
    pub fn from_graph(mut g: DiGraph) -> Self {
        g.update(false, false);
        Self(g)
    }

    /// Number of edges in the batch.
    pub fn len(&self) -> usize {
        self.0.size()
    }

    pub fn is_empty(&self) -> bool {
        self.0.size() == 0
    }

    /// All edges as `(source, target, weight)`, ordered by source then target.
    pub fn triples(&self) -> Vec<(VertexId, VertexId, Weight)> {
        self.0
            .vertices()
            .flat_map(|u| self.0.edges(u).iter().map(move |e| (u, e.target, e.weight)))
            .collect()
    }

    pub fn into_inner(self) -> DiGraph {
        self.0
    }
}

impl Deref for EdgeBatch {
    type Target = DiGraph;

    fn deref(&self) -> &DiGraph {
        &self.0
    }
}

/// Change caused by a batch operation: vertices added and edges added (for
/// insertion) or removed (for deletion).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpdateDelta {
    pub dn: usize,
    pub dm: usize,
}

#[inline]
fn copy_edges(src: &[Edge], out: &mut [MaybeUninit<Edge>]) -> usize {
    assert!(out.len() >= src.len());
    // SAFETY: bounds checked above; the regions belong to different blocks.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), out.as_mut_ptr().cast(), src.len()) };
    src.len()
}

/// Sets `out`'s vertex bits to those of `g` for ids below `g.span()`.
fn copy_vertices<G: GraphView>(g: &G, out: &mut DiGraph) {
    let span = g.span();
    out.exists_words_mut()
        .par_iter_mut()
        .enumerate()
        .with_min_len(64)
        .for_each(|(i, w)| {
            let base = i * 64;
            for b in 0..64.min(span.saturating_sub(base)) {
                if g.has_vertex((base + b) as VertexId) {
                    *w |= 1 << b;
                }
            }
        });
}

/// Deep copy of any graph into a new [`DiGraph`] with its own arena.
///
/// Edge lists of compressed sparse row input are sorted and deduplicated on
/// the way in; a [`DiGraph`] source is copied verbatim.
pub fn clone_graph<G: GraphView>(g: &G) -> DiGraph {
    let mut out = DiGraph::new();
    let span = g.span();
    out.reserve(span);
    copy_vertices(g, &mut out);
    let m = out.par_update_vertices(span, |u, alloc, mut v| {
        let deg = g.degree(u);
        if deg == 0 {
            return 0;
        }
        v.rebuild(alloc, deg, |_, o| match g.edge_slice(u) {
            Some(src) => copy_edges(src, o),
            None => {
                let mut k = 0;
                g.for_each_edge(u, |e| {
                    o[k].write(e);
                    k += 1;
                });
                k
            }
        })
    });
    if g.is_csr() {
        out.update(false, false);
    } else {
        out.set_counts(g.order(), m);
    }
    out
}

/// Removes every batch edge present in `g`. Vertices are never removed, so
/// `dn` is 0 and `dm` counts the edges removed.
pub fn subtract_inplace(g: &mut DiGraph, batch: &EdgeBatch) -> UpdateDelta {
    let removed = g.par_update_vertices(batch.span(), |u, _, mut v| {
        let del = batch.edges(u);
        if !v.exists || del.is_empty() {
            return 0;
        }
        v.remove_edges(del)
    });
    let (n, m) = (g.order(), g.size() - removed);
    g.set_counts(n, m);
    UpdateDelta { dn: 0, dm: removed }
}

/// `g` without the batch edges, as a new graph.
pub fn subtract_new(g: &DiGraph, batch: &EdgeBatch) -> (DiGraph, UpdateDelta) {
    let mut out = DiGraph::new();
    out.reserve(g.span());
    out.exists_words_mut().copy_from_slice(g.exists_words());
    let kept = out.par_update_vertices(g.span(), |u, alloc, mut v| {
        let src = g.edges(u);
        if src.is_empty() {
            return 0;
        }
        let del = batch.edges(u);
        v.rebuild(alloc, src.len(), |_, o| {
            if del.is_empty() {
                copy_edges(src, o)
            } else {
                set_difference(src, del, o)
            }
        })
    });
    out.set_counts(g.order(), kept);
    (out, UpdateDelta { dn: 0, dm: g.size() - kept })
}

/// ORs `src` into `dst`, returning how many bits were newly set.
fn merge_vertices(dst: &mut [u64], src: &[u64]) -> usize {
    dst.iter_mut()
        .zip(src)
        .map(|(a, &b)| {
            let new = (b & !*a).count_ones() as usize;
            *a |= b;
            new
        })
        .sum()
}

/// Inserts every batch edge (and every batch vertex) into `g`. For an edge
/// already present the batch weight replaces the old one.
pub fn add_inplace(g: &mut DiGraph, batch: &EdgeBatch) -> UpdateDelta {
    g.reserve(batch.span());
    let dn = merge_vertices(g.exists_words_mut(), batch.exists_words());
    let dm = g.par_update_vertices(batch.span(), |u, alloc, mut v| {
        v.add_edges(alloc, batch.edges(u))
    });
    let (n, m) = (g.order() + dn, g.size() + dm);
    g.set_counts(n, m);
    UpdateDelta { dn, dm }
}

/// `g` with the batch inserted, as a new graph.
pub fn add_new(g: &DiGraph, batch: &EdgeBatch) -> (DiGraph, UpdateDelta) {
    let span = g.span().max(batch.span());
    let mut out = DiGraph::new();
    out.reserve(span);
    out.exists_words_mut()[..g.exists_words().len()].copy_from_slice(g.exists_words());
    let dn = merge_vertices(out.exists_words_mut(), batch.exists_words());
    let m = out.par_update_vertices(span, |u, alloc, mut v| {
        let (a, b) = (g.edges(u), batch.edges(u));
        if a.is_empty() && b.is_empty() {
            return 0;
        }
        v.rebuild(alloc, a.len() + b.len(), |_, o| {
            if b.is_empty() {
                copy_edges(a, o)
            } else {
                set_union(a, b, o)
            }
        })
    });
    out.set_counts(g.order() + dn, m);
    (out, UpdateDelta { dn, dm: m - g.size() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CsrGraph;

    fn graph() -> DiGraph {
        DiGraph::from_edges([(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
    }

    #[test]
    fn clone_is_equal_and_independent() {
        let g = graph();
        let mut h = clone_graph(&g);
        assert_eq!(g, h);
        h.add_edges(1, &[Edge::new(0, 1.0)]);
        assert_ne!(g, h);
        h.check_invariants().unwrap();
    }

    #[test]
    fn clone_from_csr_sorts_and_dedups() {
        let csr = CsrGraph::from_edges(3, &[(0, 2, 1.0), (0, 1, 1.0), (0, 2, 1.0)], false);
        let g = clone_graph(&csr);
        assert_eq!(g.edges(0), &[Edge::new(1, 1.0), Edge::new(2, 1.0)]);
        assert_eq!((g.order(), g.size()), (3, 2));
        g.check_invariants().unwrap();
    }

    #[test]
    fn subtract_counts_only_present_edges() {
        let mut g = graph();
        let batch = EdgeBatch::from_edges([(0, 2, 1.0), (1, 0, 1.0)]);
        let (h, d) = subtract_new(&g, &batch);
        assert_eq!(d, UpdateDelta { dn: 0, dm: 1 });
        assert_eq!(subtract_inplace(&mut g, &batch), d);
        assert_eq!(g, h);
        assert_eq!(g.edges(0), &[Edge::new(1, 1.0)]);
        assert_eq!(g.order(), 3);
        g.check_invariants().unwrap();
    }

    #[test]
    fn add_brings_new_vertices_and_overrides_weights() {
        let mut g = graph();
        let batch = EdgeBatch::from_edges([(0, 1, 5.0), (4, 0, 1.0), (2, 1, 1.0)]);
        let (h, d) = add_new(&g, &batch);
        assert_eq!(d, UpdateDelta { dn: 1, dm: 2 });
        assert_eq!(add_inplace(&mut g, &batch), d);
        assert_eq!(g, h);
        assert_eq!(g.edges(0)[0], Edge::new(1, 5.0));
        assert_eq!(g.edges(4), &[Edge::new(0, 1.0)]);
        assert!(!g.has_vertex(3));
        g.check_invariants().unwrap();
        h.check_invariants().unwrap();
    }

    #[test]
    fn empty_batch_changes_nothing() {
        let mut g = graph();
        let before = g.clone();
        assert_eq!(add_inplace(&mut g, &EdgeBatch::new()), UpdateDelta::default());
        assert_eq!(subtract_inplace(&mut g, &EdgeBatch::new()), UpdateDelta::default());
        assert_eq!(g, before);
    }
}
