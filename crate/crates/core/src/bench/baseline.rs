use std::time::Instant;

use rayon::prelude::*;

use crate::digraph::{set_difference_vec, set_union_vec};
use crate::edge::{Edge, VertexId};
use crate::graph::GraphView;
use crate::ops::EdgeBatch;

/// Reference graph storing one `Vec<Edge>` per vertex on the global allocator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BaselineGraph {
    exists: Vec<bool>,
    lists: Vec<Vec<Edge>>,
}

/// Timings of [`BaselineGraph::clone_split`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneSplit {
    pub alloc_seconds: f64,
    pub copy_seconds: f64,
}

impl CloneSplit {
    pub fn total(&self) -> f64 {
        self.alloc_seconds + self.copy_seconds
    }
}

impl BaselineGraph {
    /// Copies any graph; edge lists are sorted and deduplicated.
    pub fn from_graph<G: GraphView>(g: &G) -> Self {
        let span = g.span();
        let exists = (0..span).map(|u| g.has_vertex(u as VertexId)).collect();
        let lists = (0..span)
            .into_par_iter()
            .map(|u| {
                let mut l = Vec::with_capacity(g.degree(u as VertexId));
                g.for_each_edge(u as VertexId, |e| l.push(e));
                l.sort_by_key(|e| e.target);
                l.dedup_by_key(|e| e.target);
                l
            })
            .collect();
        Self { exists, lists }
    }

    /// Deep copy timed in two phases: allocating every edge vector, then
    /// copying the edges into them.
    pub fn clone_split(&self) -> (Self, CloneSplit) {
        let t0 = Instant::now();
        let mut lists: Vec<Vec<Edge>> = self
            .lists
            .par_iter()
            .map(|l| Vec::with_capacity(l.len()))
            .collect();
        let exists = self.exists.clone();
        let t1 = Instant::now();
        lists
            .par_iter_mut()
            .zip(&self.lists)
            .for_each(|(dst, src)| dst.extend_from_slice(src));
        let t2 = Instant::now();
        let split = CloneSplit {
            alloc_seconds: (t1 - t0).as_secs_f64(),
            copy_seconds: (t2 - t1).as_secs_f64(),
        };
        (Self { exists, lists }, split)
    }

    pub fn edges(&self, u: VertexId) -> &[Edge] {
        self.lists.get(u as usize).map_or(&[], Vec::as_slice)
    }

    fn grow(&mut self, span: usize) {
        if span > self.lists.len() {
            self.lists.resize_with(span, Vec::new);
            self.exists.resize(span, false);
        }
    }

    pub fn subtract_inplace(&mut self, batch: &EdgeBatch) {
        for u in batch.vertices() {
            if let Some(l) = self.lists.get_mut(u as usize) {
                *l = set_difference_vec(l, batch.edges(u));
            }
        }
    }

    pub fn add_inplace(&mut self, batch: &EdgeBatch) {
        self.grow(batch.span());
        for u in batch.vertices() {
            self.exists[u as usize] = true;
            let l = &mut self.lists[u as usize];
            *l = set_union_vec(l, batch.edges(u));
        }
    }
}

impl GraphView for BaselineGraph {
    fn span(&self) -> usize {
        self.lists.len()
    }

    fn has_vertex(&self, u: VertexId) -> bool {
        self.exists.get(u as usize).copied().unwrap_or(false)
    }

    fn degree(&self, u: VertexId) -> usize {
        self.edges(u).len()
    }

    fn order(&self) -> usize {
        self.exists.iter().filter(|&&b| b).count()
    }

    fn size(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    fn for_each_edge<F: FnMut(Edge)>(&self, u: VertexId, mut f: F) {
        for &e in self.edges(u) {
            f(e);
        }
    }

    fn edge_slice(&self, u: VertexId) -> Option<&[Edge]> {
        Some(self.edges(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ops, DiGraph};

    #[test]
    fn mirrors_digraph_operations() {
        let mut g = DiGraph::from_edges([(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 1, 1.0)]);
        let mut b = BaselineGraph::from_graph(&g);
        let (c, split) = b.clone_split();
        assert_eq!(c, b);
        assert!(split.total() >= 0.0);

        let del = EdgeBatch::from_edges([(2, 1, 1.0), (0, 2, 1.0)]);
        ops::subtract_inplace(&mut g, &del);
        b.subtract_inplace(&del);
        let ins = EdgeBatch::from_edges([(5, 0, 2.0), (0, 1, 3.0)]);
        ops::add_inplace(&mut g, &ins);
        b.add_inplace(&ins);
        assert_eq!(BaselineGraph::from_graph(&g), b);
        assert_eq!((b.order(), b.size()), (g.order(), g.size()));
    }
}
