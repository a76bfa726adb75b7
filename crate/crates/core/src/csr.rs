use crate::edge::{Edge, VertexId, Weight};
use crate::graph::GraphView;

/// Immutable compressed-sparse-row graph, as produced by the loader.
///
/// Every id in `0..order()` is a vertex. Unweighted graphs have no value
/// array and report weight 1 for every edge.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsrGraph {
    offsets: Vec<usize>,
    edge_keys: Vec<VertexId>,
    edge_values: Option<Vec<Weight>>,
}

impl CsrGraph {
    /// Builds a graph from raw arrays.
    ///
    /// Panics unless `offsets` is non-empty, starts at 0, is nondecreasing and
    /// ends at `edge_keys.len()`, every key is a vertex, and `edge_values` (if
    /// any) matches `edge_keys` in length.
    pub fn from_parts(
        offsets: Vec<usize>,
        edge_keys: Vec<VertexId>,
        edge_values: Option<Vec<Weight>>,
    ) -> Self {
        assert!(!offsets.is_empty(), "offsets must have n + 1 entries");
        assert_eq!(offsets[0], 0, "offsets must start at 0");
        assert!(offsets.windows(2).all(|w| w[0] <= w[1]), "offsets must be nondecreasing");
        assert_eq!(*offsets.last().unwrap(), edge_keys.len(), "offsets must end at m");
        let n = offsets.len() - 1;
        assert!(edge_keys.iter().all(|&k| (k as usize) < n), "edge target out of range");
        if let Some(v) = &edge_values {
            assert_eq!(v.len(), edge_keys.len(), "one value per edge");
        }
        Self {
            offsets,
            edge_keys,
            edge_values,
        }
    }

    /// Builds a graph with `n` vertices from `(source, target, weight)` triples,
    /// keeping their order within each source.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, Weight)], weighted: bool) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in edges {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut keys = vec![0; edges.len()];
        let mut values = vec![0.0; if weighted { edges.len() } else { 0 }];
        for &(u, v, w) in edges {
            let j = cursor[u as usize];
            cursor[u as usize] += 1;
            keys[j] = v;
            if weighted {
                values[j] = w;
            }
        }
        Self::from_parts(offsets, keys, weighted.then_some(values))
    }

    pub(crate) fn from_parts_unchecked(
        offsets: Vec<usize>,
        edge_keys: Vec<VertexId>,
        edge_values: Option<Vec<Weight>>,
    ) -> Self {
        debug_assert_eq!(offsets.last().copied(), Some(edge_keys.len()));
        Self {
            offsets,
            edge_keys,
            edge_values,
        }
    }

    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn size(&self) -> usize {
        self.edge_keys.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.edge_values.is_some()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn edge_keys(&self) -> &[VertexId] {
        &self.edge_keys
    }

    pub fn edge_values(&self) -> Option<&[Weight]> {
        self.edge_values.as_deref()
    }

    #[inline]
    fn range(&self, u: VertexId) -> std::ops::Range<usize> {
        let u = u as usize;
        if u < self.order() {
            self.offsets[u]..self.offsets[u + 1]
        } else {
            0..0
        }
    }

    /// Targets of `u`'s outgoing edges.
    pub fn targets(&self, u: VertexId) -> &[VertexId] {
        &self.edge_keys[self.range(u)]
    }

    /// Weights of `u`'s outgoing edges, if the graph is weighted.
    pub fn weights(&self, u: VertexId) -> Option<&[Weight]> {
        let r = self.range(u);
        self.edge_values.as_ref().map(|v| &v[r])
    }

    pub fn edges(&self, u: VertexId) -> impl ExactSizeIterator<Item = Edge> + '_ {
        let r = self.range(u);
        let values = self.edge_values.as_deref();
        r.map(move |j| Edge::new(self.edge_keys[j], values.map_or(1.0, |v| v[j])))
    }
}

impl GraphView for CsrGraph {
    fn span(&self) -> usize {
        self.order()
    }

    fn has_vertex(&self, u: VertexId) -> bool {
        (u as usize) < self.order()
    }

    fn degree(&self, u: VertexId) -> usize {
        self.range(u).len()
    }

    fn order(&self) -> usize {
        CsrGraph::order(self)
    }

    fn size(&self) -> usize {
        CsrGraph::size(self)
    }

    #[inline]
    fn for_each_edge<F: FnMut(Edge)>(&self, u: VertexId, mut f: F) {
        let r = self.range(u);
        match &self.edge_values {
            Some(v) => {
                for (&k, &w) in self.edge_keys[r.clone()].iter().zip(&v[r]) {
                    f(Edge::new(k, w));
                }
            }
            None => {
                for &k in &self.edge_keys[r] {
                    f(Edge::new(k, 1.0));
                }
            }
        }
    }

    #[inline]
    fn for_each_target<F: FnMut(VertexId)>(&self, u: VertexId, mut f: F) {
        for &k in self.targets(u) {
            f(k);
        }
    }

    fn is_csr(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_groups_by_source() {
        let g = CsrGraph::from_edges(3, &[(1, 2, 0.5), (0, 1, 2.0), (0, 2, 3.0)], true);
        assert_eq!(g.offsets(), &[0, 2, 3, 3]);
        assert_eq!(g.targets(0), &[1, 2]);
        assert_eq!(g.weights(1), Some(&[0.5][..]));
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.degree(7), 0);
        assert!(g.targets(9).is_empty());
    }

    #[test]
    fn unweighted_edges_report_unit_weight() {
        let g = CsrGraph::from_edges(2, &[(0, 1, 9.0)], false);
        assert_eq!(g.edges(0).collect::<Vec<_>>(), vec![Edge::new(1, 1.0)]);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn rejects_dangling_targets() {
        CsrGraph::from_parts(vec![0, 1], vec![4], None);
    }
}
