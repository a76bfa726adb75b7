use crate::edge::{Edge, VertexId};

/// Read access shared by [`CsrGraph`](crate::CsrGraph) and [`DiGraph`](crate::DiGraph).
pub trait GraphView: Sync {
    /// One past the largest vertex id the graph has room for.
    fn span(&self) -> usize;

    fn has_vertex(&self, u: VertexId) -> bool;

    /// Out-degree of `u`, 0 when out of range.
    fn degree(&self, u: VertexId) -> usize;

    /// Number of vertices.
    fn order(&self) -> usize;

    /// Number of edges.
    fn size(&self) -> usize;

    /// Calls `f` for each outgoing edge of `u`, in storage order.
    fn for_each_edge<F: FnMut(Edge)>(&self, u: VertexId, f: F);

    /// Calls `f` with the target of each outgoing edge of `u`.
    #[inline]
    fn for_each_target<F: FnMut(VertexId)>(&self, u: VertexId, mut f: F) {
        self.for_each_edge(u, |e| f(e.target));
    }

    /// The outgoing edges of `u` as a contiguous slice, when stored that way.
    fn edge_slice(&self, _u: VertexId) -> Option<&[Edge]> {
        None
    }

    /// Whether the source is a compressed sparse row graph, whose edge lists
    /// are not guaranteed sorted.
    fn is_csr(&self) -> bool {
        false
    }
}
