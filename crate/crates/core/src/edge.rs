/// Vertex identifier.
pub type VertexId = u32;

/// Edge weight.
pub type Weight = f32;

/// An outgoing edge: target vertex and weight, stored interleaved.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[repr(C)]
pub struct Edge {
    pub target: VertexId,
    pub weight: Weight,
}

/// Bytes per stored edge.
pub const EDGE_SIZE: usize = std::mem::size_of::<Edge>();

impl Edge {
    #[inline]
    pub const fn new(target: VertexId, weight: Weight) -> Self {
        Self { target, weight }
    }
}

impl From<(VertexId, Weight)> for Edge {
    fn from((target, weight): (VertexId, Weight)) -> Self {
        Self { target, weight }
    }
}
