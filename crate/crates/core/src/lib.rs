//! Dynamic directed graphs backed by per-thread arena allocators.
//!
//! The crate is organised bottom-up:
//!
//! - [`alloc`]: fixed, growable, size-class and per-thread arena allocators.
//! - [`mtx`]: a parallel Matrix Market reader producing a [`CsrGraph`].
//! - [`digraph`]: the mutable [`DiGraph`], whose per-vertex edge arrays live in a
//!   [`ConcurrentArena`](alloc::ConcurrentArena), plus sorted-list set primitives.
//! - [`ops`]: deep clone, batch deletion and batch insertion, each in place or
//!   into a new graph.
//! - [`walk`]: the k-step reverse walk kernel.
//! - [`bench`]: batch generation, synthetic graphs and the timing harness behind
//!   the `bench` binary.
//!
//! ```
//! use arenagraph::{mtx, ops, walk, DiGraph, EdgeBatch};
//!
//! let text = b"%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n2 3\n";
//! let csr = mtx::load_graph(text, &mtx::LoadOptions::default()).unwrap();
//! let mut g = DiGraph::from_csr(&csr);
//!
//! let batch = EdgeBatch::from_edges([(0, 2, 1.0)]);
//! let delta = ops::add_inplace(&mut g, &batch);
//! assert_eq!((delta.dn, delta.dm), (0, 1));
//!
//! let counts = walk::reverse_walk(&g, 1);
//! assert_eq!(counts.as_slice(), &[2, 1, 0]);
//! ```

pub mod alloc;
pub mod bench;
mod csr;
pub mod digraph;
mod edge;
mod graph;
pub mod mtx;
pub mod ops;
pub mod walk;

pub use csr::CsrGraph;
pub use digraph::DiGraph;
pub use edge::{Edge, VertexId, Weight, EDGE_SIZE};
pub use graph::GraphView;
pub use ops::{EdgeBatch, UpdateDelta};
pub use walk::WalkCounts;
