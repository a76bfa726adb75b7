//! Matrix Market reader and writer.
//!
//! Only the `coordinate` format is read, with field `pattern`, `real` or
//! `integer` and symmetry `general` or `symmetric`. Row `i`, column `j`
//! becomes the edge `i-1 -> j-1`; symmetric files also get `j-1 -> i-1` for
//! every off-diagonal entry. The graph has `max(rows, cols)` vertices.
//!
//! Loading splits the data section into blocks parsed in parallel. The
//! resulting [`CsrGraph`] does not depend on the thread count, block size or
//! partition count: within each source vertex, edges are sorted by target and
//! entries with the same target keep their file order.

mod header;
mod load;
mod record;

use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::csr::CsrGraph;

pub use header::{read_header, MtxHeader};
pub use load::{convert_to_csr, read_edgelist, EdgeList, RawEdge};
pub use record::{get_block, parse_record, Record, RecordError};

/// Loader parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Number of degree/edge partitions threads are spread over.
    pub partitions: usize,
    /// Bytes of the data section per parse block.
    pub block_size: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            partitions: 4,
            block_size: 256 * 1024,
        }
    }
}

#[derive(Debug, Error)]
pub enum MtxError {
    #[error("missing or malformed %%MatrixMarket banner")]
    MalformedBanner,
    #[error("unsupported format `{found}` (only `matrix coordinate` is read)")]
    UnsupportedFormat { found: String },
    #[error("unsupported field `{0}`")]
    UnsupportedField(String),
    #[error("unsupported symmetry `{0}`")]
    UnsupportedSymmetry(String),
    #[error("missing or malformed size line")]
    MissingSizeLine,
    #[error("byte {offset}: malformed entry")]
    InvalidRecord { offset: usize },
    #[error("byte {offset}: unexpected data after entry")]
    TrailingData { offset: usize },
    #[error("byte {offset}: vertex {id} outside 1..={max}")]
    VertexOutOfRange { id: u64, max: usize, offset: usize },
    #[error("{0} vertices exceed the 32-bit id space")]
    TooManyVertices(u64),
    #[error("invalid loader options: {0}")]
    InvalidOptions(&'static str),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl MtxError {
    /// Byte offset of the offending entry, for errors in the data section.
    pub fn offset(&self) -> Option<usize> {
        match *self {
            MtxError::InvalidRecord { offset }
            | MtxError::TrailingData { offset }
            | MtxError::VertexOutOfRange { offset, .. } => Some(offset),
            _ => None,
        }
    }
}

/// Parses a whole Matrix Market file held in memory, using the current rayon
/// pool.
pub fn load_graph(data: &[u8], opts: &LoadOptions) -> Result<CsrGraph, MtxError> {
    if opts.partitions == 0 {
        return Err(MtxError::InvalidOptions("partitions must be at least 1"));
    }
    if opts.block_size == 0 {
        return Err(MtxError::InvalidOptions("block size must be at least 1"));
    }
    let header = read_header(data)?;
    let list = read_edgelist(data, &header, opts)?;
    Ok(convert_to_csr(list))
}

/// Reads and parses the file at `path`.
pub fn load_graph_file(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<CsrGraph, MtxError> {
    let data = std::fs::read(path)?;
    load_graph(&data, opts)
}

/// Writes `g` as a `general` coordinate file, `real` if it has weights and
/// `pattern` otherwise.
pub fn write_mtx<W: Write>(g: &CsrGraph, mut w: W) -> io::Result<()> {
    let field = if g.is_weighted() { "real" } else { "pattern" };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
    let n = g.order();
    writeln!(w, "{n} {n} {}", g.size())?;
    for u in 0..n as u32 {
        match g.weights(u) {
            Some(ws) => {
                for (&v, x) in g.targets(u).iter().zip(ws) {
                    writeln!(w, "{} {} {x}", u + 1, v + 1)?;
                }
            }
            None => {
                for &v in g.targets(u) {
                    writeln!(w, "{} {}", u + 1, v + 1)?;
                }
            }
        }
    }
    w.flush()
}
