//! Arena allocators backing per-vertex edge storage.
//!
//! Four layers, each built on the one before it:
//!
//! - [`FixedArena`]: fixed-size blocks carved from a single caller-provided pool.
//! - [`GrowableArena`]: fixed-size blocks from a growing list of pools.
//! - [`SizeClassArena`]: one [`GrowableArena`] per power-of-two class from 16 to
//!   8192 bytes; other sizes go straight to the system allocator.
//! - [`ConcurrentArena`]: one [`SizeClassArena`] per worker thread, each on its own
//!   cache line, so allocation never synchronizes.
//!
//! Every layer keeps a LIFO list of freed blocks and releases memory only on
//! `reset` (or drop).

mod concurrent;
mod fixed;
mod free_list;
mod growable;
mod region;
mod size_class;

pub use concurrent::{ArenaHandle, ConcurrentArena};
pub use fixed::FixedArena;
pub use growable::GrowableArena;
pub use region::{recycled_bytes, release_recycled, Region, RECYCLE_LIMIT, RECYCLE_MIN};
pub use size_class::{SizeClassArena, CLASS_COUNT, MAX_CLASS, MIN_CLASS};

/// Page size used to round large requests.
pub const PAGE_SIZE: usize = 4096;

/// Default pool size for the size-class arenas (512 KiB).
pub const DEFAULT_POOL_SIZE: usize = 512 * 1024;

/// Alignment of every pool region and every direct system allocation.
pub const BLOCK_ALIGN: usize = 16;

/// Recommended allocation size for a request of `size` bytes.
///
/// Requests up to 16 bytes map to 16, requests below 8192 to the next power of
/// two, and anything larger to a whole number of pages. The result is never
/// smaller than `size`.
#[inline]
pub fn allocation_size(size: usize) -> usize {
    allocation_size_with_page(size, PAGE_SIZE)
}

/// [`allocation_size`] with an explicit page size.
#[inline]
pub fn allocation_size_with_page(size: usize, page_size: usize) -> usize {
    if size <= MIN_CLASS {
        MIN_CLASS
    } else if size < MAX_CLASS {
        size.next_power_of_two()
    } else {
        size.div_ceil(page_size) * page_size
    }
}
