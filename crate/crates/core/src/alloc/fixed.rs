use std::ptr::NonNull;

use super::free_list::FreeList;
use super::region::Region;

/// Fixed-capacity arena: hands out `alloc_size`-byte blocks from one pool of
/// `pool_size` bytes and returns `None` once the pool and the free list are
/// both exhausted.
#[derive(Debug)]
pub struct FixedArena {
    alloc_size: usize,
    pool_size: usize,
    pool: NonNull<u8>,
    used: usize,
    freed: FreeList,
    _owned: Option<Region>,
}

unsafe impl Send for FixedArena {}

impl FixedArena {
    /// Creates an arena over a freshly acquired pool.
    ///
    /// Panics if `alloc_size` is zero, `pool_size < alloc_size`, or the pool
    /// cannot be acquired.
    pub fn new(alloc_size: usize, pool_size: usize) -> Self {
        let region = Region::new(pool_size).expect("failed to acquire arena pool");
        Self::with_region(alloc_size, region)
    }

    /// Creates an arena over an owned region; the pool size is the region length.
    pub fn with_region(alloc_size: usize, region: Region) -> Self {
        let pool = region.base();
        let pool_size = region.len();
        Self::check(alloc_size, pool_size);
        Self {
            alloc_size,
            pool_size,
            pool,
            used: 0,
            freed: FreeList::default(),
            _owned: Some(region),
        }
    }

    /// Creates an arena over caller-owned memory.
    ///
    /// # Safety
    /// `pool` must be valid for reads and writes of `pool_size` bytes for the
    /// lifetime of the arena, and aligned as the caller intends blocks to be.
    pub unsafe fn from_raw_parts(alloc_size: usize, pool: NonNull<u8>, pool_size: usize) -> Self {
        Self::check(alloc_size, pool_size);
        Self {
            alloc_size,
            pool_size,
            pool,
            used: 0,
            freed: FreeList::default(),
            _owned: None,
        }
    }

    fn check(alloc_size: usize, pool_size: usize) {
        assert!(alloc_size > 0, "allocation size must be non-zero");
        assert!(
            pool_size >= alloc_size,
            "pool of {pool_size} bytes cannot hold a {alloc_size}-byte block"
        );
    }

    /// Returns a block, preferring the most recently freed one.
    #[inline]
    pub fn allocate(&mut self) -> Option<NonNull<u8>> {
        if let Some(ptr) = self.freed.pop() {
            return Some(ptr);
        }
        if self.used + self.alloc_size <= self.pool_size {
            // SAFETY: used + alloc_size <= pool_size keeps the offset in bounds.
            let ptr = unsafe { self.pool.add(self.used) };
            self.used += self.alloc_size;
            return Some(ptr);
        }
        None
    }

    /// Returns a block to the free list.
    ///
    /// # Safety
    /// `ptr` must come from [`allocate`](Self::allocate) on this arena since the
    /// last reset and must not already be free.
    #[inline]
    pub unsafe fn deallocate(&mut self, ptr: NonNull<u8>) {
        self.freed.push(ptr);
    }

    /// Forgets every block; the whole pool becomes available again.
    pub fn reset(&mut self) {
        self.freed.clear();
        self.used = 0;
    }

    pub fn alloc_size(&self) -> usize {
        self.alloc_size
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn pool_base(&self) -> NonNull<u8> {
        self.pool
    }

    /// Bytes bumped from the pool so far.
    pub fn used(&self) -> usize {
        self.used
    }

    pub fn freed_len(&self) -> usize {
        self.freed.len()
    }
}
