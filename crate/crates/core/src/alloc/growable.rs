use std::ptr::NonNull;

use super::free_list::FreeList;
use super::region::Region;

/// Variable-capacity arena: like [`FixedArena`](super::FixedArena), but acquires
/// another `pool_size` region whenever the current one runs out.
#[derive(Debug)]
pub struct GrowableArena {
    alloc_size: usize,
    pool_size: usize,
    pools: Vec<Region>,
    used: usize,
    freed: FreeList,
}

impl GrowableArena {
    /// Panics if `alloc_size` is zero or larger than `pool_size`.
    pub fn new(alloc_size: usize, pool_size: usize) -> Self {
        assert!(alloc_size > 0, "allocation size must be non-zero");
        assert!(
            pool_size >= alloc_size,
            "pool of {pool_size} bytes cannot hold a {alloc_size}-byte block"
        );
        Self {
            alloc_size,
            pool_size,
            pools: Vec::new(),
            // Forces a pool to be created on the first allocation.
            used: pool_size,
            freed: FreeList::default(),
        }
    }

    /// Returns a block: a freed one if any, else the next slot of the last
    /// pool, else the base of a new pool. `None` only if the system is out of
    /// memory.
    #[inline]
    pub fn allocate(&mut self) -> Option<NonNull<u8>> {
        if let Some(ptr) = self.freed.pop() {
            return Some(ptr);
        }
        if self.used + self.alloc_size <= self.pool_size {
            if let Some(last) = self.pools.last() {
                // SAFETY: the offset stays within the last pool.
                let ptr = unsafe { last.base().add(self.used) };
                self.used += self.alloc_size;
                return Some(ptr);
            }
        }
        self.grow()
    }

    #[cold]
    fn grow(&mut self) -> Option<NonNull<u8>> {
        let region = Region::new(self.pool_size)?;
        let ptr = region.base();
        self.pools.push(region);
        self.used = self.alloc_size;
        Some(ptr)
    }

    /// Returns a block to the free list.
    ///
    /// # Safety
    /// `ptr` must be a block of `alloc_size` bytes from an arena of this class
    /// whose pools are still alive, and must not already be free.
    #[inline]
    pub unsafe fn deallocate(&mut self, ptr: NonNull<u8>) {
        self.freed.push(ptr);
    }

    /// Drops the free list and releases every pool to the system.
    pub fn reset(&mut self) {
        self.freed.clear();
        self.used = 0;
        self.pools.clear();
    }

    pub fn alloc_size(&self) -> usize {
        self.alloc_size
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn pool_count(&self) -> usize {
        self.pools.len()
    }

    /// Bytes bumped from the most recent pool.
    pub fn used(&self) -> usize {
        self.used
    }

    pub fn freed_len(&self) -> usize {
        self.freed.len()
    }

    /// Bytes currently held from the system.
    pub fn retained_bytes(&self) -> usize {
        self.pools.len() * self.pool_size
    }

    /// Whether `ptr` lies inside one of this arena's pools.
    pub fn owns(&self, ptr: NonNull<u8>) -> bool {
        self.pools.iter().any(|r| r.contains(ptr))
    }
}
