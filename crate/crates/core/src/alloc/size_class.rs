use std::alloc::{alloc, dealloc, Layout};
use std::ptr::NonNull;

use super::growable::GrowableArena;
use super::{allocation_size_with_page, BLOCK_ALIGN, PAGE_SIZE};

pub const MIN_CLASS: usize = 16;
pub const MAX_CLASS: usize = 8192;
/// 16, 32, ..., 8192.
pub const CLASS_COUNT: usize = 10;

/// Power-of-two size-class arena.
///
/// Requests of exactly 16, 32, ..., 8192 bytes are served by the matching
/// [`GrowableArena`]; every other size goes to the system allocator. Callers
/// should round requests with [`allocation_size`](Self::allocation_size) first,
/// and must pass the same size back on deallocation.
#[derive(Debug)]
pub struct SizeClassArena {
    pool_size: usize,
    page_size: usize,
    classes: [GrowableArena; CLASS_COUNT],
    direct_bytes: usize,
}

#[inline]
fn class_index(size: usize) -> Option<usize> {
    if size.is_power_of_two() && (MIN_CLASS..=MAX_CLASS).contains(&size) {
        Some((size.trailing_zeros() - MIN_CLASS.trailing_zeros()) as usize)
    } else {
        None
    }
}

impl SizeClassArena {
    /// Panics if `pool_size` cannot hold one block of the largest class.
    pub fn new(pool_size: usize) -> Self {
        Self::with_page_size(pool_size, PAGE_SIZE)
    }

    pub fn with_page_size(pool_size: usize, page_size: usize) -> Self {
        assert!(
            pool_size >= MAX_CLASS,
            "pool size must be at least {MAX_CLASS} bytes"
        );
        assert!(page_size > 0, "page size must be non-zero");
        Self {
            pool_size,
            page_size,
            classes: std::array::from_fn(|i| GrowableArena::new(MIN_CLASS << i, pool_size)),
            direct_bytes: 0,
        }
    }

    #[inline]
    pub fn allocate(&mut self, size: usize) -> Option<NonNull<u8>> {
        match class_index(size) {
            Some(i) => self.classes[i].allocate(),
            None => self.allocate_direct(size),
        }
    }

    #[cold]
    fn allocate_direct(&mut self, size: usize) -> Option<NonNull<u8>> {
        if size == 0 {
            return Some(dangling());
        }
        let layout = Layout::from_size_align(size, BLOCK_ALIGN).ok()?;
        // SAFETY: non-zero size.
        let ptr = NonNull::new(unsafe { alloc(layout) })?;
        self.direct_bytes += size;
        Some(ptr)
    }

    /// # Safety
    /// `ptr` must have been returned by `allocate(size)` on an arena of this
    /// kind whose pools are still alive, with this exact `size`, and must not
    /// already be free.
    #[inline]
    pub unsafe fn deallocate(&mut self, ptr: NonNull<u8>, size: usize) {
        match class_index(size) {
            Some(i) => self.classes[i].deallocate(ptr),
            None => self.deallocate_direct(ptr, size),
        }
    }

    #[cold]
    unsafe fn deallocate_direct(&mut self, ptr: NonNull<u8>, size: usize) {
        if size == 0 {
            return;
        }
        let layout = Layout::from_size_align_unchecked(size, BLOCK_ALIGN);
        dealloc(ptr.as_ptr(), layout);
        // A block freed here may have been allocated by another thread's arena.
        self.direct_bytes = self.direct_bytes.saturating_sub(size);
    }

    /// Resets every size class. Direct allocations are untouched.
    pub fn reset(&mut self) {
        for c in &mut self.classes {
            c.reset();
        }
    }

    #[inline]
    pub fn allocation_size(&self, size: usize) -> usize {
        allocation_size_with_page(size, self.page_size)
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn page_size(&self) -> usize {
        self.page_size
    }

    /// The arena serving blocks of `size` bytes, if `size` is a handled class.
    pub fn class(&self, size: usize) -> Option<&GrowableArena> {
        class_index(size).map(|i| &self.classes[i])
    }

    pub fn pool_count(&self) -> usize {
        self.classes.iter().map(GrowableArena::pool_count).sum()
    }

    /// Bytes held in class pools.
    pub fn retained_bytes(&self) -> usize {
        self.classes.iter().map(GrowableArena::retained_bytes).sum()
    }

    /// Net bytes of direct system allocations made (minus those freed) through
    /// this arena.
    pub fn direct_bytes(&self) -> usize {
        self.direct_bytes
    }
}

#[inline]
fn dangling() -> NonNull<u8> {
    // BLOCK_ALIGN is non-zero, so this is a valid, aligned, non-null address.
    NonNull::new(BLOCK_ALIGN as *mut u8).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_classes() {
        let a = SizeClassArena::new(1 << 16);
        let sizes: Vec<_> = a.classes.iter().map(GrowableArena::alloc_size).collect();
        assert_eq!(
            sizes,
            [16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192]
        );
    }

    #[test]
    fn class_sizes_route_to_their_arena() {
        let mut a = SizeClassArena::new(1 << 16);
        let p = a.allocate(64).unwrap();
        assert!(a.class(64).unwrap().owns(p));
        assert_eq!(a.pool_count(), 1);
        assert_eq!(a.direct_bytes(), 0);
        unsafe { a.deallocate(p, 64) };
        assert_eq!(a.allocate(64), Some(p));
    }

    #[test]
    fn other_sizes_go_to_the_system() {
        let mut a = SizeClassArena::new(1 << 16);
        let big = a.allocate(16384).unwrap();
        let odd = a.allocate(24).unwrap();
        assert_eq!(a.pool_count(), 0);
        assert_eq!(a.direct_bytes(), 16384 + 24);
        unsafe {
            big.as_ptr().write_bytes(0xab, 16384);
            a.deallocate(big, 16384);
            a.deallocate(odd, 24);
        }
        assert_eq!(a.direct_bytes(), 0);
    }

    #[test]
    fn zero_sized_requests() {
        let mut a = SizeClassArena::new(1 << 16);
        let p = a.allocate(0).unwrap();
        unsafe { a.deallocate(p, 0) };
        assert_eq!(a.direct_bytes(), 0);
    }

    #[test]
    fn reset_empties_every_class() {
        let mut a = SizeClassArena::new(1 << 16);
        for i in 0..CLASS_COUNT {
            a.allocate(MIN_CLASS << i).unwrap();
        }
        assert_eq!(a.pool_count(), CLASS_COUNT);
        a.reset();
        assert_eq!(a.pool_count(), 0);
        assert_eq!(a.retained_bytes(), 0);
    }

    #[test]
    fn allocation_size_uses_configured_page() {
        let a = SizeClassArena::with_page_size(1 << 16, 16384);
        assert_eq!(a.allocation_size(10000), 16384);
        assert_eq!(a.allocation_size(100), 128);
    }
}
