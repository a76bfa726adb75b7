use std::alloc::{alloc, dealloc, Layout};
use std::collections::BTreeMap;
use std::ptr::NonNull;
use std::sync::Mutex;

/// Regions at least this large are kept for reuse when dropped.
pub const RECYCLE_MIN: usize = 64 * 1024;
/// Upper bound on the bytes held for reuse across the process.
pub const RECYCLE_LIMIT: usize = 256 * 1024 * 1024;

/// Released regions by size, as addresses, plus their total size. Handing
/// out pages that are already mapped avoids a page fault per page on reuse.
struct Recycled {
    bytes: usize,
    free: BTreeMap<usize, Vec<usize>>,
}

static RECYCLED: Mutex<Recycled> = Mutex::new(Recycled { bytes: 0, free: BTreeMap::new() });

fn recycled() -> std::sync::MutexGuard<'static, Recycled> {
    RECYCLED.lock().unwrap_or_else(|e| e.into_inner())
}

/// Returns every recycled region to the system allocator.
pub fn release_recycled() {
    let free = {
        let mut r = recycled();
        r.bytes = 0;
        std::mem::take(&mut r.free)
    };
    for (size, addrs) in free {
        let layout = Layout::from_size_align(size, Region::ALIGN).unwrap();
        for a in addrs {
            // SAFETY: every cached address was allocated with this layout.
            unsafe { dealloc(a as *mut u8, layout) }
        }
    }
}

/// Bytes currently held for reuse.
pub fn recycled_bytes() -> usize {
    recycled().bytes
}

/// An owned, uninitialized, 64-byte aligned byte region obtained from the
/// system allocator. Released on drop.
#[derive(Debug)]
pub struct Region {
    ptr: NonNull<u8>,
    layout: Layout,
}

// The region is plain memory; ownership may move between threads.
unsafe impl Send for Region {}
unsafe impl Sync for Region {}

impl Region {
    pub const ALIGN: usize = 64;

    /// Acquires `size` bytes. Returns `None` for `size == 0` or when the system
    /// allocator fails.
    pub fn new(size: usize) -> Option<Self> {
        if size == 0 {
            return None;
        }
        let layout = Layout::from_size_align(size, Self::ALIGN).ok()?;
        if size >= RECYCLE_MIN {
            let mut r = recycled();
            if let Some(a) = r.free.get_mut(&size).and_then(Vec::pop) {
                r.bytes -= size;
                // A non-null address was stored.
                return Some(Self { ptr: NonNull::new(a as *mut u8)?, layout });
            }
        }
        // SAFETY: layout has non-zero size.
        let ptr = NonNull::new(unsafe { alloc(layout) })?;
        Some(Self { ptr, layout })
    }

    #[inline]
    pub fn base(&self) -> NonNull<u8> {
        self.ptr
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.layout.size()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.layout.size() == 0
    }

    /// Whether `ptr` points inside this region.
    pub fn contains(&self, ptr: NonNull<u8>) -> bool {
        let base = self.ptr.as_ptr() as usize;
        let p = ptr.as_ptr() as usize;
        p >= base && p < base + self.len()
    }
}

impl Drop for Region {
    fn drop(&mut self) {
        let size = self.layout.size();
        if size >= RECYCLE_MIN {
            let mut r = recycled();
            if r.bytes + size <= RECYCLE_LIMIT {
                r.bytes += size;
                r.free.entry(size).or_default().push(self.ptr.as_ptr() as usize);
                return;
            }
        }
        // SAFETY: ptr was allocated with exactly this layout.
        unsafe { dealloc(self.ptr.as_ptr(), self.layout) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_regions_are_reused() {
        // An unusual size so other tests never share the bucket.
        let size = RECYCLE_MIN + 64 * 7;
        let a = Region::new(size).unwrap();
        let p = a.base();
        drop(a);
        let b = Region::new(size).unwrap();
        assert_eq!(b.base(), p);
        assert_eq!(b.len(), size);
    }

}
