use std::cell::UnsafeCell;
use std::ptr::NonNull;
use std::sync::atomic::{AtomicBool, Ordering};

use crossbeam_utils::CachePadded;

use super::size_class::SizeClassArena;
use super::{allocation_size, DEFAULT_POOL_SIZE};

struct Slot {
    claimed: AtomicBool,
    arena: UnsafeCell<SizeClassArena>,
}

/// Per-thread size-class arenas with no synchronization on the allocation path.
///
/// Threads identify themselves by a dense index in `0..thread_count()`. Two
/// threads must never use the same index at the same time; the raw
/// [`allocate`](Self::allocate)/[`deallocate`](Self::deallocate) entry points
/// leave that to the caller, while [`claim`](Self::claim) enforces it with a
/// flag per slot.
///
/// A block may be freed by a different thread than the one that allocated
/// it; it then joins the freeing thread's free list for good. Pools are only
/// released by [`reset`](Self::reset) or drop, so such migrated blocks stay
/// valid.
pub struct ConcurrentArena {
    pool_size: usize,
    slots: Vec<CachePadded<Slot>>,
}

unsafe impl Send for ConcurrentArena {}
// Each slot is only ever touched by the thread currently holding its index.
unsafe impl Sync for ConcurrentArena {}

impl std::fmt::Debug for ConcurrentArena {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConcurrentArena")
            .field("pool_size", &self.pool_size)
            .field("threads", &self.slots.len())
            .finish()
    }
}

fn new_slot(pool_size: usize) -> CachePadded<Slot> {
    CachePadded::new(Slot {
        claimed: AtomicBool::new(false),
        arena: UnsafeCell::new(SizeClassArena::new(pool_size)),
    })
}

impl ConcurrentArena {
    pub fn new(pool_size: usize, threads: usize) -> Self {
        let mut arena = Self {
            pool_size,
            slots: Vec::new(),
        };
        arena.ensure_threads(threads.max(1));
        arena
    }

    /// Arena with the default pool size and no slots yet.
    pub fn empty() -> Self {
        Self {
            pool_size: DEFAULT_POOL_SIZE,
            slots: Vec::new(),
        }
    }

    /// Grows the number of per-thread slots to at least `threads`.
    pub fn ensure_threads(&mut self, threads: usize) {
        while self.slots.len() < threads {
            self.slots.push(new_slot(self.pool_size));
        }
    }

    #[inline]
    pub fn thread_count(&self) -> usize {
        self.slots.len()
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    /// Allocates `size` bytes from thread `thread`'s arena.
    ///
    /// # Safety
    /// No other thread may use index `thread` for the duration of the call.
    /// Panics if `thread >= thread_count()`.
    #[inline]
    pub unsafe fn allocate(&self, thread: usize, size: usize) -> Option<NonNull<u8>> {
        (*self.slots[thread].arena.get()).allocate(size)
    }

    /// Returns a block to thread `thread`'s arena.
    ///
    /// # Safety
    /// As for [`allocate`](Self::allocate); additionally `ptr` must have been
    /// allocated from this arena (by any thread) with this exact `size`, and
    /// must not already be free.
    #[inline]
    pub unsafe fn deallocate(&self, thread: usize, ptr: NonNull<u8>, size: usize) {
        (*self.slots[thread].arena.get()).deallocate(ptr, size)
    }

    /// Claims slot `thread` for exclusive use by the caller. Returns `None` if
    /// the slot is out of range or already claimed.
    pub fn claim(&self, thread: usize) -> Option<ArenaHandle<'_>> {
        let slot = self.slots.get(thread)?;
        slot.claimed
            .compare_exchange(false, true, Ordering::Acquire, Ordering::Relaxed)
            .ok()?;
        Some(ArenaHandle {
            arena: self,
            thread,
        })
    }

    /// Resets every per-thread arena.
    pub fn reset(&mut self) {
        for slot in &mut self.slots {
            slot.arena.get_mut().reset();
        }
    }

    #[inline]
    pub fn allocation_size(&self, size: usize) -> usize {
        allocation_size(size)
    }

    /// Exclusive access to one thread's arena.
    pub fn local_mut(&mut self, thread: usize) -> &mut SizeClassArena {
        self.slots[thread].arena.get_mut()
    }

    pub fn pool_count(&mut self) -> usize {
        self.slots
            .iter_mut()
            .map(|s| s.arena.get_mut().pool_count())
            .sum()
    }

    /// Bytes held in class pools across all threads.
    pub fn retained_bytes(&mut self) -> usize {
        self.slots
            .iter_mut()
            .map(|s| s.arena.get_mut().retained_bytes())
            .sum()
    }
}

/// Exclusive use of one slot of a [`ConcurrentArena`]; released on drop.
pub struct ArenaHandle<'a> {
    arena: &'a ConcurrentArena,
    thread: usize,
}

impl ArenaHandle<'_> {
    pub fn thread(&self) -> usize {
        self.thread
    }

    #[inline]
    pub fn allocate(&mut self, size: usize) -> Option<NonNull<u8>> {
        // SAFETY: the claim flag gives this handle sole use of the slot.
        unsafe { self.arena.allocate(self.thread, size) }
    }

    /// # Safety
    /// `ptr` must have been allocated from the same arena with this exact
    /// `size` and must not already be free.
    #[inline]
    pub unsafe fn deallocate(&mut self, ptr: NonNull<u8>, size: usize) {
        self.arena.deallocate(self.thread, ptr, size)
    }
}

impl Drop for ArenaHandle<'_> {
    fn drop(&mut self) {
        self.arena.slots[self.thread]
            .claimed
            .store(false, Ordering::Release);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use std::sync::Mutex;

    #[test]
    fn claim_is_exclusive() {
        let a = ConcurrentArena::new(1 << 16, 2);
        let h0 = a.claim(0).unwrap();
        assert!(a.claim(0).is_none());
        assert!(a.claim(2).is_none());
        drop(h0);
        assert!(a.claim(0).is_some());
    }

    #[test]
    fn concurrent_threads_get_disjoint_blocks() {
        let a = ConcurrentArena::new(1 << 16, 4);
        let seen = Mutex::new(HashSet::new());
        std::thread::scope(|s| {
            for t in 0..4 {
                let (a, seen) = (&a, &seen);
                s.spawn(move || {
                    let mut h = a.claim(t).unwrap();
                    let ptrs: Vec<_> = (0..1000).map(|_| h.allocate(64).unwrap()).collect();
                    let mut seen = seen.lock().unwrap();
                    for p in ptrs {
                        assert!(seen.insert(p.as_ptr() as usize));
                    }
                });
            }
        });
        assert_eq!(seen.into_inner().unwrap().len(), 4000);
    }

    #[test]
    fn cross_thread_free_migrates_the_block() {
        let mut a = ConcurrentArena::new(1 << 16, 2);
        let p = a.claim(0).unwrap().allocate(64).unwrap();
        let addr = p.as_ptr() as usize;
        std::thread::scope(|s| {
            s.spawn(|| {
                let p = NonNull::new(addr as *mut u8).unwrap();
                let mut h = a.claim(1).unwrap();
                unsafe { h.deallocate(p, 64) };
                assert_eq!(h.allocate(64), Some(p));
            });
        });
        a.reset();
        assert_eq!(a.pool_count(), 0);
        assert_eq!(a.retained_bytes(), 0);
    }

    #[test]
    fn single_thread_matches_size_class_arena() {
        let mut a = ConcurrentArena::new(1 << 16, 1);
        let mut reference = SizeClassArena::new(1 << 16);
        let sizes = [16, 64, 64, 8192, 8192, 32, 100];
        let offsets = |ptrs: &[NonNull<u8>]| -> Vec<usize> {
            ptrs.iter()
                .zip(&sizes)
                .map(|(p, &s)| {
                    let first = ptrs[sizes.iter().position(|&x| x == s).unwrap()];
                    (p.as_ptr() as usize).wrapping_sub(first.as_ptr() as usize)
                })
                .collect()
        };
        let got: Vec<_> = {
            let mut h = a.claim(0).unwrap();
            sizes.iter().map(|&s| h.allocate(s).unwrap()).collect()
        };
        let want: Vec<_> = sizes.iter().map(|&s| reference.allocate(s).unwrap()).collect();
        assert_eq!(a.pool_count(), reference.pool_count());
        assert_eq!(offsets(&got[..6]), offsets(&want[..6]));
        assert_eq!(a.local_mut(0).direct_bytes(), reference.direct_bytes());
        unsafe {
            a.local_mut(0).deallocate(got[6], 100);
            reference.deallocate(want[6], 100);
        }
        assert_eq!(a.allocation_size(100), reference.allocation_size(100));
    }
}
