use std::alloc::{alloc, dealloc, handle_alloc_error, Layout};
use std::hint::black_box;
use std::ptr::NonNull;
use std::sync::Barrier;
use std::time::Instant;

use crate::alloc::{
    allocation_size, ArenaHandle, ConcurrentArena, FixedArena, GrowableArena, SizeClassArena,
    BLOCK_ALIGN, DEFAULT_POOL_SIZE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocatorKind {
    /// The global system allocator.
    System,
    /// One [`FixedArena`] per thread, sized for the thread's share.
    Fixed,
    /// One [`GrowableArena`] per thread.
    Growable,
    /// One [`SizeClassArena`] per thread.
    SizeClass,
    /// A shared [`ConcurrentArena`], one claimed slot per thread.
    Concurrent,
}

impl AllocatorKind {
    pub const ALL: [AllocatorKind; 5] = [
        AllocatorKind::System,
        AllocatorKind::Fixed,
        AllocatorKind::Growable,
        AllocatorKind::SizeClass,
        AllocatorKind::Concurrent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AllocatorKind::System => "system",
            AllocatorKind::Fixed => "faa",
            AllocatorKind::Growable => "aa",
            AllocatorKind::SizeClass => "p2aa",
            AllocatorKind::Concurrent => "cp2aa",
        }
    }
}

/// Which phase of each round is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocPattern {
    AllocOnly,
    FreeOnly,
    Mixed,
}

/// Every round, `threads` threads together allocate `count` blocks of `size`
/// bytes (touching each), then free them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllocWorkload {
    pub pattern: AllocPattern,
    pub threads: usize,
    pub count: usize,
    pub rounds: usize,
    pub size: usize,
}

impl Default for AllocWorkload {
    fn default() -> Self {
        Self {
            pattern: AllocPattern::Mixed,
            threads: 4,
            count: 1 << 20,
            rounds: 8,
            size: 64,
        }
    }
}

/// Wall-clock time of the allocation and free phases, summed over rounds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AllocTiming {
    pub alloc_seconds: f64,
    pub free_seconds: f64,
}

impl AllocTiming {
    /// The time `pattern` reports.
    pub fn seconds(&self, pattern: AllocPattern) -> f64 {
        match pattern {
            AllocPattern::AllocOnly => self.alloc_seconds,
            AllocPattern::FreeOnly => self.free_seconds,
            AllocPattern::Mixed => self.alloc_seconds + self.free_seconds,
        }
    }
}

trait Blocks {
    fn get(&mut self) -> NonNull<u8>;
    /// # Safety
    /// `p` must come from `get` on this value and not be freed yet.
    unsafe fn put(&mut self, p: NonNull<u8>);
}

struct System(Layout);

impl Blocks for System {
    #[inline]
    fn get(&mut self) -> NonNull<u8> {
        // SAFETY: the layout has non-zero size.
        NonNull::new(unsafe { alloc(self.0) }).unwrap_or_else(|| handle_alloc_error(self.0))
    }

    #[inline]
    unsafe fn put(&mut self, p: NonNull<u8>) {
        dealloc(p.as_ptr(), self.0)
    }
}

impl Blocks for FixedArena {
    #[inline]
    fn get(&mut self) -> NonNull<u8> {
        self.allocate().expect("fixed arena sized for the workload")
    }

    #[inline]
    unsafe fn put(&mut self, p: NonNull<u8>) {
        self.deallocate(p)
    }
}

impl Blocks for GrowableArena {
    #[inline]
    fn get(&mut self) -> NonNull<u8> {
        self.allocate().expect("out of memory")
    }

    #[inline]
    unsafe fn put(&mut self, p: NonNull<u8>) {
        self.deallocate(p)
    }
}

struct Classed<A>(A, usize);

impl Blocks for Classed<SizeClassArena> {
    #[inline]
    fn get(&mut self) -> NonNull<u8> {
        self.0.allocate(self.1).expect("out of memory")
    }

    #[inline]
    unsafe fn put(&mut self, p: NonNull<u8>) {
        self.0.deallocate(p, self.1)
    }
}

impl Blocks for Classed<ArenaHandle<'_>> {
    #[inline]
    fn get(&mut self) -> NonNull<u8> {
        self.0.allocate(self.1).expect("out of memory")
    }

    #[inline]
    unsafe fn put(&mut self, p: NonNull<u8>) {
        self.0.deallocate(p, self.1)
    }
}

fn worker(mut b: impl Blocks, share: usize, rounds: usize, barrier: &Barrier) {
    let mut live = Vec::with_capacity(share);
    for _ in 0..rounds {
        barrier.wait();
        for i in 0..share {
            let p = b.get();
            // SAFETY: every block is at least one byte.
            unsafe { p.as_ptr().write(i as u8) };
            live.push(p);
        }
        black_box(&live);
        barrier.wait();
        while let Some(p) = live.pop() {
            // SAFETY: each block is freed once, by the thread that got it.
            unsafe { b.put(p) };
        }
        barrier.wait();
    }
}

/// Runs `w` on `kind` with one OS thread per worker and returns the phase
/// timings. Allocator setup and teardown are not timed.
///
/// Panics if `w.threads`, `w.size` or `w.count` is zero.
pub fn run_alloc_workload(kind: AllocatorKind, w: &AllocWorkload) -> AllocTiming {
    assert!(w.threads > 0 && w.size > 0 && w.count > 0, "empty allocator workload");
    let shares: Vec<usize> = (0..w.threads)
        .map(|t| w.count / w.threads + (t < w.count % w.threads) as usize)
        .collect();
    let class = allocation_size(w.size);
    let shared = ConcurrentArena::new(DEFAULT_POOL_SIZE, w.threads);
    let barrier = Barrier::new(w.threads + 1);
    let mut timing = AllocTiming::default();

    std::thread::scope(|s| {
        for (t, &share) in shares.iter().enumerate() {
            let (barrier, shared) = (&barrier, &shared);
            let rounds = w.rounds;
            s.spawn(move || match kind {
                AllocatorKind::System => {
                    let layout = Layout::from_size_align(w.size, BLOCK_ALIGN).unwrap();
                    worker(System(layout), share, rounds, barrier)
                }
                AllocatorKind::Fixed => {
                    let size = w.size.max(BLOCK_ALIGN).next_multiple_of(BLOCK_ALIGN);
                    worker(FixedArena::new(size, size * share.max(1)), share, rounds, barrier)
                }
                AllocatorKind::Growable => {
                    worker(GrowableArena::new(class, DEFAULT_POOL_SIZE.max(class)), share, rounds, barrier)
                }
                AllocatorKind::SizeClass => {
                    worker(Classed(SizeClassArena::new(DEFAULT_POOL_SIZE), class), share, rounds, barrier)
                }
                AllocatorKind::Concurrent => {
                    let h = shared.claim(t).expect("one slot per thread");
                    worker(Classed(h, class), share, rounds, barrier)
                }
            });
        }
        for _ in 0..w.rounds {
            barrier.wait();
            let t0 = Instant::now();
            barrier.wait();
            let t1 = Instant::now();
            barrier.wait();
            let t2 = Instant::now();
            timing.alloc_seconds += (t1 - t0).as_secs_f64();
            timing.free_seconds += (t2 - t1).as_secs_f64();
        }
    });
    timing
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_allocator_completes() {
        for kind in AllocatorKind::ALL {
            let w = AllocWorkload { threads: 3, count: 10_000, rounds: 2, size: 40, ..Default::default() };
            let t = run_alloc_workload(kind, &w);
            assert!(t.alloc_seconds > 0.0, "{}", kind.name());
            assert_eq!(t.seconds(AllocPattern::Mixed), t.alloc_seconds + t.free_seconds);
        }
    }
}
