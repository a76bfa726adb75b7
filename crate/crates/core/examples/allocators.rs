//! Use each arena allocator directly, then time them against the system
//! allocator on a small mixed workload.

use arenagraph::alloc::{ConcurrentArena, FixedArena, GrowableArena, SizeClassArena};
use arenagraph::bench::{run_alloc_workload, AllocWorkload, AllocatorKind};

fn main() {
    let mut fixed = FixedArena::new(64, 64 * 4);
    let blocks: Vec<_> = (0..4).map(|_| fixed.allocate().unwrap()).collect();
    assert!(fixed.allocate().is_none());
    unsafe { fixed.deallocate(blocks[1]) };
    println!("fixed: reused slot {}", fixed.allocate() == Some(blocks[1]));

    let mut grow = GrowableArena::new(64, 4096);
    for _ in 0..200 {
        grow.allocate().unwrap();
    }
    println!("growable: {} pools after 200 blocks", grow.pool_count());

    let mut classes = SizeClassArena::new(1 << 16);
    for size in [10, 100, 1000, 5000, 20_000] {
        let p = classes.allocate(size).unwrap();
        println!("size-class: {size} bytes -> {} byte block", classes.allocation_size(size));
        unsafe { classes.deallocate(p, classes.allocation_size(size)) };
    }

    let shared = ConcurrentArena::new(1 << 16, 4);
    std::thread::scope(|s| {
        for t in 0..4 {
            let shared = &shared;
            s.spawn(move || {
                let mut h = shared.claim(t).unwrap();
                let size = shared.allocation_size(48);
                let p = h.allocate(size).unwrap();
                unsafe { h.deallocate(p, size) };
            });
        }
    });
    println!("concurrent: 4 threads each used their own slot");

    let w = AllocWorkload { count: 1 << 18, rounds: 4, ..AllocWorkload::default() };
    for kind in AllocatorKind::ALL {
        let t = run_alloc_workload(kind, &w);
        println!("{:>6}: alloc {:.4}s, free {:.4}s", kind.name(), t.alloc_seconds, t.free_seconds);
    }
}
