//! Benchmark harness: batch generation, synthetic graphs, a
//! vector-of-vectors baseline, allocator workloads and the timing suite
//! driven by the `bench` binary.

mod allocators;
mod baseline;
mod batch;
mod record;
mod suite;
mod synth;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use allocators::{run_alloc_workload, AllocPattern, AllocTiming, AllocWorkload, AllocatorKind};
pub use baseline::{BaselineGraph, CloneSplit};
pub use batch::{batch_size, generate_batch, BatchKind, BatchSpec};
pub use record::{geometric_mean, write_csv, TimingRecord, Trial};
pub use suite::{parse_fractions, run_suite, BenchError, GraphSource, SuiteConfig, Workload};
pub use synth::synth_graph;

/// Deterministic generator for `seed`, with independent streams per `stream`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
