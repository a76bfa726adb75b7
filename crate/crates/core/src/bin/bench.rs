use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arenagraph::bench::{self, AllocWorkload, BenchError, GraphSource, SuiteConfig, Workload};
use arenagraph::mtx::LoadOptions;
use clap::Parser;

/// Time graph loading, cloning, batch updates, reverse walks and allocators.
#[derive(Debug, Parser)]
#[command(name = "bench", version)]
struct Args {
    /// Workloads to run, comma separated: load, clone, delete, delete-new,
    /// insert, insert-new, walk, alloc-alloc, alloc-free, alloc-mixed.
    #[arg(long, value_delimiter = ',', required = true)]
    workload: Vec<Workload>,

    /// Matrix Market file, or `synth:n,m,seed` for a random graph.
    #[arg(long)]
    graph: Option<GraphSource>,

    /// Batch sizes as fractions of |E|: `a..b` over powers of ten, or a list.
    #[arg(long, default_value = "1e-7..1e-1", value_parser = parse_fractions)]
    fractions: Fractions,

    #[arg(long, default_value_t = 5)]
    repeats: usize,

    /// Worker threads (default: all cores).
    #[arg(long, env = "BENCH_THREADS")]
    threads: Option<usize>,

    /// Reverse walk length.
    #[arg(long, default_value_t = 42)]
    steps: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// CSV output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Loader partitions.
    #[arg(long, default_value_t = 4)]
    partitions: usize,

    /// Loader block size in bytes.
    #[arg(long, default_value_t = 256 * 1024)]
    block_size: usize,

    /// Blocks allocated per round by the allocator workloads.
    #[arg(long, default_value_t = 1 << 20)]
    alloc_count: usize,

    #[arg(long, default_value_t = 8)]
    alloc_rounds: usize,

    #[arg(long, default_value_t = 64)]
    alloc_size: usize,

    /// Skip checking batch results against the baseline.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Debug, Clone)]
struct Fractions(Vec<f64>);

fn parse_fractions(s: &str) -> Result<Fractions, String> {
    bench::parse_fractions(s).map(Fractions)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if args.alloc_count == 0 || args.alloc_rounds == 0 || args.alloc_size == 0 {
        eprintln!("error: allocator count, rounds and size must be positive");
        return ExitCode::from(1);
    }
    let cfg = SuiteConfig {
        workloads: args.workload,
        graph: args.graph,
        fractions: args.fractions.0,
        repeats: args.repeats,
        threads: args.threads,
        steps: args.steps,
        seed: args.seed,
        load: LoadOptions {
            partitions: args.partitions,
            block_size: args.block_size,
        },
        verify: !args.no_verify,
        alloc: AllocWorkload {
            count: args.alloc_count,
            rounds: args.alloc_rounds,
            size: args.alloc_size,
            ..AllocWorkload::default()
        },
    };
    let records = match bench::run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(e, BenchError::Config(_));
            return ExitCode::from(if usage { 1 } else { 2 });
        }
    };
    let written = match &args.out {
        Some(path) => File::create(path)
            .map_err(csv::Error::from)
            .and_then(|f| bench::write_csv(&records, BufWriter::new(f))),
        None => bench::write_csv(&records, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write results: {e}");
        return ExitCode::from(2);
    }
    let _ = io::stderr().flush();
    ExitCode::SUCCESS
}
