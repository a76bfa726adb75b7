use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use thiserror::Error;

use super::allocators::{run_alloc_workload, AllocPattern, AllocWorkload, AllocatorKind};
use super::baseline::BaselineGraph;
use super::batch::{generate_batch, BatchKind, BatchSpec};
use super::record::{TimingRecord, Trial};
use super::synth::synth_graph;
use crate::csr::CsrGraph;
use crate::digraph::DiGraph;
use crate::edge::VertexId;
use crate::graph::GraphView;
use crate::mtx::{self, LoadOptions, MtxError};
use crate::ops;
use crate::walk::reverse_walk;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workload {
    Load,
    Clone,
    Delete,
    DeleteNew,
    Insert,
    InsertNew,
    Walk,
    AllocAlloc,
    AllocFree,
    AllocMixed,
}

impl Workload {
    pub const ALL: [Workload; 10] = [
        Workload::Load,
        Workload::Clone,
        Workload::Delete,
        Workload::DeleteNew,
        Workload::Insert,
        Workload::InsertNew,
        Workload::Walk,
        Workload::AllocAlloc,
        Workload::AllocFree,
        Workload::AllocMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Workload::Load => "load",
            Workload::Clone => "clone",
            Workload::Delete => "delete",
            Workload::DeleteNew => "delete-new",
            Workload::Insert => "insert",
            Workload::InsertNew => "insert-new",
            Workload::Walk => "walk",
            Workload::AllocAlloc => "alloc-alloc",
            Workload::AllocFree => "alloc-free",
            Workload::AllocMixed => "alloc-mixed",
        }
    }

    fn alloc_pattern(self) -> Option<AllocPattern> {
        match self {
            Workload::AllocAlloc => Some(AllocPattern::AllocOnly),
            Workload::AllocFree => Some(AllocPattern::FreeOnly),
            Workload::AllocMixed => Some(AllocPattern::Mixed),
            _ => None,
        }
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Workload {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Workload::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| format!("unknown workload `{s}`"))
    }
}

/// Where the benchmark graph comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    /// `synth:n,m,seed`: see [`synth_graph`].
    Synth { n: usize, m: usize, seed: u64 },
}

impl GraphSource {
    pub fn name(&self) -> String {
        match self {
            GraphSource::File(p) => p
                .file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            GraphSource::Synth { n, m, seed } => format!("synth:{n},{m},{seed}"),
        }
    }
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some(spec) = s.strip_prefix("synth:") else {
            return Ok(GraphSource::File(s.into()));
        };
        let parts: Vec<&str> = spec.split(',').collect();
        let bad = || format!("expected synth:n,m,seed, got `{s}`");
        let [n, m, seed] = parts[..] else {
            return Err(bad());
        };
        let (n, m, seed) = (
            n.trim().parse().map_err(|_| bad())?,
            m.trim().parse().map_err(|_| bad())?,
            seed.trim().parse().map_err(|_| bad())?,
        );
        Ok(GraphSource::Synth { n, m, seed })
    }
}

/// Parses `a..b` (powers of ten from `a` to `b`, both powers of ten) or a
/// comma-separated list of fractions.
pub fn parse_fractions(s: &str) -> Result<Vec<f64>, String> {
    let decade = |x: &str| -> Result<i32, String> {
        let v: f64 = x.trim().parse().map_err(|_| format!("bad fraction `{x}`"))?;
        let e = v.log10().round() as i32;
        if v > 0.0 && format!("1e{e}").parse::<f64>() == Ok(v) {
            Ok(e)
        } else {
            Err(format!("range end `{x}` is not a power of ten"))
        }
    };
    let out: Vec<f64> = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (decade(a)?, decade(b)?);
            (a..=b).map(|e| format!("1e{e}").parse().unwrap()).collect()
        }
        None => s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad fraction `{x}`")))
            .collect::<Result<_, _>>()?,
    };
    if out.is_empty() {
        return Err(format!("no fractions in `{s}`"));
    }
    if let Some(x) = out.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(format!("fraction {x} must be positive"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub workloads: Vec<Workload>,
    /// Required by every workload except the allocator ones.
    pub graph: Option<GraphSource>,
    pub fractions: Vec<f64>,
    pub repeats: usize,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Walk length for the walk workload.
    pub steps: usize,
    pub seed: u64,
    pub load: LoadOptions,
    /// Check every batch result against the baseline graph.
    pub verify: bool,
    /// Block count, rounds and size for the allocator workloads; the thread
    /// count comes from `threads`.
    pub alloc: AllocWorkload,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            workloads: vec![Workload::Clone],
            graph: None,
            fractions: vec![1e-3],
            repeats: 5,
            threads: None,
            steps: 42,
            seed: 0,
            load: LoadOptions::default(),
            verify: true,
            alloc: AllocWorkload::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Config(String),
    #[error("failed to load graph: {0}")]
    Load(#[from] MtxError),
    #[error("result check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

struct Context<'a> {
    cfg: &'a SuiteConfig,
    name: String,
    records: Vec<TimingRecord>,
}

impl Context<'_> {
    fn push_trials(&mut self, trials: Vec<TimingRecord>) {
        if let Some(summary) = TimingRecord::summarize(&trials) {
            self.records.extend(trials);
            self.records.push(summary);
        }
    }

    fn row(&self, workload: &str, g: (usize, usize), fraction: Option<f64>, trial: usize, seconds: f64) -> TimingRecord {
        TimingRecord {
            workload: workload.into(),
            graph: self.name.clone(),
            n: g.0,
            m: g.1,
            fraction,
            trial: Trial::Index(trial),
            seconds,
            alloc_seconds: None,
            copy_seconds: None,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

/// Compares `got` with `want` on every vertex for small graphs, otherwise on
/// 1000 random vertices plus the totals.
fn verify(got: &DiGraph, want: &BaselineGraph, seed: u64) -> Result<(), BenchError> {
    let fail = |msg: String| Err(BenchError::Verification(msg));
    if (got.order(), got.size()) != (want.order(), want.size()) {
        return fail(format!(
            "counts ({}, {}) but expected ({}, {})",
            got.order(),
            got.size(),
            want.order(),
            want.size()
        ));
    }
    let span = got.span().max(want.span());
    let check = |u: VertexId| got.has_vertex(u) == want.has_vertex(u) && got.edges(u) == want.edges(u);
    let bad = if want.size() <= 100_000 {
        (0..span as VertexId).find(|&u| !check(u))
    } else {
        let mut rng = super::rng(seed, u64::MAX);
        (0..1000).map(|_| rng.random_range(0..span as VertexId)).find(|&u| !check(u))
    };
    match bad {
        Some(u) => fail(format!("edges of vertex {u} differ")),
        None => Ok(()),
    }
}

/// Runs every configured workload and returns the timing rows, each group of
/// trials followed by its geometric-mean row.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<TimingRecord>, BenchError> {
    if cfg.repeats == 0 {
        return Err(BenchError::Config("repeats must be at least 1".into()));
    }
    if cfg.threads == Some(0) {
        return Err(BenchError::Config("threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()?;
    pool.install(|| run_in_pool(cfg))
}

fn run_in_pool(cfg: &SuiteConfig) -> Result<Vec<TimingRecord>, BenchError> {
    let needs_graph = cfg.workloads.iter().any(|w| w.alloc_pattern().is_none());
    let mut cx = Context {
        cfg,
        name: cfg.graph.as_ref().map_or_else(String::new, GraphSource::name),
        records: Vec::new(),
    };

    if needs_graph {
        let source = cfg
            .graph
            .as_ref()
            .ok_or_else(|| BenchError::Config("graph workloads need a graph".into()))?;
        let (csr, text) = match source {
            GraphSource::File(path) => {
                let text = std::fs::read(path).map_err(MtxError::from)?;
                (mtx::load_graph(&text, &cfg.load)?, Some(text))
            }
            GraphSource::Synth { n, m, seed } => {
                let (n, m) = (*n, *m);
                if n > VertexId::MAX as usize || m > n.saturating_mul(n.saturating_sub(1)) {
                    return Err(BenchError::Config(format!("{m} edges do not fit {n} vertices")));
                }
                (synth_graph(n, m, *seed), None)
            }
        };
        run_graph_workloads(&mut cx, &csr, text)?;
    }

    for &w in &cfg.workloads {
        let Some(pattern) = w.alloc_pattern() else { continue };
        let threads = cfg.threads.unwrap_or_else(rayon::current_num_threads);
        let work = AllocWorkload { pattern, threads, ..cfg.alloc };
        for kind in AllocatorKind::ALL {
            let trials = (0..cfg.repeats)
                .map(|i| {
                    let t = run_alloc_workload(kind, &work);
                    TimingRecord {
                        workload: w.name().into(),
                        graph: kind.name().into(),
                        n: work.count,
                        m: work.rounds,
                        fraction: None,
                        trial: Trial::Index(i),
                        seconds: t.seconds(pattern),
                        alloc_seconds: None,
                        copy_seconds: None,
                    }
                })
                .collect();
            cx.push_trials(trials);
        }
    }
    Ok(cx.records)
}

fn run_graph_workloads(cx: &mut Context<'_>, csr: &CsrGraph, text: Option<Vec<u8>>) -> Result<(), BenchError> {
    let cfg = cx.cfg;
    let base = DiGraph::from_csr(csr);
    let dims = (base.order(), base.size());
    let oracle = cfg.verify.then(|| BaselineGraph::from_graph(&base));

    for &w in &cfg.workloads {
        match w {
            Workload::Load => {
                let text = match &text {
                    Some(t) => t.clone(),
                    None => {
                        let mut buf = Vec::new();
                        mtx::write_mtx(csr, &mut buf).expect("writing to memory");
                        buf
                    }
                };
                let mut trials = Vec::new();
                for i in 0..cfg.repeats {
                    let (g, s) = timed(|| mtx::load_graph(&text, &cfg.load));
                    let g = g?;
                    trials.push(cx.row("load", (g.order(), g.size()), None, i, s));
                }
                cx.push_trials(trials);
            }
            Workload::Clone => {
                let mut trials = Vec::new();
                for i in 0..cfg.repeats {
                    let (g, s) = timed(|| ops::clone_graph(&base));
                    if cfg.verify && g != base {
                        return Err(BenchError::Verification("clone differs from its source".into()));
                    }
                    trials.push(cx.row("clone", dims, None, i, s));
                }
                cx.push_trials(trials);
                let baseline = match &oracle {
                    Some(b) => b.clone(),
                    None => BaselineGraph::from_graph(&base),
                };
                let trials = (0..cfg.repeats)
                    .map(|i| {
                        let (_copy, split) = baseline.clone_split();
                        TimingRecord {
                            alloc_seconds: Some(split.alloc_seconds),
                            copy_seconds: Some(split.copy_seconds),
                            ..cx.row("clone-baseline", dims, None, i, split.total())
                        }
                    })
                    .collect();
                cx.push_trials(trials);
            }
            Workload::Delete | Workload::DeleteNew | Workload::Insert | Workload::InsertNew => {
                let kind = match w {
                    Workload::Delete | Workload::DeleteNew => BatchKind::Delete,
                    _ => BatchKind::Insert,
                };
                for &fraction in &cfg.fractions {
                    let spec = BatchSpec { kind, fraction, seed: cfg.seed };
                    let mut trials = Vec::new();
                    for i in 0..cfg.repeats {
                        let batch = generate_batch(&base, &spec, i as u64);
                        let (g, s) = match w {
                            Workload::Delete => {
                                let mut g = base.clone();
                                let ((), s) = timed(|| {
                                    ops::subtract_inplace(&mut g, &batch);
                                });
                                (g, s)
                            }
                            Workload::DeleteNew => timed(|| ops::subtract_new(&base, &batch).0),
                            Workload::Insert => {
                                let mut g = base.clone();
                                let ((), s) = timed(|| {
                                    ops::add_inplace(&mut g, &batch);
                                });
                                (g, s)
                            }
                            _ => timed(|| ops::add_new(&base, &batch).0),
                        };
                        if let Some(oracle) = &oracle {
                            let mut want = oracle.clone();
                            match kind {
                                BatchKind::Delete => want.subtract_inplace(&batch),
                                BatchKind::Insert => want.add_inplace(&batch),
                            }
                            verify(&g, &want, cfg.seed ^ i as u64)?;
                        }
                        trials.push(cx.row(w.name(), dims, Some(fraction), i, s));
                    }
                    cx.push_trials(trials);
                }
            }
            Workload::Walk => {
                let trials = (0..cfg.repeats)
                    .map(|i| {
                        let (_, s) = timed(|| reverse_walk(&base, cfg.steps));
                        cx.row("walk", dims, None, i, s)
                    })
                    .collect();
                cx.push_trials(trials);
            }
            Workload::AllocAlloc | Workload::AllocFree | Workload::AllocMixed => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sources_and_fractions() {
        assert_eq!(
            "synth:10, 20,3".parse::<GraphSource>(),
            Ok(GraphSource::Synth { n: 10, m: 20, seed: 3 })
        );
        assert!("synth:10,20".parse::<GraphSource>().is_err());
        assert_eq!("a/b/web.mtx".parse::<GraphSource>().unwrap().name(), "web");
        assert_eq!(parse_fractions("1e-3..1e-1"), Ok(vec![1e-3, 1e-2, 1e-1]));
        assert_eq!(parse_fractions("1e-7..1e-1").unwrap().len(), 7);
        assert_eq!(parse_fractions("0.5, 0.25"), Ok(vec![0.5, 0.25]));
        assert!(parse_fractions("2e-3..1e-1").is_err());
        assert!(parse_fractions("0").is_err());
        assert!(parse_fractions("x").is_err());
        assert_eq!("delete-new".parse::<Workload>(), Ok(Workload::DeleteNew));
        assert!("nope".parse::<Workload>().is_err());
    }

    #[test]
    fn small_suite_runs_and_verifies() {
        let cfg = SuiteConfig {
            workloads: vec![
                Workload::Load,
                Workload::Clone,
                Workload::Delete,
                Workload::DeleteNew,
                Workload::Insert,
                Workload::InsertNew,
                Workload::Walk,
            ],
            graph: Some(GraphSource::Synth { n: 200, m: 2000, seed: 5 }),
            fractions: vec![1e-2, 1e-1],
            repeats: 2,
            threads: Some(2),
            steps: 3,
            ..SuiteConfig::default()
        };
        let rows = run_suite(&cfg).unwrap();
        // load, clone, clone-baseline, walk: 1 group each; 4 batch workloads x 2 fractions.
        assert_eq!(rows.len(), (4 + 8) * 3);
        assert!(rows.iter().all(|r| r.graph == "synth:200,2000,5"));
        let load = &rows[0];
        assert_eq!((load.n, load.m), (200, 2000));
        let base = rows.iter().find(|r| r.workload == "clone-baseline").unwrap();
        assert!(base.alloc_seconds.is_some() && base.copy_seconds.is_some());
    }

    #[test]
    fn config_errors() {
        let cfg = SuiteConfig { graph: None, ..SuiteConfig::default() };
        assert!(matches!(run_suite(&cfg), Err(BenchError::Config(_))));
        let cfg = SuiteConfig {
            graph: Some(GraphSource::Synth { n: 3, m: 7, seed: 0 }),
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(BenchError::Config(_))));
        let cfg = SuiteConfig {
            graph: Some(GraphSource::File("/nonexistent/x.mtx".into())),
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(BenchError::Load(_))));
    }
}
