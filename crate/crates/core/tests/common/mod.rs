//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use arenagraph::{CsrGraph, DiGraph, Edge, GraphView};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// The well-formed files in the corpus.
pub const CORPUS: [&str; 7] = [
    "pattern_general.mtx",
    "pattern_symmetric.mtx",
    "real_general.mtx",
    "real_symmetric.mtx",
    "self_loops.mtx",
    "empty.mtx",
    "integer_crlf.mtx",
];

/// Adjacency of a parsed file: `order` vertices, each with `(target, weight)`
/// pairs sorted by target, ties in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct RefGraph {
    pub order: usize,
    pub weighted: bool,
    pub adj: Vec<Vec<(u32, f32)>>,
}

/// Straightforward line-by-line Matrix Market reader.
pub fn reference_parse(text: &str) -> RefGraph {
    let mut lines = text.lines().map(|l| l.trim());
    let banner: Vec<String> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|w| w.to_lowercase())
        .collect();
    assert_eq!(&banner[..3], ["%%matrixmarket", "matrix", "coordinate"]);
    let weighted = banner[3] != "pattern";
    let symmetric = banner[4] == "symmetric";
    let mut body = lines.filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size: Vec<usize> = body
        .next()
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    let order = size[0].max(size[1]);
    let mut adj = vec![Vec::new(); order];
    for line in body {
        let f: Vec<&str> = line.split_whitespace().collect();
        let i: usize = f[0].parse().unwrap();
        let j: usize = f[1].parse().unwrap();
        let w: f32 = if weighted { f[2].parse().unwrap() } else { 1.0 };
        adj[i - 1].push((j as u32 - 1, w));
        if symmetric && i != j {
            adj[j - 1].push((i as u32 - 1, w));
        }
    }
    for l in &mut adj {
        l.sort_by_key(|&(t, _)| t);
    }
    RefGraph { order, weighted, adj }
}

pub fn csr_as_ref(g: &CsrGraph) -> RefGraph {
    let adj = (0..g.order() as u32)
        .map(|u| g.edges(u).map(|e| (e.target, e.weight)).collect())
        .collect();
    RefGraph {
        order: g.order(),
        weighted: g.is_weighted(),
        adj,
    }
}

/// Map-of-sorted-maps model of a simple weighted digraph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub vertices: BTreeSet<u32>,
    pub adj: BTreeMap<u32, BTreeMap<u32, f32>>,
}

impl Model {
    pub fn add_vertex(&mut self, u: u32) {
        self.vertices.insert(u);
    }

    /// Inserts or overwrites.
    pub fn put(&mut self, u: u32, v: u32, w: f32) {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.adj.entry(u).or_default().insert(v, w);
    }

    /// Inserts only if absent.
    pub fn put_if_absent(&mut self, u: u32, v: u32, w: f32) {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.adj.entry(u).or_default().entry(v).or_insert(w);
    }

    pub fn remove(&mut self, u: u32, v: u32) {
        if let Some(m) = self.adj.get_mut(&u) {
            m.remove(&v);
        }
    }

    pub fn size(&self) -> usize {
        self.adj.values().map(BTreeMap::len).sum()
    }

    pub fn edges(&self, u: u32) -> Vec<Edge> {
        self.adj
            .get(&u)
            .map(|m| m.iter().map(|(&t, &w)| Edge::new(t, w)).collect())
            .unwrap_or_default()
    }

    pub fn triples(&self) -> Vec<(u32, u32, f32)> {
        self.adj
            .iter()
            .flat_map(|(&u, m)| m.iter().map(move |(&v, &w)| (u, v, w)))
            .collect()
    }

    pub fn of<G: GraphView>(g: &G) -> Self {
        let mut m = Model::default();
        for u in 0..g.span() as u32 {
            if g.has_vertex(u) {
                m.add_vertex(u);
            }
            g.for_each_edge(u, |e| m.put(u, e.target, e.weight));
        }
        m
    }
}

/// Checks `g` against `m`: vertex set, edge lists, counts and invariants.
pub fn matches_model(g: &DiGraph, m: &Model) -> Result<(), String> {
    g.check_invariants()?;
    let got: BTreeSet<u32> = g.vertices().collect();
    if got != m.vertices {
        return Err(format!("vertices {got:?} != {:?}", m.vertices));
    }
    for &u in &m.vertices {
        if g.edges(u) != m.edges(u).as_slice() {
            return Err(format!("vertex {u}: {:?} != {:?}", g.edges(u), m.edges(u)));
        }
    }
    if (g.order(), g.size()) != (m.vertices.len(), m.size()) {
        return Err(format!(
            "counts ({}, {}) != ({}, {})",
            g.order(),
            g.size(),
            m.vertices.len(),
            m.size()
        ));
    }
    Ok(())
}

/// Walk counts by repeated dense matrix-vector products.
pub fn dense_walk(n: usize, present: &[bool], edges: &[(u32, u32)], k: usize) -> Vec<u64> {
    let mut a = vec![vec![0u64; n]; n];
    for &(u, v) in edges {
        a[u as usize][v as usize] = 1;
    }
    let mut x: Vec<u64> = present.iter().map(|&p| p as u64).collect();
    for _ in 0..k {
        x = (0..n)
            .map(|i| (0..n).fold(0u64, |s, j| s.wrapping_add(a[i][j].wrapping_mul(x[j]))))
            .collect();
    }
    x
}

/// Random simple digraph on `n` vertices as a model, with small integer weights.
pub fn random_model(rng: &mut impl Rng, n: u32, max_edges: usize) -> Model {
    let mut m = Model::default();
    for u in 0..n {
        if rng.random_bool(0.9) {
            m.add_vertex(u);
        }
    }
    let vs: Vec<u32> = m.vertices.iter().copied().collect();
    if vs.is_empty() {
        return m;
    }
    let k = rng.random_range(0..=max_edges);
    for _ in 0..k {
        let u = vs[rng.random_range(0..vs.len())];
        let v = vs[rng.random_range(0..vs.len())];
        m.put(u, v, rng.random_range(1..5) as f32);
    }
    m
}

pub fn build(m: &Model) -> DiGraph {
    let mut g = DiGraph::from_edges(m.triples());
    for &u in &m.vertices {
        g.add_vertex(u);
    }
    g
}

pub struct StressReport {
    pub ops: usize,
    pub peak_live: usize,
    pub pools_before_reset: usize,
    pub pools_after_reset: usize,
}

/// Hammers a [`ConcurrentArena`] from `threads` threads with random
/// allocations and frees (some freed by another thread), tracking every live
/// block in a shared shadow map. Fails on any overlap, misalignment or
/// clobbered sentinel.
pub fn arena_stress(threads: usize, ops_per_thread: usize, seed: u64) -> Result<StressReport, String> {
    use arenagraph::alloc::ConcurrentArena;
    use rand_chacha::rand_core::SeedableRng;
    use std::ptr::NonNull;
    use std::sync::Mutex;

    const SIZES: [usize; 14] = [1, 8, 16, 24, 48, 64, 100, 128, 500, 1024, 4000, 8192, 9000, 20000];
    type Block = (usize, usize, u64);

    let mut arena = ConcurrentArena::new(1 << 16, threads);
    let shadow: Mutex<BTreeMap<usize, usize>> = Mutex::new(BTreeMap::new());
    let orphans: Mutex<Vec<Block>> = Mutex::new(Vec::new());
    let peak = std::sync::atomic::AtomicUsize::new(0);

    let result: Result<(), String> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (arena, shadow, orphans, peak) = (&arena, &shadow, &orphans, &peak);
                s.spawn(move || -> Result<(), String> {
                    let mut h = arena.claim(t).ok_or("slot already claimed")?;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (t as u64) << 32);
                    let mut live: Vec<Block> = Vec::new();
                    let check_and_release = |h: &mut arenagraph::alloc::ArenaHandle<'_>, (p, size, tag): Block| {
                        let (head, tail) = unsafe { ((p as *const u64).read(), ((p + size - 8) as *const u64).read()) };
                        if head != tag || tail != !tag {
                            return Err(format!("sentinel of block {p:#x} clobbered"));
                        }
                        shadow.lock().unwrap().remove(&p).ok_or("freed block missing from shadow")?;
                        unsafe { h.deallocate(NonNull::new(p as *mut u8).unwrap(), size) };
                        Ok(())
                    };
                    for i in 0..ops_per_thread {
                        let roll = rng.random_range(0..100);
                        if roll < 5 {
                            let o = orphans.lock().unwrap().pop();
                            if let Some(b) = o {
                                check_and_release(&mut h, b)?;
                                continue;
                            }
                        }
                        if roll < 10 && !live.is_empty() {
                            let b = live.swap_remove(rng.random_range(0..live.len()));
                            orphans.lock().unwrap().push(b);
                            continue;
                        }
                        if live.is_empty() || (roll < 60 && live.len() < 4096) {
                            let size = arena.allocation_size(SIZES[rng.random_range(0..SIZES.len())]);
                            let p = h.allocate(size).ok_or("allocation failed")?.as_ptr() as usize;
                            if p % 16 != 0 {
                                return Err(format!("block {p:#x} misaligned"));
                            }
                            {
                                let mut sh = shadow.lock().unwrap();
                                if let Some((&q, &end)) = sh.range(..p + size).next_back() {
                                    if end > p {
                                        return Err(format!("block {p:#x}+{size} overlaps {q:#x}..{end:#x}"));
                                    }
                                }
                                sh.insert(p, p + size);
                                peak.fetch_max(sh.len(), std::sync::atomic::Ordering::Relaxed);
                            }
                            let tag = ((t as u64) << 48) | i as u64;
                            unsafe {
                                (p as *mut u64).write(tag);
                                ((p + size - 8) as *mut u64).write(!tag);
                            }
                            live.push((p, size, tag));
                        } else {
                            let b = live.swap_remove(rng.random_range(0..live.len()));
                            check_and_release(&mut h, b)?;
                        }
                    }
                    for b in live {
                        check_and_release(&mut h, b)?;
                    }
                    Ok(())
                })
            })
            .collect();
        handles.into_iter().try_for_each(|h| h.join().map_err(|_| "worker panicked".to_string())?)
    });
    result?;
    // Leftover orphans are released through slot 0 once all workers are done.
    {
        let mut h = arena.claim(0).ok_or("slot 0 still claimed")?;
        for (p, size, tag) in orphans.into_inner().unwrap() {
            let head = unsafe { (p as *const u64).read() };
            if head != tag {
                return Err(format!("sentinel of orphan {p:#x} clobbered"));
            }
            shadow.lock().unwrap().remove(&p);
            unsafe { h.deallocate(std::ptr::NonNull::new(p as *mut u8).unwrap(), size) };
        }
    }
    if !shadow.lock().unwrap().is_empty() {
        return Err("blocks leaked".into());
    }
    let pools_before_reset = arena.pool_count();
    arena.reset();
    Ok(StressReport {
        ops: threads * ops_per_thread,
        peak_live: peak.into_inner(),
        pools_before_reset,
        pools_after_reset: arena.pool_count(),
    })
}
