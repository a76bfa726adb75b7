//! The mutable directed graph and its sorted edge-list primitives.

mod setops;

use std::alloc::{handle_alloc_error, Layout};
use std::fmt;
use std::mem::{self, MaybeUninit};
use std::ptr::{self, NonNull};
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};

use rayon::prelude::*;

use crate::alloc::{allocation_size, ConcurrentArena, BLOCK_ALIGN, DEFAULT_POOL_SIZE, PAGE_SIZE};
use crate::edge::{Edge, VertexId, Weight, EDGE_SIZE};
use crate::graph::GraphView;

pub use setops::{
    dedup_by_target, set_difference, set_difference_in_place, set_difference_vec, set_union,
    set_union_vec,
};

/// Vertex slots are reserved in multiples of this many.
pub const VERTEX_QUANTUM: usize = PAGE_SIZE;

/// Degree above which a single vertex's edges are sorted in parallel.
const PAR_SORT_DEGREE: usize = 2048;

/// Smallest number of vertices handed to one rayon task.
pub(crate) const PAR_MIN_LEN: usize = 256;

const WORD_BITS: usize = u64::BITS as usize;

#[inline]
fn words(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Resizes a per-vertex array from `n0` live entries in storage reserved for
/// `r0` to `n1` live entries in storage reserved for `r1`.
///
/// When the reservation is unchanged the storage is reused in place; otherwise
/// the first `min(n0, n1)` entries move to fresh storage of capacity `r1`. New
/// entries are produced by `zero`.
pub fn reallocate<T>(
    mut v: Vec<T>,
    n0: usize,
    r0: usize,
    n1: usize,
    r1: usize,
    zero: impl FnMut() -> T,
) -> Vec<T> {
    debug_assert_eq!(v.len(), n0);
    debug_assert!(n1 <= r1);
    if r1 == r0 && v.capacity() >= r1 {
        v.truncate(n1);
        v.resize_with(n1, zero);
        v
    } else {
        let mut w = Vec::with_capacity(r1);
        w.extend(v.drain(..n0.min(n1)));
        w.resize_with(n1, zero);
        w
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
#[repr(transparent)]
pub(crate) struct Block(*mut Edge);

// A block is owned by exactly one vertex slot; access follows the graph's borrows.
unsafe impl Send for Block {}
unsafe impl Sync for Block {}

impl Block {
    const NULL: Block = Block(ptr::null_mut());

    #[inline]
    fn is_null(self) -> bool {
        self.0.is_null()
    }
}

/// Allocation from the graph's arena on behalf of the current thread.
#[derive(Clone, Copy)]
pub(crate) struct EdgeAlloc<'a> {
    arena: &'a ConcurrentArena,
}

impl EdgeAlloc<'_> {
    #[inline]
    fn slot(self) -> usize {
        rayon::current_thread_index().unwrap_or(self.arena.thread_count() - 1)
    }

    /// A block with room for at least `edges` edges, and its capacity.
    #[inline]
    fn allocate(self, edges: usize) -> (Block, usize) {
        let bytes = allocation_size(edges * EDGE_SIZE);
        // SAFETY: the graph sized the arena for every worker of the current
        // pool plus the calling thread, and holds `&mut` for the duration, so
        // no other thread uses this slot.
        match unsafe { self.arena.allocate(self.slot(), bytes) } {
            Some(p) => (Block(p.as_ptr().cast()), bytes / EDGE_SIZE),
            None => handle_alloc_error(Layout::from_size_align(bytes, BLOCK_ALIGN).unwrap()),
        }
    }

    /// # Safety
    /// `block` must have come from this arena with this capacity and be live.
    #[inline]
    unsafe fn deallocate(self, block: Block, capacity: usize) {
        if let Some(p) = NonNull::new(block.0) {
            self.arena
                .deallocate(self.slot(), p.cast(), capacity * EDGE_SIZE);
        }
    }
}

/// Exclusive access to one vertex's edge storage during a parallel pass.
pub(crate) struct VertexMut<'a> {
    pub exists: bool,
    block: &'a mut Block,
    degree: &'a mut usize,
    capacity: &'a mut usize,
}

impl VertexMut<'_> {
    #[inline]
    pub fn degree(&self) -> usize {
        *self.degree
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        if self.block.is_null() {
            &[]
        } else {
            // SAFETY: the first `degree` slots of a live block are initialized.
            unsafe { std::slice::from_raw_parts(self.block.0, *self.degree) }
        }
    }

    #[inline]
    pub fn edges_mut(&mut self) -> &mut [Edge] {
        if self.block.is_null() {
            &mut []
        } else {
            // SAFETY: as in `edges`, and we hold the only reference.
            unsafe { std::slice::from_raw_parts_mut(self.block.0, *self.degree) }
        }
    }

    /// Replaces the edge list by a fresh block of room for `edges` edges whose
    /// contents `fill` writes, returning how many it wrote. The old block is
    /// released afterwards, so `fill` may read from it via `old`.
    #[inline]
    pub fn rebuild(
        &mut self,
        alloc: EdgeAlloc<'_>,
        edges: usize,
        fill: impl FnOnce(&[Edge], &mut [MaybeUninit<Edge>]) -> usize,
    ) -> usize {
        let (block, capacity) = alloc.allocate(edges);
        // SAFETY: the new block holds `capacity` edges.
        let out = unsafe {
            std::slice::from_raw_parts_mut(block.0.cast::<MaybeUninit<Edge>>(), capacity)
        };
        let k = fill(self.edges(), out);
        debug_assert!(k <= capacity);
        // SAFETY: the old block was allocated with its recorded capacity.
        unsafe { alloc.deallocate(*self.block, *self.capacity) };
        *self.block = block;
        *self.capacity = capacity;
        *self.degree = k;
        k
    }

    /// Merges the sorted, duplicate-free `list` into the edges; on a shared
    /// target the weight from `list` wins. Returns the number of new targets.
    pub fn add_edges(&mut self, alloc: EdgeAlloc<'_>, list: &[Edge]) -> usize {
        if list.is_empty() {
            return 0;
        }
        let before = self.degree();
        self.rebuild(alloc, before + list.len(), |old, out| set_union(old, list, out)) - before
    }

    /// Removes every edge whose target appears in the sorted `list`. Returns
    /// the number removed.
    pub fn remove_edges(&mut self, list: &[Edge]) -> usize {
        let before = self.degree();
        if before == 0 || list.is_empty() {
            return 0;
        }
        let k = set_difference_in_place(self.edges_mut(), list);
        *self.degree = k;
        before - k
    }
}

/// Directed graph with per-vertex edge arrays allocated from a
/// [`ConcurrentArena`].
///
/// Vertex ids index dense per-vertex arrays; a bitset records which ids are
/// vertices. After [`update`](Self::update) (and after every operation in
/// [`ops`](crate::ops)) each edge list is sorted by target with no duplicate
/// targets.
pub struct DiGraph {
    exists: Vec<u64>,
    edges: Vec<Block>,
    degrees: Vec<AtomicUsize>,
    capacities: Vec<usize>,
    arena: ConcurrentArena,
    cap: usize,
    res: usize,
    n: usize,
    m: usize,
}

impl Default for DiGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiGraph")
            .field("order", &self.n)
            .field("size", &self.m)
            .field("span", &self.cap)
            .finish()
    }
}

impl DiGraph {
    pub fn new() -> Self {
        Self::with_pool_size(DEFAULT_POOL_SIZE)
    }

    /// An empty graph whose arena grows in pools of `pool_size` bytes.
    pub fn with_pool_size(pool_size: usize) -> Self {
        Self {
            exists: Vec::new(),
            edges: Vec::new(),
            degrees: Vec::new(),
            capacities: Vec::new(),
            arena: ConcurrentArena::new(pool_size, 1),
            cap: 0,
            res: 0,
            n: 0,
            m: 0,
        }
    }

    /// Deep copy of any graph; see [`ops::clone_graph`](crate::ops::clone_graph).
    pub fn from_csr(csr: &crate::CsrGraph) -> Self {
        crate::ops::clone_graph(csr)
    }

    /// Builds a graph from `(source, target, weight)` triples. Both endpoints
    /// of every edge become vertices; repeated edges keep the first weight.
    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut g = Self::new();
        let span = edges
            .iter()
            .map(|&(u, v, _)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0);
        g.reserve(span);
        let mut counts = vec![0usize; span];
        for &(u, v, _) in &edges {
            g.add_vertex(u);
            g.add_vertex(v);
            counts[u as usize] += 1;
        }
        for (u, &c) in counts.iter().enumerate() {
            g.allocate_edges(u as VertexId, c);
        }
        for &(u, v, w) in &edges {
            // SAFETY: each source was given room for all of its edges above.
            unsafe { g.add_edge_unsafe(u, v, w) };
        }
        g.update(false, false);
        g
    }

    /// Makes sure the arena has a slot for every worker of the current rayon
    /// pool plus the calling thread.
    fn prepare(&mut self) {
        self.arena.ensure_threads(rayon::current_num_threads() + 1);
    }

    fn alloc(&self) -> EdgeAlloc<'_> {
        EdgeAlloc { arena: &self.arena }
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn size(&self) -> usize {
        self.m
    }

    /// One past the largest usable vertex id.
    #[inline]
    pub fn span(&self) -> usize {
        self.cap
    }

    /// Vertex slots allocated, a multiple of [`VERTEX_QUANTUM`].
    pub fn reserved(&self) -> usize {
        self.res
    }

    #[inline]
    pub fn has_vertex(&self, u: VertexId) -> bool {
        let u = u as usize;
        u < self.cap && self.exists[u / WORD_BITS] >> (u % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        self.degrees.get(u as usize).map_or(0, |d| d.load(Relaxed))
    }

    /// Edge slots allocated for `u`.
    pub fn capacity(&self, u: VertexId) -> usize {
        self.capacities.get(u as usize).copied().unwrap_or(0)
    }

    /// Outgoing edges of `u`; empty if `u` is out of range.
    #[inline]
    pub fn edges(&self, u: VertexId) -> &[Edge] {
        let u = u as usize;
        match self.edges.get(u) {
            Some(b) if !b.is_null() => {
                // SAFETY: the first `degree` slots of a live block are initialized.
                unsafe { std::slice::from_raw_parts(b.0, self.degrees[u].load(Relaxed)) }
            }
            _ => &[],
        }
    }

    /// Ids of all vertices, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.exists.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some((i * WORD_BITS + b) as VertexId)
            })
        })
    }

    /// Grows the vertex arrays so that ids `0..n` are usable. Storage is
    /// reserved in multiples of [`VERTEX_QUANTUM`] slots; growth within the
    /// reservation reuses it.
    pub fn reserve(&mut self, n: usize) {
        if n <= self.cap {
            return;
        }
        assert!(n <= VertexId::MAX as usize + 1, "vertex id space exhausted");
        let (n0, r0) = (self.cap, self.res);
        let r1 = if n <= r0 {
            r0
        } else {
            n.div_ceil(VERTEX_QUANTUM) * VERTEX_QUANTUM
        };
        self.exists = reallocate(mem::take(&mut self.exists), words(n0), words(r0), words(n), words(r1), || 0);
        self.edges = reallocate(mem::take(&mut self.edges), n0, r0, n, r1, || Block::NULL);
        self.degrees = reallocate(mem::take(&mut self.degrees), n0, r0, n, r1, || AtomicUsize::new(0));
        self.capacities = reallocate(mem::take(&mut self.capacities), n0, r0, n, r1, || 0);
        self.cap = n;
        self.res = r1;
    }

    /// Adds vertex `u`, growing the arrays if needed. Returns whether it is new.
    pub fn add_vertex(&mut self, u: VertexId) -> bool {
        let i = u as usize;
        self.reserve(i + 1);
        let word = &mut self.exists[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        let new = *word & bit == 0;
        *word |= bit;
        self.n += new as usize;
        new
    }

    /// Gives `u` an edge block with room for at least `degree` edges, unless it
    /// already has one. Does nothing if `u` is out of range.
    pub fn allocate_edges(&mut self, u: VertexId, degree: usize) {
        let u = u as usize;
        if u >= self.cap || !self.edges[u].is_null() || degree == 0 {
            return;
        }
        self.prepare();
        let (block, capacity) = self.alloc().allocate(degree);
        self.edges[u] = block;
        self.capacities[u] = capacity;
    }

    /// Appends `(u, v, w)` without bounds or capacity checks, so that many
    /// threads can fill disjoint or shared vertices at once. Neither the edge
    /// count nor sortedness is maintained; call [`update`](Self::update) once
    /// all insertions are done.
    ///
    /// # Safety
    /// `u` must be below [`span`](Self::span), its block must have been
    /// allocated by [`allocate_edges`](Self::allocate_edges) with room for all
    /// edges appended concurrently, and nobody may read `u`'s edges until the
    /// insertions finish.
    #[inline]
    pub unsafe fn add_edge_unsafe(&self, u: VertexId, v: VertexId, w: Weight) {
        let u = u as usize;
        let i = self.degrees.get_unchecked(u).fetch_add(1, Relaxed);
        debug_assert!(i < self.capacities[u]);
        self.edges.get_unchecked(u).0.add(i).write(Edge::new(v, w));
    }

    /// Appends `(u, v, w)`, adding both endpoints and growing `u`'s block as
    /// needed. The edge count includes the new edge even if it repeats an
    /// existing target; [`update`](Self::update) restores the sorted,
    /// duplicate-free form.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: Weight) {
        self.add_vertex(u);
        self.add_vertex(v);
        self.prepare();
        let i = u as usize;
        let deg = *self.degrees[i].get_mut();
        if deg == self.capacities[i] {
            let alloc = EdgeAlloc { arena: &self.arena };
            let mut vm = VertexMut {
                exists: true,
                block: &mut self.edges[i],
                degree: self.degrees[i].get_mut(),
                capacity: &mut self.capacities[i],
            };
            vm.rebuild(alloc, (2 * deg).max(deg + 1), |old, out| {
                for (o, &e) in out.iter_mut().zip(old) {
                    o.write(e);
                }
                old.len()
            });
        }
        // SAFETY: u is in range and has a free slot.
        unsafe { self.add_edge_unsafe(u, v, w) };
        self.m += 1;
    }

    /// Merges the sorted, duplicate-free `list` into `u`'s edges (weights from
    /// `list` win), adding `u` and every target as vertices. Returns the number
    /// of new edges.
    pub fn add_edges(&mut self, u: VertexId, list: &[Edge]) -> usize {
        self.add_vertex(u);
        for e in list {
            self.add_vertex(e.target);
        }
        self.prepare();
        let i = u as usize;
        let alloc = EdgeAlloc { arena: &self.arena };
        let added = VertexMut {
            exists: true,
            block: &mut self.edges[i],
            degree: self.degrees[i].get_mut(),
            capacity: &mut self.capacities[i],
        }
        .add_edges(alloc, list);
        self.m += added;
        added
    }

    /// Removes from `u`'s edges every target in the sorted `list`. Returns the
    /// number removed.
    pub fn remove_edges(&mut self, u: VertexId, list: &[Edge]) -> usize {
        let i = u as usize;
        if i >= self.cap {
            return 0;
        }
        let removed = VertexMut {
            exists: self.has_vertex(u),
            block: &mut self.edges[i],
            degree: self.degrees[i].get_mut(),
            capacity: &mut self.capacities[i],
        }
        .remove_edges(list);
        self.m -= removed;
        removed
    }

    /// Restores the sorted, duplicate-free form of every edge list and
    /// recounts vertices and edges. `is_sorted` skips the sort and `is_unique`
    /// the duplicate removal; when duplicates are removed the first occurrence
    /// in storage order is kept.
    pub fn update(&mut self, is_unique: bool, is_sorted: bool) {
        if !(is_unique && is_sorted) {
            let span = self.cap;
            self.par_update_vertices(span, |_, _, mut v| {
                if v.degree() < 2 {
                    return 0;
                }
                let edges = v.edges_mut();
                if !is_sorted {
                    if edges.len() > PAR_SORT_DEGREE {
                        edges.par_sort_by_key(|e| e.target);
                    } else {
                        edges.sort_by_key(|e| e.target);
                    }
                }
                if !is_unique {
                    let k = dedup_by_target(edges);
                    *v.degree = k;
                }
                0
            });
        }
        self.recount();
    }

    /// Recomputes the vertex and edge counts.
    pub(crate) fn recount(&mut self) {
        let exists = &self.exists;
        let degrees = &self.degrees;
        let (n, m) = (0..exists.len())
            .into_par_iter()
            .with_min_len(PAR_MIN_LEN / WORD_BITS)
            .map(|i| {
                let mut w = exists[i];
                let mut m = 0;
                let n = w.count_ones() as usize;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    m += degrees[i * WORD_BITS + b].load(Relaxed);
                }
                (n, m)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        self.n = n;
        self.m = m;
    }

    pub(crate) fn set_counts(&mut self, n: usize, m: usize) {
        self.n = n;
        self.m = m;
    }

    pub(crate) fn exists_words(&self) -> &[u64] {
        &self.exists
    }

    pub(crate) fn exists_words_mut(&mut self) -> &mut [u64] {
        &mut self.exists
    }

    /// Runs `f` on every vertex slot in `0..len` in parallel, summing its
    /// results. `f` receives the id, an allocator handle valid for the calling
    /// worker, and exclusive access to that vertex's storage.
    pub(crate) fn par_update_vertices<F>(&mut self, len: usize, f: F) -> usize
    where
        F: Fn(VertexId, EdgeAlloc<'_>, VertexMut<'_>) -> usize + Sync + Send,
    {
        self.prepare();
        let len = len.min(self.cap);
        let alloc = EdgeAlloc { arena: &self.arena };
        let exists = &self.exists;
        self.edges[..len]
            .par_iter_mut()
            .zip(self.degrees[..len].par_iter_mut())
            .zip(self.capacities[..len].par_iter_mut())
            .enumerate()
            .with_min_len(PAR_MIN_LEN)
            .map(|(u, ((block, degree), capacity))| {
                let v = VertexMut {
                    exists: exists[u / WORD_BITS] >> (u % WORD_BITS) & 1 == 1,
                    block,
                    degree: degree.get_mut(),
                    capacity,
                };
                f(u as VertexId, alloc, v)
            })
            .sum()
    }

    /// Checks the structural invariants, describing the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.exists.len() != words(self.cap) {
            return Err("bitset length does not match span".into());
        }
        if self.cap % WORD_BITS != 0 {
            if let Some(&last) = self.exists.last() {
                if last >> (self.cap % WORD_BITS) != 0 {
                    return Err("vertex bit set beyond span".into());
                }
            }
        }
        let mut n = 0;
        let mut m = 0;
        for u in 0..self.cap as VertexId {
            let deg = self.degree(u);
            if deg > self.capacity(u) {
                return Err(format!("vertex {u}: degree {deg} exceeds capacity"));
            }
            if !self.has_vertex(u) {
                if deg != 0 {
                    return Err(format!("absent vertex {u} has edges"));
                }
                continue;
            }
            n += 1;
            m += deg;
            let edges = self.edges(u);
            if let Some(w) = edges.windows(2).find(|w| w[0].target >= w[1].target) {
                return Err(format!("vertex {u}: targets {} and {} out of order", w[0].target, w[1].target));
            }
            if let Some(e) = edges.iter().find(|e| !self.has_vertex(e.target)) {
                return Err(format!("vertex {u}: edge to absent vertex {}", e.target));
            }
        }
        if n != self.n || m != self.m {
            return Err(format!("counts ({}, {}) but found ({n}, {m})", self.n, self.m));
        }
        Ok(())
    }
}

impl Clone for DiGraph {
    fn clone(&self) -> Self {
        crate::ops::clone_graph(self)
    }
}

impl PartialEq for DiGraph {
    /// Same vertices and the same edge lists; reservations and block
    /// capacities are ignored.
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.m != other.m {
            return false;
        }
        let span = self.cap.max(other.cap);
        (0..span as VertexId)
            .all(|u| self.has_vertex(u) == other.has_vertex(u) && self.edges(u) == other.edges(u))
    }
}

impl Drop for DiGraph {
    fn drop(&mut self) {
        if self.arena.thread_count() == 0 {
            return;
        }
        // Class pools go with the arena; blocks served by the system do not.
        let arena = self.arena.local_mut(0);
        for (b, &c) in self.edges.iter().zip(&self.capacities) {
            if let Some(p) = NonNull::new(b.0) {
                if arena.class(c * EDGE_SIZE).is_none() {
                    // SAFETY: the block is live and was allocated with this size.
                    unsafe { arena.deallocate(p.cast(), c * EDGE_SIZE) };
                }
            }
        }
    }
}

impl GraphView for DiGraph {
    fn span(&self) -> usize {
        self.cap
    }

    fn has_vertex(&self, u: VertexId) -> bool {
        DiGraph::has_vertex(self, u)
    }

    fn degree(&self, u: VertexId) -> usize {
        DiGraph::degree(self, u)
    }

    fn order(&self) -> usize {
        self.n
    }

    fn size(&self) -> usize {
        self.m
    }

    #[inline]
    fn for_each_edge<F: FnMut(Edge)>(&self, u: VertexId, mut f: F) {
        for &e in self.edges(u) {
            f(e);
        }
    }

    #[inline]
    fn edge_slice(&self, u: VertexId) -> Option<&[Edge]> {
        Some(self.edges(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn e(t: VertexId) -> Edge {
        Edge::new(t, 1.0)
    }

    #[test]
    fn reallocate_keeps_prefix_and_zeroes_the_rest() {
        let v = vec![1, 2, 3];
        let w = reallocate(v, 3, 3, 5, 8, || 0);
        assert_eq!(w, [1, 2, 3, 0, 0]);
        assert!(w.capacity() >= 8);
        let p = w.as_ptr();
        let w = reallocate(w, 5, 8, 7, 8, || 9);
        assert_eq!(w, [1, 2, 3, 0, 0, 9, 9]);
        assert_eq!(w.as_ptr(), p);
        let w = reallocate(w, 7, 8, 2, 16, || 0);
        assert_eq!(w, [1, 2]);
    }

    #[test]
    fn reserve_rounds_to_the_quantum() {
        let mut g = DiGraph::new();
        g.reserve(10);
        assert_eq!((g.span(), g.reserved()), (10, VERTEX_QUANTUM));
        g.reserve(VERTEX_QUANTUM + 1);
        assert_eq!(g.reserved(), 2 * VERTEX_QUANTUM);
        g.reserve(5);
        assert_eq!(g.span(), VERTEX_QUANTUM + 1);
        assert_eq!(g.order(), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn vertices_and_edges() {
        let mut g = DiGraph::new();
        assert!(g.add_vertex(3));
        assert!(!g.add_vertex(3));
        assert_eq!(g.add_edges(3, &[e(1), e(5)]), 2);
        assert_eq!(g.add_edges(3, &[Edge::new(1, 4.0), e(2)]), 1);
        assert_eq!(g.edges(3), &[Edge::new(1, 4.0), e(2), e(5)]);
        assert_eq!(g.vertices().collect::<Vec<_>>(), [1, 2, 3, 5]);
        assert_eq!((g.order(), g.size()), (4, 3));
        assert_eq!(g.remove_edges(3, &[e(2), e(9)]), 1);
        assert_eq!(g.edges(3), &[Edge::new(1, 4.0), e(5)]);
        assert_eq!(g.size(), 2);
        g.check_invariants().unwrap();
        assert!(g.edges(100).is_empty());
        assert_eq!(g.degree(100), 0);
    }

    #[test]
    fn add_edge_then_update() {
        let mut g = DiGraph::new();
        for &(u, v) in &[(0, 3), (0, 1), (0, 3), (2, 0), (0, 2)] {
            g.add_edge(u, v, v as f32);
        }
        assert_eq!(g.size(), 5);
        g.update(false, false);
        assert_eq!(g.edges(0), &[Edge::new(1, 1.0), Edge::new(2, 2.0), Edge::new(3, 3.0)]);
        assert_eq!((g.order(), g.size()), (4, 4));
        g.check_invariants().unwrap();
    }

    #[test]
    fn duplicates_keep_the_first_weight() {
        let g = DiGraph::from_edges([(0, 1, 5.0), (0, 1, 6.0), (1, 0, 1.0)]);
        assert_eq!(g.edges(0), &[Edge::new(1, 5.0)]);
        assert_eq!(g.size(), 2);
    }

    #[test]
    fn large_degrees_use_system_blocks() {
        let edges: Vec<_> = (0..5000).rev().map(|v| (0, v, 1.0)).collect();
        let g = DiGraph::from_edges(edges);
        assert_eq!(g.degree(0), 4999 + 1);
        assert!(g.capacity(0) * EDGE_SIZE > crate::alloc::MAX_CLASS);
        assert!(g.edges(0).windows(2).all(|w| w[0].target < w[1].target));
        let h = g.clone();
        assert_eq!(g, h);
        drop(g);
        h.check_invariants().unwrap();
    }

    #[test]
    fn equality_ignores_reservation() {
        let a = DiGraph::from_edges([(0, 1, 1.0)]);
        let mut b = DiGraph::from_edges([(0, 1, 1.0)]);
        b.reserve(10_000);
        assert_eq!(a, b);
        b.add_vertex(9_000);
        assert_ne!(a, b);
    }

    #[test]
    fn works_inside_a_small_pool() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let mut g = DiGraph::new();
        let edges: Vec<_> = (0..3000u32).map(|i| (i % 700, (i * 7) % 900, 1.0)).collect();
        pool.install(|| {
            g = DiGraph::from_edges(edges.clone());
            g.update(true, true);
        });
        g.check_invariants().unwrap();
    }

    proptest! {
        #[test]
        fn from_edges_matches_a_map(list in proptest::collection::vec((0u32..40, 0u32..40, 0u8..3), 0..300)) {
            let g = DiGraph::from_edges(list.iter().map(|&(u, v, w)| (u, v, w as f32)));
            let mut want: BTreeMap<u32, BTreeMap<u32, f32>> = BTreeMap::new();
            let mut vs = BTreeSet::new();
            for &(u, v, w) in &list {
                vs.insert(u);
                vs.insert(v);
                want.entry(u).or_default().entry(v).or_insert(w as f32);
            }
            prop_assert_eq!(g.vertices().collect::<BTreeSet<_>>(), vs);
            for (u, m) in want {
                let got: Vec<_> = g.edges(u).iter().map(|e| (e.target, e.weight)).collect();
                prop_assert_eq!(got, m.into_iter().collect::<Vec<_>>());
            }
            prop_assert!(g.check_invariants().is_ok());
        }
    }
}
