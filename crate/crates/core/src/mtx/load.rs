use std::mem::MaybeUninit;
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};
use std::sync::Mutex;

use rayon::prelude::*;

use super::header::{memchr, MtxHeader};
use super::record::{get_block, parse_record, RecordError};
use super::{LoadOptions, MtxError};
use crate::csr::CsrGraph;
use crate::edge::{VertexId, Weight};

/// A parsed edge with 0-based ids and the byte offset of its source line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: Weight,
    pub offset: u64,
}

/// Output of [`read_edgelist`]: one edge buffer per worker thread plus
/// per-partition out-degree counts. Thread `t` counts into partition
/// `t % partitions.len()`.
#[derive(Debug)]
pub struct EdgeList {
    pub order: usize,
    pub weighted: bool,
    pub buffers: Vec<Vec<RawEdge>>,
    pub partitions: Vec<Vec<AtomicUsize>>,
}

impl EdgeList {
    pub fn len(&self) -> usize {
        self.buffers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn record_error(slot: &Mutex<Option<MtxError>>, first: &AtomicUsize, err: MtxError) {
    let offset = err.offset().unwrap_or(0);
    let mut s = slot.lock().unwrap();
    if s.as_ref().and_then(MtxError::offset).is_none_or(|o| offset < o) {
        *s = Some(err);
        first.fetch_min(offset, Relaxed);
    }
}

/// Parses the data section in parallel on the current rayon pool.
///
/// Fails with the error at the smallest byte offset, so the result does not
/// depend on scheduling. The declared entry count is only used to size
/// buffers.
pub fn read_edgelist(data: &[u8], header: &MtxHeader, opts: &LoadOptions) -> Result<EdgeList, MtxError> {
    let threads = rayon::current_num_threads();
    let rho = opts.partitions.max(1);
    let beta = opts.block_size.max(1);
    let n = header.order();
    let begin = header.header_len.min(data.len());
    let nblocks = (data.len() - begin).div_ceil(beta);

    // Shortest possible entry line is 4 bytes ("1 1\n").
    let expected = header.size.min((data.len() - begin) / 4 + 1) * (1 + header.symmetric as usize);
    let buffers: Vec<Mutex<Vec<RawEdge>>> = (0..threads)
        .map(|_| Mutex::new(Vec::with_capacity(expected / threads + 1)))
        .collect();
    let partitions: Vec<Vec<AtomicUsize>> = (0..rho)
        .map(|_| (0..n).map(|_| AtomicUsize::new(0)).collect())
        .collect();
    let error = Mutex::new(None);
    let first_error = AtomicUsize::new(usize::MAX);

    (0..nblocks).into_par_iter().with_max_len(1).for_each(|i| {
        let range = get_block(data, begin, i, beta);
        if range.start >= first_error.load(Relaxed) {
            return;
        }
        let t = rayon::current_thread_index().unwrap_or(0) % threads;
        let mut buf = buffers[t].lock().unwrap();
        let degrees = &partitions[t % rho];
        let mut pos = range.start;
        while pos < range.end {
            let end = memchr(b'\n', &data[pos..range.end]).map_or(range.end, |j| pos + j);
            let offset = pos;
            pos = end + 1;
            let rec = match parse_record(&data[offset..end], header.weighted) {
                Ok(Some(rec)) => rec,
                Ok(None) => continue,
                Err(e) => {
                    let err = match e {
                        RecordError::Invalid => MtxError::InvalidRecord { offset },
                        RecordError::Trailing => MtxError::TrailingData { offset },
                    };
                    return record_error(&error, &first_error, err);
                }
            };
            for (id, max) in [(rec.row, header.rows), (rec.col, header.cols)] {
                if id == 0 || id > max as u64 {
                    return record_error(&error, &first_error, MtxError::VertexOutOfRange { id, max, offset });
                }
            }
            let (u, v) = ((rec.row - 1) as VertexId, (rec.col - 1) as VertexId);
            let w = rec.weight;
            buf.push(RawEdge { source: u, target: v, weight: w, offset: offset as u64 });
            degrees[u as usize].fetch_add(1, Relaxed);
            if header.symmetric && u != v {
                buf.push(RawEdge { source: v, target: u, weight: w, offset: offset as u64 });
                degrees[v as usize].fetch_add(1, Relaxed);
            }
        }
    });

    if let Some(err) = error.into_inner().unwrap() {
        return Err(err);
    }
    Ok(EdgeList {
        order: n,
        weighted: header.weighted,
        buffers: buffers.into_iter().map(|b| b.into_inner().unwrap()).collect(),
        partitions,
    })
}

/// Parallel inclusive prefix sum.
fn inclusive_scan(v: &mut [usize]) {
    const CHUNK: usize = 1 << 16;
    let sums: Vec<usize> = v
        .par_chunks_mut(CHUNK)
        .map(|c| {
            let mut s = 0;
            for x in c {
                s += *x;
                *x = s;
            }
            s
        })
        .collect();
    let bases: Vec<usize> = sums
        .iter()
        .scan(0, |acc, &s| {
            let b = *acc;
            *acc += s;
            Some(b)
        })
        .collect();
    v.par_chunks_mut(CHUNK)
        .zip(bases)
        .skip(1)
        .for_each(|(c, b)| c.iter_mut().for_each(|x| *x += b));
}

struct SyncPtr<T>(*mut T);
unsafe impl<T> Sync for SyncPtr<T> {}
unsafe impl<T> Send for SyncPtr<T> {}

/// Builds the CSR arrays: degrees are summed across partitions, scanned into
/// offsets, and each partition scatters its edges into its own sub-range of
/// every vertex. Each vertex's edges are then sorted by `(target, offset)`.
pub fn convert_to_csr(list: EdgeList) -> CsrGraph {
    let EdgeList { order: n, weighted, buffers, partitions } = list;
    let rho = partitions.len();

    let mut offsets = vec![0usize; n + 1];
    offsets[1..]
        .par_iter_mut()
        .enumerate()
        .for_each(|(u, o)| *o = partitions.iter().map(|p| p[u].load(Relaxed)).sum());
    inclusive_scan(&mut offsets[1..]);
    let m = offsets[n];

    // Turn per-partition counts into write cursors.
    (0..n).into_par_iter().for_each(|u| {
        let mut at = offsets[u];
        for p in &partitions {
            let c = p[u].load(Relaxed);
            p[u].store(at, Relaxed);
            at += c;
        }
    });

    let mut slots: Vec<MaybeUninit<(VertexId, Weight, u64)>> = Vec::with_capacity(m);
    // SAFETY: MaybeUninit needs no initialization.
    unsafe { slots.set_len(m) };
    let out = SyncPtr(slots.as_mut_ptr());
    buffers.par_iter().enumerate().for_each(|(t, buf)| {
        let cursors = &partitions[t % rho];
        let out = &out;
        for e in buf {
            let j = cursors[e.source as usize].fetch_add(1, Relaxed);
            debug_assert!(j < m);
            // SAFETY: cursors hand out every index in 0..m exactly once.
            unsafe { (*out.0.add(j)).write((e.target, e.weight, e.offset)) };
        }
    });
    drop(buffers);
    // SAFETY: all m slots were written above.
    let mut slots: Vec<(VertexId, Weight, u64)> = unsafe { std::mem::transmute(slots) };

    let mut rest = &mut slots[..];
    let mut lists = Vec::with_capacity(n);
    for u in 0..n {
        let (a, b) = rest.split_at_mut(offsets[u + 1] - offsets[u]);
        lists.push(a);
        rest = b;
    }
    lists.par_iter_mut().with_min_len(256).for_each(|s| {
        if s.len() > 1 {
            s.sort_unstable_by_key(|&(t, _, off)| (t, off));
        }
    });

    let keys: Vec<VertexId> = slots.par_iter().map(|s| s.0).collect();
    let values = weighted.then(|| slots.par_iter().map(|s| s.1).collect());
    CsrGraph::from_parts_unchecked(offsets, keys, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtx::read_header;

    #[test]
    fn scan() {
        let mut v: Vec<usize> = (0..200_000).map(|i| i % 3).collect();
        let want: Vec<usize> = v.iter().scan(0, |a, &x| { *a += x; Some(*a) }).collect();
        inclusive_scan(&mut v);
        assert_eq!(v, want);
        let mut e: Vec<usize> = vec![];
        inclusive_scan(&mut e);
    }

    #[test]
    fn partitions_hold_all_degrees() {
        let text = b"%%MatrixMarket matrix coordinate pattern symmetric\n3 3 3\n2 1\n3 3\n3 1\n";
        let h = read_header(text).unwrap();
        let opts = LoadOptions { partitions: 3, block_size: 4 };
        let list = read_edgelist(text, &h, &opts).unwrap();
        assert_eq!(list.len(), 5);
        let deg: Vec<usize> = (0..3)
            .map(|u| list.partitions.iter().map(|p| p[u].load(Relaxed)).sum())
            .collect();
        assert_eq!(deg, [2, 1, 2]);
        let g = convert_to_csr(list);
        assert_eq!(g.offsets(), &[0, 2, 3, 5]);
        assert_eq!(g.edge_keys(), &[1, 2, 0, 0, 2]);
    }

    #[test]
    fn duplicates_keep_file_order() {
        let text = b"%%MatrixMarket matrix coordinate real general\n2 2 3\n1 2 3\n1 1 0\n1 2 4\n";
        let h = read_header(text).unwrap();
        let opts = LoadOptions { partitions: 2, block_size: 6 };
        let g = convert_to_csr(read_edgelist(text, &h, &opts).unwrap());
        assert_eq!(g.edge_keys(), &[0, 1, 1]);
        assert_eq!(g.edge_values().unwrap(), &[0.0, 3.0, 4.0]);
    }
}
