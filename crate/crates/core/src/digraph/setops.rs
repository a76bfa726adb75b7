//! Merge-style set operations on edge lists sorted by target id.
//!
//! All inputs must be sorted by target and free of duplicate targets; all
//! operations run in `O(|a| + |b|)`.

use std::cmp::Ordering;
use std::mem::MaybeUninit;

use crate::edge::Edge;

/// Writes `a ∪ b` (keyed on target) into `out` and returns its length. When
/// both lists hold the same target, the edge from `b` is kept.
///
/// Panics if `out` is shorter than `a.len() + b.len()`.
pub fn set_union(a: &[Edge], b: &[Edge], out: &mut [MaybeUninit<Edge>]) -> usize {
    assert!(out.len() >= a.len() + b.len(), "union output too small");
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        let e = match a[i].target.cmp(&b[j].target) {
            Ordering::Less => {
                i += 1;
                a[i - 1]
            }
            Ordering::Greater => {
                j += 1;
                b[j - 1]
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                b[j - 1]
            }
        };
        out[k].write(e);
        k += 1;
    }
    for &e in a[i..].iter().chain(&b[j..]) {
        out[k].write(e);
        k += 1;
    }
    k
}

/// Writes `a \ b` (matching on target only) into `out` and returns its length.
///
/// Panics if `out` is shorter than `a`.
pub fn set_difference(a: &[Edge], b: &[Edge], out: &mut [MaybeUninit<Edge>]) -> usize {
    assert!(out.len() >= a.len(), "difference output too small");
    let mut k = 0;
    for_each_difference(a, b, |e| {
        out[k].write(e);
        k += 1;
    });
    k
}

/// Removes from `a` every edge whose target appears in `b`, compacting the
/// survivors to the front. Returns the new length.
pub fn set_difference_in_place(a: &mut [Edge], b: &[Edge]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() {
        while j < b.len() && b[j].target < a[i].target {
            j += 1;
        }
        if j < b.len() && b[j].target == a[i].target {
            j += 1;
        } else {
            a[k] = a[i];
            k += 1;
        }
        i += 1;
    }
    k
}

#[inline]
fn for_each_difference(a: &[Edge], b: &[Edge], mut f: impl FnMut(Edge)) {
    let mut j = 0;
    for &e in a {
        while j < b.len() && b[j].target < e.target {
            j += 1;
        }
        if j < b.len() && b[j].target == e.target {
            j += 1;
        } else {
            f(e);
        }
    }
}

/// [`set_union`] into a fresh vector.
pub fn set_union_vec(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let k = set_union(a, b, out.spare_capacity_mut());
    // SAFETY: set_union initialized the first k slots.
    unsafe { out.set_len(k) };
    out
}

/// [`set_difference`] into a fresh vector.
pub fn set_difference_vec(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    let mut out = Vec::with_capacity(a.len());
    for_each_difference(a, b, |e| out.push(e));
    out
}

/// Keeps the first edge of every run of equal targets; returns the new length.
pub fn dedup_by_target(edges: &mut [Edge]) -> usize {
    if edges.is_empty() {
        return 0;
    }
    let mut w = 1;
    for r in 1..edges.len() {
        if edges[r].target != edges[w - 1].target {
            edges[w] = edges[r];
            w += 1;
        }
    }
    w
}
