//! Chunked execution drivers.
//!
//! Bulk work (Monte-Carlo generation, pairwise statistics, tensor quadrature)
//! is expressed as a map over fixed-size index chunks. With the `parallel`
//! feature (default) chunks run on the rayon thread pool; without it the same
//! chunks run in a plain loop. Chunk boundaries — and therefore any per-chunk
//! RNG sub-streams and the order results are concatenated or reduced in — are
//! identical in both modes, so output is bit-identical regardless of the
//! feature flag or thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

fn chunk_ranges(len: usize, chunk_size: usize) -> Vec<Range<usize>> {
    assert!(chunk_size > 0, "chunk_size must be positive");
    (0..len)
        .step_by(chunk_size)
        .map(|start| start..(start + chunk_size).min(len))
        .collect()
}

/// Maps `fill(chunk_index, index_range)` over the chunks of `0..len` and
/// concatenates the produced vectors in chunk order.
///
/// `fill` must return exactly `range.len()` items.
#[cfg(feature = "parallel")]
pub fn map_chunks<T, F>(len: usize, chunk_size: usize, fill: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, Range<usize>) -> Vec<T> + Sync,
{
    let parts: Vec<Vec<T>> = chunk_ranges(len, chunk_size)
        .into_par_iter()
        .enumerate()
        .map(|(ci, range)| fill(ci, range))
        .collect();
    parts.into_iter().flatten().collect()
}

/// Sequential build of [`map_chunks`]; same chunking, same output.
#[cfg(not(feature = "parallel"))]
pub fn map_chunks<T, F>(len: usize, chunk_size: usize, fill: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, Range<usize>) -> Vec<T> + Sync,
{
    map_chunks_seq(len, chunk_size, fill)
}

/// Always-sequential reference driver with the same chunk layout as
/// [`map_chunks`]. This is the fallback code path and the baseline arm of the
/// bench suite.
pub fn map_chunks_seq<T, F>(len: usize, chunk_size: usize, fill: F) -> Vec<T>
where
    F: Fn(usize, Range<usize>) -> Vec<T>,
{
    let mut out = Vec::with_capacity(len);
    for (ci, range) in chunk_ranges(len, chunk_size).into_iter().enumerate() {
        out.extend(fill(ci, range));
    }
    out
}

/// Sums `partial(chunk_index, index_range)` over the chunks of `0..len`.
///
/// Per-chunk partials are accumulated in chunk order, so the floating-point
/// result does not depend on the feature flag or thread count.
pub fn sum_chunks<F>(len: usize, chunk_size: usize, partial: F) -> f64
where
    F: Fn(usize, Range<usize>) -> f64 + Sync,
{
    map_chunks(len, chunk_size, |ci, range| vec![partial(ci, range)])
        .into_iter()
        .sum()
}

/// Sequential counterpart of [`sum_chunks`], bit-identical to it.
pub fn sum_chunks_seq<F>(len: usize, chunk_size: usize, partial: F) -> f64
where
    F: Fn(usize, Range<usize>) -> f64,
{
    map_chunks_seq(len, chunk_size, |ci, range| vec![partial(ci, range)])
        .into_iter()
        .sum()
}
