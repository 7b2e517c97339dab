//! Deterministic parallel helpers. Work is split into fixed chunks and the
//! partial results are combined in index order, so outputs are bit-identical
//! regardless of the worker count.

use rayon::prelude::*;

/// Applies `f(start, chunk)` to fixed-size chunks of `out` in parallel.
pub fn for_chunks_mut<T: Send>(
    out: &mut [T],
    chunk: usize,
    f: impl Fn(usize, &mut [T]) + Sync,
) {
    out.par_chunks_mut(chunk).enumerate().for_each(|(c, slice)| f(c * chunk, slice));
}

/// Sums `f(i)` over `0..n` with a fixed chunking and an in-order fold of the
/// per-chunk partial sums.
pub fn sum_indexed(n: usize, chunk: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let n_chunks = n.div_ceil(chunk.max(1));
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(n);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    partials.iter().sum()
}

/// Maps `f` over `0..n` in parallel, collecting results in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}
