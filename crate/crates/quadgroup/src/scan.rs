//! Exhaustive index scans with deterministic least-witness semantics.
//!
//! Every exhaustive check in this crate walks a flat index space `0..n` and
//! reports the first index (in increasing order) whose probe returns `Some`.
//! With the `parallel` feature the walk is partitioned across rayon workers;
//! `find_map_first` still returns the positionally least hit, so witnesses are
//! identical to the sequential fallback.

/// Sequential scan. Always available; the benches compare it against the
/// parallel path on the same workload.
pub fn first_hit_seq<T, F>(n: u64, probe: F) -> Option<T>
where
    F: Fn(u64) -> Option<T>,
{
    (0..n).find_map(probe)
}

/// Parallel scan returning the least-index hit.
#[cfg(feature = "parallel")]
pub fn first_hit_par<T, F>(n: u64, probe: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().find_map_first(|i| probe(i))
}

/// Dispatching scan: parallel when the feature is on, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn first_hit<T, F>(n: u64, probe: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    first_hit_par(n, probe)
}

#[cfg(not(feature = "parallel"))]
pub fn first_hit<T, F>(n: u64, probe: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    first_hit_seq(n, probe)
}

/// Fills `table` (a flat `rows × row_len` buffer) row by row. Rows are
/// independent, so they can be handed to rayon wholesale.
#[cfg(feature = "parallel")]
pub fn fill_rows<F>(table: &mut [u32], row_len: usize, fill: F)
where
    F: Fn(usize, &mut [u32]) + Sync + Send,
{
    use rayon::prelude::*;
    table
        .par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(i, row)| fill(i, row));
}

#[cfg(not(feature = "parallel"))]
pub fn fill_rows<F>(table: &mut [u32], row_len: usize, fill: F)
where
    F: Fn(usize, &mut [u32]) + Sync + Send,
{
    for (i, row) in table.chunks_mut(row_len).enumerate() {
        fill(i, row);
    }
}
