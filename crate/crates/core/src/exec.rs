//! Execution strategy for embarrassingly parallel work.
//!
//! Implementations may run jobs in any order or concurrently. Callers only
//! hand out jobs whose results are pure functions of the job index, so the
//! output never depends on the schedule.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Evaluates `f(0..len)` and returns the results in index order.
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;

    /// Splits `data` into consecutive chunks of `chunk_len` (the last one may
    /// be shorter) and calls `f(chunk_index, chunk)` on each.
    fn for_each_chunk<F>(&self, data: &mut [f64], chunk_len: usize, f: F)
    where
        F: Fn(usize, &mut [f64]) + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }

    fn for_each_chunk<F>(&self, data: &mut [f64], chunk_len: usize, f: F)
    where
        F: Fn(usize, &mut [f64]) + Sync + Send,
    {
        for (i, chunk) in data.chunks_mut(chunk_len.max(1)).enumerate() {
            f(i, chunk);
        }
    }
}
