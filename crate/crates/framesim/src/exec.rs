//! Worker-pool plumbing. All parallel loops are deterministic maps over
//! disjoint index ranges with order-preserving merges, so a run's output is
//! identical for any worker count; floating-point reductions stay serial.

use rayon::prelude::*;

/// Below this many items a loop is not worth fanning out.
const MIN_PARALLEL_ITEMS: usize = 2048;

/// Execution context carrying the worker count and, for counts above one,
/// a dedicated rayon pool.
pub struct Workers {
    threads: usize,
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        let threads = threads.max(1);
        let pool = if threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("worker pool"),
            )
        } else {
            None
        };
        Workers { threads, pool }
    }

    pub fn serial() -> Self {
        Workers::new(1)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Apply `f` to every element of `items` in place.
    pub fn for_each_mut<T: Send, F: Fn(usize, &mut T) + Sync>(&self, items: &mut [T], f: F) {
        match &self.pool {
            Some(pool) if items.len() >= MIN_PARALLEL_ITEMS => pool.install(|| {
                items
                    .par_iter_mut()
                    .enumerate()
                    .for_each(|(i, t)| f(i, t));
            }),
            _ => items.iter_mut().enumerate().for_each(|(i, t)| f(i, t)),
        }
    }

    /// Order-preserving parallel map.
    pub fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync>(&self, items: &[T], f: F) -> Vec<U> {
        match &self.pool {
            Some(pool) if items.len() >= MIN_PARALLEL_ITEMS => {
                pool.install(|| items.par_iter().map(|t| f(t)).collect())
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Order-preserving parallel map over coarse units (frames); fans out
    /// at much smaller counts than the per-entry loops.
    pub fn map_mut_frames<T: Send, U: Send, F: Fn(&mut T) -> U + Sync>(
        &self,
        items: &mut [T],
        f: F,
    ) -> Vec<U> {
        match &self.pool {
            Some(pool) if items.len() >= 4 => {
                pool.install(|| items.par_iter_mut().map(|t| f(t)).collect())
            }
            _ => items.iter_mut().map(f).collect(),
        }
    }

    /// Split `count` row indices into contiguous chunks, one per worker, and
    /// run `f(range)` on each; used for big-matrix row passes. `min_items`
    /// gates the fan-out so small matrices stay serial.
    pub fn row_chunks<F: Fn(std::ops::Range<usize>) + Sync>(
        &self,
        count: usize,
        min_items: usize,
        f: F,
    ) {
        match &self.pool {
            Some(pool) if count >= min_items && self.threads > 1 => {
                let chunk = count.div_ceil(self.threads);
                let ranges: Vec<_> = (0..self.threads)
                    .map(|i| (i * chunk).min(count)..((i + 1) * chunk).min(count))
                    .filter(|r| !r.is_empty())
                    .collect();
                pool.install(|| {
                    ranges.into_par_iter().for_each(|r| f(r));
                });
            }
            _ => f(0..count),
        }
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::serial()
    }
}
