//! Data-parallel helpers.
//!
//! With the `rayon` feature (default), [`Execution::Parallel`] maps over a
//! slice on the rayon pool. Without it, both modes run sequentially. Results
//! are always returned in input order.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

/// Below this many items the parallel mode runs inline.
pub const MIN_PARALLEL_ITEMS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "rayon") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "rayon") && self == Execution::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "rayon")]
        if self.is_parallel() && items.len() >= MIN_PARALLEL_ITEMS {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "rayon")]
        if self.is_parallel() && n >= MIN_PARALLEL_ITEMS {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}
