//! Data-parallel map helpers with a sequential fallback.
//!
//! With the `parallel` feature the maps run on the rayon global pool
//! (thread count is the caller's choice via `RAYON_NUM_THREADS` or a
//! scoped pool). Outputs are collected in input order either way, so
//! downstream reductions see identical sequences in both builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items per task the split overhead outweighs the work.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 256;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().with_min_len(MIN_CHUNK).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().with_min_len(MIN_CHUNK).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn try_map_range<U, E, F>(n: usize, f: F) -> Result<Vec<U>, E>
where
    U: Send,
    E: Send,
    F: Fn(usize) -> Result<U, E> + Sync + Send,
{
    (0..n).into_par_iter().with_min_len(MIN_CHUNK).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map_range<U, E, F>(n: usize, f: F) -> Result<Vec<U>, E>
where
    F: Fn(usize) -> Result<U, E>,
{
    (0..n).map(f).collect()
}
