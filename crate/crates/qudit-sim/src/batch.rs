//! Parallel/sequential execution helpers.
//!
//! With the `parallel` feature enabled the batch functions fan work out over
//! rayon once the problem size crosses [`PAR_THRESHOLD`]; without it they
//! degrade to plain iteration. The `_seq` variants are always sequential and
//! exist so the benchmark suite can compare both paths within one build.
//! Results are collected in input order either way, so output is
//! deterministic regardless of thread scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum element count before rayon is engaged.
pub const PAR_THRESHOLD: usize = 1 << 12;

/// True when this build can actually run batches on multiple threads.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Map `f` over `items`, in parallel when available.
pub fn batch_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential reference for [`batch_map`].
pub fn batch_map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Build `out[i] = f(i)` for `i in 0..len`, in parallel for large `len`.
pub fn map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if len >= PAR_THRESHOLD {
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}

/// Sequential reference for [`map_indexed`].
pub fn map_indexed_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..len).map(f).collect()
}

/// Apply `f` to every element of `items` in place, in parallel when large.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() >= PAR_THRESHOLD {
            items.par_iter_mut().for_each(f);
            return;
        }
    }
    items.iter_mut().for_each(f);
}

/// Sequential reference for [`for_each_mut`].
pub fn for_each_mut_seq<T, F>(items: &mut [T], f: F)
where
    F: Fn(&mut T),
{
    items.iter_mut().for_each(f);
}

/// Run `f` inside a rayon pool of `threads` workers (`None` keeps the global
/// pool). Without the `parallel` feature this just calls `f`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build thread pool")
                .install(f),
            _ => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
