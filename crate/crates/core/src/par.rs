//! Data-parallel helpers. With the `parallel` feature these fan out over a
//! rayon pool; without it they run sequentially. Results are returned in
//! input order either way, so callers are deterministic regardless of the
//! worker count.

#[cfg(feature = "parallel")]
pub fn maybe_par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn maybe_par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

pub fn maybe_par_flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    maybe_par_map(items, f).into_iter().flatten().collect()
}

/// Sequential twins, kept public so benchmarks can compare both code paths
/// under one build.
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

pub fn seq_flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> Vec<R>,
{
    items.iter().flat_map(f).collect()
}
