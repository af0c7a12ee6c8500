//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it they are plain sequential loops with identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Runs `f` inside a pool of `jobs` threads when parallelism is enabled.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = jobs {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
