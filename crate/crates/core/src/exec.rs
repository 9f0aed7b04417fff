//! Index-ordered batch evaluation.
//!
//! Work items are independent pure computations, so results are identical for
//! every worker count; only wall time changes. Without the `parallel` feature
//! every variant runs on the calling thread.

/// How many workers a batch may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Run on the calling thread.
    Sequential,
    /// A dedicated pool of exactly this many threads.
    Threads(usize),
    /// The global rayon pool.
    #[default]
    Auto,
}

/// Evaluates `f(0), f(1), …, f(n − 1)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match workers {
            Workers::Sequential | Workers::Threads(0 | 1) => (0..n).map(f).collect(),
            Workers::Auto => (0..n).into_par_iter().map(f).collect(),
            Workers::Threads(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).map(f).collect(),
            },
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        (0..n).map(f).collect()
    }
}
