//! Data-parallel fan-out over independent work items.
//!
//! With the `parallel` feature the items are mapped on the rayon pool;
//! without it, or when [`Execution::Sequential`] is requested, they run in
//! order on the calling thread. Results always come back in input order.

/// How independent branches of a computation are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually fans out in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map_items<I, T, F>(execution: Execution, items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if execution == Execution::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = execution;
    items.into_iter().map(f).collect()
}

/// Runs `f` with at most `jobs` worker threads (`None` keeps the global pool).
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        if let Some(jobs) = jobs {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}
