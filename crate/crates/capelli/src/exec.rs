//! Rayon-backed executor.

use capelli_core::exec::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// A pool with `threads` workers; `None` uses the machine's parallelism.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t.max(1));
        }
        Ok(Self {
            pool: builder.build()?,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn find_first<T, G>(&self, count: usize, f: G) -> Option<(usize, T)>
    where
        T: Send,
        G: Fn(usize) -> Option<T> + Sync + Send,
    {
        self.pool.install(|| {
            (0..count)
                .into_par_iter()
                .find_map_first(|i| f(i).map(|v| (i, v)))
        })
    }

    fn map<T, G>(&self, count: usize, f: G) -> Vec<T>
    where
        T: Send,
        G: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..count).into_par_iter().map(f).collect())
    }
}
