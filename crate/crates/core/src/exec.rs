//! Scheduling of independent indexed work items (trials, tuples, cases).
//!
//! Results are always reported by index, never by completion order, so an
//! executor that runs items concurrently produces the same output as
//! [`Sequential`].

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// The smallest `i < count` for which `f(i)` is `Some`, with its value.
    fn find_first<T, G>(&self, count: usize, f: G) -> Option<(usize, T)>
    where
        T: Send,
        G: Fn(usize) -> Option<T> + Sync + Send;

    /// `[f(0), ..., f(count - 1)]`.
    fn map<T, G>(&self, count: usize, f: G) -> Vec<T>
    where
        T: Send,
        G: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread, in index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn find_first<T, G>(&self, count: usize, f: G) -> Option<(usize, T)>
    where
        T: Send,
        G: Fn(usize) -> Option<T> + Sync + Send,
    {
        (0..count).find_map(|i| f(i).map(|v| (i, v)))
    }

    fn map<T, G>(&self, count: usize, f: G) -> Vec<T>
    where
        T: Send,
        G: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}
