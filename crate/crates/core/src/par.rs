//! Data-parallel execution over independent work items.
//!
//! With the `parallel` feature the items run on a rayon pool; without it (or
//! with [`Execution::Sequential`]) they run in a plain loop. Output order is
//! always the item index order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global rayon pool.
    #[default]
    Parallel,
    ParallelWith { threads: usize },
}

impl Execution {
    /// `CQIE_THREADS`-style cap; `None` or `0` means no cap.
    pub fn with_thread_cap(cap: Option<usize>) -> Self {
        match cap {
            Some(1) => Execution::Sequential,
            Some(t) if t > 1 => Execution::ParallelWith { threads: t },
            _ => Execution::Parallel,
        }
    }
}

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::ParallelWith { threads } => {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).map(f).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        _ => (0..n).map(f).collect(),
    }
}
