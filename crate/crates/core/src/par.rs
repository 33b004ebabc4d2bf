//! Execution mode for the data-parallel loops of the drivers.
//!
//! Every parallel map preserves input order, so results never depend on
//! the mode or on the thread count. Without the `parallel` feature the
//! parallel mode falls back to the sequential loop.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `--threads 1` is the sequential reference semantics.
    pub fn from_threads(threads: usize) -> Self {
        if threads <= 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    /// Order-preserving map.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Index of the first item satisfying `pred`, in input order.
    pub fn position_first<T, F>(self, items: &[T], pred: F) -> Option<usize>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().position_first(pred),
            _ => items.iter().position(pred),
        }
    }
}

/// Runs `job` on a pool with the given number of worker threads.
pub fn with_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if threads > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(job);
            }
        }
    }
    let _ = threads;
    job()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * x % 97);
        let par = with_threads(4, || Exec::Parallel.map(&items, |x| x * x % 97));
        assert_eq!(seq, par);
        assert_eq!(
            Exec::Sequential.position_first(&items, |&x| x > 500 && x % 7 == 0),
            Exec::Parallel.position_first(&items, |&x| x > 500 && x % 7 == 0)
        );
    }
}
