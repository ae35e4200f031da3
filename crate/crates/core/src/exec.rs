//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature (default) the sweeps run on rayon's thread
//! pool; without it only [`Execution::Sequential`] exists. Both strategies
//! return results in input order, so output never depends on scheduling.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Number of indices in `range` satisfying `pred`.
    pub fn count<F>(self, range: Range<u64>, pred: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            Execution::Sequential => range.filter(|&i| pred(i)).count() as u64,
            #[cfg(feature = "parallel")]
            Execution::Parallel => range.into_par_iter().filter(|&i| pred(i)).count() as u64,
        }
    }

    /// First item (in input order) for which `f` returns `Some`.
    pub fn find_map_first<T, U, F>(self, items: &[T], f: F) -> Option<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Option<U> + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().find_map(f),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().find_map_first(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strategies() -> Vec<Execution> {
        vec![
            Execution::Sequential,
            #[cfg(feature = "parallel")]
            Execution::Parallel,
        ]
    }

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        for exec in strategies() {
            assert_eq!(exec.map(&items, |x| x * x)[999], 998_001);
            assert_eq!(exec.count(0..1000, |i| i % 3 == 0), 334);
            assert_eq!(
                exec.find_map_first(&items, |&x| (x > 10 && x % 7 == 0).then_some(x)),
                Some(14)
            );
        }
    }
}
