//! Data-parallel execution of independent work items.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on the rayon
//! global pool; without it every mode runs sequentially. Results always come back in
//! input order, so output never depends on scheduling.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work in parallel.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to every item and collects the results in input order, stopping at an
/// error. When several items fail, the error of the earliest failing item is returned.
pub fn try_map<T, U, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => par_try_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn par_try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    use rayon::prelude::*;
    let results: Vec<Result<U>> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

#[cfg(not(feature = "parallel"))]
fn par_try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = try_map(Execution::Sequential, &items, |x| Ok(x * x)).unwrap();
        let par = try_map(Execution::Parallel, &items, |x| Ok(x * x)).unwrap();
        assert_eq!(seq, par);
        assert_eq!(par[999], 999 * 999);
    }

    #[test]
    fn first_error_wins() {
        let items: Vec<u64> = (0..100).collect();
        let r = try_map(Execution::Parallel, &items, |&x| {
            if x >= 10 {
                Err(Error::BudgetExceeded { required: x, budget: 0 })
            } else {
                Ok(x)
            }
        });
        assert_eq!(r, Err(Error::BudgetExceeded { required: 10, budget: 0 }));
    }
}
