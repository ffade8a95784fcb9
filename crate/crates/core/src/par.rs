//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in input order, so callers observe the same
//! output whether or not the `parallel` feature is enabled.

/// Execution strategy for the brute-force loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

// Below this many items the thread-pool overhead dominates.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: u64 = 256;

/// Keeps the values in `0..n` for which `f` returns `Some`, in ascending order.
pub fn filter_map_range<T, F>(exec: Exec, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && n >= MIN_PARALLEL_LEN {
        use rayon::prelude::*;
        return (0..n).into_par_iter().filter_map(f).collect();
    }
    let _ = exec;
    (0..n).filter_map(f).collect()
}

/// True iff `f` holds for some value in `0..n`.
pub fn any_range<F>(exec: Exec, n: u64, f: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && n >= MIN_PARALLEL_LEN {
        use rayon::prelude::*;
        return (0..n).into_par_iter().any(f);
    }
    let _ = exec;
    (0..n).any(f)
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let f = |x: u64| (x % 7 == 3).then_some(x * 2);
        let a = filter_map_range(Exec::Sequential, 5000, f);
        let b = filter_map_range(Exec::Parallel, 5000, f);
        assert_eq!(a, b);
        assert!(any_range(Exec::Parallel, 5000, |x| x == 4999));
        assert!(!any_range(Exec::Sequential, 10, |x| x > 10));
    }
}
