//! Sequential/parallel execution of index-parallel kernels.
//!
//! Every kernel maps an index range to per-index results, collects them in index order and
//! reduces sequentially (or with [`tree_sum`]). The reduction topology never depends on the
//! scheduler, so `Sequential` and `Parallel` produce identical bits.

/// How index-parallel kernels are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential evaluation when the crate is built without `parallel`.
    #[default]
    Parallel,
}

impl Execution {
    /// `true` when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub(crate) fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sorts `values` ascending under `f64::total_cmp`.
pub(crate) fn sort_f64(exec: Execution, values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        values.par_sort_unstable_by(f64::total_cmp);
        return;
    }
    let _ = exec;
    values.sort_unstable_by(f64::total_cmp);
}

/// Pairwise summation with a topology fixed by `values.len()` alone.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (l, r) = values.split_at(n / 2);
            tree_sum(l) + tree_sum(r)
        }
    }
}
