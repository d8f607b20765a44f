//! Sequential/parallel execution of independent work items.
//!
//! Monte Carlo shot loops and per-index computations go through these helpers
//! so the same code runs data-parallel under rayon (feature `parallel`,
//! default) or sequentially. Outputs are indexed, so the merge is
//! order-independent and results are identical in both modes.

/// Which execution path to use for a batch of independent items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    /// Rayon work-stealing; falls back to sequential when the crate is built
    /// without the `parallel` feature.
    Parallel,
}

impl Mode {
    /// Default mode for this build.
    pub fn auto() -> Mode {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_indexed<T, F>(mode: Mode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match mode {
        Mode::Sequential => (0..n).map(f).collect(),
        Mode::Parallel => map_indexed_par(n, &f),
    }
}

#[cfg(feature = "parallel")]
fn map_indexed_par<T, F>(n: usize, f: &F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indexed_par<T, F>(n: usize, f: &F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_indexed(Mode::Sequential, 100, |i| i * i);
        let par = map_indexed(Mode::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);
    }
}
