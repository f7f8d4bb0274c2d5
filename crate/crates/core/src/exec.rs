//! Execution policy for the data-parallel loops (convolution, sandwich sums,
//! echelon updates). All arithmetic is exact, so both policies produce
//! identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Folds `items` into one accumulator. Under `Exec::Parallel` the slice is
/// split into chunks of `chunk` items, each folded independently, and the
/// partial accumulators merged pairwise.
pub(crate) fn fold_chunks<T, A, I, F, M>(exec: Exec, items: &[T], chunk: usize, init: I, fold: F, merge: M) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &T) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    match exec {
        Exec::Sequential => {
            let _ = (chunk, &merge);
            items.iter().fold(init(), fold)
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_chunks(chunk.max(1)).map(|c| c.iter().fold(init(), &fold)).reduce(&init, &merge),
    }
}

/// Applies `f` to every element of `items` in place.
pub(crate) fn for_each_mut<T, F>(exec: Exec, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter_mut().for_each(f),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter_mut().for_each(f),
    }
}
