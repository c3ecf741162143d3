//! Deterministic fan-out helpers. With the `parallel` feature the work is
//! spread over the rayon pool; results never depend on the partition.

/// Folds `0..n` into per-worker accumulators and merges them. `merge` must
/// be associative and commutative.
pub(crate) fn fold_range<A, I, F, M>(n: u64, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().fold(&init, &fold).reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        (0..n).fold(init(), fold)
    }
}

/// Smallest `k` in `0..n` with `pred(k)`, evaluated over blocks of `block`
/// consecutive indices.
pub(crate) fn find_first<T, F>(n: u64, block: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    let blocks = n.div_ceil(block);
    let scan = |bi: u64| {
        let lo = bi * block;
        let hi = (lo + block).min(n);
        (lo..hi).find_map(&f)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().find_map_first(scan)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks).find_map(scan)
    }
}

/// First `Some` over consecutive blocks `[lo, hi)` of `0..n`, in block
/// order.
pub(crate) fn find_block_first<T, F>(n: u64, block: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64, u64) -> Option<T> + Sync + Send,
{
    find_first(n.div_ceil(block), 1, |bi| {
        let lo = bi * block;
        f(lo, (lo + block).min(n))
    })
}
