//! Order-stable batch evaluation: parallel when the `parallel` feature is
//! enabled (the default), sequential otherwise. Results always come back
//! in input order, so reports assembled from batches are deterministic
//! regardless of scheduling.

/// True when this build distributes batches across threads.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Applies `f` to every item, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_all<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Applies `f` to every item, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map_all<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// The sequential reference path with the same signature as [`map_all`],
/// kept unconditionally so one build can benchmark both.
pub fn map_all_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// True iff `pred` holds on every item. Evaluates the whole batch (checks
/// here are exhaustive by design, not short-circuiting).
pub fn for_all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    map_all(items, |t| pred(t)).into_iter().all(|b| b)
}
