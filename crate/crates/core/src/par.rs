//! Deterministic batch helpers. With the `parallel` feature (default) these
//! fan out over a rayon pool; without it they are plain sequential loops.
//! All helpers are order-preserving maps, so results are bit-identical for
//! any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Run `f` inside a thread pool capped at `jobs` workers; `None` uses the
/// global default. Sequential builds ignore `jobs`.
#[cfg(feature = "parallel")]
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("failed to build thread pool")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> T) -> T {
    let _ = jobs;
    f()
}

/// Order-preserving indexed map.
#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Run two independent closures, potentially concurrently.
#[cfg(feature = "parallel")]
pub fn join<A: Send, B: Send>(
    fa: impl FnOnce() -> A + Send,
    fb: impl FnOnce() -> B + Send,
) -> (A, B) {
    rayon::join(fa, fb)
}

#[cfg(not(feature = "parallel"))]
pub fn join<A, B>(fa: impl FnOnce() -> A, fb: impl FnOnce() -> B) -> (A, B) {
    (fa(), fb())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_is_order_preserving() {
        let out = map_indexed(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn with_jobs_runs_closure() {
        assert_eq!(with_jobs(Some(2), || 7), 7);
        assert_eq!(with_jobs(None, || 7), 7);
    }
}
