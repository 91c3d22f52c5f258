//! Fan-out plumbing for the embarrassingly parallel parts of the crate.
//!
//! The verification suite runs a few hundred independent checks; each one
//! writes only its own output slot and the final reduction is ordered by
//! check id, so sequential and parallel execution produce byte-identical
//! reports. With the default `parallel` feature the fan-out uses a rayon
//! pool (size capped by the `LADDERLAB_THREADS` environment variable when
//! set); without the feature the same entry point degrades to a plain
//! sequential loop. `LADDERLAB_THREADS=1` forces sequential execution even
//! in a parallel build, which the bench suite uses for like-for-like
//! comparisons.

/// Requested execution mode for a fan-out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    /// Plain in-order loop on the calling thread.
    Sequential,
    /// Work-stealing pool (requires the `parallel` feature to take effect).
    Parallel,
}

/// The thread cap from `LADDERLAB_THREADS`, if set to a parseable value.
#[must_use]
pub fn thread_cap() -> Option<usize> {
    std::env::var("LADDERLAB_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
}

/// The mode a request will actually execute under: `Parallel` downgrades to
/// `Sequential` when the `parallel` feature is compiled out or the
/// environment caps the pool at one thread.
#[must_use]
pub fn effective_mode(requested: ExecMode) -> ExecMode {
    if !cfg!(feature = "parallel") {
        return ExecMode::Sequential;
    }
    match (requested, thread_cap()) {
        (ExecMode::Sequential, _) => ExecMode::Sequential,
        (ExecMode::Parallel, Some(0 | 1)) => ExecMode::Sequential,
        (ExecMode::Parallel, _) => ExecMode::Parallel,
    }
}

#[cfg(feature = "parallel")]
fn capped_pool() -> Option<&'static rayon::ThreadPool> {
    use std::sync::OnceLock;
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let cap = thread_cap()?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(cap)
            .build()
            .ok()
    })
    .as_ref()
}

/// Map `f` over `items`, preserving input order in the output.
pub fn map_indexed<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Send + Sync,
{
    match effective_mode(mode) {
        ExecMode::Sequential => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                let run = || items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
                match capped_pool() {
                    Some(pool) => pool.install(run),
                    None => run(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            unreachable!("effective_mode downgrades Parallel without the feature")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_map_preserves_order() {
        let items: Vec<usize> = (0..100).collect();
        let out = map_indexed(ExecMode::Sequential, &items, |i, &v| i * 1000 + v);
        assert_eq!(out.len(), 100);
        for (i, &v) in out.iter().enumerate() {
            assert_eq!(v, i * 1000 + i);
        }
    }

    #[test]
    fn parallel_map_matches_sequential() {
        let items: Vec<f64> = (0..257).map(|i| f64::from(i) * 0.5).collect();
        let seq = map_indexed(ExecMode::Sequential, &items, |i, &v| v.sin() + i as f64);
        let par = map_indexed(ExecMode::Parallel, &items, |i, &v| v.sin() + i as f64);
        assert_eq!(seq, par);
    }

    #[test]
    fn sequential_request_never_upgrades() {
        assert_eq!(effective_mode(ExecMode::Sequential), ExecMode::Sequential);
    }
}
