//! Deterministic worker pool: work items are indexed, results are
//! collected by index, so the assembled output is identical for any
//! worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Run `f(0..n)` on up to `threads` workers and return results in index
/// order.
pub fn run_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                *slots[i].lock().expect("worker poisoned a result slot") = Some(value);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("worker poisoned a result slot")
                .expect("work item was never executed")
        })
        .collect()
}

/// Replicate-parallel extinction ensemble, bit-identical to the serial
/// `ghost_core::mean_extinction_time` for any thread count.
pub fn parallel_extinction_samples(
    model: &ghost_core::ModelSpec,
    cfg: &ghost_core::SsaRunConfig,
    index_offset: u64,
    threads: usize,
) -> Result<Vec<ghost_core::ExtinctionSample>, ghost_core::SsaError> {
    let results = run_indexed(cfg.n_replicates as usize, threads, |i| {
        ghost_core::simulate_to_extinction(model, cfg, index_offset + i as u64)
    });
    results.into_iter().collect()
}

/// A `ReplicateRunner` backed by the worker pool, for the `_with` variants
/// of the core ensemble functions.
pub fn pool_runner(
    threads: usize,
) -> impl Fn(
    &ghost_core::ModelSpec,
    &ghost_core::SsaRunConfig,
    u64,
) -> Result<Vec<ghost_core::ExtinctionSample>, ghost_core::SsaError> {
    move |model, cfg, offset| parallel_extinction_samples(model, cfg, offset, threads)
}
