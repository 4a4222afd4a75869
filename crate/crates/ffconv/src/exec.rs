//! Trial-parallel execution.
//!
//! Campaigns and verification suites map an index range through a pure
//! per-trial function; every trial derives its own seed, so the results are
//! identical whether the map runs on the rayon pool (default `parallel`
//! feature) or sequentially (feature disabled, or the explicit sequential
//! entry points used as bench baselines). Output order is trial order
//! either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, in parallel when the `parallel` feature is on.
/// The `FFCONV_THREADS` environment variable caps the worker count.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match worker_cap() {
        Some(threads) => {
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).into_par_iter().map(&f).collect(),
            }
        }
        None => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept available under every feature set so
/// benchmarks can compare against the parallel path directly.
pub(crate) fn map_indexed_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn worker_cap() -> Option<usize> {
    let requested = std::env::var("FFCONV_THREADS")
        .ok()?
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)?;
    // A cap, not a raise: never exceed the machine's parallelism.
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(requested);
    Some(requested.min(available))
}

/// Mixes a master seed with a trial index into an independent per-trial
/// seed (splitmix64 finalizer on both inputs). Trials are replayable and
/// schedulable in any order.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial_index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
