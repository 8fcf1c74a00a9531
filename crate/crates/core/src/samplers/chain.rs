use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{RandomSource, RngStream};

use super::StepResult;

/// States `X⁽⁰⁾ … X⁽ᴵ⁾` and the per-iteration kernel diagnostics.
#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub states: Vec<Vec<f64>>,
    pub step_results: Vec<StepResult>,
    pub wall_time: Duration,
}

impl ChainOutput {
    pub fn acceptance_rate(&self) -> f64 {
        if self.step_results.is_empty() {
            return 0.0;
        }
        let moved = self.step_results.iter().filter(|s| s.accepted_move).count();
        moved as f64 / self.step_results.len() as f64
    }

    /// Trace of coordinate `i` across all stored states.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    /// Equality of everything except wall time.
    pub fn same_draws(&self, other: &ChainOutput) -> bool {
        self.states == other.states
            && self.step_results.len() == other.step_results.len()
            && self
                .step_results
                .iter()
                .zip(&other.step_results)
                .all(|(a, b)| a.next_x == b.next_x && a.delta_h.to_bits() == b.delta_h.to_bits() && a.k0 == b.k0 && a.proposals_used == b.proposals_used)
    }
}

/// Iterates `kernel` from `x0` for `iters` steps.
pub fn run_chain<K, R>(mut kernel: K, x0: &[f64], iters: usize, rng: &mut R) -> Result<ChainOutput>
where
    K: FnMut(&[f64], &mut R) -> Result<StepResult>,
    R: RandomSource,
{
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState);
    }
    let start = Instant::now();
    let mut states = Vec::with_capacity(iters + 1);
    let mut step_results = Vec::with_capacity(iters);
    states.push(x0.to_vec());
    for _ in 0..iters {
        let step = kernel(states.last().expect("nonempty"), rng)?;
        states.push(step.next_x.clone());
        step_results.push(step);
    }
    Ok(ChainOutput {
        states,
        step_results,
        wall_time: start.elapsed(),
    })
}

/// Runs one chain per initial state. Chain `i` is driven by
/// `RngStream::derive(base_seed, i)` and by the kernel `factory(i)`, so the
/// output does not depend on `n_workers`.
pub fn run_parallel_chains<F, K>(
    factory: F,
    inits: &[Vec<f64>],
    iters: usize,
    base_seed: u64,
    n_workers: usize,
) -> Result<Vec<ChainOutput>>
where
    F: Fn(usize) -> K + Sync,
    K: FnMut(&[f64], &mut RngStream) -> Result<StepResult>,
{
    if inits.is_empty() {
        return Err(Error::InvalidConfig("at least one initial state is required".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n_workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| {
        inits
            .par_iter()
            .enumerate()
            .map(|(i, x0)| {
                let mut rng = RngStream::derive(base_seed, i as u64);
                run_chain(factory(i), x0, iters, &mut rng)
            })
            .collect()
    })
}
