//! MCMC kernels and chain runners.
//!
//! Every kernel draws `Λ ~ Uniform(0, 1)` first and the velocity second, so
//! degenerate parameterizations of different kernels replay identical
//! trajectories from a shared seed.

mod chain;
mod enhanced;
mod hmc;
mod tht;

pub use chain::{run_chain, run_parallel_chains, ChainOutput};
pub use enhanced::{mass_enhanced_step, EnhancedConfig};
pub use hmc::{hmc_step, HmcConfig};
pub use tht::tht_step;

/// One extended-Hamiltonian evaluation recorded along a proposal sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct HTracePoint {
    /// Proposal number `n` (1-based).
    pub n: usize,
    /// `H(Yₙ, k₀ + n, Wₙ) − H₀`.
    pub delta_h: f64,
    pub acceptable: bool,
}

/// Outcome of one kernel iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub next_x: Vec<f64>,
    /// The chain moved (`next_x ≠ x`).
    pub accepted_move: bool,
    /// Hamiltonian increment at the accepted candidate; NaN when nothing was accepted.
    pub delta_h: f64,
    /// Starting schedule index (tempered transitions only).
    pub k0: Option<usize>,
    pub proposals_used: usize,
    pub acceptable_found: usize,
    /// Filled only when tracing is enabled in the configuration.
    pub h_trace: Option<Vec<HTracePoint>>,
}

impl StepResult {
    pub(crate) fn rejected(x: &[f64], k0: Option<usize>, proposals_used: usize, acceptable_found: usize) -> Self {
        StepResult {
            next_x: x.to_vec(),
            accepted_move: false,
            delta_h: f64::NAN,
            k0,
            proposals_used,
            acceptable_found,
            h_trace: None,
        }
    }
}

pub(crate) fn ensure_finite(x: &[f64]) -> crate::Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(crate::Error::NonFiniteState)
    }
}

#[cfg(test)]
mod tests;
