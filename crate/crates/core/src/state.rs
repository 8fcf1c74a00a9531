use crate::error::{Error, Result};
use crate::mass::MassSpec;
use crate::schedule::{IndexDistribution, MassSchedule};

/// A point `(x, k, ṽ)` of the extended space; `k` is kept reduced mod `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    pub x: Vec<f64>,
    pub k: usize,
    pub v: Vec<f64>,
}

impl ExtendedState {
    pub fn new(x: Vec<f64>, k: i64, v: Vec<f64>, period: usize) -> Result<Self> {
        crate::error::check_dim(x.len(), v.len())?;
        Ok(ExtendedState {
            x,
            k: k.rem_euclid(period as i64) as usize,
            v,
        })
    }

    /// The involution `(x, k, ṽ) ↦ (x, −k mod K, −ṽ)`.
    pub fn flipped(&self, period: usize) -> Self {
        ExtendedState {
            x: self.x.clone(),
            k: (period - self.k) % period,
            v: self.v.iter().map(|v| -v).collect(),
        }
    }
}

/// Tuning of one tempered Hamiltonian transition.
#[derive(Debug, Clone)]
pub struct ThtConfig {
    /// Baseline leapfrog step `ε`.
    pub eps: f64,
    /// Time-scale coefficient; the step at schedule position `k` is `ε·α_k^a`.
    pub a: f64,
    /// The `L`-th acceptable candidate becomes the next state.
    pub n_acceptable: usize,
    /// At most `N` candidates are proposed per iteration.
    pub max_proposals: usize,
    pub schedule: MassSchedule,
    pub psi: IndexDistribution,
    pub mass: MassSpec,
    /// Record the extended Hamiltonian at every proposal in [`StepResult::h_trace`](crate::samplers::StepResult).
    pub trace_hamiltonian: bool,
}

impl ThtConfig {
    /// `a = 2/(γ̂ + 2)`, the coefficient that keeps `ṽe^{aη}` at constant amplitude for `U ∝ ‖x‖^γ̂`.
    pub fn time_scale_for_gamma(gamma_hat: f64) -> f64 {
        2.0 / (gamma_hat + 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        if !self.a.is_finite() {
            return Err(Error::InvalidConfig("a must be finite".into()));
        }
        if self.n_acceptable == 0 || self.n_acceptable > self.max_proposals {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= L <= N, got L = {}, N = {}",
                self.n_acceptable, self.max_proposals
            )));
        }
        if self.schedule.period() != self.psi.period() {
            return Err(Error::InvalidConfig(format!(
                "schedule period {} differs from index distribution period {}",
                self.schedule.period(),
                self.psi.period()
            )));
        }
        Ok(())
    }
}
