use crate::dynamics::Integrator;
use crate::error::{check_dim, Error, Result};
use crate::hamiltonian::sample_initial_velocity;
use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::RandomSource;

use super::{ensure_finite, StepResult};

/// Mass-enhanced HMC with sequential proposals.
#[derive(Debug, Clone)]
pub struct EnhancedConfig {
    pub mass: MassSpec,
    /// Mass enhancement ratio; the dynamics run with mass `alpha·M`.
    pub alpha: f64,
    pub eps_tilde: f64,
    pub max_proposals: usize,
    pub n_acceptable: usize,
}

impl EnhancedConfig {
    pub fn validate(&self) -> Result<()> {
        // alpha = 1 is allowed: it reduces to sequential-proposal HMC.
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.eps_tilde > 0.0 && self.eps_tilde.is_finite()) {
            return Err(Error::InvalidConfig("eps_tilde must be positive".into()));
        }
        if self.n_acceptable == 0 || self.n_acceptable > self.max_proposals {
            return Err(Error::InvalidConfig("need 1 <= L <= N".into()));
        }
        Ok(())
    }
}

/// Candidates along one enhanced-mass leapfrog path are judged with the
/// original Hamiltonian `U + ½ WᵀMW` against a single shared `Λ`; the `L`-th
/// acceptable one is returned.
pub fn mass_enhanced_step<M, R>(model: &M, x: &[f64], cfg: &EnhancedConfig, rng: &mut R) -> Result<StepResult>
where
    M: PotentialModel + ?Sized,
    R: RandomSource + ?Sized,
{
    let d = model.dim();
    check_dim(d, x.len())?;
    ensure_finite(x)?;
    let log_lambda = rng.uniform().ln();
    let w0 = sample_initial_velocity(&cfg.mass, d, 1.0, rng);
    let h0 = model.potential(x) + 0.5 * cfg.mass.quad_form(&w0);

    let mut integ = Integrator::new(model, &cfg.mass, x.to_vec(), w0);
    let mut found = 0;
    for n in 1..=cfg.max_proposals {
        if integ.step(cfg.alpha, cfg.eps_tilde).is_err() {
            return Ok(StepResult::rejected(x, None, n, found));
        }
        let h = model.potential(&integ.x) + 0.5 * cfg.mass.quad_form(&integ.v);
        if log_lambda < h0 - h {
            found += 1;
            if found == cfg.n_acceptable {
                return Ok(StepResult {
                    accepted_move: integ.x.as_slice() != x,
                    next_x: integ.x,
                    delta_h: h - h0,
                    k0: None,
                    proposals_used: n,
                    acceptable_found: found,
                    h_trace: None,
                });
            }
        }
    }
    Ok(StepResult::rejected(x, None, cfg.max_proposals, found))
}
