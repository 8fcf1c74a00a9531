use crate::dynamics::Integrator;
use crate::error::{check_dim, Error, Result};
use crate::hamiltonian::sample_initial_velocity;
use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::RandomSource;

use super::{ensure_finite, StepResult};

#[derive(Debug, Clone)]
pub struct HmcConfig {
    pub eps: f64,
    pub n_leapfrog: usize,
    pub mass: MassSpec,
}

impl HmcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        if self.n_leapfrog == 0 {
            return Err(Error::InvalidConfig("n_leapfrog must be at least 1".into()));
        }
        Ok(())
    }
}

/// One standard HMC transition: `n_leapfrog` steps from a fresh `v ~ N(0, M⁻¹)`,
/// endpoint accepted iff `Λ < exp(−ΔH)`.
pub fn hmc_step<M, R>(model: &M, x: &[f64], cfg: &HmcConfig, rng: &mut R) -> Result<StepResult>
where
    M: PotentialModel + ?Sized,
    R: RandomSource + ?Sized,
{
    let d = model.dim();
    check_dim(d, x.len())?;
    ensure_finite(x)?;
    let log_lambda = rng.uniform().ln();
    let v0 = sample_initial_velocity(&cfg.mass, d, 1.0, rng);
    let h0 = model.potential(x) + 0.5 * cfg.mass.quad_form(&v0);

    let mut integ = Integrator::new(model, &cfg.mass, x.to_vec(), v0);
    for _ in 0..cfg.n_leapfrog {
        if integ.step(1.0, cfg.eps).is_err() {
            return Ok(StepResult::rejected(x, None, 1, 0));
        }
    }
    let h1 = model.potential(&integ.x) + 0.5 * cfg.mass.quad_form(&integ.v);
    let delta_h = h1 - h0;
    if log_lambda < -delta_h {
        Ok(StepResult {
            accepted_move: integ.x.as_slice() != x,
            next_x: integ.x,
            delta_h,
            k0: None,
            proposals_used: 1,
            acceptable_found: 1,
            h_trace: None,
        })
    } else {
        Ok(StepResult::rejected(x, None, 1, 0))
    }
}
