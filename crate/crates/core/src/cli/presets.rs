//! Default sampler settings for each study.

use crate::error::Result;
use crate::mass::MassSpec;
use crate::samplers::HmcConfig;
use crate::schedule::{IndexDistribution, MassSchedule};
use crate::state::ThtConfig;

use super::config::SamplerSection;

impl SamplerSection {
    pub fn to_tht(&self) -> Result<ThtConfig> {
        let cfg = ThtConfig {
            eps: self.eps,
            a: ThtConfig::time_scale_for_gamma(self.gamma_hat),
            n_acceptable: self.n_acceptable,
            max_proposals: self.max_proposals,
            schedule: MassSchedule::cosine(self.eta_star, 0.0, self.period)?,
            psi: IndexDistribution::windowed_uniform(self.period, self.psi_half_width)?,
            mass: MassSpec::Identity,
            trace_hamiltonian: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Two far-apart one-dimensional modes: one cosine cycle of 500 steps.
pub fn far_pair_1d() -> SamplerSection {
    SamplerSection {
        eps: 0.1,
        eta_star: 6.0,
        period: 500,
        gamma_hat: 2.0,
        psi_half_width: 4,
        n_acceptable: 9,
        max_proposals: 508,
    }
}

/// Two far-apart modes in high dimension: one cosine cycle of 1500 steps.
pub fn far_pair_high_dim() -> SamplerSection {
    SamplerSection { period: 1500, max_proposals: 1508, ..far_pair_1d() }
}

/// Sensor localization locations.
pub fn sensor() -> SamplerSection {
    SamplerSection {
        eps: 0.001,
        eta_star: 2.0,
        period: 2000,
        gamma_hat: 2.0,
        psi_half_width: 30,
        n_acceptable: 20,
        max_proposals: 2200,
    }
}

/// Location kernel of the untempered Gibbs comparison.
pub fn sensor_gibbs_hmc() -> HmcConfig {
    HmcConfig { eps: 0.001, n_leapfrog: 60, mass: MassSpec::Identity }
}

/// Normal restricted to two intervals, bridged by a wide normal.
pub fn gap_bridge() -> SamplerSection {
    SamplerSection {
        eps: 0.2,
        eta_star: 3.0,
        period: 1000,
        gamma_hat: 2.0,
        psi_half_width: 5,
        n_acceptable: 11,
        max_proposals: 1010,
    }
}

/// Slow pilot cycle used by the tuning advisor.
pub fn pilot() -> SamplerSection {
    SamplerSection {
        eps: 0.02,
        eta_star: 2.0,
        period: 20_000,
        gamma_hat: 2.0,
        psi_half_width: 5,
        n_acceptable: 11,
        max_proposals: 20_010,
    }
}
