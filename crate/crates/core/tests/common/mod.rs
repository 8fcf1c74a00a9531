#![allow(dead_code)]

use tht_core::mass::MassSpec;
use tht_core::schedule::{IndexDistribution, MassSchedule};
use tht_core::state::ThtConfig;

/// Tempered-transition settings with `ψ_K` uniform on `|k| ≤ half_width`,
/// `L = 2·half_width + 1` and `N = K + 2·half_width`.
pub fn windowed_tht(period: usize, eta_star: f64, eps: f64, gamma_hat: f64, half_width: usize) -> ThtConfig {
    ThtConfig {
        eps,
        a: ThtConfig::time_scale_for_gamma(gamma_hat),
        n_acceptable: 2 * half_width + 1,
        max_proposals: period + 2 * half_width,
        schedule: MassSchedule::cosine(eta_star, 0.0, period).unwrap(),
        psi: IndexDistribution::windowed_uniform(period, half_width).unwrap(),
        mass: MassSpec::Identity,
        trace_hamiltonian: false,
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    Normal::standard().cdf(x)
}

/// Prints one result line and returns whether it passed.
pub fn report(label: &str, pass: bool, detail: &str) -> bool {
    println!("{} {label}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}
