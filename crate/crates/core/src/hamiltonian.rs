//! Extended Hamiltonian, velocity refresh and the jump-probability bound.

use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::RandomSource;
use crate::schedule::{IndexDistribution, MassSchedule};
use crate::state::ExtendedState;

/// Draws `ṽ(0) ~ N(0, α⁻¹ M⁻¹)`.
pub fn sample_initial_velocity<R: RandomSource + ?Sized>(
    mass: &MassSpec,
    dim: usize,
    alpha: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut z = vec![0.0; dim];
    rng.fill_standard_normal(&mut z);
    let mut v = vec![0.0; dim];
    mass.chol_minv_mul(&z, &mut v);
    let scale = alpha.sqrt().recip();
    for vi in v.iter_mut() {
        *vi *= scale;
    }
    v
}

/// Kinetic and log-determinant part of the extended Hamiltonian at mass `α M`:
/// `½ α vᵀMv − ½ (d log α + log det M)`.
pub(crate) fn scaled_kinetic(mass: &MassSpec, v: &[f64], eta: f64) -> f64 {
    let alpha = (2.0 * eta).exp();
    0.5 * alpha * mass.quad_form(v) - 0.5 * (v.len() as f64 * 2.0 * eta + mass.log_det_m())
}

/// `H(x, k, ṽ) = U(x) − log ψ_K(k) + ½ ṽᵀ(α_k M)ṽ − ½ log det(α_k M)`.
///
/// Returns `+inf` without evaluating the potential when `ψ_K(k) = 0`.
pub fn extended_hamiltonian<M: PotentialModel + ?Sized>(
    model: &M,
    s: &ExtendedState,
    schedule: &MassSchedule,
    psi: &IndexDistribution,
    mass: &MassSpec,
) -> f64 {
    extended_h_at(model, &s.x, &s.v, s.k as i64, schedule, psi, mass)
}

pub(crate) fn extended_h_at<M: PotentialModel + ?Sized>(
    model: &M,
    x: &[f64],
    v: &[f64],
    k: i64,
    schedule: &MassSchedule,
    psi: &IndexDistribution,
    mass: &MassSpec,
) -> f64 {
    if !psi.in_support(k) {
        return f64::INFINITY;
    }
    model.potential(x) - psi.log_prob(k) + scaled_kinetic(mass, v, schedule.eta(k))
}

/// Chernoff bound on `P(χ²_d > 2Δ)`: `(2Δ/d)^{d/2} e^{d/2 − Δ}`.
pub fn chernoff_jump_bound(d: usize, delta: f64) -> f64 {
    let half_d = d as f64 / 2.0;
    (half_d * (delta / half_d).ln() + half_d - delta).exp()
}
