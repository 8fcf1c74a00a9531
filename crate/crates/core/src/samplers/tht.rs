use crate::dynamics::{half_step_params, Integrator};
use crate::error::{check_dim, Result};
use crate::hamiltonian::{extended_h_at, sample_initial_velocity};
use crate::model::PotentialModel;
use crate::rng::RandomSource;
use crate::state::ThtConfig;

use super::{ensure_finite, HTracePoint, StepResult};

/// One tempered Hamiltonian transition.
///
/// Draws `Λ`, then `k₀ ~ ψ_K`, then `ṽ(0) ~ N(0, α_{k₀}⁻¹M⁻¹)`, and applies the
/// proposal map up to `N` times. Candidate `n` is acceptable iff `k₀ + n` lies
/// in the support of `ψ_K` and `Λ < exp(H₀ − H(Yₙ, k₀+n, Wₙ))`; the potential is
/// not evaluated off the support. The `L`-th acceptable candidate is returned,
/// including when it is found at `n = N`.
pub fn tht_step<M, R>(model: &M, x: &[f64], cfg: &ThtConfig, rng: &mut R) -> Result<StepResult>
where
    M: PotentialModel + ?Sized,
    R: RandomSource + ?Sized,
{
    let d = model.dim();
    check_dim(d, x.len())?;
    ensure_finite(x)?;
    let log_lambda = rng.uniform().ln();
    let k0 = cfg.psi.sample_with(rng.uniform());
    let v0 = sample_initial_velocity(&cfg.mass, d, cfg.schedule.alpha(k0 as i64), rng);
    let h0 = extended_h_at(model, x, &v0, k0 as i64, &cfg.schedule, &cfg.psi, &cfg.mass);

    let mut trace = cfg.trace_hamiltonian.then(Vec::new);
    let mut integ = Integrator::new(model, &cfg.mass, x.to_vec(), v0);
    let mut found = 0;
    let mut used = 0;
    for n in 1..=cfg.max_proposals {
        used = n;
        let k_prev = (k0 + n - 1) as i64;
        let (alpha, step) = half_step_params(&cfg.schedule, cfg.eps, cfg.a, k_prev);
        if integ.step(alpha, step).is_err() {
            break;
        }
        let k = k_prev + 1;
        if !cfg.psi.in_support(k) {
            continue;
        }
        let h = extended_h_at(model, &integ.x, &integ.v, k, &cfg.schedule, &cfg.psi, &cfg.mass);
        let acceptable = log_lambda < h0 - h;
        if let Some(t) = trace.as_mut() {
            t.push(HTracePoint { n, delta_h: h - h0, acceptable });
        }
        if acceptable {
            found += 1;
            if found == cfg.n_acceptable {
                return Ok(StepResult {
                    accepted_move: integ.x.as_slice() != x,
                    next_x: integ.x,
                    delta_h: h - h0,
                    k0: Some(k0),
                    proposals_used: n,
                    acceptable_found: found,
                    h_trace: trace,
                });
            }
        }
    }
    let mut out = StepResult::rejected(x, Some(k0), used, found);
    out.h_trace = trace;
    Ok(out)
}
