use serde::Serialize;

use crate::dynamics::{half_step_params, Integrator};
use crate::error::{check_dim, Error, Result};
use crate::hamiltonian::{sample_initial_velocity, scaled_kinetic};
use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::RandomSource;
use crate::schedule::MassSchedule;
use crate::state::ThtConfig;

use super::series::estimate_oscillation_frequency;

/// Settings of the slow pilot path.
#[derive(Debug, Clone)]
pub struct PilotOptions {
    pub eps: f64,
    /// Steps in the single schedule cycle.
    pub period: usize,
    /// Coordinate of `v̄` whose amplitude is scored.
    pub coordinate: usize,
    pub mass: MassSpec,
    /// Number of windows used for the frequency range.
    pub windows: usize,
}

impl Default for PilotOptions {
    fn default() -> Self {
        PilotOptions { eps: 0.02, period: 20_000, coordinate: 0, mass: MassSpec::Identity, windows: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningAdvice {
    pub a_hat: f64,
    pub gamma_hat: f64,
    pub k_min: usize,
    pub eps_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// Amplitude-drift score per candidate, `+∞` for diverged pilots.
    pub scores: Vec<f64>,
}

/// Smallest period giving at least five slow oscillations per cycle.
pub fn k_min_for(eps: f64, rho_min: f64) -> usize {
    (5.0 / (eps * rho_min)).ceil() as usize
}

/// Largest baseline step giving at least ten steps per fast oscillation.
pub fn eps_max_for(rho_max: f64) -> f64 {
    1.0 / (10.0 * rho_max)
}

/// `v̄ = ṽ·e^{aη}` for one coordinate along a slow pilot cycle.
pub fn pilot_vbar_trace<M: PotentialModel + ?Sized>(
    model: &M,
    start: &[f64],
    v0: &[f64],
    schedule: &MassSchedule,
    a: f64,
    opts: &PilotOptions,
) -> Result<Vec<f64>> {
    let mut integ = Integrator::new(model, &opts.mass, start.to_vec(), v0.to_vec());
    let mut trace = Vec::with_capacity(opts.period + 1);
    trace.push(v0[opts.coordinate] * (a * schedule.eta(0)).exp());
    for k in 0..opts.period as i64 {
        let (alpha, step) = half_step_params(schedule, opts.eps, a, k);
        integ.step(alpha, step)?;
        trace.push(integ.v[opts.coordinate] * (a * schedule.eta(k + 1)).exp());
    }
    Ok(trace)
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// `|log RMS(v̄) near the schedule peak − log RMS(v̄) near its trough|`.
fn amplitude_drift(trace: &[f64]) -> f64 {
    let k = trace.len() - 1;
    let low = &trace[..k / 8];
    let high = &trace[3 * k / 8..5 * k / 8];
    (rms(high).ln() - rms(low).ln()).abs()
}

/// Chooses the time-scale coefficient and the period/step bounds from slow
/// pilot paths started at `pilot_start`.
///
/// Every candidate `a` is run from the same initial velocity along one cosine
/// cycle of amplitude `eta_star`; the candidate whose `v̄` amplitude changes
/// least between the trough and the peak of the schedule wins. The frequency
/// range comes from windows of the winning trace.
pub fn recommend_tuning<M, R>(
    model: &M,
    pilot_start: &[f64],
    eta_star: f64,
    a_grid: &[f64],
    opts: &PilotOptions,
    rng: &mut R,
) -> Result<TuningAdvice>
where
    M: PotentialModel + ?Sized,
    R: RandomSource + ?Sized,
{
    check_dim(model.dim(), pilot_start.len())?;
    if a_grid.is_empty() || opts.coordinate >= model.dim() || opts.period < 16 {
        return Err(Error::InvalidConfig("pilot needs a nonempty grid, a valid coordinate and period >= 16".into()));
    }
    opts.mass.validate(model.dim())?;
    let schedule = MassSchedule::cosine(eta_star, 0.0, opts.period)?;
    let v0 = sample_initial_velocity(&opts.mass, model.dim(), schedule.alpha(0), rng);

    let traces: Vec<Option<Vec<f64>>> = a_grid
        .iter()
        .map(|&a| pilot_vbar_trace(model, pilot_start, &v0, &schedule, a, opts).ok())
        .collect();
    let scores: Vec<f64> = traces
        .iter()
        .map(|t| t.as_deref().map_or(f64::INFINITY, amplitude_drift))
        .collect();
    let best = scores
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Error::PilotDiverged)?;
    let trace = traces[best].as_ref().expect("finite score has a trace");

    let width = (trace.len() / opts.windows.max(1)).max(4);
    let rhos: Vec<f64> = trace
        .chunks(width)
        .map(|w| estimate_oscillation_frequency(w, opts.eps))
        .filter(|r| *r > 0.0)
        .collect();
    let rho_min = rhos.iter().cloned().fold(f64::INFINITY, f64::min);
    let rho_max = rhos.iter().cloned().fold(0.0, f64::max);
    if rhos.is_empty() {
        return Err(Error::PilotDiverged);
    }
    let a_hat = a_grid[best];
    Ok(TuningAdvice {
        a_hat,
        gamma_hat: 2.0 / a_hat - 2.0,
        k_min: k_min_for(opts.eps, rho_min),
        eps_max: eps_max_for(rho_max),
        rho_min,
        rho_max,
        scores,
    })
}

/// Extended-Hamiltonian increments `(n, H(Yₙ, k₀+n, Wₙ) − H₀)` along one full
/// sweep of `max_proposals` steps, without acceptance logic. The `−log ψ_K`
/// term is left out so that every step is recorded. A non-finite state ends
/// the trace early.
pub fn delta_h_trace<M, R>(model: &M, x0: &[f64], cfg: &ThtConfig, rng: &mut R) -> Result<Vec<(usize, f64)>>
where
    M: PotentialModel + ?Sized,
    R: RandomSource + ?Sized,
{
    check_dim(model.dim(), x0.len())?;
    let k0 = cfg.psi.sample_with(rng.uniform());
    let v0 = sample_initial_velocity(&cfg.mass, model.dim(), cfg.schedule.alpha(k0 as i64), rng);
    Ok(delta_h_trace_from(model, x0, &v0, k0, cfg))
}

/// [`delta_h_trace`] from a given starting index and velocity.
pub fn delta_h_trace_from<M: PotentialModel + ?Sized>(
    model: &M,
    x0: &[f64],
    v0: &[f64],
    k0: usize,
    cfg: &ThtConfig,
) -> Vec<(usize, f64)> {
    let energy = |x: &[f64], v: &[f64], k: i64| model.potential(x) + scaled_kinetic(&cfg.mass, v, cfg.schedule.eta(k));
    let h0 = energy(x0, v0, k0 as i64);
    let mut integ = Integrator::new(model, &cfg.mass, x0.to_vec(), v0.to_vec());
    let mut out = Vec::with_capacity(cfg.max_proposals);
    for n in 1..=cfg.max_proposals {
        let k = (k0 + n) as i64;
        let (alpha, step) = half_step_params(&cfg.schedule, cfg.eps, cfg.a, k - 1);
        if integ.step(alpha, step).is_err() {
            break;
        }
        out.push((n, energy(&integ.x, &integ.v, k) - h0));
    }
    out
}
