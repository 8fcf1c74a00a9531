//! Leapfrog integration, box reflection, the tempered proposal map and the
//! bar-coordinate transform.

use crate::error::{Error, Result};
use crate::mass::MassSpec;
use crate::model::{Bounds, PotentialModel};
use crate::schedule::MassSchedule;
use crate::state::{ExtendedState, ThtConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// Folds every out-of-box coordinate back inside by mirror reflection,
/// negating the matching velocity component once per reflection.
pub fn reflect_into_box(x: &mut [f64], v: &mut [f64], bounds: &Bounds) {
    for i in 0..x.len() {
        let (lo, hi) = (bounds.lo()[i], bounds.hi()[i]);
        let xi = x[i];
        if xi >= lo && xi <= hi {
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                let width = hi - lo;
                let r = (xi - lo).rem_euclid(2.0 * width);
                if r <= width {
                    x[i] = lo + r;
                } else {
                    x[i] = lo + (2.0 * width - r);
                    v[i] = -v[i];
                }
            }
            (true, false) => {
                x[i] = 2.0 * lo - xi;
                v[i] = -v[i];
            }
            (false, true) => {
                x[i] = 2.0 * hi - xi;
                v[i] = -v[i];
            }
            (false, false) => {}
        }
    }
}

/// In-place leapfrog integrator that carries the gradient at the current
/// position between steps.
///
/// The drift folds the position into the model's box (if any) before the
/// second gradient evaluation, so the cached gradient is always the gradient
/// at the stored position and caching never changes the arithmetic.
pub(crate) struct Integrator<'a, M: PotentialModel + ?Sized> {
    model: &'a M,
    mass: &'a MassSpec,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    grad: Vec<f64>,
    work: Vec<f64>,
    pub gradient_calls: usize,
}

impl<'a, M: PotentialModel + ?Sized> Integrator<'a, M> {
    pub fn new(model: &'a M, mass: &'a MassSpec, x: Vec<f64>, v: Vec<f64>) -> Self {
        let d = x.len();
        let mut grad = vec![0.0; d];
        model.gradient(&x, &mut grad);
        Integrator {
            model,
            mass,
            x,
            v,
            grad,
            work: vec![0.0; d],
            gradient_calls: 1,
        }
    }

    /// One half-kick/drift/half-kick step with mass `mass_scale·M`.
    pub fn step(&mut self, mass_scale: f64, step: f64) -> Result<()> {
        let coef = 0.5 * step / mass_scale;
        self.mass.apply_minv(&self.grad, &mut self.work);
        for (vi, wi) in self.v.iter_mut().zip(&self.work) {
            *vi -= coef * wi;
        }
        for (xi, vi) in self.x.iter_mut().zip(&self.v) {
            *xi += step * vi;
        }
        if let Some(b) = self.model.bounds() {
            reflect_into_box(&mut self.x, &mut self.v, b);
        }
        self.model.gradient(&self.x, &mut self.grad);
        self.gradient_calls += 1;
        self.mass.apply_minv(&self.grad, &mut self.work);
        for (vi, wi) in self.v.iter_mut().zip(&self.work) {
            *vi -= coef * wi;
        }
        if self.x.iter().chain(&self.v).all(|z| z.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFiniteState)
        }
    }
}

/// One leapfrog step with effective mass `mass_scale·M` and step size `step`.
pub fn leapfrog_step<M: PotentialModel + ?Sized>(
    model: &M,
    p: &PhasePoint,
    mass: &MassSpec,
    mass_scale: f64,
    step: f64,
) -> Result<PhasePoint> {
    crate::error::check_dim(model.dim(), p.x.len())?;
    crate::error::check_dim(model.dim(), p.v.len())?;
    let mut integ = Integrator::new(model, mass, p.x.clone(), p.v.clone());
    integ.step(mass_scale, step)?;
    Ok(PhasePoint { x: integ.x, v: integ.v })
}

/// Mass multiplier and step size used when moving from `k` to `k + 1`:
/// `(α_{k+½}, ε·α_{k+½}^a)`.
pub(crate) fn half_step_params(schedule: &MassSchedule, eps: f64, a: f64, k: i64) -> (f64, f64) {
    let eta = schedule.eta_half(2 * k + 1);
    ((2.0 * eta).exp(), eps * (2.0 * a * eta).exp())
}

/// The proposal map `S(x, k, ṽ) = (x″, k + 1 mod K, ṽ″)`.
pub fn tht_map<M: PotentialModel + ?Sized>(
    model: &M,
    s: &ExtendedState,
    cfg: &ThtConfig,
) -> Result<ExtendedState> {
    let period = cfg.schedule.period();
    let (alpha, step) = half_step_params(&cfg.schedule, cfg.eps, cfg.a, s.k as i64);
    let next = leapfrog_step(
        model,
        &PhasePoint { x: s.x.clone(), v: s.v.clone() },
        &cfg.mass,
        alpha,
        step,
    )?;
    Ok(ExtendedState {
        x: next.x,
        k: (s.k + 1) % period,
        v: next.v,
    })
}

/// `(x̄, v̄) = (x·e^{−aη}, ṽ·e^{aη})`.
pub fn bar_transform(x: &[f64], v: &[f64], eta: f64, a: f64) -> (Vec<f64>, Vec<f64>) {
    let s = (a * eta).exp();
    let sinv = (-a * eta).exp();
    (x.iter().map(|xi| xi * sinv).collect(), v.iter().map(|vi| vi * s).collect())
}
