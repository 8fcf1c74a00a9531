//! The differentiable target interface.

use crate::error::{Error, Result};

/// Axis-aligned box. Unconstrained coordinates carry infinite limits.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Bounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        for (i, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if l.is_nan() || h.is_nan() || l >= h {
                return Err(Error::DegenerateBox { coord: i, lo: l, hi: h });
            }
        }
        Ok(Bounds { lo, hi })
    }

    /// The same finite interval on every coordinate.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&l, &h))| xi >= l && xi <= h)
    }
}

/// Unnormalized negative log density `U(x)` with its gradient.
///
/// Implementations must be pure: the samplers share one model across worker
/// threads and call it with arbitrary positions inside the bounds.
pub trait PotentialModel: Sync {
    fn dim(&self) -> usize;

    /// `U(x)` in nats. May return `+inf` only where the density is exactly zero.
    fn potential(&self, x: &[f64]) -> f64;

    /// Writes `∇U(x)` into `grad`. Points where the gradient does not exist are
    /// reported with NaN entries, which the integrator treats as a blow-up.
    fn gradient(&self, x: &[f64], grad: &mut [f64]);

    fn bounds(&self) -> Option<&Bounds> {
        None
    }
}

impl<M: PotentialModel + ?Sized> PotentialModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn potential(&self, x: &[f64]) -> f64 {
        (**self).potential(x)
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (**self).gradient(x, grad)
    }
    fn bounds(&self) -> Option<&Bounds> {
        (**self).bounds()
    }
}

impl<M: PotentialModel + ?Sized> PotentialModel for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn potential(&self, x: &[f64]) -> f64 {
        (**self).potential(x)
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (**self).gradient(x, grad)
    }
    fn bounds(&self) -> Option<&Bounds> {
        (**self).bounds()
    }
}

/// Compares the analytic gradient with central finite differences at `x`,
/// using per-coordinate step `1e-5·(1 + |x_i|)`.
///
/// Returns `‖g_fd − g‖ / max(‖g‖, 1)`.
pub fn gradient_check_error<M: PotentialModel + ?Sized>(model: &M, x: &[f64]) -> f64 {
    let d = model.dim();
    let mut grad = vec![0.0; d];
    model.gradient(x, &mut grad);
    let mut probe = x.to_vec();
    let mut err2 = 0.0;
    for i in 0..d {
        let h = 1e-5 * (1.0 + x[i].abs());
        probe[i] = x[i] + h;
        let up = model.potential(&probe);
        probe[i] = x[i] - h;
        let down = model.potential(&probe);
        probe[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        err2 += (fd - grad[i]).powi(2);
    }
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    err2.sqrt() / norm.max(1.0)
}
