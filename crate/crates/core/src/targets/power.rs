use crate::error::{check_dim, Error, Result};
use crate::mass::MassSpec;
use crate::model::PotentialModel;

/// `U(x) = c·(xᵀBx)^{γ/2}`.
#[derive(Debug, Clone)]
pub struct PowerPotential {
    pub scale: f64,
    pub gamma: f64,
    pub metric: MassSpec,
    dim: usize,
}

impl PowerPotential {
    pub fn new(dim: usize, scale: f64, gamma: f64, metric: MassSpec) -> Result<Self> {
        if !(scale > 0.0 && gamma > 0.0 && scale.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidConfig("power potential needs c > 0 and gamma > 0".into()));
        }
        metric.validate(dim)?;
        Ok(PowerPotential { scale, gamma, metric, dim })
    }

    pub fn isotropic(dim: usize, gamma: f64) -> Result<Self> {
        Self::new(dim, 1.0, gamma, MassSpec::Identity)
    }
}

impl PotentialModel for PowerPotential {
    fn dim(&self) -> usize {
        self.dim
    }

    fn potential(&self, x: &[f64]) -> f64 {
        self.scale * self.metric.quad_form(x).powf(0.5 * self.gamma)
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        let q = self.metric.quad_form(x);
        if q == 0.0 {
            grad.fill(if self.gamma >= 2.0 { 0.0 } else { f64::NAN });
            return;
        }
        let coef = self.scale * self.gamma * q.powf(0.5 * self.gamma - 1.0);
        self.metric.apply_m(x, grad);
        grad.iter_mut().for_each(|g| *g *= coef);
    }
}

/// `(U, ∇U)`; the gradient is undefined at the origin when `γ < 2`.
pub fn power_potential(pp: &PowerPotential, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_dim(pp.dim, x.len())?;
    if pp.gamma < 2.0 && x.iter().all(|v| *v == 0.0) {
        return Err(Error::SingularGradient { gamma: pp.gamma });
    }
    let mut g = vec![0.0; pp.dim];
    pp.gradient(x, &mut g);
    Ok((pp.potential(x), g))
}
