use std::f64::consts::TAU;

use crate::error::{check_dim, Error, Result};
use crate::model::PotentialModel;
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq)]
pub enum Covariance {
    /// `σ²I`, given by the standard deviation `σ`.
    Isotropic(f64),
    /// Per-coordinate variances.
    Diagonal(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub covariance: Covariance,
}

#[derive(Debug, Clone)]
struct Prepared {
    mean: Vec<f64>,
    inv_var: Vec<f64>,
    /// `log w − ½ d log 2π − ½ log det Σ`.
    log_const: f64,
}

/// Weighted mixture of normals with isotropic or diagonal covariances.
#[derive(Debug, Clone)]
pub struct GaussianMixture {
    dim: usize,
    components: Vec<Component>,
    prepared: Vec<Prepared>,
}

impl GaussianMixture {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidConfig("mixture needs at least one component".into()))?;
        let dim = first.mean.len();
        if dim == 0 {
            return Err(Error::InvalidConfig("mixture dimension must be positive".into()));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("mixture weights sum to {total}, expected 1")));
        }
        let mut prepared = Vec::with_capacity(components.len());
        for c in &components {
            check_dim(dim, c.mean.len())?;
            if c.weight.is_nan() || c.weight <= 0.0 || c.mean.iter().any(|m| !m.is_finite()) {
                return Err(Error::InvalidConfig("mixture weights must be positive and means finite".into()));
            }
            let var = match &c.covariance {
                Covariance::Isotropic(sd) => vec![sd * sd; dim],
                Covariance::Diagonal(v) => {
                    check_dim(dim, v.len())?;
                    v.clone()
                }
            };
            if var.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidConfig("mixture variances must be positive".into()));
            }
            let log_det: f64 = var.iter().map(|v| v.ln()).sum();
            prepared.push(Prepared {
                mean: c.mean.clone(),
                inv_var: var.iter().map(|v| 1.0 / v).collect(),
                log_const: c.weight.ln() - 0.5 * (dim as f64 * TAU.ln() + log_det),
            });
        }
        Ok(GaussianMixture { dim, components, prepared })
    }

    /// Single normal `N(mean, sd²I)`.
    pub fn normal(mean: Vec<f64>, sd: f64) -> Result<Self> {
        Self::new(vec![Component { weight: 1.0, mean, covariance: Covariance::Isotropic(sd) }])
    }

    /// Equal-weight two-component mixture with common isotropic scale.
    pub fn symmetric_pair(mean_a: Vec<f64>, mean_b: Vec<f64>, sd: f64) -> Result<Self> {
        Self::new(vec![
            Component { weight: 0.5, mean: mean_a, covariance: Covariance::Isotropic(sd) },
            Component { weight: 0.5, mean: mean_b, covariance: Covariance::Isotropic(sd) },
        ])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    fn component_log_densities(&self, x: &[f64]) -> Vec<f64> {
        self.prepared
            .iter()
            .map(|p| {
                let q: f64 = x
                    .iter()
                    .zip(&p.mean)
                    .zip(&p.inv_var)
                    .map(|((xi, mi), w)| (xi - mi) * (xi - mi) * w)
                    .sum();
                p.log_const - 0.5 * q
            })
            .collect()
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        log_sum_exp(&self.component_log_densities(x))
    }

    /// Posterior component probabilities at `x`; underflowed components get exactly 0.
    pub fn responsibilities(&self, x: &[f64]) -> Vec<f64> {
        let logs = self.component_log_densities(x);
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|v| v / total).collect()
    }

    /// Exact draw, used for initial states and test oracles.
    pub fn sample<R: RandomSource + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let u = rng.uniform();
        let mut acc = 0.0;
        let mut pick = self.components.len() - 1;
        for (j, c) in self.components.iter().enumerate() {
            acc += c.weight;
            if u < acc {
                pick = j;
                break;
            }
        }
        let p = &self.prepared[pick];
        let mut z = vec![0.0; self.dim];
        rng.fill_standard_normal(&mut z);
        z.iter()
            .zip(&p.mean)
            .zip(&p.inv_var)
            .map(|((zi, mi), w)| mi + zi / w.sqrt())
            .collect()
    }
}

pub(crate) fn log_sum_exp(v: &[f64]) -> f64 {
    let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top.is_infinite() {
        return top;
    }
    top + v.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

impl PotentialModel for GaussianMixture {
    fn dim(&self) -> usize {
        self.dim
    }

    fn potential(&self, x: &[f64]) -> f64 {
        -self.log_density(x)
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        grad.fill(0.0);
        let r = self.responsibilities(x);
        for (p, rj) in self.prepared.iter().zip(r) {
            if rj == 0.0 {
                continue;
            }
            for ((g, (xi, mi)), w) in grad.iter_mut().zip(x.iter().zip(&p.mean)).zip(&p.inv_var) {
                *g += rj * w * (xi - mi);
            }
        }
    }
}

/// `(U, ∇U)` of a mixture at `x`.
pub fn mixture_potential(mix: &GaussianMixture, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_dim(mix.dim, x.len())?;
    let mut g = vec![0.0; mix.dim];
    mix.gradient(x, &mut g);
    Ok((mix.potential(x), g))
}
