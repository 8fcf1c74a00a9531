use crate::error::{check_dim, Error, Result};
use crate::model::PotentialModel;
use crate::rng::RandomSource;

use super::mixture::{log_sum_exp, GaussianMixture};

/// `π⁺(x) = π(x) + ν·g(x)`: the base target plus a small bridging density.
#[derive(Debug, Clone)]
pub struct AugmentedTarget<B> {
    pub base: B,
    pub bridge: GaussianMixture,
    log_nu: f64,
}

impl<B: PotentialModel> AugmentedTarget<B> {
    /// Takes `log ν` so that extremely small weights stay representable.
    pub fn new(base: B, bridge: GaussianMixture, log_nu: f64) -> Result<Self> {
        check_dim(base.dim(), bridge.dim())?;
        if bridge.components().len() != 1 {
            return Err(Error::InvalidConfig("bridge density must be a single normal".into()));
        }
        if !log_nu.is_finite() {
            return Err(Error::InvalidConfig("log_nu must be finite".into()));
        }
        Ok(AugmentedTarget { base, bridge, log_nu })
    }

    pub fn log_nu(&self) -> f64 {
        self.log_nu
    }

    /// `log ν + log g(x)`.
    fn bridge_log_mass(&self, x: &[f64]) -> f64 {
        self.log_nu + self.bridge.log_density(x)
    }

    /// Log of `π(x) / (π(x) + ν g(x))`.
    pub fn log_keep_probability(&self, x: &[f64]) -> f64 {
        let base = -self.base.potential(x);
        if base == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        base - log_sum_exp(&[base, self.bridge_log_mass(x)])
    }
}

impl<B: PotentialModel> PotentialModel for AugmentedTarget<B> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn potential(&self, x: &[f64]) -> f64 {
        -log_sum_exp(&[-self.base.potential(x), self.bridge_log_mass(x)])
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        let keep = self.log_keep_probability(x).exp();
        self.bridge.gradient(x, grad);
        if keep > 0.0 {
            let mut base_grad = vec![0.0; grad.len()];
            self.base.gradient(x, &mut base_grad);
            for (g, b) in grad.iter_mut().zip(base_grad) {
                *g = keep * b + (1.0 - keep) * *g;
            }
        }
    }
}

/// `(U⁺, ∇U⁺)` at `x`.
pub fn augmented_potential<B: PotentialModel>(at: &AugmentedTarget<B>, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_dim(at.dim(), x.len())?;
    let mut g = vec![0.0; x.len()];
    at.gradient(x, &mut g);
    Ok((at.potential(x), g))
}

/// Keeps each draw independently with probability `π/(π + νg)`, in order.
pub fn rejection_filter<B, R>(samples: &[Vec<f64>], at: &AugmentedTarget<B>, rng: &mut R) -> Vec<Vec<f64>>
where
    B: PotentialModel,
    R: RandomSource + ?Sized,
{
    samples
        .iter()
        .filter(|x| rng.uniform().ln() < at.log_keep_probability(x))
        .cloned()
        .collect()
}

/// One-dimensional normal restricted to a union of open intervals.
///
/// The potential is the untruncated normal one inside the support and `+∞`
/// outside.
#[derive(Debug, Clone)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    pub intervals: Vec<(f64, f64)>,
}

impl TruncatedNormal {
    /// `N(0, 3²)` on `(−3, −1) ∪ (1, ∞)`.
    pub fn gap_example() -> Self {
        TruncatedNormal {
            mean: 0.0,
            sd: 3.0,
            intervals: vec![(-3.0, -1.0), (1.0, f64::INFINITY)],
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < x && x < hi)
    }

    /// Probability of each interval under the untruncated normal.
    pub fn interval_masses(&self) -> Vec<f64> {
        use statrs::distribution::{ContinuousCDF, Normal};
        let n = Normal::new(self.mean, self.sd).expect("valid normal");
        self.intervals.iter().map(|&(lo, hi)| n.cdf(hi) - n.cdf(lo)).collect()
    }
}

impl PotentialModel for TruncatedNormal {
    fn dim(&self) -> usize {
        1
    }

    fn potential(&self, x: &[f64]) -> f64 {
        if !self.contains(x[0]) {
            return f64::INFINITY;
        }
        let z = (x[0] - self.mean) / self.sd;
        0.5 * z * z + (self.sd * std::f64::consts::TAU.sqrt()).ln()
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        grad[0] = (x[0] - self.mean) / (self.sd * self.sd);
    }
}
