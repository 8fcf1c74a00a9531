//! Mass-scaling schedules and the starting-index distribution.
//!
//! Schedule positions live on the half-integer grid. They are passed around as
//! `twice_k: i64`, so `k = twice_k / 2`, which keeps the grid arithmetic exact.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic, symmetric log mass scale `η_k`; the mass multiplier is `α_k = e^{2η_k}`.
#[derive(Debug, Clone, PartialEq)]
pub enum MassSchedule {
    /// `η_k = c_eta + eta_star·(1 − cos(2πk/K))`.
    Cosine { eta_star: f64, c_eta: f64, period: usize },
    /// Values on the grid `0, ½, 1, …, K − ½` (length `2K`).
    Tabulated { values: Vec<f64>, period: usize },
}

impl MassSchedule {
    pub fn cosine(eta_star: f64, c_eta: f64, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidSchedule("period must be positive".into()));
        }
        if !(eta_star.is_finite() && c_eta.is_finite()) {
            return Err(Error::InvalidSchedule("eta_star and c_eta must be finite".into()));
        }
        Ok(MassSchedule::Cosine { eta_star, c_eta, period })
    }

    /// `η ≡ c`: plain HMC dynamics when `c = 0`.
    pub fn constant(period: usize, c: f64) -> Result<Self> {
        Self::cosine(0.0, c, period)
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::InvalidSchedule(
                "tabulated schedule needs 2K values on the half-integer grid".into(),
            ));
        }
        let n = values.len();
        for j in 1..n {
            let (a, b) = (values[j], values[n - j]);
            if !a.is_finite() || (a - b).abs() > 1e-12 {
                return Err(Error::InvalidSchedule(format!(
                    "schedule is not symmetric: eta[{}/2] = {a} but eta[-{}/2] = {b}",
                    j, j
                )));
            }
        }
        if !values[0].is_finite() {
            return Err(Error::InvalidSchedule("non-finite value".into()));
        }
        Ok(MassSchedule::Tabulated { period: n / 2, values })
    }

    pub fn period(&self) -> usize {
        match self {
            MassSchedule::Cosine { period, .. } | MassSchedule::Tabulated { period, .. } => *period,
        }
    }

    /// Folds `twice_k` into `0..=K` using periodicity and symmetry, so that
    /// `η(k)`, `η(−k)` and `η(k + K)` are computed from the same grid point.
    fn fold(&self, twice_k: i64) -> usize {
        let n = 2 * self.period() as i64;
        let j = twice_k.rem_euclid(n);
        j.min(n - j) as usize
    }

    /// `η` at the half-integer position `twice_k / 2`.
    pub fn eta_half(&self, twice_k: i64) -> f64 {
        let j = self.fold(twice_k);
        match self {
            MassSchedule::Cosine { eta_star, c_eta, period } => {
                if *eta_star == 0.0 {
                    return *c_eta;
                }
                let k = j as f64 / 2.0;
                c_eta + eta_star * (1.0 - (2.0 * PI * k / *period as f64).cos())
            }
            MassSchedule::Tabulated { values, .. } => values[j],
        }
    }

    /// `η` at the integer position `k`.
    pub fn eta(&self, k: i64) -> f64 {
        self.eta_half(2 * k)
    }

    pub fn alpha_half(&self, twice_k: i64) -> f64 {
        (2.0 * self.eta_half(twice_k)).exp()
    }

    pub fn alpha(&self, k: i64) -> f64 {
        self.alpha_half(2 * k)
    }

    /// Returns the same schedule with `η` shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        match self {
            MassSchedule::Cosine { eta_star, c_eta, period } => MassSchedule::Cosine {
                eta_star: *eta_star,
                c_eta: c_eta + c,
                period: *period,
            },
            MassSchedule::Tabulated { values, period } => MassSchedule::Tabulated {
                values: values.iter().map(|v| v + c).collect(),
                period: *period,
            },
        }
    }
}

/// Distribution `ψ_K` of the starting index `k₀` on `0..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDistribution {
    probs: Vec<f64>,
    log_probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl IndexDistribution {
    /// Normalizes nonnegative weights. They must satisfy `w(k) = w(K − k)`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::InvalidIndexDistribution("period must be positive".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidIndexDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        for j in 1..k {
            if (weights[j] - weights[k - j]).abs() > 1e-12 {
                return Err(Error::InvalidIndexDistribution(format!(
                    "weights are not symmetric modulo K at k = {j}"
                )));
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidIndexDistribution("support is empty".into()));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let log_probs = probs
            .iter()
            .map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
            .collect();
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(IndexDistribution { probs, log_probs, cdf })
    }

    /// Uniform on `{k : min(k, K − k) ≤ half_width}`.
    pub fn windowed_uniform(period: usize, half_width: usize) -> Result<Self> {
        let weights = (0..period)
            .map(|k| if k.min(period - k) <= half_width { 1.0 } else { 0.0 })
            .collect();
        Self::from_weights(weights)
    }

    /// All mass at `k = 0`.
    pub fn point_mass(period: usize) -> Result<Self> {
        Self::windowed_uniform(period, 0)
    }

    /// Uniform on `{k : η_k ≤ c}`.
    pub fn below_eta(schedule: &MassSchedule, c: f64) -> Result<Self> {
        let weights = (0..schedule.period() as i64)
            .map(|k| if schedule.eta(k) <= c { 1.0 } else { 0.0 })
            .collect();
        Self::from_weights(weights)
    }

    pub fn period(&self) -> usize {
        self.probs.len()
    }

    fn reduce(&self, k: i64) -> usize {
        k.rem_euclid(self.period() as i64) as usize
    }

    pub fn prob(&self, k: i64) -> f64 {
        self.probs[self.reduce(k)]
    }

    pub fn log_prob(&self, k: i64) -> f64 {
        self.log_probs[self.reduce(k)]
    }

    pub fn in_support(&self, k: i64) -> bool {
        self.probs[self.reduce(k)] > 0.0
    }

    /// Number of indices with positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    /// Inverse-CDF draw from a single uniform.
    pub fn sample_with(&self, u: f64) -> usize {
        let target = u * self.cdf[self.cdf.len() - 1];
        let idx = self.cdf.partition_point(|&c| c <= target);
        let mut idx = idx.min(self.probs.len() - 1);
        // Never land on a zero-probability index through rounding.
        while self.probs[idx] == 0.0 {
            idx = if idx == 0 { self.probs.len() - 1 } else { idx - 1 };
        }
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosine_values() {
        let s = MassSchedule::cosine(6.0, 0.0, 500).unwrap();
        assert_eq!(s.eta(0), 0.0);
        assert!((s.eta(250) - 12.0).abs() < 1e-12);
        assert!((s.eta_half(1) - 6.0 * (1.0 - (PI / 500.0).cos())).abs() < 1e-15);
        assert!((s.alpha(250) - 24f64.exp()).abs() / 24f64.exp() < 1e-12);
    }

    #[test]
    fn tabulated_rejects_asymmetry() {
        assert!(MassSchedule::tabulated(vec![0.0, 1.0, 2.0, 1.0]).is_ok());
        assert!(MassSchedule::tabulated(vec![0.0, 1.0, 2.0, 1.5]).is_err());
        assert!(MassSchedule::tabulated(vec![0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn windowed_uniform_weights() {
        let psi = IndexDistribution::windowed_uniform(10, 2).unwrap();
        assert_eq!(psi.support_size(), 5);
        for k in [0, 1, 2, 8, 9] {
            assert!((psi.prob(k) - 0.2).abs() < 1e-15);
        }
        assert_eq!(psi.prob(5), 0.0);
        assert_eq!(psi.log_prob(5), f64::NEG_INFINITY);
        assert!(psi.in_support(-1));
    }

    #[test]
    fn asymmetric_weights_rejected() {
        assert!(IndexDistribution::from_weights(vec![1.0, 1.0, 0.0]).is_err());
        assert!(IndexDistribution::from_weights(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn below_eta_matches_window() {
        let s = MassSchedule::cosine(2.0, 0.0, 100).unwrap();
        let psi = IndexDistribution::below_eta(&s, s.eta(3)).unwrap();
        assert_eq!(psi, IndexDistribution::windowed_uniform(100, 3).unwrap());
    }

    #[test]
    fn sampling_stays_in_support() {
        let psi = IndexDistribution::windowed_uniform(50, 3).unwrap();
        for i in 0..1000 {
            let u = (i as f64 + 0.5) / 1000.0;
            assert!(psi.in_support(psi.sample_with(u) as i64));
        }
        assert!(psi.in_support(psi.sample_with(1.0 - 1e-17) as i64));
    }

    proptest! {
        #[test]
        fn cosine_symmetric_and_periodic(twice_k in -100_000i64..100_000, eta_star in 0.0f64..10.0, period in 1usize..3000) {
            let s = MassSchedule::cosine(eta_star, 0.3, period).unwrap();
            prop_assert_eq!(s.eta_half(twice_k), s.eta_half(-twice_k));
            prop_assert_eq!(s.eta_half(twice_k), s.eta_half(twice_k + 2 * period as i64));
            prop_assert!(s.alpha_half(twice_k) > 0.0);
        }

        #[test]
        fn tabulated_symmetric_and_periodic(twice_k in -1000i64..1000) {
            let s = MassSchedule::tabulated(vec![0.0, 0.5, 1.0, 1.5, 1.0, 0.5]).unwrap();
            prop_assert_eq!(s.eta_half(twice_k), s.eta_half(-twice_k));
            prop_assert_eq!(s.eta_half(twice_k), s.eta_half(twice_k + 6));
        }
    }
}
