use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::model::{Bounds, PotentialModel};
use crate::rng::{RandomSource, RngStream};

pub type Point = [f64; 2];

fn default_n_unknown() -> usize {
    8
}

/// Pairwise distance measurements among sensors.
///
/// Sensor indices `0..n_unknown` are the unknown locations, followed by the
/// known sensors in order. `obs[i] = [t, u]` with `t < u` is measured as `dist[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorDataset {
    #[serde(default = "default_n_unknown")]
    pub n_unknown: usize,
    pub known: Vec<Point>,
    pub obs: Vec<[usize; 2]>,
    pub dist: Vec<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    pub sigma_e: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<Point>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pair {
    t: usize,
    u: usize,
    measured: Option<f64>,
}

fn in_unit_square(p: &Point) -> bool {
    p.iter().all(|c| (0.0..=1.0).contains(c))
}

impl SensorDataset {
    pub fn n_sensors(&self) -> usize {
        self.n_unknown + self.known.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(format!("sensor dataset: {m}")));
        if self.n_unknown == 0 {
            return bad("no unknown sensors");
        }
        if !(self.r > 0.0 && self.sigma_e > 0.0) {
            return bad("R and sigma_e must be positive");
        }
        if self.obs.len() != self.dist.len() {
            return bad("obs and dist lengths differ");
        }
        if !self.known.iter().all(in_unit_square) {
            return bad("known sensors must lie in the unit square");
        }
        let n = self.n_sensors();
        let mut seen = vec![false; n * n];
        for (&[t, u], y) in self.obs.iter().zip(&self.dist) {
            if t >= u || u >= n || !y.is_finite() {
                return bad("observed pairs must satisfy t < u < n_sensors with finite distance");
            }
            if std::mem::replace(&mut seen[t * n + u], true) {
                return bad("duplicate observed pair");
            }
        }
        if let Some(truth) = &self.truth {
            if truth.len() != self.n_unknown {
                return bad("truth must list every unknown sensor");
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string_pretty(self).expect("dataset serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ds: SensorDataset = serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        ds.validate()?;
        Ok(ds)
    }

    /// Every unordered pair with its measurement, if any.
    fn all_pairs(&self) -> Vec<Pair> {
        let n = self.n_sensors();
        let mut measured = vec![None; n * n];
        for (&[t, u], &y) in self.obs.iter().zip(&self.dist) {
            measured[t * n + u] = Some(y);
        }
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for t in 0..n {
            for u in t + 1..n {
                pairs.push(Pair { t, u, measured: measured[t * n + u] });
            }
        }
        pairs
    }

    fn position(&self, locs: &[f64], i: usize) -> Point {
        if i < self.n_unknown {
            [locs[2 * i], locs[2 * i + 1]]
        } else {
            self.known[i - self.n_unknown]
        }
    }

    /// Truth as a flat location vector.
    pub fn truth_vector(&self) -> Option<Vec<f64>> {
        self.truth.as_ref().map(|t| t.iter().flatten().copied().collect())
    }

    /// Reflection of a flat location vector across the principal axis of the
    /// known sensors.
    pub fn mirror(&self, locs: &[f64]) -> Vec<f64> {
        let k = self.known.len() as f64;
        let cx = self.known.iter().map(|p| p[0]).sum::<f64>() / k;
        let cy = self.known.iter().map(|p| p[1]).sum::<f64>() / k;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for p in &self.known {
            let (dx, dy) = (p[0] - cx, p[1] - cy);
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        let (ux, uy) = (theta.cos(), theta.sin());
        locs.chunks(2)
            .flat_map(|p| {
                let (dx, dy) = (p[0] - cx, p[1] - cy);
                let along = dx * ux + dy * uy;
                [cx + 2.0 * along * ux - dx, cy + 2.0 * along * uy - dy]
            })
            .collect()
    }

    /// The study dataset: two nearly coincident known sensors and a third far
    /// along the same line, eight unknowns from a fixed seed.
    pub fn study_default() -> Self {
        let known = vec![[0.45, 0.52], [0.55, 0.48], [0.90, 0.50]];
        study_dataset(known, 1949, 0.3, 0.02)
    }
}

pub(crate) fn study_dataset(known: Vec<Point>, seed: u64, r: f64, sigma_e: f64) -> SensorDataset {
    let mut rng = RngStream::derive(seed, 0);
    let mut positions: Vec<Point> = (0..8).map(|_| [rng.uniform(), rng.uniform()]).collect();
    positions.extend(known);
    generate_sensor_data(&positions, 8, r, sigma_e, &mut RngStream::derive(seed, 1))
}

/// Simulates measurements: each pair is observed with probability
/// `exp(−d²/2R²)` and then measured as `N(d, σ_e²)`.
pub fn generate_sensor_data<R: RandomSource + ?Sized>(
    positions: &[Point],
    n_unknown: usize,
    r: f64,
    sigma_e: f64,
    rng: &mut R,
) -> SensorDataset {
    let mut obs = Vec::new();
    let mut dist = Vec::new();
    for t in 0..positions.len() {
        for u in t + 1..positions.len() {
            let d = distance(&positions[t], &positions[u]);
            if rng.uniform() < (-d * d / (2.0 * r * r)).exp() {
                obs.push([t, u]);
                dist.push(d + sigma_e * rng.standard_normal());
            }
        }
    }
    SensorDataset {
        n_unknown,
        known: positions[n_unknown..].to_vec(),
        obs,
        dist,
        r,
        sigma_e,
        truth: Some(positions[..n_unknown].to_vec()),
    }
}

/// `log(1 − e^{−q})` for `q > 0`.
fn log1mexp(q: f64) -> f64 {
    if q < std::f64::consts::LN_2 {
        (-(-q).exp_m1()).ln()
    } else {
        (-(-q).exp()).ln_1p()
    }
}

fn distance(a: &Point, b: &Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Posterior of the unknown locations for fixed `R` and `σ_e`, with a uniform
/// prior on the unit square. Location vectors are `[x₀, y₀, x₁, y₁, …]`.
#[derive(Debug, Clone)]
pub struct SensorPosterior {
    data: SensorDataset,
    pairs: Vec<Pair>,
    r: f64,
    sigma_e: f64,
    bounds: Bounds,
}

impl SensorPosterior {
    pub fn new(data: &SensorDataset) -> Result<Self> {
        Self::with_hyper(data, data.r, data.sigma_e)
    }

    pub fn with_hyper(data: &SensorDataset, r: f64, sigma_e: f64) -> Result<Self> {
        data.validate()?;
        if !(r > 0.0 && sigma_e > 0.0) {
            return Err(Error::InvalidConfig("R and sigma_e must be positive".into()));
        }
        let n_unknown = data.n_unknown;
        let pairs = data.all_pairs().into_iter().filter(|p| p.t < n_unknown).collect();
        Ok(SensorPosterior {
            data: data.clone(),
            pairs,
            r,
            sigma_e,
            bounds: Bounds::uniform(2 * n_unknown, 0.0, 1.0)?,
        })
    }

    pub fn dataset(&self) -> &SensorDataset {
        &self.data
    }

    fn displacement(&self, locs: &[f64], p: &Pair) -> (f64, f64) {
        let a = self.data.position(locs, p.t);
        let b = self.data.position(locs, p.u);
        (a[0] - b[0], a[1] - b[1])
    }

    fn checked_potential(&self, locs: &[f64]) -> Result<f64> {
        let r2 = self.r * self.r;
        let s2 = self.sigma_e * self.sigma_e;
        let log_norm = (TAU.sqrt() * self.sigma_e).ln();
        let mut u = 0.0;
        for p in &self.pairs {
            let (dx, dy) = self.displacement(locs, p);
            let d2 = dx * dx + dy * dy;
            let q = d2 / (2.0 * r2);
            u += match p.measured {
                Some(y) => q + (y - d2.sqrt()).powi(2) / (2.0 * s2) + log_norm,
                None if q == 0.0 => return Err(Error::DegeneratePair(p.t, p.u)),
                None => -log1mexp(q),
            };
        }
        Ok(u)
    }
}

impl PotentialModel for SensorPosterior {
    fn dim(&self) -> usize {
        2 * self.data.n_unknown
    }

    fn potential(&self, locs: &[f64]) -> f64 {
        self.checked_potential(locs).unwrap_or(f64::INFINITY)
    }

    fn gradient(&self, locs: &[f64], grad: &mut [f64]) {
        grad.fill(0.0);
        let r2 = self.r * self.r;
        let s2 = self.sigma_e * self.sigma_e;
        let n_unknown = self.data.n_unknown;
        for p in &self.pairs {
            let (dx, dy) = self.displacement(locs, p);
            let d2 = dx * dx + dy * dy;
            let coef = match p.measured {
                Some(y) => {
                    let d = d2.sqrt();
                    if d == 0.0 {
                        1.0 / r2
                    } else {
                        1.0 / r2 - (y - d) / (s2 * d)
                    }
                }
                None => -1.0 / (r2 * (d2 / (2.0 * r2)).exp_m1()),
            };
            let (gx, gy) = (coef * dx, coef * dy);
            grad[2 * p.t] += gx;
            grad[2 * p.t + 1] += gy;
            if p.u < n_unknown {
                grad[2 * p.u] -= gx;
                grad[2 * p.u + 1] -= gy;
            }
        }
    }

    fn bounds(&self) -> Option<&Bounds> {
        Some(&self.bounds)
    }
}

/// `(U, ∇U)` at `locs`; an unmeasured pair at zero distance has zero likelihood.
pub fn sensor_potential(locs: &[f64], data: &SensorDataset) -> Result<(f64, Vec<f64>)> {
    let model = SensorPosterior::new(data)?;
    check_dim(model.dim(), locs.len())?;
    let u = model.checked_potential(locs)?;
    let mut g = vec![0.0; locs.len()];
    model.gradient(locs, &mut g);
    Ok((u, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyper {
    R,
    SigmaE,
}

impl Hyper {
    /// Rate of the exponential prior.
    pub fn prior_rate(self) -> f64 {
        match self {
            Hyper::R => 1.0 / 0.5,
            Hyper::SigmaE => 1.0 / 0.05,
        }
    }
}

/// Conditional of `θ = log R` or `θ = log σ_e` given the locations, with an
/// exponential prior on the natural scale. All sensor pairs, known ones
/// included, carry information about the hyperparameters.
#[derive(Debug, Clone)]
pub struct HyperConditional {
    which: Hyper,
    /// `(distance, measurement)` per pair.
    pairs: Vec<(f64, Option<f64>)>,
    /// Held fixed while the other parameter is drawn.
    other: f64,
}

impl HyperConditional {
    /// `other` is `σ_e` when drawing `log R` and `R` when drawing `log σ_e`;
    /// neither conditional depends on it.
    pub fn new(which: Hyper, locs: &[f64], data: &SensorDataset, other: f64) -> Result<Self> {
        check_dim(2 * data.n_unknown, locs.len())?;
        let pairs = data
            .all_pairs()
            .into_iter()
            .map(|p| (distance(&data.position(locs, p.t), &data.position(locs, p.u)), p.measured))
            .collect();
        Ok(HyperConditional { which, pairs, other })
    }

    pub fn fixed_other(&self) -> f64 {
        self.other
    }

    fn value_and_slope(&self, theta: f64) -> (f64, f64) {
        let rate = self.which.prior_rate();
        let e = theta.exp();
        let (mut u, mut du) = (rate * e - theta, rate * e - 1.0);
        match self.which {
            Hyper::R => {
                let two_r2 = 2.0 * e * e;
                for &(d, y) in &self.pairs {
                    let q = d * d / two_r2;
                    if y.is_some() {
                        u += q;
                        du -= 2.0 * q;
                    } else if q == 0.0 {
                        u = f64::INFINITY;
                        du += 2.0;
                    } else {
                        u -= log1mexp(q);
                        du += 2.0 * q / q.exp_m1();
                    }
                }
            }
            Hyper::SigmaE => {
                let s2 = e * e;
                let half_log_tau = 0.5 * TAU.ln();
                for &(d, y) in &self.pairs {
                    if let Some(y) = y {
                        let z2 = (y - d) * (y - d) / s2;
                        u += 0.5 * z2 + theta + half_log_tau;
                        du += 1.0 - z2;
                    }
                }
            }
        }
        (u, du)
    }
}

impl PotentialModel for HyperConditional {
    fn dim(&self) -> usize {
        1
    }
    fn potential(&self, x: &[f64]) -> f64 {
        self.value_and_slope(x[0]).0
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        grad[0] = self.value_and_slope(x[0]).1;
    }
}

/// `(U, dU/dθ)` for one log-hyperparameter.
pub fn hyper_potential(log_param: f64, which: Hyper, locs: &[f64], data: &SensorDataset) -> Result<(f64, f64)> {
    let other = match which {
        Hyper::R => data.sigma_e,
        Hyper::SigmaE => data.r,
    };
    Ok(HyperConditional::new(which, locs, data, other)?.value_and_slope(log_param))
}
