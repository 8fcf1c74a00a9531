use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::*;
use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::{RandomSource, RngStream};
use crate::schedule::{IndexDistribution, MassSchedule};
use crate::state::ThtConfig;

struct Quadratic {
    dim: usize,
    potential_calls: AtomicUsize,
}

impl Quadratic {
    fn new(dim: usize) -> Self {
        Quadratic { dim, potential_calls: AtomicUsize::new(0) }
    }
}

impl PotentialModel for Quadratic {
    fn dim(&self) -> usize {
        self.dim
    }
    fn potential(&self, x: &[f64]) -> f64 {
        self.potential_calls.fetch_add(1, Ordering::Relaxed);
        0.5 * x.iter().map(|v| v * v).sum::<f64>()
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        g.copy_from_slice(x);
    }
}

/// Constant uniforms; normals cycle through a fixed list.
struct Stub {
    u: f64,
    normals: Vec<f64>,
    pos: Cell<usize>,
}

impl RandomSource for Stub {
    fn uniform(&mut self) -> f64 {
        self.u
    }
    fn standard_normal(&mut self) -> f64 {
        let i = self.pos.get();
        self.pos.set(i + 1);
        self.normals[i % self.normals.len()]
    }
}

fn tht_cfg(period: usize, eta_star: f64, eps: f64, psi: IndexDistribution, l: usize, n: usize) -> ThtConfig {
    ThtConfig {
        eps,
        a: 0.5,
        n_acceptable: l,
        max_proposals: n,
        schedule: MassSchedule::cosine(eta_star, 0.0, period).unwrap(),
        psi,
        mass: MassSpec::Identity,
        trace_hamiltonian: true,
    }
}

#[test]
fn tiny_step_hmc_always_accepts() {
    let model = Quadratic::new(3);
    let cfg = HmcConfig { eps: 1e-6, n_leapfrog: 1, mass: MassSpec::Identity };
    let mut rng = RngStream::new(11);
    let mut x = vec![0.3, -1.0, 2.0];
    let mut accepted = 0;
    for _ in 0..1000 {
        let r = hmc_step(&model, &x, &cfg, &mut rng).unwrap();
        accepted += r.accepted_move as usize;
        x = r.next_x;
    }
    assert!(accepted >= 999);
}

#[test]
fn degenerate_enhanced_matches_hmc() {
    let model = Quadratic::new(2);
    let hmc = HmcConfig { eps: 0.7, n_leapfrog: 1, mass: MassSpec::diagonal(vec![1.5, 0.5]).unwrap() };
    let enh = EnhancedConfig { mass: hmc.mass.clone(), alpha: 1.0, eps_tilde: 0.7, max_proposals: 1, n_acceptable: 1 };
    let a = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &hmc, r), &[1.0, -2.0], 300, &mut RngStream::new(5)).unwrap();
    let b = run_chain(|x: &[f64], r: &mut RngStream| mass_enhanced_step(&model, x, &enh, r), &[1.0, -2.0], 300, &mut RngStream::new(5)).unwrap();
    assert_eq!(a.states, b.states);
    assert!(a.acceptance_rate() > 0.2 && a.acceptance_rate() < 1.0);
}

#[test]
fn near_one_lambda_rejects_uphill_path() {
    let model = Quadratic::new(1);
    let cfg = EnhancedConfig { mass: MassSpec::Identity, alpha: 4.0, eps_tilde: 0.05, max_proposals: 20, n_acceptable: 1 };
    // Start at the minimum with positive velocity: every candidate is uphill.
    let mut rng = Stub { u: 1.0 - 1e-12, normals: vec![1.0], pos: Cell::new(0) };
    let r = mass_enhanced_step(&model, &[0.0], &cfg, &mut rng).unwrap();
    assert_eq!(r.proposals_used, 20);
    assert!(!r.accepted_move);
    assert!(r.delta_h.is_nan());
}

#[test]
fn tie_at_last_proposal_is_accepted() {
    let model = Quadratic::new(1);
    let cfg = EnhancedConfig { mass: MassSpec::Identity, alpha: 1.0, eps_tilde: 0.1, max_proposals: 3, n_acceptable: 3 };
    let mut rng = Stub { u: 1e-300, normals: vec![1.0], pos: Cell::new(0) };
    let r = mass_enhanced_step(&model, &[0.5], &cfg, &mut rng).unwrap();
    assert!(r.accepted_move);
    assert_eq!((r.proposals_used, r.acceptable_found), (3, 3));
}

#[test]
fn tht_point_mass_support_never_moves_before_period() {
    let model = Quadratic::new(2);
    let cfg = tht_cfg(50, 1.0, 0.1, IndexDistribution::point_mass(50).unwrap(), 1, 49);
    let mut rng = RngStream::new(3);
    for _ in 0..50 {
        let r = tht_step(&model, &[0.4, 0.1], &cfg, &mut rng).unwrap();
        assert!(!r.accepted_move);
        assert_eq!(r.k0, Some(0));
        assert_eq!(r.acceptable_found, 0);
    }
}

#[test]
fn tht_flat_schedule_full_period_accepts() {
    let model = Quadratic::new(2);
    let period = 20;
    let cfg = tht_cfg(period, 0.0, 1e-6, IndexDistribution::point_mass(period).unwrap(), 1, period);
    let mut rng = RngStream::new(8);
    let mut x = vec![1.0, 1.0];
    let mut accepted = 0;
    for _ in 0..100 {
        let r = tht_step(&model, &x, &cfg, &mut rng).unwrap();
        if r.accepted_move {
            accepted += 1;
            assert_eq!(r.proposals_used, period);
        }
        x = r.next_x;
    }
    assert!(accepted >= 99);
}

#[test]
fn tht_potential_calls_match_support_visits() {
    let model = Quadratic::new(3);
    let period = 40;
    let psi = IndexDistribution::windowed_uniform(period, 3).unwrap();
    let cfg = tht_cfg(period, 2.0, 0.2, psi.clone(), 5, 60);
    let mut rng = RngStream::new(21);
    let mut x = vec![0.2, -0.3, 1.1];
    for _ in 0..30 {
        model.potential_calls.store(0, Ordering::Relaxed);
        let r = tht_step(&model, &x, &cfg, &mut rng).unwrap();
        let k0 = r.k0.unwrap() as i64;
        let visits = (1..=r.proposals_used as i64).filter(|n| psi.in_support(k0 + n)).count();
        assert_eq!(model.potential_calls.load(Ordering::Relaxed), 1 + visits);
        assert_eq!(r.h_trace.as_ref().unwrap().len(), visits);
        x = r.next_x;
    }
}

#[test]
fn tht_acceptability_is_monotone_in_h() {
    let model = Quadratic::new(2);
    let period = 60;
    let cfg = tht_cfg(period, 3.0, 0.3, IndexDistribution::windowed_uniform(period, 5).unwrap(), 11, 70);
    let mut rng = RngStream::new(2);
    let mut x = vec![0.5, 0.5];
    for _ in 0..100 {
        let r = tht_step(&model, &x, &cfg, &mut rng).unwrap();
        let trace = r.h_trace.unwrap();
        let worst_ok = trace.iter().filter(|t| t.acceptable).map(|t| t.delta_h).fold(f64::NEG_INFINITY, f64::max);
        let best_bad = trace.iter().filter(|t| !t.acceptable).map(|t| t.delta_h).fold(f64::INFINITY, f64::min);
        assert!(worst_ok < best_bad);
        x = r.next_x;
    }
}

#[test]
fn run_chain_identity_kernel() {
    let out = run_chain(
        |x: &[f64], _: &mut RngStream| Ok(StepResult::rejected(x, None, 1, 0)),
        &[1.0, 2.0],
        10,
        &mut RngStream::new(0),
    )
    .unwrap();
    assert_eq!(out.states.len(), 11);
    assert!(out.states.iter().all(|s| s == &[1.0, 2.0]));
}

#[test]
fn run_chain_rejects_non_finite_start() {
    let model = Quadratic::new(1);
    let cfg = HmcConfig { eps: 0.1, n_leapfrog: 3, mass: MassSpec::Identity };
    let err = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r), &[f64::NAN], 5, &mut RngStream::new(0));
    assert_eq!(err.unwrap_err(), crate::Error::NonFiniteState);
}

#[test]
fn parallel_chains_independent_of_workers() {
    let model = Quadratic::new(2);
    let cfg = HmcConfig { eps: 0.3, n_leapfrog: 5, mass: MassSpec::Identity };
    let inits: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, -1.0]).collect();
    let factory = |_: usize| |x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r);
    let one = run_parallel_chains(factory, &inits, 50, 99, 1).unwrap();
    let many = run_parallel_chains(factory, &inits, 50, 99, 8).unwrap();
    assert!(one.iter().zip(&many).all(|(a, b)| a.same_draws(b)));
    let same_start = vec![vec![0.0, 0.0]; 2];
    let pair = run_parallel_chains(factory, &same_start, 20, 99, 2).unwrap();
    assert_ne!(pair[0].states, pair[1].states);
}
