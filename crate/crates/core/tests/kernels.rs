//! Stationarity and mixing of the three transition kernels.

mod common;

use common::{normal_cdf, windowed_tht};
use proptest::prelude::*;
use tht_core::diagnostics::{count_mode_hops, effective_sample_size, ks_critical_1pct, ks_statistic, ProjectionClassifier};
use tht_core::mass::MassSpec;
use tht_core::rng::{RandomSource, RngStream};
use tht_core::samplers::{
    hmc_step, mass_enhanced_step, run_chain, run_parallel_chains, tht_step, ChainOutput, EnhancedConfig, HmcConfig,
};
use tht_core::targets::GaussianMixture;

fn standard_normal_target() -> GaussianMixture {
    GaussianMixture::normal(vec![0.0], 1.0).unwrap()
}

fn near_pair() -> GaussianMixture {
    GaussianMixture::symmetric_pair(vec![-5.0], vec![5.0], 1.0).unwrap()
}

fn mixture_cdf(x: f64) -> f64 {
    0.5 * normal_cdf(x + 5.0) + 0.5 * normal_cdf(x - 5.0)
}

fn moments(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0))
}

fn assert_ks_at_ess(draws: &[f64], cdf: impl Fn(f64) -> f64, label: &str) {
    let ess = effective_sample_size(draws);
    let ks = ks_statistic(draws, cdf);
    let crit = ks_critical_1pct(ess);
    assert!(ks < crit, "{label}: KS {ks} >= {crit} (ESS {ess})");
}

fn hmc(eps: f64, n: usize) -> HmcConfig {
    HmcConfig { eps, n_leapfrog: n, mass: MassSpec::Identity }
}

fn enhanced(alpha: f64, eps_tilde: f64, n: usize) -> EnhancedConfig {
    EnhancedConfig { mass: MassSpec::Identity, alpha, eps_tilde, max_proposals: n, n_acceptable: 1 }
}

#[test]
fn hmc_moments_on_standard_normal() {
    let model = standard_normal_target();
    let cfg = hmc(0.2, 32);
    let out = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r), &[0.0], 20_000, &mut RngStream::new(1)).unwrap();
    let draws = &out.coordinate(0)[1..];
    let (mean, var) = moments(draws);
    let se = var.sqrt() / effective_sample_size(draws).sqrt();
    assert!(mean.abs() < 3.0 * se, "mean {mean} se {se}");
    assert!((0.9..=1.1).contains(&var), "{var}");
}

#[test]
fn hmc_never_reaches_a_far_mode() {
    let model = GaussianMixture::symmetric_pair(vec![-200.0], vec![200.0], 1.0).unwrap();
    let cfg = hmc(0.2, 32);
    let out = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r), &[-200.0], 1_000, &mut RngStream::new(2)).unwrap();
    assert!(out.states.iter().all(|x| x[0] < 0.0));
}

#[test]
fn hmc_thinned_draws_match_normal_cdf() {
    let model = standard_normal_target();
    let cfg = hmc(0.2, 10);
    let out = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r), &[0.0], 20_000, &mut RngStream::new(3)).unwrap();
    let draws = out.coordinate(0);
    let thin = (draws.len() as f64 / effective_sample_size(&draws)).ceil().max(1.0) as usize;
    let thinned: Vec<f64> = draws.iter().step_by(thin).cloned().collect();
    let ks = ks_statistic(&thinned, normal_cdf);
    assert!(ks < 0.02, "KS {ks} over {} thinned draws", thinned.len());
}

#[test]
fn hmc_exact_on_standard_normal() {
    let model = standard_normal_target();
    let cfg = hmc(0.2, 32);
    let out = run_chain(|x: &[f64], r: &mut RngStream| hmc_step(&model, x, &cfg, r), &[0.0], 50_000, &mut RngStream::new(4)).unwrap();
    assert_ks_at_ess(&out.coordinate(0)[1000..], normal_cdf, "hmc N(0,1)");
}

#[test]
fn enhanced_variance_on_standard_normal() {
    let model = standard_normal_target();
    let cfg = enhanced(2.0, 0.1, 200);
    let out =
        run_chain(|x: &[f64], r: &mut RngStream| mass_enhanced_step(&model, x, &cfg, r), &[0.0], 20_000, &mut RngStream::new(5)).unwrap();
    let (_, var) = moments(&out.coordinate(0)[1..]);
    assert!((0.9..=1.1).contains(&var), "{var}");
}

#[test]
fn enhanced_exact_on_normal_and_near_pair() {
    let normal = standard_normal_target();
    let cfg = enhanced(2.0, 0.1, 200);
    let out =
        run_chain(|x: &[f64], r: &mut RngStream| mass_enhanced_step(&normal, x, &cfg, r), &[0.0], 50_000, &mut RngStream::new(6)).unwrap();
    assert_ks_at_ess(&out.coordinate(0)[1000..], normal_cdf, "enhanced N(0,1)");

    let pair = near_pair();
    let cfg = enhanced(16.0, 0.2, 400);
    let out =
        run_chain(|x: &[f64], r: &mut RngStream| mass_enhanced_step(&pair, x, &cfg, r), &[-5.0], 50_000, &mut RngStream::new(7)).unwrap();
    let draws = &out.coordinate(0)[1000..];
    assert_ks_at_ess(draws, mixture_cdf, "enhanced mixture");
    let right = draws.iter().filter(|x| **x > 0.0).count() as f64 / draws.len() as f64;
    assert!((0.45..=0.55).contains(&right), "{right}");
}

/// Lag-1 pair counts on a 10-bin grid over [-8, 8]; a reversible chain gives
/// a symmetric table.
fn lag_one_table(draws: &[f64]) -> [[f64; 10]; 10] {
    let bin = |x: f64| (((x + 8.0) / 1.6).floor().clamp(0.0, 9.0)) as usize;
    let mut t = [[0.0; 10]; 10];
    for w in draws.windows(2) {
        t[bin(w[0])][bin(w[1])] += 1.0;
    }
    t
}

#[test]
fn tempered_kernel_lag_one_table_is_symmetric() {
    let model = near_pair();
    let cfg = windowed_tht(400, 2.0, 0.1, 2.0, 5);
    let out = run_chain(|x: &[f64], r: &mut RngStream| tht_step(&model, x, &cfg, r), &[-5.0], 50_000, &mut RngStream::new(8)).unwrap();
    let t = lag_one_table(&out.coordinate(0));
    for (i, row) in t.iter().enumerate() {
        for (j, col) in t.iter().enumerate().skip(i + 1) {
            let (tij, tji) = (row[j], col[i]);
            let total = tij + tji;
            if total > 0.0 {
                assert!((tij - tji).abs() <= 4.0 * total.sqrt(), "cell ({i},{j}): {tij} vs {tji}");
            }
        }
    }
}

#[test]
fn one_step_from_exact_draws_preserves_the_mixture() {
    // Start every replicate at an exact draw; one transition must keep the law.
    let model = near_pair();
    let cfg = windowed_tht(400, 2.0, 0.1, 2.0, 5);
    let mut rng = RngStream::new(9);
    let moved: Vec<f64> = (0..20_000)
        .map(|_| {
            let x0 = model.sample(&mut rng);
            tht_step(&model, &x0, &cfg, &mut rng).unwrap().next_x[0]
        })
        .collect();
    assert!(ks_statistic(&moved, mixture_cdf) < ks_critical_1pct(moved.len() as f64));
}

fn far_pair_runs(chains: usize, iters: usize, seed: u64) -> Vec<ChainOutput> {
    let model = GaussianMixture::symmetric_pair(vec![-200.0], vec![200.0], 1.0).unwrap();
    let cfg = windowed_tht(500, 6.0, 0.1, 2.0, 4);
    let inits: Vec<Vec<f64>> = (0..chains).map(|i| vec![if i % 2 == 0 { -200.0 } else { 200.0 }]).collect();
    run_parallel_chains(|_| |x: &[f64], r: &mut RngStream| tht_step(&model, x, &cfg, r), &inits, iters, seed, 4).unwrap()
}

#[test]
fn twelve_far_pair_chains_all_visit_both_modes() {
    for c in far_pair_runs(12, 100, 10) {
        assert!(c.states.iter().any(|x| x[0] < 0.0) && c.states.iter().any(|x| x[0] > 0.0));
    }
}

#[test]
fn far_pair_chain_hops_often() {
    let out = &far_pair_runs(1, 500, 11)[0];
    let hops = count_mode_hops(&out.states, &ProjectionClassifier::between(&[-200.0], &[200.0]));
    assert!(hops >= 20, "{hops}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tempered_steps_replay_and_stay_finite(seed in any::<u64>(), x0 in -10.0f64..10.0) {
        let model = near_pair();
        let cfg = windowed_tht(100, 1.5, 0.1, 2.0, 2);
        let a = tht_step(&model, &[x0], &cfg, &mut RngStream::new(seed)).unwrap();
        let b = tht_step(&model, &[x0], &cfg, &mut RngStream::new(seed)).unwrap();
        prop_assert_eq!(&a.next_x, &b.next_x);
        prop_assert!(a.next_x[0].is_finite());
        prop_assert!(a.acceptable_found <= a.proposals_used);
        prop_assert!(a.proposals_used <= cfg.max_proposals);
        prop_assert_eq!(a.accepted_move, a.next_x[0] != x0);
    }

    #[test]
    fn rejected_steps_keep_the_state(seed in any::<u64>(), x0 in -3.0f64..3.0) {
        let model = standard_normal_target();
        let cfg = enhanced(4.0, 0.3, 20);
        let r = mass_enhanced_step(&model, &[x0], &cfg, &mut RngStream::new(seed)).unwrap();
        if !r.accepted_move {
            prop_assert_eq!(r.next_x, vec![x0]);
            prop_assert!(r.delta_h.is_nan());
        } else {
            prop_assert!(r.delta_h.is_finite());
        }
    }
}

#[test]
fn uniform_stream_is_in_unit_interval() {
    let mut rng = RngStream::new(12);
    assert!((0..10_000).map(|_| rng.uniform()).all(|u| u > 0.0 && u < 1.0));
}
