use std::ffi::{c_void, CStr};
use std::ptr;

use tht_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tht_last_error_message()) }.to_string_lossy().into_owned()
}

fn sampler(eps: f64, eta_star: f64, period: usize, n_acceptable: usize) -> *mut ThtSampler {
    let mut s = ptr::null_mut();
    let status = unsafe { tht_sampler_new(eps, eta_star, period, 2.0, 4, n_acceptable, period + 8, &mut s) };
    assert_eq!(status, ThtStatus::Ok, "{}", last_error());
    s
}

fn far_pair() -> *mut ThtModel {
    let (w, m, sd) = ([0.5, 0.5], [-5.0, 5.0], [1.0, 1.0]);
    let mut model = ptr::null_mut();
    let status = unsafe { tht_model_mixture_new(1, 2, w.as_ptr(), m.as_ptr(), sd.as_ptr(), &mut model) };
    assert_eq!(status, ThtStatus::Ok, "{}", last_error());
    model
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(tht_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_arguments_are_reported() {
    assert_eq!(unsafe { tht_rng_new(1, ptr::null_mut()) }, ThtStatus::NullPointer);
    assert!(last_error().contains("null"));
    let mut out = 0.0;
    assert_eq!(unsafe { tht_rng_uniform(ptr::null_mut(), &mut out) }, ThtStatus::NullPointer);
    unsafe {
        tht_rng_free(ptr::null_mut());
        tht_model_free(ptr::null_mut());
        tht_sampler_free(ptr::null_mut());
    }
}

#[test]
fn invalid_sampler_settings_are_rejected() {
    let mut s = ptr::null_mut();
    let status = unsafe { tht_sampler_new(0.1, 0.4, 32, 2.0, 8, 1, 0, &mut s) };
    assert_eq!(status, ThtStatus::InvalidArgument);
    assert!(s.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn derived_streams_are_reproducible() {
    let draw = |base, index| unsafe {
        let mut rng = ptr::null_mut();
        assert_eq!(tht_rng_derive(base, index, &mut rng), ThtStatus::Ok);
        let (mut u, mut z) = (0.0, 0.0);
        tht_rng_uniform(rng, &mut u);
        tht_rng_standard_normal(rng, &mut z);
        tht_rng_free(rng);
        (u, z)
    };
    assert_eq!(draw(9, 3), draw(9, 3));
    assert_ne!(draw(9, 3), draw(9, 4));
    let (u, z) = draw(9, 3);
    assert!((0.0..1.0).contains(&u) && z.is_finite());
}

#[test]
fn power_model_matches_closed_form() {
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { tht_model_power_new(2, 3.0, &mut model) }, ThtStatus::Ok);
    let x = [0.6, -0.8];
    let (mut u, mut g) = (0.0, [0.0; 2]);
    unsafe {
        assert_eq!(tht_model_dim(model), 2);
        assert_eq!(tht_model_potential(model, x.as_ptr(), 2, &mut u), ThtStatus::Ok);
        assert_eq!(tht_model_gradient(model, x.as_ptr(), 2, g.as_mut_ptr()), ThtStatus::Ok);
        assert_eq!(tht_model_potential(model, x.as_ptr(), 3, &mut u), ThtStatus::DimensionMismatch);
        tht_model_free(model);
    }
    // |x| = 1, so U = 1 and the gradient is 3x.
    assert!((u - 1.0).abs() < 1e-15);
    assert!((g[0] - 1.8).abs() < 1e-14 && (g[1] + 2.4).abs() < 1e-14);
}

extern "C" fn quadratic(x: *const f64, dim: usize, data: *mut c_void) -> f64 {
    let scale = unsafe { *(data as *const f64) };
    let x = unsafe { std::slice::from_raw_parts(x, dim) };
    0.5 * scale * x.iter().map(|v| v * v).sum::<f64>()
}

extern "C" fn quadratic_grad(x: *const f64, grad: *mut f64, dim: usize, data: *mut c_void) {
    let scale = unsafe { *(data as *const f64) };
    let (x, g) = unsafe { (std::slice::from_raw_parts(x, dim), std::slice::from_raw_parts_mut(grad, dim)) };
    for (gi, xi) in g.iter_mut().zip(x) {
        *gi = scale * xi;
    }
}

#[test]
fn callback_model_samples_a_standard_normal() {
    let mut scale = 1.0f64;
    let mut model = ptr::null_mut();
    let status = unsafe {
        tht_model_callback_new(1, Some(quadratic), Some(quadratic_grad), (&mut scale as *mut f64).cast(), &mut model)
    };
    assert_eq!(status, ThtStatus::Ok);
    let s = sampler(0.3, 0.4, 32, 1);
    let mut rng = ptr::null_mut();
    unsafe { tht_rng_new(21, &mut rng) };
    let iters = 4000;
    let mut states = vec![0.0; iters + 1];
    let mut accepted = vec![0u8; iters];
    let status = unsafe { tht_run_chain(s, model, rng, [0.0].as_ptr(), 1, iters, states.as_mut_ptr(), accepted.as_mut_ptr()) };
    assert_eq!(status, ThtStatus::Ok, "{}", last_error());
    let n = iters as f64;
    let mean = states[1..].iter().sum::<f64>() / n;
    let var = states[1..].iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    assert!(mean.abs() < 0.15, "mean {mean}");
    assert!((var - 1.0).abs() < 0.2, "var {var}");
    assert!(accepted.contains(&1));
    unsafe {
        tht_rng_free(rng);
        tht_sampler_free(s);
        tht_model_free(model);
    }
}

#[test]
fn null_callback_is_rejected() {
    let mut model = ptr::null_mut();
    let status = unsafe { tht_model_callback_new(1, Some(quadratic), None, ptr::null_mut(), &mut model) };
    assert_eq!(status, ThtStatus::NullPointer);
}

#[test]
fn single_steps_replay_the_chain() {
    let (model, s) = (far_pair(), sampler(0.1, 6.0, 500, 9));
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        tht_rng_new(5, &mut a);
        tht_rng_new(5, &mut b);
    }
    let iters = 50;
    let mut states = vec![0.0; iters + 1];
    unsafe { tht_run_chain(s, model, a, [4.0].as_ptr(), 1, iters, states.as_mut_ptr(), ptr::null_mut()) };
    let mut x = [4.0];
    let mut info = ThtStepInfo::default();
    for row in &states[1..] {
        let status = unsafe { tht_sampler_step(s, model, b, x.as_ptr(), 1, x.as_mut_ptr(), &mut info) };
        assert_eq!(status, ThtStatus::Ok);
        assert_eq!(x[0], *row);
        assert!(info.proposals_used >= info.acceptable_found);
    }
    let hops = states.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert!(hops > 0);
    unsafe {
        tht_rng_free(a);
        tht_rng_free(b);
        tht_sampler_free(s);
        tht_model_free(model);
    }
}

#[test]
fn rhat_flags_separated_chains_and_constant_input() {
    let n = 200;
    let mut values: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
    values.extend((0..n).map(|i| 10.0 + (i as f64 * 0.53).sin()));
    let mut r = 0.0;
    assert_eq!(unsafe { tht_rank_normalized_rhat(values.as_ptr(), 2, n, &mut r) }, ThtStatus::Ok);
    assert!(r > 1.5, "R-hat {r}");
    let flat = vec![1.0; 2 * n];
    assert_eq!(unsafe { tht_rank_normalized_rhat(flat.as_ptr(), 2, n, &mut r) }, ThtStatus::Undefined);
    assert!(r.is_nan());
}

#[test]
fn jump_bound_matches_closed_form() {
    let b = tht_chernoff_jump_bound(10, 20.0);
    // (2Δ/d)^{d/2} e^{d/2 − Δ} with d = 10, Δ = 20.
    let oracle = 4f64.powi(5) * (5.0f64 - 20.0).exp();
    assert!((b - oracle).abs() < 1e-12 * oracle);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tht.h")).unwrap();
    for name in ["tht_run_chain", "tht_sampler_step", "tht_model_callback_new", "THT_STATUS_OK", "ThtStepInfo"] {
        assert!(header.contains(name), "{name}");
    }
}
