//! C interface to the tempered Hamiltonian transitions sampler.
//!
//! Every function returns a [`ThtStatus`]; on failure a description is kept
//! per thread and can be read with [`tht_last_error_message`]. Objects are
//! passed as opaque handles created by `tht_*_new` functions and released with
//! the matching `tht_*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tht_core::diagnostics::rank_normalized_rhat;
use tht_core::hamiltonian::chernoff_jump_bound;
use tht_core::mass::MassSpec;
use tht_core::rng::{RandomSource, RngStream};
use tht_core::samplers::{run_chain, tht_step, StepResult};
use tht_core::schedule::{IndexDistribution, MassSchedule};
use tht_core::targets::{GaussianMixture, PowerPotential};
use tht_core::{Error, PotentialModel, ThtConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    Undefined = 5,
    Panic = 6,
}

/// Summary of one transition.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ThtStepInfo {
    /// 1 when the state moved.
    pub accepted: u8,
    /// Extended-Hamiltonian increment at the accepted candidate; NaN if none.
    pub delta_h: f64,
    pub k0: i64,
    pub proposals_used: usize,
    pub acceptable_found: usize,
}

impl From<&StepResult> for ThtStepInfo {
    fn from(r: &StepResult) -> Self {
        ThtStepInfo {
            accepted: r.accepted_move as u8,
            delta_h: r.delta_h,
            k0: r.k0.map_or(-1, |k| k as i64),
            proposals_used: r.proposals_used,
            acceptable_found: r.acceptable_found,
        }
    }
}

pub struct ThtRng(RngStream);

pub struct ThtSampler(ThtConfig);

/// `U(x)` evaluated by the caller.
pub type ThtPotentialFn = Option<extern "C" fn(x: *const f64, dim: usize, user_data: *mut c_void) -> f64>;
/// Writes `∇U(x)` into `grad`.
pub type ThtGradientFn = Option<extern "C" fn(x: *const f64, grad: *mut f64, dim: usize, user_data: *mut c_void)>;

type PotentialFnPtr = extern "C" fn(*const f64, usize, *mut c_void) -> f64;
type GradientFnPtr = extern "C" fn(*const f64, *mut f64, usize, *mut c_void);

struct Callback {
    dim: usize,
    potential: PotentialFnPtr,
    gradient: GradientFnPtr,
    user_data: *mut c_void,
}

// The library only calls models from the thread that invoked it.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

impl PotentialModel for Callback {
    fn dim(&self) -> usize {
        self.dim
    }
    fn potential(&self, x: &[f64]) -> f64 {
        (self.potential)(x.as_ptr(), self.dim, self.user_data)
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (self.gradient)(x.as_ptr(), grad.as_mut_ptr(), self.dim, self.user_data)
    }
}

pub struct ThtModel(Box<dyn PotentialModel + Send>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: ThtStatus, msg: impl AsRef<str>) -> ThtStatus {
    set_error(msg.as_ref());
    status
}

fn from_core(e: Error) -> ThtStatus {
    let status = match e {
        Error::NonFiniteState | Error::SingularGradient { .. } => ThtStatus::NonFinite,
        Error::DimensionMismatch { .. } => ThtStatus::DimensionMismatch,
        _ => ThtStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> ThtStatus) -> ThtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == ThtStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(ThtStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(ThtStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

unsafe fn slice<'a>(p: *const f64, n: usize) -> &'a [f64] {
    if n == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, n)
    }
}

unsafe fn slice_mut<'a>(p: *mut f64, n: usize) -> &'a mut [f64] {
    if n == 0 {
        &mut []
    } else {
        std::slice::from_raw_parts_mut(p, n)
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> ThtStatus {
    *out = Box::into_raw(Box::new(value));
    ThtStatus::Ok
}

/// Message describing the most recent failure on this thread, or "" after a
/// success. Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tht_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Random stream seeded from `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tht_rng_new(seed: u64, out: *mut *mut ThtRng) -> ThtStatus {
    guard(|| {
        non_null!(out);
        emit(out, ThtRng(RngStream::new(seed)))
    })
}

/// Stream number `index` derived from `base_seed`, as used for parallel chains.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tht_rng_derive(base_seed: u64, index: u64, out: *mut *mut ThtRng) -> ThtStatus {
    guard(|| {
        non_null!(out);
        emit(out, ThtRng(RngStream::derive(base_seed, index)))
    })
}

/// # Safety
/// `rng` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tht_rng_uniform(rng: *mut ThtRng, out: *mut f64) -> ThtStatus {
    guard(|| {
        non_null!(rng, out);
        *out = (*rng).0.uniform();
        ThtStatus::Ok
    })
}

/// # Safety
/// `rng` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tht_rng_standard_normal(rng: *mut ThtRng, out: *mut f64) -> ThtStatus {
    guard(|| {
        non_null!(rng, out);
        *out = (*rng).0.standard_normal();
        ThtStatus::Ok
    })
}

/// # Safety
/// `rng` must come from `tht_rng_new`/`tht_rng_derive` or be null.
#[no_mangle]
pub unsafe extern "C" fn tht_rng_free(rng: *mut ThtRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Mixture of `n_components` isotropic normals in `dim` dimensions.
/// `means` is row-major `n_components × dim`; weights must sum to one.
///
/// # Safety
/// Arrays must hold the stated number of elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tht_model_mixture_new(
    dim: usize,
    n_components: usize,
    weights: *const f64,
    means: *const f64,
    sds: *const f64,
    out: *mut *mut ThtModel,
) -> ThtStatus {
    guard(|| {
        non_null!(weights, means, sds, out);
        if dim == 0 || n_components == 0 {
            return fail(ThtStatus::InvalidArgument, "dim and n_components must be positive");
        }
        let (w, m, s) = (slice(weights, n_components), slice(means, n_components * dim), slice(sds, n_components));
        let components = (0..n_components)
            .map(|j| tht_core::targets::Component {
                weight: w[j],
                mean: m[j * dim..(j + 1) * dim].to_vec(),
                covariance: tht_core::targets::Covariance::Isotropic(s[j]),
            })
            .collect();
        match GaussianMixture::new(components) {
            Ok(mix) => emit(out, ThtModel(Box::new(mix))),
            Err(e) => from_core(e),
        }
    })
}

/// `U(x) = ‖x‖^γ` in `dim` dimensions.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tht_model_power_new(dim: usize, gamma: f64, out: *mut *mut ThtModel) -> ThtStatus {
    guard(|| {
        non_null!(out);
        match PowerPotential::isotropic(dim, gamma) {
            Ok(p) => emit(out, ThtModel(Box::new(p))),
            Err(e) => from_core(e),
        }
    })
}

/// Model backed by caller-supplied functions. The callbacks are invoked only
/// from the thread that calls into the library.
///
/// # Safety
/// The callbacks must be valid for the lifetime of the model and accept
/// `user_data`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tht_model_callback_new(
    dim: usize,
    potential: ThtPotentialFn,
    gradient: ThtGradientFn,
    user_data: *mut c_void,
    out: *mut *mut ThtModel,
) -> ThtStatus {
    guard(|| {
        non_null!(out);
        let (Some(potential), Some(gradient)) = (potential, gradient) else {
            return fail(ThtStatus::NullPointer, "null callback");
        };
        if dim == 0 {
            return fail(ThtStatus::InvalidArgument, "dim must be positive");
        }
        emit(out, ThtModel(Box::new(Callback { dim, potential, gradient, user_data })))
    })
}

/// # Safety
/// `model` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tht_model_dim(model: *const ThtModel) -> usize {
    if model.is_null() {
        0
    } else {
        (*model).0.dim()
    }
}

/// # Safety
/// `x` holds `dim` entries; `model` and `out` are valid.
#[no_mangle]
pub unsafe extern "C" fn tht_model_potential(model: *const ThtModel, x: *const f64, dim: usize, out: *mut f64) -> ThtStatus {
    guard(|| {
        non_null!(model, x, out);
        let m = &(*model).0;
        if dim != m.dim() {
            return from_core(Error::DimensionMismatch { expected: m.dim(), got: dim });
        }
        *out = m.potential(slice(x, dim));
        ThtStatus::Ok
    })
}

/// # Safety
/// `x` and `grad` hold `dim` entries; `model` is valid.
#[no_mangle]
pub unsafe extern "C" fn tht_model_gradient(model: *const ThtModel, x: *const f64, dim: usize, grad: *mut f64) -> ThtStatus {
    guard(|| {
        non_null!(model, x, grad);
        let m = &(*model).0;
        if dim != m.dim() {
            return from_core(Error::DimensionMismatch { expected: m.dim(), got: dim });
        }
        m.gradient(slice(x, dim), slice_mut(grad, dim));
        ThtStatus::Ok
    })
}

/// # Safety
/// `model` must come from a `tht_model_*_new` function or be null.
#[no_mangle]
pub unsafe extern "C" fn tht_model_free(model: *mut ThtModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Tempered transition settings with the cosine schedule
/// `η_k = η*(1 − cos 2πk/K)`, identity mass and `ψ_K` uniform on
/// `|k| ≤ psi_half_width`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tht_sampler_new(
    eps: f64,
    eta_star: f64,
    period: usize,
    gamma_hat: f64,
    psi_half_width: usize,
    n_acceptable: usize,
    max_proposals: usize,
    out: *mut *mut ThtSampler,
) -> ThtStatus {
    guard(|| {
        non_null!(out);
        let build = || -> tht_core::Result<ThtConfig> {
            let cfg = ThtConfig {
                eps,
                a: ThtConfig::time_scale_for_gamma(gamma_hat),
                n_acceptable,
                max_proposals,
                schedule: MassSchedule::cosine(eta_star, 0.0, period)?,
                psi: IndexDistribution::windowed_uniform(period, psi_half_width)?,
                mass: MassSpec::Identity,
                trace_hamiltonian: false,
            };
            cfg.validate()?;
            Ok(cfg)
        };
        match build() {
            Ok(cfg) => emit(out, ThtSampler(cfg)),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `sampler` must come from `tht_sampler_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn tht_sampler_free(sampler: *mut ThtSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// One transition from `x` (length `dim`), written to `x_next`. `info` may be
/// null.
///
/// # Safety
/// Handles must be valid; `x` and `x_next` hold `dim` entries and may alias.
#[no_mangle]
pub unsafe extern "C" fn tht_sampler_step(
    sampler: *const ThtSampler,
    model: *const ThtModel,
    rng: *mut ThtRng,
    x: *const f64,
    dim: usize,
    x_next: *mut f64,
    info: *mut ThtStepInfo,
) -> ThtStatus {
    guard(|| {
        non_null!(sampler, model, rng, x, x_next);
        let start = slice(x, dim).to_vec();
        match tht_step(&(*model).0, &start, &(*sampler).0, &mut (*rng).0) {
            Ok(r) => {
                slice_mut(x_next, dim).copy_from_slice(&r.next_x);
                if !info.is_null() {
                    *info = ThtStepInfo::from(&r);
                }
                ThtStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Runs `iters` transitions from `x0`. `states` receives `(iters + 1) × dim`
/// values row by row, starting with `x0`; `accepted` (nullable) receives
/// `iters` flags.
///
/// # Safety
/// Handles must be valid and the arrays sized as stated.
#[no_mangle]
pub unsafe extern "C" fn tht_run_chain(
    sampler: *const ThtSampler,
    model: *const ThtModel,
    rng: *mut ThtRng,
    x0: *const f64,
    dim: usize,
    iters: usize,
    states: *mut f64,
    accepted: *mut u8,
) -> ThtStatus {
    guard(|| {
        non_null!(sampler, model, rng, x0, states);
        let (m, cfg) = (&(*model).0, &(*sampler).0);
        if dim != m.dim() {
            return from_core(Error::DimensionMismatch { expected: m.dim(), got: dim });
        }
        let out = match run_chain(|x: &[f64], r: &mut RngStream| tht_step(m, x, cfg, r), slice(x0, dim), iters, &mut (*rng).0) {
            Ok(o) => o,
            Err(e) => return from_core(e),
        };
        let dst = slice_mut(states, (iters + 1) * dim);
        for (row, s) in dst.chunks_exact_mut(dim.max(1)).zip(&out.states) {
            row.copy_from_slice(s);
        }
        if !accepted.is_null() {
            let flags = std::slice::from_raw_parts_mut(accepted, iters);
            for (f, r) in flags.iter_mut().zip(&out.step_results) {
                *f = r.accepted_move as u8;
            }
        }
        ThtStatus::Ok
    })
}

/// Rank-normalized split R-hat of `n_chains` chains of `length` draws stored
/// row by row in `values`. Returns `THT_STATUS_UNDEFINED` for constant input.
///
/// # Safety
/// `values` holds `n_chains × length` entries; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn tht_rank_normalized_rhat(
    values: *const f64,
    n_chains: usize,
    length: usize,
    out: *mut f64,
) -> ThtStatus {
    guard(|| {
        non_null!(values, out);
        let all = slice(values, n_chains * length);
        let chains: Vec<Vec<f64>> = all.chunks_exact(length.max(1)).map(<[f64]>::to_vec).collect();
        match rank_normalized_rhat(&chains) {
            Ok(Some(r)) => {
                *out = r;
                ThtStatus::Ok
            }
            Ok(None) => {
                *out = f64::NAN;
                fail(ThtStatus::Undefined, "R-hat undefined for zero pooled variance")
            }
            Err(e) => from_core(e),
        }
    })
}

/// Chernoff bound on `P(χ²_d > 2Δ)`.
#[no_mangle]
pub extern "C" fn tht_chernoff_jump_bound(d: usize, delta: f64) -> f64 {
    chernoff_jump_bound(d, delta)
}

