//! C ABI over the `linbandit` core.
//!
//! Every function returns an [`LbStatus`]; results go through out-pointers.
//! On failure a description is kept per thread and can be read back with
//! [`lb_last_error_message`]. Policies are opaque handles owned by the
//! caller and released with [`lb_policy_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use linbandit::algorithms::{Inference, Policy, PolicyConfig, PolicyKind};
use linbandit::dense::Matrix;
use linbandit::divergence::bounds::quantile_shift_bound;
use linbandit::divergence::{gaussian_closed_form, Gaussian};
use linbandit::linalg::{beta, ConfidenceParams};
use linbandit::rng::{stream, substream, Rng};
use linbandit::special::norm_ppf;
use linbandit::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Numeric = 4,
    /// The divergence is infinite; the out-value holds `+inf`.
    Infinite = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbPolicyKind {
    LinTs = 0,
    LinBucb = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbInference {
    Exact = 0,
    Approximate = 1,
}

/// Confidence-radius parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbConfidence {
    pub nu: f64,
    pub lambda: f64,
    pub s_bound: f64,
    pub delta: f64,
}

impl From<LbConfidence> for ConfidenceParams {
    fn from(c: LbConfidence) -> Self {
        ConfidenceParams {
            nu: c.nu,
            lambda: c.lambda,
            s_bound: c.s_bound,
            delta: c.delta,
        }
    }
}

/// Opaque policy handle.
pub struct LbPolicy {
    policy: Policy,
    rng: Rng,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: LbStatus, msg: impl Into<String>) -> LbStatus {
    set_error(msg.into());
    status
}

fn status_of(e: Error) -> LbStatus {
    let status = match &e {
        Error::DimensionMismatch { .. } => LbStatus::DimensionMismatch,
        Error::NotPositiveDefinite { .. } | Error::Quadrature { .. } | Error::Degenerate(_) => LbStatus::Numeric,
        _ => LbStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> LbStatus) -> LbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == LbStatus::Ok {
                set_error(String::new());
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(LbStatus::Panic, format!("panic: {msg}"))
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(LbStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Creates a policy. `gamma` is read only for LinBUCB. The handle owns its
/// own random stream derived from `seed`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_new(
    kind: LbPolicyKind,
    inference: LbInference,
    dim: usize,
    horizon: usize,
    confidence: LbConfidence,
    gamma: f64,
    seed: u64,
    out: *mut *mut LbPolicy,
) -> LbStatus {
    guard(|| {
        non_null!(out);
        if dim == 0 {
            return fail(LbStatus::InvalidArgument, "dim must be positive");
        }
        let kind = match kind {
            LbPolicyKind::LinTs => PolicyKind::LinTS,
            LbPolicyKind::LinBucb => PolicyKind::LinBUCB,
        };
        let inference = match inference {
            LbInference::Exact => Inference::Exact,
            LbInference::Approximate => Inference::Approximate,
        };
        let mut cfg = PolicyConfig::new(kind, inference, confidence.into(), horizon);
        if kind == PolicyKind::LinBUCB {
            cfg = cfg.with_gamma(gamma);
        }
        match Policy::new(cfg, dim) {
            Ok(policy) => {
                let handle = Box::new(LbPolicy {
                    policy,
                    rng: substream(seed, stream::POLICY),
                });
                *out = Box::into_raw(handle);
                LbStatus::Ok
            }
            Err(e) => status_of(e),
        }
    })
}

/// Releases a policy. Null is ignored.
///
/// # Safety
/// `policy` must come from [`lb_policy_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_free(policy: *mut LbPolicy) {
    if !policy.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(policy))));
    }
}

/// Picks an arm from `n_arms` row-major arms of length `dim`.
///
/// # Safety
/// `arms` must hold `n_arms * dim` values; `out_index` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_select(
    policy: *mut LbPolicy,
    arms: *const f64,
    n_arms: usize,
    dim: usize,
    out_index: *mut usize,
) -> LbStatus {
    guard(|| {
        non_null!(policy, arms, out_index);
        let h = &mut *policy;
        if dim != h.policy.state().dim() {
            return status_of(Error::DimensionMismatch {
                expected: h.policy.state().dim(),
                actual: dim,
            });
        }
        let Some(len) = n_arms.checked_mul(dim) else {
            return fail(LbStatus::InvalidArgument, "n_arms * dim overflows");
        };
        let flat = slice::from_raw_parts(arms, len);
        let rows: Vec<Vec<f64>> = flat.chunks(dim).map(<[f64]>::to_vec).collect();
        match h.policy.select_arm(&rows, &mut h.rng) {
            Ok(i) => {
                *out_index = i;
                LbStatus::Ok
            }
            Err(e) => status_of(e),
        }
    })
}

/// Absorbs the reward observed for `arm`.
///
/// # Safety
/// `arm` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_update(policy: *mut LbPolicy, arm: *const f64, dim: usize, reward: f64) -> LbStatus {
    guard(|| {
        non_null!(policy, arm);
        let h = &mut *policy;
        match h.policy.update(slice::from_raw_parts(arm, dim), reward) {
            Ok(()) => LbStatus::Ok,
            Err(e) => status_of(e),
        }
    })
}

/// Copies the current point estimate into `out`.
///
/// # Safety
/// `out` must be writable for `dim` values.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_estimate(policy: *const LbPolicy, out: *mut f64, dim: usize) -> LbStatus {
    guard(|| {
        non_null!(policy, out);
        let est = (*policy).policy.state().estimate();
        if est.len() != dim {
            return status_of(Error::DimensionMismatch {
                expected: est.len(),
                actual: dim,
            });
        }
        slice::from_raw_parts_mut(out, dim).copy_from_slice(est);
        LbStatus::Ok
    })
}

/// Number of updates absorbed so far.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lb_policy_step(policy: *const LbPolicy, out: *mut usize) -> LbStatus {
    guard(|| {
        non_null!(policy, out);
        *out = (*policy).policy.step();
        LbStatus::Ok
    })
}

/// Confidence radius `β_t(δ)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lb_beta(confidence: LbConfidence, step: usize, dim: usize, out: *mut f64) -> LbStatus {
    guard(|| {
        non_null!(out);
        match beta(&confidence.into(), step, dim) {
            Ok(b) => {
                *out = b;
                LbStatus::Ok
            }
            Err(e) => status_of(e),
        }
    })
}

/// Standard normal quantile for `p` in `(0, 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lb_norm_quantile(p: f64, out: *mut f64) -> LbStatus {
    guard(|| {
        non_null!(out);
        if !(p > 0.0 && p < 1.0) {
            return fail(LbStatus::InvalidArgument, format!("p must lie in (0, 1), got {p}"));
        }
        *out = norm_ppf(p);
        LbStatus::Ok
    })
}

/// Closed-form `D_α(N(m1, C1), N(m2, C2))` for `dim`-dimensional Gaussians
/// with row-major covariances. Writes `+inf` and returns
/// [`LbStatus::Infinite`] when the divergence diverges.
///
/// # Safety
/// Means must hold `dim` values and covariances `dim * dim`.
#[no_mangle]
pub unsafe extern "C" fn lb_alpha_divergence_gaussian(
    dim: usize,
    mean1: *const f64,
    cov1: *const f64,
    mean2: *const f64,
    cov2: *const f64,
    alpha: f64,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        non_null!(mean1, cov1, mean2, cov2, out);
        if dim == 0 {
            return fail(LbStatus::InvalidArgument, "dim must be positive");
        }
        if !alpha.is_finite() {
            return fail(LbStatus::InvalidArgument, format!("alpha must be finite, got {alpha}"));
        }
        let Some(sq) = dim.checked_mul(dim) else {
            return fail(LbStatus::InvalidArgument, "dim * dim overflows");
        };
        let build = |m: *const f64, c: *const f64| -> linbandit::Result<Gaussian> {
            let cov = Matrix::from_row_major(dim, slice::from_raw_parts(c, sq).to_vec())?;
            Gaussian::new(slice::from_raw_parts(m, dim).to_vec(), cov)
        };
        let (g1, g2) = match (build(mean1, cov1), build(mean2, cov2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return status_of(e),
        };
        let r = gaussian_closed_form(&g1, &g2, alpha);
        *out = r.value;
        if r.is_infinite() {
            fail(LbStatus::Infinite, format!("divergence of order {alpha} is infinite"))
        } else if r.value.is_nan() {
            fail(LbStatus::Numeric, "divergence evaluated to NaN")
        } else {
            LbStatus::Ok
        }
    })
}

/// Lower bound on the quantile shift under `D_α ≤ ε`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lb_quantile_shift_bound(gamma: f64, epsilon: f64, alpha: f64, out: *mut f64) -> LbStatus {
    guard(|| {
        non_null!(out);
        match quantile_shift_bound(gamma, epsilon, alpha) {
            Ok(v) => {
                *out = v;
                LbStatus::Ok
            }
            Err(e) => status_of(e),
        }
    })
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// NUL-terminated) and returns its full length in bytes, excluding the NUL.
/// Pass a null `buf` to query the length.
///
/// # Safety
/// `buf` must be writable for `len` bytes when non-null.
#[no_mangle]
pub unsafe extern "C" fn lb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
    Ok(v) => v,
    Err(_) => panic!("version string"),
};

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lb_version() -> *const c_char {
    VERSION.as_ptr()
}
