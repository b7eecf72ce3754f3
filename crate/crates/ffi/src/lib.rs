//! C interface to `fracyamabe`.
//!
//! Every fallible function returns an [`FyStatus`]; on failure a message is
//! kept per thread and can be copied out with [`fy_last_error_message`].
//! Models and solutions are opaque handles released by their `_free`
//! functions. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracyamabe::bifurcation::{delta_gamma_at, delta_symbol, find_l0, Method};
use fracyamabe::cylinder::compute_multipliers;
use fracyamabe::kernel::{kernel, kernel_periodized, KernelParams, ModelParams};
use fracyamabe::minimize::{minimize_f, Classification, MinimizeResult, SolveConfig};
use fracyamabe::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Numerical = 3,
    BufferTooSmall = 4,
    NotConverged = 5,
    Panic = 6,
}

pub const FY_METHOD_GAMMA: u32 = 0;
pub const FY_METHOD_SYMBOL: u32 = 1;
pub const FY_METHOD_BOTH: u32 = 2;

pub const FY_CLASS_CONSTANT: i32 = 0;
pub const FY_CLASS_NONCONSTANT: i32 = 1;
pub const FY_CLASS_AMBIGUOUS: i32 = 2;

/// Opaque model handle: `(n, γ)` and the derived kernel constants.
pub struct FyModel {
    mp: ModelParams,
    kp: KernelParams,
}

/// Opaque result of [`fy_solve`].
pub struct FySolution {
    result: MinimizeResult,
}

/// Scalar summary of a solution.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FySolutionSummary {
    pub period: f64,
    pub grid_size: usize,
    pub c_value: f64,
    pub cstar_value: f64,
    pub residual: f64,
    pub amplitude: f64,
    pub iterations: usize,
    pub converged: bool,
    /// One of the `FY_CLASS_*` constants.
    pub classification: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: FyStatus, msg: impl Into<String>) -> FyStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FyStatus {
    let status = if e.is_parameter_error() {
        FyStatus::InvalidParams
    } else {
        FyStatus::Numerical
    };
    fail(status, e.to_string())
}

/// Run `f`, converting panics into [`FyStatus::Panic`].
fn guard(f: impl FnOnce() -> FyStatus) -> FyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(FyStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn method(code: u32) -> Option<Method> {
    match code {
        FY_METHOD_GAMMA => Some(Method::Gamma),
        FY_METHOD_SYMBOL => Some(Method::Symbol),
        FY_METHOD_BOTH => Some(Method::Both),
        _ => None,
    }
}

fn model_new(n: u32, gamma: f64, extended: bool, out: *mut *mut FyModel) -> FyStatus {
    guard(|| {
        if out.is_null() {
            return fail(FyStatus::NullPointer, "out is null");
        }
        let mp = if extended {
            ModelParams::new_extended(n, gamma)
        } else {
            ModelParams::new(n, gamma)
        };
        let built = mp.and_then(|mp| {
            Ok(FyModel {
                kp: KernelParams::from_model(&mp)?,
                mp,
            })
        });
        match built {
            Ok(m) => {
                // SAFETY: `out` is non-null and points to writable storage per the contract.
                unsafe { *out = Box::into_raw(Box::new(m)) };
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Create a model for `n >= 2 + 2γ`, `γ ∈ (0, 1)`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fy_model_new(n: u32, gamma: f64, out: *mut *mut FyModel) -> FyStatus {
    model_new(n, gamma, false, out)
}

/// Like [`fy_model_new`] but only requires `n >= 2`, `γ ∈ (0, 1)`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fy_model_new_extended(n: u32, gamma: f64, out: *mut *mut FyModel) -> FyStatus {
    model_new(n, gamma, true, out)
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from `fy_model_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fy_model_free(model: *mut FyModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Critical exponent `β` and constant `c_{n,γ}` of the model.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_model_constants(model: *const FyModel, beta: *mut f64, c_ngamma: *mut f64) -> FyStatus {
    guard(|| {
        let (Some(m), false, false) = (model.as_ref(), beta.is_null(), c_ngamma.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        *beta = m.mp.beta;
        *c_ngamma = m.mp.c_ngamma;
        FyStatus::Ok
    })
}

/// `K(ξ)`, `ξ ≠ 0`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_kernel(model: *const FyModel, xi: f64, out: *mut f64) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        match kernel(&m.kp, xi) {
            Ok(v) => {
                *out = v;
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `K_L(ξ)` with truncation tolerance `tol`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_kernel_periodized(
    model: *const FyModel,
    period: f64,
    xi: f64,
    tol: f64,
    out: *mut f64,
) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        match kernel_periodized(&m.kp, period, xi, tol) {
            Ok(v) => {
                *out = v;
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Fourier multipliers `θ_k`, `k = 0..=grid_size/2`, written to `out`,
/// which must hold at least `grid_size/2 + 1` values.
///
/// # Safety
/// `out` must be null or valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn fy_multipliers(
    model: *const FyModel,
    period: f64,
    grid_size: usize,
    out: *mut f64,
    out_len: usize,
) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let needed = grid_size / 2 + 1;
        if out_len < needed {
            return fail(FyStatus::BufferTooSmall, format!("need {needed} values, got {out_len}"));
        }
        match compute_multipliers(&m.mp, &m.kp, period, grid_size) {
            Ok(sm) => {
                ptr::copy_nonoverlapping(sm.theta.as_ptr(), out, sm.theta.len());
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// First eigenvalue `δ_L` of the linearization at the constant, by the
/// Gamma-ratio formula or the quadrature symbol.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_delta(model: *const FyModel, period: f64, method_code: u32, out: *mut f64) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let r = match method(method_code) {
            Some(Method::Gamma) => delta_gamma_at(&m.mp, period),
            Some(Method::Symbol) => delta_symbol(&m.mp, &m.kp, period),
            _ => {
                return fail(
                    FyStatus::InvalidParams,
                    format!("method {method_code} is not gamma or symbol"),
                )
            }
        };
        match r {
            Ok(v) => {
                *out = v;
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Bifurcation period `L₀`. With `FY_METHOD_BOTH`, `agreement` receives the
/// relative difference of the two roots; otherwise NaN. `agreement` may be null.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_find_l0(
    model: *const FyModel,
    method_code: u32,
    l0: *mut f64,
    agreement: *mut f64,
) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), l0.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let Some(method) = method(method_code) else {
            return fail(FyStatus::InvalidParams, format!("unknown method {method_code}"));
        };
        match find_l0(&m.mp, &m.kp, method) {
            Ok(r) => {
                *l0 = r.l0();
                if !agreement.is_null() {
                    *agreement = r.agreement.unwrap_or(f64::NAN);
                }
                FyStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Minimize the energy quotient at period `period` on `grid_size` points.
/// `tol <= 0` selects the default residual tolerance. A non-converged run
/// still produces a solution handle and returns [`FyStatus::NotConverged`].
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_solve(
    model: *const FyModel,
    period: f64,
    grid_size: usize,
    seed: u64,
    tol: f64,
    out: *mut *mut FySolution,
) -> FyStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let d = SolveConfig::default();
        let cfg = SolveConfig {
            n: grid_size,
            seed,
            grad_tol: if tol > 0.0 { tol } else { d.grad_tol },
            ..d
        };
        match minimize_f(&m.mp, &m.kp, period, &cfg) {
            Ok(result) => {
                let converged = result.converged;
                *out = Box::into_raw(Box::new(FySolution { result }));
                if converged {
                    FyStatus::Ok
                } else {
                    fail(FyStatus::NotConverged, "solver did not reach the residual tolerance")
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fy_solution_summary(solution: *const FySolution, out: *mut FySolutionSummary) -> FyStatus {
    guard(|| {
        let (Some(s), false) = (solution.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let r = &s.result;
        *out = FySolutionSummary {
            period: r.profile.l,
            grid_size: r.profile.values.len(),
            c_value: r.c_value,
            cstar_value: r.cstar_value,
            residual: r.residual,
            amplitude: r.amplitude,
            iterations: r.iterations,
            converged: r.converged,
            classification: match r.classification {
                Classification::Constant => FY_CLASS_CONSTANT,
                Classification::Nonconstant => FY_CLASS_NONCONSTANT,
                Classification::Ambiguous => FY_CLASS_AMBIGUOUS,
            },
        };
        FyStatus::Ok
    })
}

/// Copy the normalized profile values `v(t_j)`, `t_j = jL/N`, into `out`.
///
/// # Safety
/// `out` must be null or valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn fy_solution_profile(solution: *const FySolution, out: *mut f64, out_len: usize) -> FyStatus {
    guard(|| {
        let (Some(s), false) = (solution.as_ref(), out.is_null()) else {
            return fail(FyStatus::NullPointer, "null argument");
        };
        let v = &s.result.profile.values;
        if out_len < v.len() {
            return fail(
                FyStatus::BufferTooSmall,
                format!("need {} values, got {out_len}", v.len()),
            );
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        FyStatus::Ok
    })
}

/// Release a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a handle from `fy_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fy_solution_free(solution: *mut FySolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Copy the last error message of this thread, NUL-terminated and truncated
/// to `len` bytes, into `buf`. Returns the full message length without the
/// terminator, or 0 if there is none. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fy_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
