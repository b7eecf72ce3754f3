use std::ffi::CStr;
use std::ptr;

use fracyamabe_ffi::*;

fn model(n: u32, gamma: f64) -> *mut FyModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { fy_model_new(n, gamma, &mut m) }, FyStatus::Ok);
    m
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let len = unsafe { fy_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(len > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn kernel_and_constants() {
    let m = model(3, 0.5);
    let mut k = 0.0;
    assert_eq!(unsafe { fy_kernel(m, 1.0, &mut k) }, FyStatus::Ok);
    assert!((k - std::f64::consts::PI / 1f64.sinh().powi(2)).abs() < 1e-12);
    let (mut beta, mut c) = (0.0, 0.0);
    assert_eq!(unsafe { fy_model_constants(m, &mut beta, &mut c) }, FyStatus::Ok);
    assert_eq!(beta, 2.0);
    assert!((c - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    let mut kl = 0.0;
    assert_eq!(
        unsafe { fy_kernel_periodized(m, 6.0, 1.0, 1e-15, &mut kl) },
        FyStatus::Ok
    );
    assert!(kl > k);
    assert_eq!(unsafe { fy_kernel(m, 0.0, &mut k) }, FyStatus::Numerical);
    unsafe { fy_model_free(m) };
}

#[test]
fn invalid_parameters_and_nulls() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { fy_model_new(2, 0.9, &mut m) }, FyStatus::InvalidParams);
    assert!(m.is_null());
    assert!(last_error().contains("3.8"));
    assert_eq!(unsafe { fy_model_new_extended(3, 0.9, &mut m) }, FyStatus::Ok);
    unsafe { fy_model_free(m) };
    assert_eq!(unsafe { fy_model_new(3, 0.5, ptr::null_mut()) }, FyStatus::NullPointer);
    let mut k = 0.0;
    assert_eq!(unsafe { fy_kernel(ptr::null(), 1.0, &mut k) }, FyStatus::NullPointer);
    unsafe { fy_model_free(ptr::null_mut()) };
    unsafe { fy_solution_free(ptr::null_mut()) };
}

#[test]
fn multipliers_delta_and_l0() {
    let m = model(3, 0.5);
    let mut theta = [0.0; 9];
    assert_eq!(
        unsafe { fy_multipliers(m, 8.0, 16, theta.as_mut_ptr(), 8) },
        FyStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { fy_multipliers(m, 8.0, 16, theta.as_mut_ptr(), 9) },
        FyStatus::Ok
    );
    assert!(theta[0].abs() < 1e-12 && theta.windows(2).all(|w| w[1] > w[0]));
    let (mut dg, mut ds) = (0.0, 0.0);
    assert_eq!(unsafe { fy_delta(m, 8.0, FY_METHOD_GAMMA, &mut dg) }, FyStatus::Ok);
    assert_eq!(unsafe { fy_delta(m, 8.0, FY_METHOD_SYMBOL, &mut ds) }, FyStatus::Ok);
    assert!((dg - ds).abs() < 1e-10 && (dg - (theta[1] - 2.0 / std::f64::consts::PI)).abs() < 1e-10);
    assert_eq!(unsafe { fy_delta(m, 8.0, 7, &mut dg) }, FyStatus::InvalidParams);
    let (mut l0, mut agreement) = (0.0, 0.0);
    assert_eq!(
        unsafe { fy_find_l0(m, FY_METHOD_BOTH, &mut l0, &mut agreement) },
        FyStatus::Ok
    );
    assert!((l0 - 5.1538).abs() < 1e-3 && agreement <= 1e-6);
    unsafe { fy_model_free(m) };
}

#[test]
fn solve_round_trip() {
    let m = model(3, 0.5);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fy_solve(m, 8.0, 64, 0, 0.0, &mut s) }, FyStatus::Ok);
    let mut sum = FySolutionSummary::default();
    assert_eq!(unsafe { fy_solution_summary(s, &mut sum) }, FyStatus::Ok);
    assert_eq!(sum.classification, FY_CLASS_NONCONSTANT);
    assert!(sum.converged && sum.c_value < sum.cstar_value && sum.grid_size == 64);
    let mut v = vec![0.0; 64];
    assert_eq!(
        unsafe { fy_solution_profile(s, v.as_mut_ptr(), 63) },
        FyStatus::BufferTooSmall
    );
    assert_eq!(unsafe { fy_solution_profile(s, v.as_mut_ptr(), 64) }, FyStatus::Ok);
    assert!(v.iter().all(|&x| x > 0.0));
    unsafe { fy_solution_free(s) };

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { fy_solve(m, 8.0, 100, 0, 0.0, &mut s) },
        FyStatus::InvalidParams
    );
    assert!(s.is_null());
    unsafe { fy_model_free(m) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fy_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
