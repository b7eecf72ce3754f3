//! Discrete Fourier transforms in the convention `v̂_k = (1/N) Σ_j v_j e^{-2πijk/N}`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Normalized forward transform of a real sequence (all `N` coefficients).
pub fn forward(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward`]; returns the real part.
pub fn inverse_real(coeffs: &[Complex64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    buf.iter().map(|c| c.re).collect()
}

/// Index of the nonnegative frequency `|k|` represented by bin `k`.
#[inline]
pub fn frequency_index(k: usize, n: usize) -> usize {
    k.min(n - k)
}
