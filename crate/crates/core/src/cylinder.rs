//! Discretized variational objects on the cylinder: periodic profiles, the
//! Fourier multipliers of the nonlocal form, the energy quotient, the
//! Euler–Lagrange residual, the normalization constant and the bubble.
//!
//! The nonlocal operator is `𝓛v(t) = κ P.V.∫ (v(t) - v(τ)) K_L(t - τ) dτ + c v(t)`;
//! on the Fourier mode `e^{iμt}` it acts by `θ(μ) + c` with
//! `θ(μ) = κ ∫_ℝ (1 - cos μξ) K(ξ) dξ`. The quadratic form used throughout is
//! the one whose first variation is that operator,
//! `(κ/2) ∫∫ (v(t) - v(τ))² K_L(t - τ) dτ dt = L Σ_{k≠0} θ_k |v̂_k|²`.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{self, frequency_index};
use crate::kernel::{kernel, ln_cosh, ln_kernel, ln_sinh, singular_strength, KernelParams, ModelParams};
use crate::quad::{geometric_breakpoints, integrate_adaptive, GaussLegendre, QuadOptions};
use crate::specfun::gamma_real;

/// Smallest admissible grid.
pub const MIN_GRID: usize = 8;

/// An `L`-periodic profile sampled at `t_j = jL/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicProfile {
    pub l: f64,
    pub values: Vec<f64>,
}

impl PeriodicProfile {
    pub fn new(l: f64, values: Vec<f64>) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParams(format!("period L = {l} must be positive")));
        }
        let n = values.len();
        if n < MIN_GRID || !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "grid size N = {n} must be a power of two >= {MIN_GRID}"
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite profile value {bad}")));
        }
        Ok(Self { l, values })
    }

    pub fn constant(l: f64, n: usize, value: f64) -> Result<Self> {
        Self::new(l, vec![value; n])
    }

    pub fn from_fn(l: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(l, (0..n).map(|j| f(j as f64 * l / n as f64)).collect())
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn h(&self) -> f64 {
        self.l / self.n() as f64
    }

    pub fn grid_point(&self, j: usize) -> f64 {
        j as f64 * self.h()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn amplitude(&self) -> f64 {
        self.max() - self.min()
    }

    /// Rectangle rule for `∫₀^L |v|^p dt`.
    pub fn integral_abs_pow(&self, p: f64) -> f64 {
        self.h() * self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            l: self.l,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// `θ_k = θ(2πk/L)` for `k = 0..=N/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMultipliers {
    pub l: f64,
    pub n: usize,
    pub theta: Vec<f64>,
}

impl SpectralMultipliers {
    /// Multiplier for DFT bin `k ∈ 0..N`.
    #[inline]
    pub fn for_bin(&self, k: usize) -> f64 {
        self.theta[frequency_index(k, self.n)]
    }

    pub fn check_shape(&self, p: &PeriodicProfile) -> Result<()> {
        let same_l = (self.l - p.l).abs() <= 1e-14 * self.l.abs();
        if !same_l || self.n != p.n() {
            return Err(Error::ShapeMismatch {
                expected_l: self.l,
                expected_n: self.n,
                got_l: p.l,
                got_n: p.n(),
            });
        }
        Ok(())
    }
}

/// Absolute accuracy targeted for each multiplier.
pub const MULTIPLIER_TOL: f64 = 1e-13;

/// Quadrature nodes shared by all multipliers with frequency up to `mu_max`.
struct MultiplierRule {
    eps: f64,
    xs: Vec<f64>,
    ws: Vec<f64>,
    k: Vec<f64>,
    kappa: f64,
    kappa0: f64,
    gamma: f64,
}

impl MultiplierRule {
    fn new(mp: &ModelParams, kp: &KernelParams, mu_max: f64) -> Result<Self> {
        let kappa = mp.kappa_ngamma;
        let kappa0 = singular_strength(kp)?;
        let width = if mu_max > 0.0 {
            (std::f64::consts::PI / mu_max).min(0.5)
        } else {
            0.5
        };
        let eps = 1e-7 * (1.0f64).min(1.0 / mu_max.max(1e-300));
        // ∫_X^∞ 4κ K ≤ 4κ K(X)/a
        let mut x_end = 2.0;
        while 4.0 * kappa * kernel(kp, x_end)? / kp.tail_rate >= MULTIPLIER_TOL {
            x_end += 1.0;
        }
        let rule = GaussLegendre::order16();
        let (mut xs, mut ws) = (Vec::new(), Vec::new());
        let push_uniform = |lo: f64, hi: f64, xs: &mut Vec<f64>, ws: &mut Vec<f64>| {
            let m = ((hi - lo) / width).ceil().max(1.0) as usize;
            let step = (hi - lo) / m as f64;
            for i in 0..m {
                let a = lo + i as f64 * step;
                let b = if i + 1 == m { hi } else { a + step };
                rule.push_panel(a, b, xs, ws);
            }
        };
        let mut lo = eps;
        while lo < 1.0 {
            let hi = (2.0 * lo).min(1.0);
            push_uniform(lo, hi, &mut xs, &mut ws);
            lo = hi;
        }
        push_uniform(1.0, x_end, &mut xs, &mut ws);
        let k = xs.par_iter().map(|&x| kernel(kp, x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            eps,
            xs,
            ws,
            k,
            kappa,
            kappa0,
            gamma: mp.gamma,
        })
    }

    /// `2κ κ₀ ∫₀^ε 2 sin²(μξ/2) ξ^{-1-2γ} dξ` by its power series.
    fn near_zero(&self, mu: f64) -> f64 {
        let g2 = 2.0 * self.gamma;
        let mut sum = 0.0;
        let mut fact = 1.0;
        let mut sign = 1.0;
        for j in 1..20 {
            let jj = 2 * j;
            fact *= (jj - 1) as f64 * jj as f64;
            let term = sign * (mu * self.eps).powi(jj) * self.eps.powf(-g2) / (fact * (jj as f64 - g2));
            sum += term;
            if term.abs() < 1e-30 * sum.abs() {
                break;
            }
            sign = -sign;
        }
        2.0 * self.kappa * self.kappa0 * sum
    }

    fn theta(&self, mu: f64) -> f64 {
        if mu == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for ((x, w), k) in self.xs.iter().zip(&self.ws).zip(&self.k) {
            let s = (0.5 * mu * x).sin();
            acc += w * 2.0 * s * s * k;
        }
        2.0 * self.kappa * acc + self.near_zero(mu)
    }
}

/// `θ(μ)` for arbitrary nonnegative frequencies.
pub fn multipliers_at(mp: &ModelParams, kp: &KernelParams, mus: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = mus.iter().find(|m| !(**m >= 0.0 && m.is_finite())) {
        return Err(Error::InvalidParams(format!("frequency {bad} must be nonnegative")));
    }
    let mu_max = mus.iter().copied().fold(0.0, f64::max);
    let rule = MultiplierRule::new(mp, kp, mu_max)?;
    Ok(mus.par_iter().map(|&m| rule.theta(m)).collect())
}

/// Multiplier table for the grid `(L, N)`.
pub fn compute_multipliers(mp: &ModelParams, kp: &KernelParams, l: f64, n: usize) -> Result<SpectralMultipliers> {
    if !(l > 0.0 && l.is_finite()) || n < MIN_GRID || !n.is_power_of_two() {
        return Err(Error::InvalidParams(format!(
            "multipliers need L > 0 and N a power of two >= {MIN_GRID} (L = {l}, N = {n})"
        )));
    }
    let mus: Vec<f64> = (0..=n / 2).map(|k| 2.0 * std::f64::consts::PI * k as f64 / l).collect();
    Ok(SpectralMultipliers {
        l,
        n,
        theta: multipliers_at(mp, kp, &mus)?,
    })
}

/// `L Σ_{k≠0} θ_k |v̂_k|²`, i.e. `(κ/2) ∫₀^L∫₀^L (v(t) - v(τ))² K_L(t - τ) dτ dt`.
pub fn quadratic_form(sm: &SpectralMultipliers, p: &PeriodicProfile) -> Result<f64> {
    sm.check_shape(p)?;
    let c = fourier::forward(&p.values);
    Ok(quadratic_form_coeffs(sm, &c) * p.l)
}

fn quadratic_form_coeffs(sm: &SpectralMultipliers, c: &[Complex64]) -> f64 {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, z)| sm.for_bin(k) * z.norm_sqr())
        .sum()
}

/// Terms of the energy quotient and of the energy functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Nonlocal quadratic form, see [`quadratic_form`].
    pub quadratic: f64,
    /// `c ∫ v²`.
    pub mass: f64,
    /// `∫ |v|^{β+1}`.
    pub nonlinear: f64,
    /// `(quadratic + mass) / nonlinear^{2/(β+1)}`.
    pub f_value: f64,
    /// `½(quadratic + mass) - c/(β+1) · nonlinear`, whose gradient is `𝓛v - c v^β`.
    pub e_value: f64,
    /// `½ quadratic - ½ c (β-1) ∫ v²`, the energy of the linearization at `v ≡ 1`.
    pub e_lin_value: f64,
}

pub fn functional_f(mp: &ModelParams, sm: &SpectralMultipliers, p: &PeriodicProfile) -> Result<EnergyBreakdown> {
    sm.check_shape(p)?;
    if p.values.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroProfile);
    }
    let c = mp.c_ngamma;
    let quadratic = quadratic_form(sm, p)?;
    let l2 = p.integral_abs_pow(2.0);
    let nonlinear = p.integral_abs_pow(mp.beta + 1.0);
    let mass = c * l2;
    Ok(EnergyBreakdown {
        quadratic,
        mass,
        nonlinear,
        f_value: (quadratic + mass) / nonlinear.powf(2.0 / (mp.beta + 1.0)),
        e_value: 0.5 * (quadratic + mass) - c / (mp.beta + 1.0) * nonlinear,
        e_lin_value: 0.5 * quadratic - 0.5 * c * (mp.beta - 1.0) * l2,
    })
}

/// `𝓛v` on the grid.
pub fn apply_operator(mp: &ModelParams, sm: &SpectralMultipliers, values: &[f64]) -> Vec<f64> {
    let mut c = fourier::forward(values);
    c.iter_mut()
        .enumerate()
        .for_each(|(k, z)| *z *= sm.for_bin(k) + mp.c_ngamma);
    fourier::inverse_real(&c)
}

/// `𝓛v - c v^β` on the grid and its sup norm.
pub fn el_residual(mp: &ModelParams, sm: &SpectralMultipliers, p: &PeriodicProfile) -> Result<(Vec<f64>, f64)> {
    sm.check_shape(p)?;
    let m = p.min();
    if !(m > 0.0) {
        return Err(Error::NotPositive(m));
    }
    let lv = apply_operator(mp, sm, &p.values);
    let r: Vec<f64> = lv
        .iter()
        .zip(&p.values)
        .map(|(l, v)| l - mp.c_ngamma * v.powf(mp.beta))
        .collect();
    let sup = r.iter().fold(0.0, |a: f64, x| a.max(x.abs()));
    Ok((r, sup))
}

fn tail_end(kp: &KernelParams, growth: f64, tol: f64) -> Result<f64> {
    let mut x = 2.0;
    while (ln_kernel(kp, x)? + growth * x).exp() / (kp.tail_rate - growth) >= tol {
        x += 1.0;
    }
    Ok(x)
}

/// `A = κ ∫₀^∞ 2(cosh σξ - 1) K(ξ) dξ`, which should equal `c_{n,γ}`.
pub fn normalization_constant_a(mp: &ModelParams, kp: &KernelParams) -> Result<f64> {
    let sigma = mp.sigma;
    let g2 = 2.0 * mp.gamma;
    let kappa0 = singular_strength(kp)?;
    let eps: f64 = 1e-6;
    // 2(cosh σξ - 1) = Σ_{j≥1} 2 (σξ)^{2j}/(2j)!
    let mut near = 0.0;
    let mut fact = 1.0;
    for j in 1..10 {
        let jj = 2 * j;
        fact *= (jj - 1) as f64 * jj as f64;
        near += 2.0 * sigma.powi(jj) * eps.powf(jj as f64 - g2) / (fact * (jj as f64 - g2));
    }
    near *= kappa0;
    let x_end = tail_end(kp, sigma, 1e-16)?;
    let mut pts = geometric_breakpoints(eps, 1.0);
    pts[0] = eps;
    pts.dedup();
    let mut x = 2.0;
    while x < x_end {
        pts.push(x);
        x += 2.0;
    }
    pts.push(x_end);
    let integrand =
        |xi: f64| -> Result<f64> { Ok((2.0 * (LN_2 + ln_sinh(0.5 * sigma * xi)) + ln_kernel(kp, xi)?).exp()) };
    let r = integrate_adaptive(integrand, &pts, QuadOptions::new(1e-15, 1e-13))?;
    Ok(mp.kappa_ngamma * (near + r.value))
}

/// Ground state `b(t) = (e^t / (e^{2t} + 1))^σ = (2 cosh t)^{-σ}`.
pub fn bubble(mp: &ModelParams, t: f64) -> f64 {
    (-mp.sigma * (LN_2 + ln_cosh(t.abs()))).exp()
}

/// `Λ = 2^{2γ} Γ(n/2 + γ) / Γ(n/2 - γ)`: the bubble satisfies `𝓛b = Λ b^β`.
pub fn bubble_constant(mp: &ModelParams) -> Result<f64> {
    let h = 0.5 * mp.dimension();
    Ok(2f64.powf(2.0 * mp.gamma) * gamma_real(h + mp.gamma)? / gamma_real(h - mp.gamma)?)
}

/// Amplitude `λ` with `𝓛(λb) = c (λb)^β`, i.e. `λ^{β-1} = Λ / c`.
pub fn bubble_amplitude(mp: &ModelParams) -> Result<f64> {
    Ok((bubble_constant(mp)? / mp.c_ngamma).powf(1.0 / (mp.beta - 1.0)))
}

fn bubble_second_derivative(mp: &ModelParams, t: f64) -> f64 {
    let s = mp.sigma;
    let th = t.tanh();
    s * bubble(mp, t) * (s * th * th - (1.0 - th * th))
}

/// Quadrature used for the line integral in [`bubble_residual_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BubbleQuadrature {
    /// Adaptive Gauss–Kronrod with the given absolute and relative tolerance.
    Adaptive(f64),
    /// Gauss–Legendre of the given order on every breakpoint segment.
    Fixed(usize),
}

const BUBBLE_EPS: f64 = 1e-5;

fn bubble_residual_at(
    mp: &ModelParams,
    kp: &KernelParams,
    kappa0: f64,
    lambda: f64,
    amplitude: f64,
    t: f64,
    quad: BubbleQuadrature,
) -> Result<f64> {
    let g2 = 2.0 * mp.gamma;
    let b0 = bubble(mp, t);
    // 2b(t) - b(t+s) - b(t-s) ≈ -b''(t) s² on [0, ε]
    let near = -bubble_second_derivative(mp, t) * kappa0 * BUBBLE_EPS.powf(2.0 - g2) / (2.0 - g2);
    let x_end = t.abs() + 40.0;
    let mut pts = geometric_breakpoints(BUBBLE_EPS, 1.0);
    pts[0] = BUBBLE_EPS;
    pts.dedup();
    let mut x = 2.0;
    while x < x_end {
        pts.push(x);
        x += 1.0;
    }
    pts.push(x_end);
    if t.abs() > 1.0 && !pts.contains(&t.abs()) {
        pts.push(t.abs());
        pts.sort_by(f64::total_cmp);
    }
    let integrand = |s: f64| -> Result<f64> { Ok((2.0 * b0 - bubble(mp, t + s) - bubble(mp, t - s)) * kernel(kp, s)?) };
    let integral = match quad {
        BubbleQuadrature::Adaptive(tol) => integrate_adaptive(integrand, &pts, QuadOptions::new(tol, tol))?.value,
        BubbleQuadrature::Fixed(order) => {
            let rule = GaussLegendre::new(order);
            let (mut xs, mut ws) = (Vec::new(), Vec::new());
            for w in pts.windows(2) {
                rule.push_panel(w[0], w[1], &mut xs, &mut ws);
            }
            let mut acc = 0.0;
            for (x, w) in xs.iter().zip(&ws) {
                acc += w * integrand(*x)?;
            }
            acc
        }
    };
    let c = mp.c_ngamma;
    Ok(amplitude * (mp.kappa_ngamma * (near + integral) + c * b0 - lambda * b0.powf(mp.beta)))
}

fn bubble_residual_sup(
    mp: &ModelParams,
    kp: &KernelParams,
    t_points: &[f64],
    quad: BubbleQuadrature,
    lambda: f64,
    amplitude: f64,
) -> Result<f64> {
    let kappa0 = singular_strength(kp)?;
    let mut sup = 0.0f64;
    for &t in t_points {
        sup = sup.max(bubble_residual_at(mp, kp, kappa0, lambda, amplitude, t, quad)?.abs());
    }
    Ok(sup)
}

/// Sup norm over `t_points` of the line residual
/// `κ ∫₀^∞ (2b(t) - b(t+s) - b(t-s)) K(s) ds + c b(t) - c b(t)^β`
/// of the unscaled bubble.
///
/// `b` itself solves `𝓛b = Λ b^β` (see [`bubble_constant`]), so this residual
/// converges to `|c - Λ| b^β`-sized values; [`scaled_bubble_residual_with`]
/// measures the equation `𝓛u = c u^β` at the rescaled bubble.
pub fn bubble_residual_with(
    mp: &ModelParams,
    kp: &KernelParams,
    t_points: &[f64],
    quad: BubbleQuadrature,
) -> Result<f64> {
    bubble_residual_sup(mp, kp, t_points, quad, mp.c_ngamma, 1.0)
}

/// [`bubble_residual_with`] at adaptive tolerance `1e-10`.
pub fn bubble_residual(mp: &ModelParams, kp: &KernelParams, t_points: &[f64]) -> Result<f64> {
    bubble_residual_with(mp, kp, t_points, BubbleQuadrature::Adaptive(1e-10))
}

/// Sup norm of `𝓛u - c u^β` at `u = λb` with `λ` from [`bubble_amplitude`].
pub fn scaled_bubble_residual_with(
    mp: &ModelParams,
    kp: &KernelParams,
    t_points: &[f64],
    quad: BubbleQuadrature,
) -> Result<f64> {
    bubble_residual_sup(mp, kp, t_points, quad, bubble_constant(mp)?, bubble_amplitude(mp)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(n: u32, g: f64) -> (ModelParams, KernelParams) {
        let mp = ModelParams::new(n, g).unwrap();
        let kp = KernelParams::from_model(&mp).unwrap();
        (mp, kp)
    }

    fn exact_theta(mu: f64) -> f64 {
        mu / (0.5 * PI * mu).tanh() - 2.0 / PI
    }

    #[test]
    fn profile_validation() {
        assert!(PeriodicProfile::new(1.0, vec![1.0; 12]).is_err());
        assert!(PeriodicProfile::new(1.0, vec![1.0; 4]).is_err());
        assert!(PeriodicProfile::new(0.0, vec![1.0; 8]).is_err());
        assert!(PeriodicProfile::new(1.0, vec![f64::NAN; 8]).is_err());
        let p = PeriodicProfile::from_fn(2.0, 8, |t| t).unwrap();
        assert_eq!(p.grid_point(4), 1.0);
        assert_eq!(p.amplitude(), 1.75);
    }

    #[test]
    fn multipliers_exact_case() {
        let (mp, kp) = params(3, 0.5);
        let mus = [0.0, 0.5, 1.0, 2.0, 5.0, 40.0];
        let th = multipliers_at(&mp, &kp, &mus).unwrap();
        assert_eq!(th[0], 0.0);
        for (m, t) in mus.iter().zip(&th).skip(1) {
            assert!(
                (t - exact_theta(*m)).abs() < 1e-10,
                "mu {m}: {t} vs {}",
                exact_theta(*m)
            );
        }
    }

    #[test]
    fn multiplier_table_is_increasing() {
        for &(n, g) in &[(3, 0.5), (4, 0.3), (5, 0.7), (3, 0.05)] {
            let (mp, kp) = params(n, g);
            let sm = compute_multipliers(&mp, &kp, 6.0, 32).unwrap();
            assert_eq!(sm.theta.len(), 17);
            assert_eq!(sm.theta[0], 0.0);
            for w in sm.theta.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn quadratic_form_single_mode() {
        let (mp, kp) = params(3, 0.5);
        let l = 7.0;
        let sm = compute_multipliers(&mp, &kp, l, 64).unwrap();
        let eps = 1e-2;
        let p = PeriodicProfile::from_fn(l, 64, |t| 1.0 + eps * (2.0 * PI * t / l).cos()).unwrap();
        let q = quadratic_form(&sm, &p).unwrap();
        assert_relative_eq!(q, 0.5 * l * sm.theta[1] * eps * eps, max_relative = 1e-12);
        let flat = PeriodicProfile::constant(l, 64, 3.0).unwrap();
        assert!(quadratic_form(&sm, &flat).unwrap().abs() < 1e-25);
        let other = PeriodicProfile::constant(l, 32, 3.0).unwrap();
        assert!(matches!(quadratic_form(&sm, &other), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn functional_constant_and_scaling() {
        let (mp, kp) = params(3, 0.5);
        let sm = compute_multipliers(&mp, &kp, 8.0, 64).unwrap();
        let one = PeriodicProfile::constant(8.0, 64, 1.0).unwrap();
        let e = functional_f(&mp, &sm, &one).unwrap();
        assert_relative_eq!(e.f_value, 4.0 / PI, max_relative = 1e-14);
        let p = PeriodicProfile::from_fn(8.0, 64, |t| 1.0 + 0.3 * (t * PI / 4.0).sin()).unwrap();
        let a = functional_f(&mp, &sm, &p).unwrap().f_value;
        let b = functional_f(&mp, &sm, &p.scaled(2.0)).unwrap().f_value;
        assert_relative_eq!(a, b, max_relative = 1e-12);
        let zero = PeriodicProfile::constant(8.0, 64, 0.0).unwrap();
        assert_eq!(functional_f(&mp, &sm, &zero), Err(Error::ZeroProfile));
    }

    #[test]
    fn residual_of_constant_vanishes() {
        let (mp, kp) = params(4, 0.3);
        let sm = compute_multipliers(&mp, &kp, 5.0, 32).unwrap();
        let one = PeriodicProfile::constant(5.0, 32, 1.0).unwrap();
        let (_, sup) = el_residual(&mp, &sm, &one).unwrap();
        assert!(sup <= 1e-13);
        let neg = PeriodicProfile::from_fn(5.0, 32, |t| t - 1.0).unwrap();
        assert!(matches!(el_residual(&mp, &sm, &neg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn normalization_constant_matches_c() {
        let (mp, kp) = params(3, 0.5);
        assert!((normalization_constant_a(&mp, &kp).unwrap() - 2.0 / PI).abs() < 1e-10);
        // (6, 0.05): integrand decays like e^{-0.1 ξ}, far past the underflow of K
        for &(n, g) in &[(4, 0.3), (5, 0.7), (6, 0.05)] {
            let (mp, kp) = params(n, g);
            let a = normalization_constant_a(&mp, &kp).unwrap();
            assert_relative_eq!(a, mp.c_ngamma, max_relative = 1e-9);
        }
    }

    #[test]
    fn bubble_values() {
        let (mp, kp) = params(3, 0.5);
        assert_eq!(bubble(&mp, 0.0), 0.5);
        assert_eq!(bubble(&mp, 1.3), bubble(&mp, -1.3));
        let t = 400.0;
        assert_relative_eq!(bubble(&mp, t).ln() / t, -mp.sigma, max_relative = 1e-2);
        assert_relative_eq!(bubble_constant(&mp).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(bubble_amplitude(&mp).unwrap(), PI, max_relative = 1e-14);
        let ts = [0.0, 1.0, -1.0, 2.0, -2.0];
        let adaptive = BubbleQuadrature::Adaptive(1e-10);
        let r = scaled_bubble_residual_with(&mp, &kp, &ts, adaptive).unwrap();
        assert!(r <= 1e-8, "{r}");
        // unscaled: 𝓛b - c b^β = (Λ - c) b^β, largest at t = 0
        let raw = bubble_residual(&mp, &kp, &ts).unwrap();
        assert_relative_eq!(raw, (2.0 - 2.0 / PI) * 0.25, max_relative = 1e-8);
        let (mp, kp) = params(4, 0.3);
        let r = scaled_bubble_residual_with(&mp, &kp, &ts, adaptive).unwrap();
        assert!(r <= 1e-8, "{r}");
        let coarse = scaled_bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Fixed(4)).unwrap();
        let fine = scaled_bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Fixed(8)).unwrap();
        assert!(fine <= 0.5 * coarse, "{coarse} {fine}");
    }
}
