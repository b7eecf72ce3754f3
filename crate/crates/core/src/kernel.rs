//! The one-dimensional kernel `K(ξ)` obtained from the fractional Laplacian
//! after the Emden–Fowler change of variables, its periodization `K_L`, and
//! the constants describing its behaviour near 0 and at infinity.
//!
//! `K` is available in two independent forms:
//!
//! * [`kernel_closed`]: `c_n sinh(ξ)^{-1-2γ} cosh(ξ)^{(2-n+2γ)/2} ₂F₁(ã, b̃; c̃; sech² ξ)`
//!   with `ã = (a+1)/2 - b`, `b̃ = a/2 - b + 1`, `c̃ = a - b + 1`;
//! * [`kernel_direct`]: adaptive quadrature of the angular integral
//!   `c̄_n 2^{-a} ∫₀^π sin^{n-2} φ / (cosh ξ - cos φ)^a dφ`, `a = (n+2γ)/2`.
//!
//! [`kernel`] picks the closed form whenever the hypergeometric evaluation is
//! non-degenerate and falls back to quadrature otherwise.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{geometric_breakpoints, integrate_adaptive, QuadOptions};
use crate::specfun::{gamma_real, hyp2f1, hyp2f1_with_complement, Hyp2F1Params};

/// Largest supported dimension; keeps every Gamma ratio below overflow.
pub const MAX_DIMENSION: u32 = 200;

/// Dimension `n`, order `γ` and the constants derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub gamma: f64,
    /// Critical exponent `(n + 2γ) / (n - 2γ)`.
    pub beta: f64,
    /// `2^{2γ} (Γ((n/2 + γ)/2) / Γ((n/2 - γ)/2))²`.
    pub c_ngamma: f64,
    /// `π^{-n/2} 2^{2γ} γ Γ(n/2 + γ) / Γ(1 - γ)`.
    pub kappa_ngamma: f64,
    /// `(n - 2γ) / 2`.
    pub sigma: f64,
}

impl ModelParams {
    /// Parameters in the standard range `γ ∈ (0, 1)`, `n >= 2 + 2γ`.
    pub fn new(n: u32, gamma: f64) -> Result<Self> {
        let mp = Self::new_extended(n, gamma)?;
        if f64::from(n) < 2.0 + 2.0 * gamma - 1e-12 {
            return Err(Error::InvalidParams(format!(
                "n = {n} violates n >= 2 + 2 gamma = {}",
                2.0 + 2.0 * gamma
            )));
        }
        Ok(mp)
    }

    /// Like [`ModelParams::new`] without the `n >= 2 + 2γ` restriction.
    ///
    /// Every constant stays finite as long as `n > 2γ`, which `n >= 2` and
    /// `γ < 1` already guarantee; the positivity and scaling properties of
    /// the kernel are not guaranteed outside the standard range.
    pub fn new_extended(n: u32, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must lie in (0, 1)")));
        }
        if !(2..=MAX_DIMENSION).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "n = {n} must lie in [2, {MAX_DIMENSION}]"
            )));
        }
        let nf = f64::from(n);
        let beta = (nf + 2.0 * gamma) / (nf - 2.0 * gamma);
        let ratio = gamma_real(0.5 * (0.5 * nf + gamma))? / gamma_real(0.5 * (0.5 * nf - gamma))?;
        let c_ngamma = 2f64.powf(2.0 * gamma) * ratio * ratio;
        let kappa_ngamma = PI.powf(-0.5 * nf) * 2f64.powf(2.0 * gamma) * gamma * gamma_real(0.5 * nf + gamma)?
            / gamma_real(1.0 - gamma)?;
        Ok(Self {
            n,
            gamma,
            beta,
            c_ngamma,
            kappa_ngamma,
            sigma: 0.5 * (nf - 2.0 * gamma),
        })
    }

    pub fn dimension(&self) -> f64 {
        f64::from(self.n)
    }
}

/// Constants of the kernel representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: u32,
    pub gamma: f64,
    /// `(n + 2γ) / 2`.
    pub a: f64,
    /// `1 + γ`.
    pub b: f64,
    /// `n / 2`; equals `a - b + 1`.
    pub c: f64,
    /// Prefactor of the closed form.
    pub c_n: f64,
    /// Surface measure of the unit `(n-2)`-sphere.
    pub cbar_n: f64,
    /// Exponential decay rate of `K` at infinity, `(n + 2γ)/2`.
    pub tail_rate: f64,
    /// Order of the singularity at the origin, `1 + 2γ`.
    pub sing_exponent: f64,
    /// Parameters of the hypergeometric factor in the closed form.
    pub hyp: Hyp2F1Params,
}

impl KernelParams {
    pub fn from_model(mp: &ModelParams) -> Result<Self> {
        let nf = mp.dimension();
        let g = mp.gamma;
        let a = 0.5 * (nf + 2.0 * g);
        let b = 1.0 + g;
        let c = a - b + 1.0;
        let cbar_n = 2.0 * PI.powf(0.5 * (nf - 1.0)) / gamma_real(0.5 * (nf - 1.0))?;
        let c_n = cbar_n * 2f64.powf(-a) * PI.sqrt() * gamma_real(0.5 * (nf - 1.0))? / gamma_real(0.5 * nf)?;
        // ã = (n - 2 - 2γ)/4 vanishes exactly on the boundary n = 2 + 2γ.
        let mut a_tilde = 0.5 * (a + 1.0) - b;
        if a_tilde.abs() < 1e-14 {
            a_tilde = 0.0;
        }
        let hyp = Hyp2F1Params::new(a_tilde, 0.5 * a - b + 1.0, c)?;
        Ok(Self {
            n: mp.n,
            gamma: g,
            a,
            b,
            c,
            c_n,
            cbar_n,
            tail_rate: a,
            sing_exponent: 1.0 + 2.0 * g,
            hyp,
        })
    }

    /// The hypergeometric factor is identically one (`ã = 0`).
    pub fn is_exact_reduction(&self) -> bool {
        self.hyp.a_tilde == 0.0
    }

    /// The closed form can be evaluated on all of `ξ > 0`.
    pub fn closed_form_available(&self) -> bool {
        self.is_exact_reduction() || !self.hyp.is_degenerate()
    }
}

pub(crate) fn ln_sinh(x: f64) -> f64 {
    if x < 1.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

pub(crate) fn ln_cosh(x: f64) -> f64 {
    if x < 1.0 {
        x.cosh().ln()
    } else {
        x - LN_2 + (-2.0 * x).exp().ln_1p()
    }
}

/// `K(ξ)` by the hypergeometric closed form.
pub fn kernel_closed(kp: &KernelParams, xi: f64) -> Result<f64> {
    let (ln_prefactor, factor) = closed_parts(kp, xi)?;
    Ok(kp.c_n * ln_prefactor.exp() * factor)
}

fn closed_parts(kp: &KernelParams, xi: f64) -> Result<(f64, f64)> {
    if xi == 0.0 || xi.is_nan() {
        return Err(Error::Domain(format!("kernel evaluated at xi = {xi}")));
    }
    let x = xi.abs();
    let lc = ln_cosh(x);
    let factor = if kp.is_exact_reduction() {
        1.0
    } else {
        let t = x.tanh();
        hyp2f1_with_complement(kp.hyp, (-2.0 * lc).exp(), t * t)?
    };
    let expo = -kp.sing_exponent * ln_sinh(x) + 0.5 * (2.0 - f64::from(kp.n) + 2.0 * kp.gamma) * lc;
    Ok((expo, factor))
}

/// `K(ξ)` by adaptive quadrature of the angular integral.
pub fn kernel_direct(kp: &KernelParams, xi: f64) -> Result<f64> {
    let (ln_prefactor, integral) = direct_parts(kp, xi)?;
    Ok(kp.cbar_n * ln_prefactor.exp() * integral)
}

fn direct_parts(kp: &KernelParams, xi: f64) -> Result<(f64, f64)> {
    if xi == 0.0 || xi.is_nan() {
        return Err(Error::Domain(format!("kernel evaluated at xi = {xi}")));
    }
    let x = xi.abs();
    let sh = (0.5 * x).sinh();
    let offset = 2.0 * sh * sh;
    let lc = ln_cosh(x);
    let inv_cosh = (-lc).exp();
    let sin_power = f64::from(kp.n) - 2.0;
    let a = kp.a;
    // cosh ξ - cos φ = 2 sinh²(ξ/2) + 2 sin²(φ/2), scaled by 1 / cosh ξ
    let integrand = |phi: f64| {
        let s = (0.5 * phi).sin();
        let d = (offset + 2.0 * s * s) * inv_cosh;
        let w = if sin_power == 0.0 {
            1.0
        } else {
            phi.sin().powf(sin_power)
        };
        Ok(w * d.powf(-a))
    };
    let pts = geometric_breakpoints(x.min(1.0), PI);
    let r = integrate_adaptive(integrand, &pts, QuadOptions::new(1e-11, 1e-11))?;
    Ok((-a * LN_2 - a * lc, r.value))
}

/// `K(ξ)` by the closed form when available, otherwise by quadrature.
pub fn kernel(kp: &KernelParams, xi: f64) -> Result<f64> {
    if kp.closed_form_available() {
        kernel_closed(kp, xi)
    } else {
        kernel_direct(kp, xi)
    }
}

/// `ln K(ξ)`, finite far beyond the point where `K` itself underflows.
pub fn ln_kernel(kp: &KernelParams, xi: f64) -> Result<f64> {
    let (scale, (ln_prefactor, rest)) = if kp.closed_form_available() {
        (kp.c_n, closed_parts(kp, xi)?)
    } else {
        (kp.cbar_n, direct_parts(kp, xi)?)
    };
    Ok(scale.ln() + ln_prefactor + rest.ln())
}

/// Upper bound constant `C` with `K(ξ) <= C e^{-a ξ}` for `ξ >= L/2`.
fn tail_constant(kp: &KernelParams, l: f64) -> Result<f64> {
    Ok(kernel(kp, 0.5 * l)? * (0.5 * kp.tail_rate * l).exp())
}

/// Maximum number of lattice images on each side of the periodized sum.
const MAX_IMAGES: usize = 1_000_000;

/// `K_L(ξ) = Σ_j K(ξ - jL)`, truncated once the exponential tail bound on
/// the omitted images drops below `tol`.
pub fn kernel_periodized(kp: &KernelParams, l: f64, xi: f64, tol: f64) -> Result<f64> {
    if !(l > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "periodization needs L > 0 and tol > 0 (L = {l}, tol = {tol})"
        )));
    }
    let x = xi - l * (xi / l).round();
    if x.abs() <= 1e-14 * l {
        return Err(Error::SingularArgument(xi));
    }
    let c = tail_constant(kp, l)?;
    let a = kp.tail_rate;
    let geometric = 1.0 / (1.0 - (-a * l).exp());
    let mut sum = kernel(kp, x)?;
    for j in 1..=MAX_IMAGES {
        let jl = j as f64 * l;
        sum += kernel(kp, x - jl)? + kernel(kp, x + jl)?;
        // images with |index| > j sit at distance >= (j + 1/2) L
        let bound = 2.0 * c * (-a * (jl + 0.5 * l)).exp() * geometric;
        if bound < tol {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        terms: MAX_IMAGES,
        last_term: f64::NAN,
    })
}

/// Richardson extrapolation of `K(ξ) ξ^{1+2γ}` at three step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    /// Same extrapolation on the stencil halved once.
    pub refined: f64,
    pub spread: f64,
}

fn scaled_kernel(kp: &KernelParams, h: f64) -> Result<f64> {
    Ok(kernel(kp, h)? * h.powf(kp.sing_exponent))
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> f64 {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut m0 = m;
    for i in 0..3 {
        m0[i][0] = rhs[i];
    }
    det(m0) / det(m)
}

fn extrapolate_once(kp: &KernelParams, h: f64) -> Result<f64> {
    let p = kp.sing_exponent;
    let hs = [h, 0.5 * h, 0.25 * h];
    let basis = |x: f64| -> [f64; 3] {
        if (p - 2.0).abs() < 1e-3 {
            [1.0, x * x, x * x * x.ln()]
        } else {
            [1.0, x.powf(p), x * x]
        }
    };
    let m = [basis(hs[0]), basis(hs[1]), basis(hs[2])];
    let rhs = [
        scaled_kernel(kp, hs[0])?,
        scaled_kernel(kp, hs[1])?,
        scaled_kernel(kp, hs[2])?,
    ];
    Ok(solve3(m, rhs))
}

/// `lim_{ξ→0} K(ξ) ξ^{1+2γ}` extrapolated from `ξ ∈ {1e-2, 5e-3, 2.5e-3}`
/// under the expansion `κ₀ + A ξ^{1+2γ} + B ξ²`.
pub fn singular_strength_extrapolated(kp: &KernelParams) -> Result<Extrapolation> {
    let value = extrapolate_once(kp, 1e-2)?;
    let refined = extrapolate_once(kp, 5e-3)?;
    Ok(Extrapolation {
        value,
        refined,
        spread: ((value - refined) / refined).abs(),
    })
}

/// Tolerated relative spread between the two extrapolation stencils.
pub const EXTRAPOLATION_SPREAD_TOL: f64 = 1e-6;

/// `κ₀ = lim_{ξ→0} K(ξ) |ξ|^{1+2γ}`.
pub fn singular_strength(kp: &KernelParams) -> Result<f64> {
    if kp.is_exact_reduction() {
        return Ok(kp.c_n);
    }
    if !kp.hyp.is_degenerate() {
        return Ok(kp.c_n * hyp2f1(kp.hyp, 1.0)?);
    }
    let e = singular_strength_extrapolated(kp)?;
    if e.spread > EXTRAPOLATION_SPREAD_TOL {
        return Err(Error::ExtrapolationNonConvergence { spread: e.spread });
    }
    Ok(e.refined)
}

/// Logarithmic decay rate `d log K / dξ` by a centered difference.
pub fn log_decay_rate(kp: &KernelParams, xi: f64) -> Result<f64> {
    let h = 1e-3 * xi.abs().max(1.0);
    Ok((kernel(kp, xi + h)?.ln() - kernel(kp, xi - h)?.ln()) / (2.0 * h))
}

/// Outcome of [`check_scaling_inequality`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub l: f64,
    pub l1: f64,
    pub samples: usize,
    /// `L <= L1`: the inequality degenerates (equality for `L = L1`).
    pub degenerate: bool,
    /// Smallest relative margin `(K_{L1}(ξ) - r K_L(rξ)) / K_{L1}(ξ)`, `r = L/L1`.
    pub worst_margin: f64,
    pub worst_xi: f64,
    pub inequality_failures: usize,
    /// Largest ratio `(ξ_{i+1} K(ξ_{i+1})) / (ξ_i K(ξ_i))` on the monotonicity grid.
    pub monotone_worst_ratio: f64,
    pub monotone: bool,
    pub passed: bool,
}

/// Points of the log-spaced grid used for the monotonicity of `ξ K(ξ)`.
pub const MONOTONE_GRID: usize = 200;

/// Check `(L/L1) K_L((L/L1) ξ) < K_{L1}(ξ)` at `samples` midpoints of
/// `(0, L1)` and that `ξ K(ξ)` is strictly decreasing on a log grid.
pub fn check_scaling_inequality(kp: &KernelParams, l: f64, l1: f64, samples: usize) -> Result<ScalingReport> {
    const TOL: f64 = 1e-14;
    let samples = samples.max(2);
    let grid = log_grid(1e-2, 20.0, MONOTONE_GRID);
    let mut monotone_worst_ratio = f64::NEG_INFINITY;
    let mut prev = None;
    for &x in &grid {
        let v = x * kernel(kp, x)?;
        if let Some(p) = prev {
            monotone_worst_ratio = f64::max(monotone_worst_ratio, v / p);
        }
        prev = Some(v);
    }
    let monotone = monotone_worst_ratio < 1.0;
    let degenerate = !(l > l1) || !(l1 > 0.0);
    let mut worst_margin = f64::INFINITY;
    let mut worst_xi = f64::NAN;
    let mut inequality_failures = 0;
    if l1 > 0.0 && l > 0.0 {
        let r = l / l1;
        for i in 0..samples {
            let xi = l1 * (i as f64 + 0.5) / samples as f64;
            let rhs = kernel_periodized(kp, l1, xi, TOL)?;
            let lhs = r * kernel_periodized(kp, l, r * xi, TOL)?;
            let margin = (rhs - lhs) / rhs;
            if !(margin > 0.0) {
                inequality_failures += 1;
            }
            if margin < worst_margin {
                worst_margin = margin;
                worst_xi = xi;
            }
        }
    }
    Ok(ScalingReport {
        l,
        l1,
        samples,
        degenerate,
        worst_margin,
        worst_xi,
        inequality_failures,
        monotone_worst_ratio,
        monotone,
        passed: !degenerate && monotone && inequality_failures == 0,
    })
}

pub(crate) fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
