//! The first eigenvalue `δ_L` of the linearization around `v ≡ 1` and the
//! critical period `L₀` at which it changes sign.
//!
//! Two independent routes: the Gamma-ratio symbol
//! `S(μ) = 2^{2γ} |Γ(n/4 + γ/2 + iμ/2)|² / |Γ(n/4 - γ/2 + iμ/2)|²`, which
//! equals `θ(μ) + c_{n,γ}`, and the quadrature multiplier `θ(μ)` itself.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cylinder::{multipliers_at, SpectralMultipliers};
use crate::error::{Error, Result};
use crate::fourier::{self, frequency_index};
use crate::kernel::{log_grid, KernelParams, ModelParams};
use crate::minimize::{minimize_f, Classification, MinimizeResult, SolveConfig};
use crate::specfun::log_abs_gamma;

/// Search interval for `L₀`.
pub const L_MIN: f64 = 0.1;
pub const L_MAX: f64 = 100.0;
/// Absolute bracket width at which bisection stops.
pub const L_TOL: f64 = 1e-8;
/// Points of the sign scan preceding bisection.
pub const SCAN_POINTS: usize = 50;

/// `S(μ)`, the symbol of `𝓛` on the mode `e^{iμt}`.
pub fn symbol_gamma(mp: &ModelParams, mu: f64) -> Result<f64> {
    let q = 0.25 * mp.dimension();
    let g = 0.5 * mp.gamma;
    let y = 0.5 * mu;
    let log_ratio = log_abs_gamma(q + g, y)? - log_abs_gamma(q - g, y)?;
    Ok((2.0 * mp.gamma * std::f64::consts::LN_2 + 2.0 * log_ratio).exp())
}

/// `δ = S(√λ) - β c_{n,γ}`.
pub fn delta_gamma_formula(mp: &ModelParams, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParams(format!("lambda = {lambda} must be nonnegative")));
    }
    Ok(symbol_gamma(mp, lambda.sqrt())? - mp.beta * mp.c_ngamma)
}

/// `δ_L` by the Gamma formula at `λ = (2π/L)²`.
pub fn delta_gamma_at(mp: &ModelParams, l: f64) -> Result<f64> {
    check_period(l)?;
    let mu = 2.0 * PI / l;
    delta_gamma_formula(mp, mu * mu)
}

/// `δ_L = θ(2π/L) - (β - 1) c_{n,γ}` with `θ` by quadrature.
pub fn delta_symbol(mp: &ModelParams, kp: &KernelParams, l: f64) -> Result<f64> {
    check_period(l)?;
    let theta = multipliers_at(mp, kp, &[2.0 * PI / l])?[0];
    Ok(theta - (mp.beta - 1.0) * mp.c_ngamma)
}

fn check_period(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("period L = {l} must be positive")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Gamma,
    Symbol,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Method::Gamma),
            "symbol" => Ok(Method::Symbol),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidParams(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationResult {
    pub method: Method,
    pub l0_gamma_formula: Option<f64>,
    pub l0_symbol: Option<f64>,
    /// `λ₀ = (2π/L₀)²` for the primary root.
    pub lambda0: f64,
    /// Sign scan `(L, δ_L)` of the primary method.
    pub delta_samples: Vec<(f64, f64)>,
    /// `|L₀^gamma - L₀^symbol| / L₀^gamma` when both roots are computed.
    pub agreement: Option<f64>,
}

impl BifurcationResult {
    pub fn l0(&self) -> f64 {
        self.l0_gamma_formula
            .or(self.l0_symbol)
            .expect("at least one root is present")
    }
}

fn root_by_bisection(mut delta: impl FnMut(f64) -> Result<f64>) -> Result<(f64, Vec<(f64, f64)>)> {
    let grid = log_grid(L_MIN, L_MAX, SCAN_POINTS);
    let mut samples = Vec::with_capacity(grid.len());
    for &l in &grid {
        samples.push((l, delta(l)?));
    }
    let idx = samples.windows(2).position(|w| w[0].1 > 0.0 && w[1].1 <= 0.0);
    let Some(i) = idx else {
        return Err(Error::Bracket {
            lo: L_MIN,
            hi: L_MAX,
            samples,
        });
    };
    let sign_changes = samples.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).count();
    if sign_changes > 1 {
        log::warn!("delta changes sign {sign_changes} times on [{L_MIN}, {L_MAX}]; using the first root");
    }
    let (mut lo, mut hi) = (samples[i].0, samples[i + 1].0);
    if samples[i + 1].1 == 0.0 {
        return Ok((hi, samples));
    }
    while hi - lo > L_TOL {
        let mid = 0.5 * (lo + hi);
        let d = delta(mid)?;
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), samples))
}

/// Locate `L₀` (the zero of `δ_L`) by a sign scan over `[0.1, 100]`
/// followed by bisection to width `1e-8`.
pub fn find_l0(mp: &ModelParams, kp: &KernelParams, method: Method) -> Result<BifurcationResult> {
    let gamma = match method {
        Method::Gamma | Method::Both => Some(root_by_bisection(|l| delta_gamma_at(mp, l))?),
        Method::Symbol => None,
    };
    let symbol = match method {
        Method::Symbol | Method::Both => Some(root_by_bisection(|l| delta_symbol(mp, kp, l))?),
        Method::Gamma => None,
    };
    let l0_gamma_formula = gamma.as_ref().map(|r| r.0);
    let l0_symbol = symbol.as_ref().map(|r| r.0);
    let agreement = match (l0_gamma_formula, l0_symbol) {
        (Some(a), Some(b)) => Some((a - b).abs() / a),
        _ => None,
    };
    let (primary, delta_samples) = gamma.or(symbol).expect("method selects a route");
    let mu0 = 2.0 * PI / primary;
    Ok(BifurcationResult {
        method,
        l0_gamma_formula,
        l0_symbol,
        lambda0: mu0 * mu0,
        delta_samples,
        agreement,
    })
}

/// Spectrum of the discretized linearization `𝓛 - β c` around `v ≡ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizationReport {
    pub n: usize,
    /// Smallest eigenvalue with an eigenvector orthogonal to constants.
    pub smallest_zero_mean: f64,
    /// Fourier index carrying the eigenvector of `smallest_zero_mean`.
    pub mode: usize,
    /// `θ_1 - (β - 1) c_{n,γ}`.
    pub expected: f64,
    /// Eigenvalue on constants, `(1 - β) c_{n,γ}`.
    pub constant_mode: f64,
}

/// Build the dense circulant matrix of `𝓛 - βc` on the grid of `sm`,
/// diagonalize it and identify its lowest nonconstant mode.
pub fn linearization_spectrum(mp: &ModelParams, sm: &SpectralMultipliers) -> Result<LinearizationReport> {
    let n = sm.n;
    let shift = (1.0 - mp.beta) * mp.c_ngamma;
    let row: Vec<f64> = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| (sm.for_bin(k) + shift) * (2.0 * PI * ((k * m) % n) as f64 / n as f64).cos())
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let h = DMatrix::from_fn(n, n, |i, j| row[(i + n - j) % n]);
    let eig = SymmetricEigen::new(h);
    let mut best: Option<(f64, usize)> = None;
    let mut constant_mode = f64::NAN;
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        let vec: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let mean = vec.iter().sum::<f64>() / n as f64;
        let norm = (vec.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
        if mean.abs() > 1e-6 * norm {
            constant_mode = lam;
            continue;
        }
        if best.is_none_or(|(b, _)| lam < b) {
            let c = fourier::forward(&vec);
            let k = (1..n)
                .max_by(|&a, &b| c[a].norm().total_cmp(&c[b].norm()))
                .expect("n >= 2");
            best = Some((lam, frequency_index(k, n)));
        }
    }
    let (smallest_zero_mean, mode) = best.ok_or_else(|| Error::Domain("no zero-mean eigenvector found".into()))?;
    Ok(LinearizationReport {
        n,
        smallest_zero_mean,
        mode,
        expected: sm.theta[1] - (mp.beta - 1.0) * mp.c_ngamma,
        constant_mode,
    })
}

/// Outcome of [`verify_dichotomy`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub l0: f64,
    pub below: MinimizeResult,
    pub above: MinimizeResult,
    pub at_l0: MinimizeResult,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Amplitude below which the minimizer at `L₀` counts as constant.
pub const L0_AMPLITUDE_TOL: f64 = 1e-4;

/// Solve below, above and at `L₀` and check the constant / nonconstant dichotomy.
pub fn verify_dichotomy(
    mp: &ModelParams,
    kp: &KernelParams,
    cfg: &SolveConfig,
    l_below: f64,
    l_above: f64,
) -> Result<DichotomyReport> {
    if !(l_below < l_above) || !(l_below > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need 0 < L_below < L_above, got {l_below} and {l_above}"
        )));
    }
    let l0 = find_l0(mp, kp, Method::Gamma)?.l0();
    if !(l_below < l0 && l0 < l_above) {
        return Err(Error::InvalidParams(format!(
            "L0 = {l0} does not lie in ({l_below}, {l_above})"
        )));
    }
    let below = minimize_f(mp, kp, l_below, cfg)?;
    let above = minimize_f(mp, kp, l_above, cfg)?;
    let at_l0 = minimize_f(mp, kp, l0, cfg)?;
    let mut failures = Vec::new();
    if below.classification != Classification::Constant {
        failures.push(format!(
            "L = {l_below}: expected constant, got {:?}",
            below.classification
        ));
    }
    if above.classification != Classification::Nonconstant || !(above.c_value < above.cstar_value) {
        failures.push(format!(
            "L = {l_above}: expected nonconstant with c < c*, got {:?} with c = {}, c* = {}",
            above.classification, above.c_value, above.cstar_value
        ));
    }
    if at_l0.amplitude > L0_AMPLITUDE_TOL {
        failures.push(format!(
            "L = L0: amplitude {} exceeds {L0_AMPLITUDE_TOL}",
            at_l0.amplitude
        ));
    }
    Ok(DichotomyReport {
        l0,
        passed: failures.is_empty(),
        below,
        above,
        at_l0,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::compute_multipliers;
    use approx::assert_relative_eq;

    fn params(n: u32, g: f64) -> (ModelParams, KernelParams) {
        let mp = ModelParams::new(n, g).unwrap();
        let kp = KernelParams::from_model(&mp).unwrap();
        (mp, kp)
    }

    #[test]
    fn symbol_exact_case() {
        let (mp, _) = params(3, 0.5);
        for &mu in &[0.5, 1.0, 2.0, 5.0] {
            let exact = mu / (0.5 * PI * mu).tanh();
            assert_relative_eq!(symbol_gamma(&mp, mu).unwrap(), exact, max_relative = 1e-12);
        }
        let d = delta_gamma_formula(&mp, 1.0).unwrap();
        assert_relative_eq!(d, 1.0 / (0.5 * PI).tanh() - 4.0 / PI, max_relative = 1e-12);
        assert!(delta_gamma_formula(&mp, -1.0).is_err());
    }

    #[test]
    fn symbol_at_zero_is_c() {
        for &(n, g) in &[(3, 0.5), (4, 0.3), (5, 0.7)] {
            let (mp, _) = params(n, g);
            assert_relative_eq!(symbol_gamma(&mp, 0.0).unwrap(), mp.c_ngamma, max_relative = 1e-13);
            assert_relative_eq!(
                delta_gamma_formula(&mp, 0.0).unwrap(),
                (1.0 - mp.beta) * mp.c_ngamma,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn symbol_routes_agree() {
        let (mp, kp) = params(3, 0.5);
        let a = delta_symbol(&mp, &kp, 2.0 * PI).unwrap();
        let b = delta_gamma_at(&mp, 2.0 * PI).unwrap();
        assert!((a - b).abs() < 1e-10);
        let (mp, kp) = params(4, 0.3);
        for &l in &[1.0, 5.0, 20.0] {
            let a = delta_symbol(&mp, &kp, l).unwrap();
            let b = delta_gamma_at(&mp, l).unwrap();
            assert!((a - b).abs() < 1e-9, "L = {l}: {a} vs {b}");
        }
    }

    #[test]
    fn critical_period_three_half() {
        let (mp, kp) = params(3, 0.5);
        let r = find_l0(&mp, &kp, Method::Both).unwrap();
        let l0 = r.l0();
        assert!((l0 - 5.1538).abs() < 1e-3, "{l0}");
        assert!(r.agreement.unwrap() < 1e-6);
        // root of μ coth(πμ/2) = 4/π
        let mu = 2.0 * PI / l0;
        assert!((mu / (0.5 * PI * mu).tanh() - 4.0 / PI).abs() < 1e-8);
        assert_relative_eq!(r.lambda0, mu * mu);
    }

    #[test]
    fn bracket_failure_reports_samples() {
        let r = root_by_bisection(|_| Ok(1.0));
        match r {
            Err(Error::Bracket { samples, .. }) => assert_eq!(samples.len(), SCAN_POINTS),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linearization_mode() {
        let (mp, kp) = params(3, 0.5);
        let sm = compute_multipliers(&mp, &kp, 8.0, 32).unwrap();
        let rep = linearization_spectrum(&mp, &sm).unwrap();
        assert_eq!(rep.mode, 1);
        assert!((rep.smallest_zero_mean - rep.expected).abs() < 1e-8);
        assert_relative_eq!(rep.constant_mode, -2.0 / PI, max_relative = 1e-10);
    }

    #[test]
    fn dichotomy_input_check() {
        let (mp, kp) = params(3, 0.5);
        let cfg = SolveConfig::default();
        assert!(matches!(
            verify_dichotomy(&mp, &kp, &cfg, 5.0, 5.0),
            Err(Error::InvalidParams(_))
        ));
    }
}
