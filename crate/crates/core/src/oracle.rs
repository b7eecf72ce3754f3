//! Independent cross-check of the spectral quadratic form: a direct double
//! sum of `(f(t) - f(τ))² K_L(t - τ)` with an analytic correction for the
//! punctured diagonal.
//!
//! With `g(s) = (f(t) - f(t-s))² K_L(s) ≈ κ₀ f'(t)² |s|^{1-2γ}` near `s = 0`,
//! the punctured trapezoid sum satisfies
//! `h Σ_{j≠0} g(jh) = ∫ g + 2 ζ(2γ-1) κ₀ f'(t)² h^{2-2γ} + O(h^{4-2γ})`.

use std::f64::consts::PI;

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::cylinder::PeriodicProfile;
use crate::error::Result;
use crate::kernel::{kernel_periodized, singular_strength, KernelParams, ModelParams};

/// Riemann zeta function for real `s ≠ 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    const N: usize = 10;
    // B_2, B_4, ..., B_12
    const B: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // B_{2j}/(2j)! · s(s+1)...(s+2j-2) · N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in B.iter().enumerate() {
        let jj = 2 * (j + 1);
        sum += b / fact * rising * nf.powf(-s - jj as f64 + 1.0);
        rising *= (s + jj as f64 - 1.0) * (s + jj as f64);
        fact *= (jj + 1) as f64 * (jj + 2) as f64;
    }
    sum
}

/// `a0 + Σ_k (a_k cos(2πkt/L) + b_k sin(2πkt/L))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub l: f64,
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    /// Random positive polynomial of the given degree: `a0 = 1`, coefficients
    /// of mode `k` uniform in `[-0.1/k, 0.1/k]`.
    pub fn random_positive<R: Rng>(l: f64, degree: usize, rng: &mut R) -> Self {
        let mut coef = |k: usize| 0.1 * (2.0 * rng.random::<f64>() - 1.0) / k as f64;
        let (mut cos, mut sin) = (Vec::new(), Vec::new());
        for k in 1..=degree {
            cos.push(coef(k));
            sin.push(coef(k));
        }
        Self { l, a0: 1.0, cos, sin }
    }

    fn omega(&self) -> f64 {
        2.0 * PI / self.l
    }

    pub fn value(&self, t: f64) -> f64 {
        let w = self.omega();
        self.a0
            + self
                .cos
                .iter()
                .zip(&self.sin)
                .enumerate()
                .map(|(i, (a, b))| {
                    let x = (i + 1) as f64 * w * t;
                    a * x.cos() + b * x.sin()
                })
                .sum::<f64>()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let w = self.omega();
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| {
                let k = (i + 1) as f64 * w;
                k * (b * (k * t).cos() - a * (k * t).sin())
            })
            .sum()
    }

    pub fn sample(&self, n: usize) -> Result<PeriodicProfile> {
        PeriodicProfile::from_fn(self.l, n, |t| self.value(t))
    }

    /// `L Σ_{k≥1} θ_k (a_k² + b_k²)/2` given multipliers `θ_k` for `k = 1..=degree`.
    pub fn spectral_energy(&self, theta: &[f64]) -> f64 {
        0.5 * self.l
            * self
                .cos
                .iter()
                .zip(&self.sin)
                .zip(theta)
                .map(|((a, b), t)| t * (a * a + b * b))
                .sum::<f64>()
    }
}

/// `(κ/2) ∫₀^L ∫₀^L (f(t) - f(τ))² K_L(t - τ) dτ dt` by a direct double sum
/// on `m` points with the diagonal correction described in the module docs.
pub fn quadratic_form_direct(mp: &ModelParams, kp: &KernelParams, f: &TrigPolynomial, m: usize) -> Result<f64> {
    let l = f.l;
    let h = l / m as f64;
    let kappa0 = singular_strength(kp)?;
    let half = m / 2;
    // K_L(jh) for j = 1..=m/2; K_L is even and L-periodic
    let mut kl = vec![0.0; half + 1];
    for (j, slot) in kl.iter_mut().enumerate().skip(1) {
        *slot = kernel_periodized(kp, l, j as f64 * h, 1e-16)?;
    }
    let fv: Vec<f64> = (0..m).map(|i| f.value(i as f64 * h)).collect();
    let correction = 2.0 * zeta(2.0 * mp.gamma - 1.0) * kappa0 * h.powf(2.0 - 2.0 * mp.gamma);
    let mut total = 0.0;
    for i in 0..m {
        let mut row = 0.0;
        for j in 1..m {
            let d = fv[i] - fv[(i + m - j) % m];
            row += d * d * kl[j.min(m - j)];
        }
        let fp = f.derivative(i as f64 * h);
        total += h * row - correction * fp * fp;
    }
    Ok(0.5 * mp.kappa_ngamma * h * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::{compute_multipliers, quadratic_form};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zeta_values() {
        assert!((zeta(0.0) + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = TrigPolynomial::random_positive(3.0, 4, &mut rng);
        let t = 0.7;
        let fd = (f.value(t + 1e-6) - f.value(t - 1e-6)) / 2e-6;
        assert!((fd - f.derivative(t)).abs() < 1e-8);
    }

    #[test]
    fn direct_sum_matches_spectral() {
        for &(n, g) in &[(3, 0.5), (4, 0.3)] {
            let mp = ModelParams::new(n, g).unwrap();
            let kp = KernelParams::from_model(&mp).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let f = TrigPolynomial::random_positive(6.0, 4, &mut rng);
            let sm = compute_multipliers(&mp, &kp, 6.0, 64).unwrap();
            let spectral = quadratic_form(&sm, &f.sample(64).unwrap()).unwrap();
            assert!((spectral - f.spectral_energy(&sm.theta[1..])).abs() < 1e-13 * spectral);
            let direct = quadratic_form_direct(&mp, &kp, &f, 512).unwrap();
            assert!(((direct - spectral) / spectral).abs() < 1e-4, "{direct} vs {spectral}");
        }
    }
}
