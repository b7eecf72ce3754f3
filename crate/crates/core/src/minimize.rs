//! Minimization of the energy quotient over positive `L`-periodic profiles.
//!
//! The iteration works on the constraint set `∫₀^L v^{β+1} = 1`, where the
//! quotient reduces to `F(v) = ⟨v, 𝓛v⟩` and its (half) gradient is
//! `g = 𝓛v - F v^β`. Steps follow the preconditioned direction
//! `-𝓛^{-1} g` (a Sobolev gradient) with a Barzilai–Borwein step length and an
//! Armijo safeguard; after every step the profile is replaced by `|v|` and
//! rescaled back onto the constraint.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cylinder::{apply_operator, bubble, compute_multipliers, PeriodicProfile, SpectralMultipliers};
use crate::error::{Error, Result};
use crate::fourier;
use crate::kernel::{KernelParams, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    Fixed,
    Backtracking,
    SpectralBb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    Constant,
    CosPerturbed,
    Bubble,
}

impl InitKind {
    pub const ALL: [InitKind; 3] = [InitKind::Constant, InitKind::CosPerturbed, InitKind::Bubble];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub n: usize,
    pub max_iter: usize,
    /// Tolerance on the sup norm of the rescaled Euler–Lagrange residual.
    pub grad_tol: f64,
    pub step_rule: StepRule,
    pub inits: Vec<InitKind>,
    pub amp_threshold: f64,
    pub seed: u64,
    /// Precondition the gradient by `𝓛^{-1}`.
    pub precondition: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            n: 256,
            max_iter: 20_000,
            grad_tol: 1e-10,
            step_rule: StepRule::SpectralBb,
            inits: InitKind::ALL.to_vec(),
            amp_threshold: 1e-6,
            seed: 0,
            precondition: true,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < crate::cylinder::MIN_GRID || !self.n.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "grid size N = {} must be a power of two >= {}",
                self.n,
                crate::cylinder::MIN_GRID
            )));
        }
        if !(self.grad_tol > 0.0) || !(self.amp_threshold > 0.0) {
            return Err(Error::InvalidParams(
                "grad_tol and amp_threshold must be positive".into(),
            ));
        }
        if self.inits.is_empty() {
            return Err(Error::InvalidParams("at least one initialization is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Constant,
    Nonconstant,
    /// Amplitude and energy gap disagree.
    Ambiguous,
}

/// Relative energy gap `(c* - c)/c*` above which a minimizer counts as nonconstant.
pub const GAP_THRESHOLD: f64 = 1e-9;

pub fn classify(amplitude: f64, c_value: f64, cstar: f64, amp_threshold: f64) -> Classification {
    let wide = amplitude > amp_threshold;
    let lower = cstar - c_value > GAP_THRESHOLD * cstar;
    match (wide, lower) {
        (true, true) => Classification::Nonconstant,
        (false, false) => Classification::Constant,
        _ => Classification::Ambiguous,
    }
}

/// Outcome of a single descent run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub init: InitKind,
    pub c_value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub amplitude: f64,
    pub classification: Classification,
    /// Steps in which the `|v|` projection changed the iterate.
    pub abs_projections: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    /// Lowest-energy profile, normalized to `∫ v^{β+1} = 1` and phase-shifted.
    pub profile: PeriodicProfile,
    pub c_value: f64,
    pub cstar_value: f64,
    pub classification: Classification,
    pub residual: f64,
    pub iterations: usize,
    pub init_used: InitKind,
    pub converged: bool,
    pub amplitude: f64,
    pub abs_projections: usize,
    pub runs: Vec<RunSummary>,
}

/// `c*(L) = c_{n,γ} L^{(β-1)/(β+1)}`, the quotient of the constant profile.
pub fn constant_energy(mp: &ModelParams, l: f64) -> f64 {
    mp.c_ngamma * l.powf((mp.beta - 1.0) / (mp.beta + 1.0))
}

/// Same samples, period replaced by `l_new`.
pub fn rescale_profile(p: &PeriodicProfile, l_new: f64) -> Result<PeriodicProfile> {
    PeriodicProfile::new(l_new, p.values.clone())
}

/// Initial iterate for `kind`.
pub fn initial_profile(mp: &ModelParams, l: f64, n: usize, kind: InitKind, seed: u64) -> Result<PeriodicProfile> {
    match kind {
        InitKind::Constant => PeriodicProfile::constant(l, n, 1.0),
        InitKind::CosPerturbed => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phase = 2.0 * PI * rng.random::<f64>();
            let modes: Vec<(f64, f64)> = (2..=4)
                .map(|_| (0.01 * (2.0 * rng.random::<f64>() - 1.0), 2.0 * PI * rng.random::<f64>()))
                .collect();
            let w = 2.0 * PI / l;
            PeriodicProfile::from_fn(l, n, |t| {
                let mut v = 1.0 + 0.1 * (w * t + phase).cos();
                for (k, (amp, ph)) in modes.iter().enumerate() {
                    v += amp * ((k + 2) as f64 * w * t + ph).cos();
                }
                v
            })
        }
        InitKind::Bubble => PeriodicProfile::from_fn(l, n, |t| bubble(mp, t - 0.5 * l)),
    }
}

fn h_dot(h: f64, a: &[f64], b: &[f64]) -> f64 {
    h * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

/// Rescale onto `h Σ |v|^{β+1} = 1`.
fn normalize(mp: &ModelParams, h: f64, v: &mut [f64]) -> Result<()> {
    let m = h * v.iter().map(|x| x.abs().powf(mp.beta + 1.0)).sum::<f64>();
    if !(m > 0.0 && m.is_finite()) {
        let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        return Err(Error::PositivityCollapse(max));
    }
    let s = m.powf(-1.0 / (mp.beta + 1.0));
    v.iter_mut().for_each(|x| *x *= s);
    Ok(())
}

/// Quotient value, half gradient and rescaled residual at a normalized iterate.
struct State {
    v: Vec<f64>,
    f: f64,
    g: Vec<f64>,
    residual: f64,
}

fn evaluate(mp: &ModelParams, sm: &SpectralMultipliers, v: Vec<f64>) -> State {
    let h = sm.l / sm.n as f64;
    let lv = apply_operator(mp, sm, &v);
    let f = h_dot(h, &v, &lv);
    let g: Vec<f64> = lv
        .iter()
        .zip(&v)
        .map(|(l, x)| l - f * x.abs().powf(mp.beta - 1.0) * x)
        .collect();
    let scale = (f / mp.c_ngamma).powf(1.0 / (mp.beta - 1.0));
    let residual = scale * g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    State { v, f, g, residual }
}

fn apply_inverse(mp: &ModelParams, sm: &SpectralMultipliers, g: &[f64]) -> Vec<f64> {
    let mut c = fourier::forward(g);
    c.iter_mut()
        .enumerate()
        .for_each(|(k, z)| *z /= sm.for_bin(k) + mp.c_ngamma);
    fourier::inverse_real(&c)
}

/// Shift the profile so that its first Fourier coefficient is real and
/// positive, which places the maximum of a single-bump profile at `t = 0`.
pub fn phase_normalize(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut c = fourier::forward(values);
    let c1 = c[1];
    let mean = c[0].re.abs();
    if c1.norm() <= 1e-14 * mean.max(f64::MIN_POSITIVE) {
        return values.to_vec();
    }
    let psi = c1.arg();
    for (k, z) in c.iter_mut().enumerate() {
        let freq = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        *z *= num_complex::Complex64::from_polar(1.0, -freq * psi);
    }
    fourier::inverse_real(&c)
}

/// One descent run from `init` on the grid of `sm`.
pub fn descend(
    mp: &ModelParams,
    sm: &SpectralMultipliers,
    init: &PeriodicProfile,
    cfg: &SolveConfig,
) -> Result<(PeriodicProfile, RunSummary)> {
    sm.check_shape(init)?;
    let h = sm.l / sm.n as f64;
    let mut abs_projections = 0;
    let mut v0: Vec<f64> = init.values.clone();
    if v0.iter().any(|x| *x < 0.0) {
        abs_projections += 1;
        v0.iter_mut().for_each(|x| *x = x.abs());
    }
    if v0.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroProfile);
    }
    normalize(mp, h, &mut v0)?;
    let mut st = evaluate(mp, sm, v0);
    let lambda_max = sm.theta[sm.n / 2] + mp.c_ngamma;
    let base_step = if cfg.precondition { 1.0 } else { 1.0 / lambda_max };
    let mut alpha = base_step;
    let mut iterations = 0;
    while iterations < cfg.max_iter && st.residual > cfg.grad_tol {
        let d: Vec<f64> = if cfg.precondition {
            apply_inverse(mp, sm, &st.g).iter().map(|x| -x).collect()
        } else {
            st.g.iter().map(|x| -x).collect()
        };
        // directional derivative of F along d is 2⟨g, d⟩
        let slope = 2.0 * h_dot(h, &st.g, &d);
        if !(slope < 0.0) {
            break;
        }
        let mut trial_alpha = match cfg.step_rule {
            StepRule::Fixed => base_step,
            StepRule::Backtracking => base_step,
            StepRule::SpectralBb => alpha,
        };
        let mut accepted = None;
        for _ in 0..60 {
            let mut w: Vec<f64> = st.v.iter().zip(&d).map(|(x, dx)| x + trial_alpha * dx).collect();
            let flipped = w.iter().any(|x| *x < 0.0);
            if flipped {
                w.iter_mut().for_each(|x| *x = x.abs());
            }
            if normalize(mp, h, &mut w).is_ok() {
                let next = evaluate(mp, sm, w);
                let armijo = next.f <= st.f + 1e-4 * trial_alpha * slope;
                let flat = (next.f - st.f).abs() <= 4.0 * f64::EPSILON * st.f.abs() && next.residual < st.residual;
                if cfg.step_rule == StepRule::Fixed || armijo || flat {
                    accepted = Some((next, flipped));
                    break;
                }
            }
            trial_alpha *= 0.5;
        }
        let Some((next, flipped)) = accepted else {
            break;
        };
        if flipped {
            abs_projections += 1;
        }
        if cfg.step_rule == StepRule::SpectralBb {
            let s: Vec<f64> = next.v.iter().zip(&st.v).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = next.g.iter().zip(&st.g).map(|(a, b)| a - b).collect();
            let sy = h_dot(h, &s, &y);
            let sps = if cfg.precondition {
                h_dot(h, &s, &apply_operator(mp, sm, &s))
            } else {
                h_dot(h, &s, &s)
            };
            alpha = if sy > 0.0 && sps > 0.0 {
                (sps / sy).clamp(1e-3 * base_step, 1e3 * base_step)
            } else {
                base_step
            };
        }
        st = next;
        iterations += 1;
    }
    let values = phase_normalize(&st.v);
    let profile = PeriodicProfile::new(sm.l, values)?;
    let cstar = constant_energy(mp, sm.l);
    let amplitude = profile.amplitude();
    let summary = RunSummary {
        init: InitKind::Constant,
        c_value: st.f,
        residual: st.residual,
        iterations,
        converged: st.residual <= cfg.grad_tol,
        amplitude,
        classification: classify(amplitude, st.f, cstar, cfg.amp_threshold),
        abs_projections,
    };
    Ok((profile, summary))
}

/// Minimize the quotient at period `l` from every configured initialization.
pub fn minimize_f(mp: &ModelParams, kp: &KernelParams, l: f64, cfg: &SolveConfig) -> Result<MinimizeResult> {
    cfg.validate()?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParams(format!("period L = {l} must be positive")));
    }
    let sm = compute_multipliers(mp, kp, l, cfg.n)?;
    minimize_with_multipliers(mp, &sm, cfg)
}

/// [`minimize_f`] with a precomputed multiplier table.
pub fn minimize_with_multipliers(
    mp: &ModelParams,
    sm: &SpectralMultipliers,
    cfg: &SolveConfig,
) -> Result<MinimizeResult> {
    cfg.validate()?;
    let mut best: Option<(PeriodicProfile, RunSummary)> = None;
    let mut runs = Vec::new();
    for &kind in &cfg.inits {
        let init = initial_profile(mp, sm.l, sm.n, kind, cfg.seed)?;
        let (profile, mut summary) = descend(mp, sm, &init, cfg)?;
        summary.init = kind;
        runs.push(summary.clone());
        let better = match &best {
            None => true,
            Some((_, b)) => summary.c_value < b.c_value - 1e-14 * b.c_value.abs(),
        };
        if better {
            best = Some((profile, summary));
        }
    }
    let (profile, s) = best.expect("at least one initialization");
    let cstar = constant_energy(mp, sm.l);
    Ok(MinimizeResult {
        cstar_value: cstar,
        classification: s.classification,
        c_value: s.c_value,
        residual: s.residual,
        iterations: s.iterations,
        init_used: s.init,
        converged: s.converged,
        amplitude: s.amplitude,
        abs_projections: s.abs_projections,
        profile,
        runs,
    })
}

/// One row of an `L` sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub l: f64,
    pub c: f64,
    pub cstar: f64,
    pub classification: Option<Classification>,
    pub amplitude: f64,
    pub residual: f64,
    pub converged: bool,
    pub error: Option<String>,
}

impl SweepRecord {
    fn from_result(l: f64, r: Result<MinimizeResult>, cstar: f64) -> Self {
        match r {
            Ok(m) => Self {
                l,
                c: m.c_value,
                cstar: m.cstar_value,
                classification: Some(m.classification),
                amplitude: m.amplitude,
                residual: m.residual,
                converged: m.converged,
                error: None,
            },
            Err(e) => Self {
                l,
                c: f64::NAN,
                cstar,
                classification: None,
                amplitude: f64::NAN,
                residual: f64::NAN,
                converged: false,
                error: Some(e.to_string()),
            },
        }
    }
}

fn solve_point(mp: &ModelParams, kp: &KernelParams, l: f64, cfg: &SolveConfig) -> SweepRecord {
    SweepRecord::from_result(l, minimize_f(mp, kp, l, cfg), constant_energy(mp, l))
}

/// Solve at every `L`; failures are recorded per point.
pub fn sweep_l(mp: &ModelParams, kp: &KernelParams, l_values: &[f64], cfg: &SolveConfig) -> Vec<SweepRecord> {
    l_values.par_iter().map(|&l| solve_point(mp, kp, l, cfg)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// All solved points, sorted by `L`.
    pub records: Vec<SweepRecord>,
    /// `(largest constant L, smallest nonconstant L)` after refinement.
    pub bracket: Option<(f64, f64)>,
    /// Largest `L` classified constant below the bracket.
    pub l0_estimate: Option<f64>,
}

/// [`sweep_l`] followed by bisection on the first constant → nonconstant
/// flip until the bracket is narrower than `dl`.
pub fn sweep_refined(
    mp: &ModelParams,
    kp: &KernelParams,
    l_values: &[f64],
    cfg: &SolveConfig,
    dl: f64,
) -> Result<SweepResult> {
    if l_values.iter().any(|l| !(*l > 0.0)) || l_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("L values must be positive and sorted".into()));
    }
    let mut records = sweep_l(mp, kp, l_values, cfg);
    let flip = records.windows(2).position(|w| {
        w[0].classification == Some(Classification::Constant)
            && w[1].classification == Some(Classification::Nonconstant)
    });
    let mut bracket = None;
    if let Some(i) = flip {
        let (mut lo, mut hi) = (records[i].l, records[i + 1].l);
        while hi - lo > dl {
            let mid = 0.5 * (lo + hi);
            let rec = solve_point(mp, kp, mid, cfg);
            let class = rec.classification;
            records.push(rec);
            match class {
                Some(Classification::Constant) => lo = mid,
                Some(Classification::Nonconstant) => hi = mid,
                _ => break,
            }
        }
        bracket = Some((lo, hi));
    }
    records.sort_by(|a, b| a.l.total_cmp(&b.l));
    Ok(SweepResult {
        l0_estimate: bracket.map(|b| b.0),
        records,
        bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n: u32, g: f64) -> (ModelParams, KernelParams) {
        let mp = ModelParams::new(n, g).unwrap();
        let kp = KernelParams::from_model(&mp).unwrap();
        (mp, kp)
    }

    fn small_cfg() -> SolveConfig {
        SolveConfig {
            n: 64,
            ..SolveConfig::default()
        }
    }

    #[test]
    fn constant_energy_values() {
        let (mp, _) = params(3, 0.5);
        assert_relative_eq!(constant_energy(&mp, 8.0), 4.0 / PI, max_relative = 1e-15);
        assert!(constant_energy(&mp, 1e-3) < constant_energy(&mp, 1e-2));
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(1e-3, 0.9, 1.0, 1e-6), Classification::Nonconstant);
        assert_eq!(classify(1e-9, 1.0, 1.0, 1e-6), Classification::Constant);
        assert_eq!(classify(1e-3, 1.0, 1.0, 1e-6), Classification::Ambiguous);
    }

    #[test]
    fn constant_init_is_critical() {
        let (mp, kp) = params(3, 0.5);
        let cfg = SolveConfig {
            inits: vec![InitKind::Constant],
            ..small_cfg()
        };
        let r = minimize_f(&mp, &kp, 8.0, &cfg).unwrap();
        assert!(r.iterations <= 2);
        assert_relative_eq!(r.c_value, 4.0 / PI, max_relative = 1e-12);
        let expected = 8f64.powf(-1.0 / (mp.beta + 1.0));
        for v in &r.profile.values {
            assert_relative_eq!(*v, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn short_period_gives_constant() {
        let (mp, kp) = params(3, 0.5);
        let r = minimize_f(&mp, &kp, 4.0, &small_cfg()).unwrap();
        assert_eq!(r.classification, Classification::Constant);
        for run in &r.runs {
            assert!((run.c_value - r.cstar_value).abs() < 1e-6 * r.cstar_value, "{run:?}");
        }
    }

    #[test]
    fn long_period_gives_nonconstant() {
        let (mp, kp) = params(3, 0.5);
        let r = minimize_f(&mp, &kp, 8.0, &small_cfg()).unwrap();
        assert_eq!(r.classification, Classification::Nonconstant, "{:?}", r.runs);
        assert!(r.c_value < r.cstar_value);
        assert!(r.residual <= 1e-8);
        assert!(r.profile.min() > 0.0);
        // the maximum sits at t = 0 after phase normalization
        let imax = r
            .profile
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(imax == 0 || imax == r.profile.n() - 1 || imax == 1);
    }

    #[test]
    fn scale_invariance_of_descent() {
        let (mp, kp) = params(3, 0.5);
        let sm = compute_multipliers(&mp, &kp, 7.0, 64).unwrap();
        let cfg = small_cfg();
        let init = initial_profile(&mp, 7.0, 64, InitKind::CosPerturbed, 3).unwrap();
        let (a, sa) = descend(&mp, &sm, &init, &cfg).unwrap();
        let (b, sb) = descend(&mp, &sm, &init.scaled(10.0), &cfg).unwrap();
        assert!((sa.c_value - sb.c_value).abs() < 1e-10);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rescale_is_relabeling() {
        let p = PeriodicProfile::from_fn(3.0, 16, |t| 1.0 + t).unwrap();
        let q = rescale_profile(&p, 5.0).unwrap();
        assert_eq!(q.values, p.values);
        assert_eq!(q.l, 5.0);
        assert_eq!(rescale_profile(&p, 3.0).unwrap(), p);
    }

    #[test]
    fn phase_normalization_is_a_shift() {
        let n = 32;
        let v: Vec<f64> = (0..n)
            .map(|j| 2.0 + (2.0 * PI * j as f64 / n as f64 - 1.0).cos())
            .collect();
        let w = phase_normalize(&v);
        assert!((w[0] - 3.0).abs() < 1e-13);
        let sum_v: f64 = v.iter().sum();
        let sum_w: f64 = w.iter().sum();
        assert!((sum_v - sum_w).abs() < 1e-12);
    }
}
