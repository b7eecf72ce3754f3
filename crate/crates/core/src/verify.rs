//! The acceptance battery: twelve numbered checks with runtime budgets.
//!
//! Every check is run as stated. Two of them cannot hold as stated and are
//! listed in [`KNOWN_UNATTAINABLE`]; they still run and report failure,
//! together with the diagnostic that shows what does hold.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bifurcation::{find_l0, linearization_spectrum, symbol_gamma, Method};
use crate::cylinder::{
    bubble_residual_with, compute_multipliers, functional_f, multipliers_at, normalization_constant_a, quadratic_form,
    scaled_bubble_residual_with, BubbleQuadrature, PeriodicProfile,
};
use crate::error::Result;
use crate::kernel::{
    check_scaling_inequality, kernel, kernel_closed, kernel_direct, log_decay_rate, log_grid,
    singular_strength_extrapolated, KernelParams, ModelParams,
};
use crate::minimize::{
    constant_energy, minimize_f, minimize_with_multipliers, rescale_profile, Classification, SolveConfig,
};
use crate::oracle::{quadratic_form_direct, TrigPolynomial};

pub const SCHEMA_VERSION: u32 = 1;

/// Criteria run by `--quick`.
pub const QUICK: [u8; 4] = [1, 2, 3, 5];

/// Criteria whose literal statement is false; see the ledger of each check.
pub const KNOWN_UNATTAINABLE: [(u8, &str); 2] = [
    (
        2,
        "log K(ξ)/ξ = -a + log C/ξ + o(1/ξ); at ξ = 30 the offset log C/30 is ~1e-1, not 1e-3",
    ),
    (
        9,
        "the unscaled bubble solves 𝓛b = Λ b^β with Λ = 2^{2γ}Γ(n/2+γ)/Γ(n/2-γ) ≠ c_{n,γ}",
    ),
];

pub const RUNTIME_BUDGETS: [f64; 12] = [5.0, 5.0, 10.0, 10.0, 5.0, 30.0, 180.0, 300.0, 30.0, 30.0, 120.0, 10.0];

pub const NAMES: [&str; 12] = [
    "kernel closed form",
    "kernel asymptotics",
    "monotonicity and scaling",
    "normalization identity",
    "symbol cross-validation",
    "bifurcation period",
    "dichotomy",
    "sweep bracket",
    "bubble residual",
    "quadratic-form oracle",
    "rescaled competitor",
    "linearized operator",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    /// All numerical checks held.
    pub checks_passed: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    /// Checks held within the runtime budget.
    pub passed: bool,
    pub known_unattainable: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let known = if self.known_unattainable && !self.passed {
            " [known unattainable as stated]"
        } else {
            ""
        };
        format!(
            "criterion {:>2} {status}{known} ({:.2}s / {:.0}s) {}: {}",
            self.id, self.seconds, self.budget_seconds, self.name, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failing(&self) -> Vec<u8> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn params(n: u32, g: f64) -> Result<(ModelParams, KernelParams)> {
    let mp = ModelParams::new(n, g)?;
    let kp = KernelParams::from_model(&mp)?;
    Ok((mp, kp))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1() -> Result<Outcome> {
    let (_, kp) = params(3, 0.5)?;
    let closed = kernel_closed(&kp, 1.0)?;
    let exact = PI / 1f64.sinh().powi(2);
    let gap = rel(kernel_direct(&kp, 1.0)?, closed);
    let mut ok = rel(closed, exact) <= 1e-12 && (closed - 2.27471).abs() < 1e-5 && gap <= 1e-8;
    let mut detail = format!("K(1) = {closed:.10} (π/sinh²1 = {exact:.10}), closed/direct gap {gap:.1e}");
    for &(n, g) in &[(4, 0.3), (5, 0.7)] {
        let (_, kp) = params(n, g)?;
        let mut worst = 0.0f64;
        for x in log_grid(1e-2, 20.0, 60) {
            worst = worst.max(rel(kernel_direct(&kp, x)?, kernel_closed(&kp, x)?));
        }
        ok &= worst <= 1e-8;
        detail += &format!("; ({n},{g}) max gap {worst:.1e}");
    }
    Ok(Outcome { ok, detail })
}

fn c2() -> Result<Outcome> {
    let mut ok = true;
    let mut detail = String::new();
    for &(n, g) in &[(3, 0.5), (4, 0.3), (5, 0.7)] {
        let (_, kp) = params(n, g)?;
        let limit = singular_strength_extrapolated(&kp)?.refined;
        let x = 1e-3;
        let near = kernel(&kp, x)? * x.powf(kp.sing_exponent);
        let near_dev = rel(near, limit);
        let tail = kernel(&kp, 30.0)?.ln() / 30.0;
        let tail_dev = (tail + kp.tail_rate).abs();
        let slope_dev = (log_decay_rate(&kp, 30.0)? + kp.tail_rate).abs();
        ok &= near_dev <= 1e-3 && tail_dev <= 1e-3;
        detail += &format!(
            "({n},{g}): near-zero dev {near_dev:.1e}, |log K(30)/30 + a| = {tail_dev:.3e}, |dlogK/dξ + a| = {slope_dev:.1e}; "
        );
    }
    Ok(Outcome { ok, detail })
}

fn c3() -> Result<Outcome> {
    let (_, kp) = params(3, 0.5)?;
    let rep = check_scaling_inequality(&kp, 6.0, 3.0, 50)?;
    Ok(Outcome {
        ok: rep.passed,
        detail: format!(
            "ξK(ξ) max ratio {:.6} on {} pts; min margin {:.3e} at ξ = {:.3}, {} failures of 50",
            rep.monotone_worst_ratio,
            crate::kernel::MONOTONE_GRID,
            rep.worst_margin,
            rep.worst_xi,
            rep.inequality_failures
        ),
    })
}

fn c4() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let a = normalization_constant_a(&mp, &kp)?;
    let err = (a - 2.0 / PI).abs();
    let mut ok = err <= 1e-10;
    let mut detail = format!("(3,0.5): |A - 2/π| = {err:.1e}");
    for &(n, g) in &[(4, 0.3), (5, 0.7)] {
        let (mp, kp) = params(n, g)?;
        let d = rel(normalization_constant_a(&mp, &kp)?, mp.c_ngamma);
        ok &= d <= 1e-6;
        detail += &format!("; ({n},{g}) rel {d:.1e}");
    }
    Ok(Outcome { ok, detail })
}

fn c5() -> Result<Outcome> {
    let mus = [0.5, 1.0, 2.0, 5.0];
    let (mp, kp) = params(3, 0.5)?;
    let theta = multipliers_at(&mp, &kp, &mus)?;
    let mut worst_q = 0.0f64;
    let mut worst_s = 0.0f64;
    for (mu, t) in mus.iter().zip(&theta) {
        let exact = mu / (0.5 * PI * mu).tanh();
        worst_q = worst_q.max((t + mp.c_ngamma - exact).abs());
        worst_s = worst_s.max((symbol_gamma(&mp, *mu)? - exact).abs());
    }
    let mut ok = worst_q <= 1e-8 && worst_s <= 1e-8;
    let mut detail = format!("(3,0.5): |θ+c - μcoth| ≤ {worst_q:.1e}, |S - μcoth| ≤ {worst_s:.1e}");
    for &(n, g) in &[(4, 0.3), (5, 0.7)] {
        let (mp, kp) = params(n, g)?;
        let theta = multipliers_at(&mp, &kp, &mus)?;
        let mut worst = 0.0f64;
        for (mu, t) in mus.iter().zip(&theta) {
            worst = worst.max((t + mp.c_ngamma - symbol_gamma(&mp, *mu)?).abs());
        }
        ok &= worst <= 1e-8;
        detail += &format!("; ({n},{g}) |θ+c - S| ≤ {worst:.1e}");
    }
    Ok(Outcome { ok, detail })
}

/// `L₀(3, 1/2)` by the Gamma formula.
fn reference_l0() -> Result<f64> {
    let (mp, kp) = params(3, 0.5)?;
    Ok(find_l0(&mp, &kp, Method::Gamma)?.l0())
}

fn c6() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let r = find_l0(&mp, &kp, Method::Both)?;
    let l0 = r.l0();
    let agreement = r.agreement.unwrap_or(f64::INFINITY);
    let mut ok = (l0 - 5.1538).abs() <= 1e-3 && agreement <= 1e-6;
    let mut detail = format!("L0 = {l0:.8}, gamma/symbol agreement {agreement:.1e}; ");
    let mut prev = f64::INFINITY;
    // γ → 1 at n = 3 lies outside n >= 2 + 2γ; the closed-form symbol is still defined there
    for &g in &[0.9, 0.99, 0.999] {
        let mp = ModelParams::new_extended(3, g)?;
        let kp = KernelParams::from_model(&mp)?;
        let l = find_l0(&mp, &kp, Method::Gamma)?.l0();
        let d = (l - 2.0 * PI).abs();
        ok &= d < prev;
        prev = d;
        detail += &format!("γ={g}: L0 = {l:.6} (|L0-2π| = {d:.2e}); ");
    }
    ok &= prev / (2.0 * PI) <= 0.01;
    Ok(Outcome { ok, detail })
}

fn c7() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let cfg = SolveConfig::default();
    let r4 = minimize_f(&mp, &kp, 4.0, &cfg)?;
    let c4 = constant_energy(&mp, 4.0);
    let mut ok = r4.classification == Classification::Constant;
    let mut worst = 0.0f64;
    for run in &r4.runs {
        ok &= run.classification == Classification::Constant;
        worst = worst.max((run.c_value - c4).abs());
    }
    ok &= worst <= 1e-6;
    let r8 = minimize_f(&mp, &kp, 8.0, &cfg)?;
    let c8 = 4.0 / PI;
    ok &= r8.classification == Classification::Nonconstant
        && r8.c_value <= c8 * (1.0 - 1e-3)
        && r8.amplitude > 1e-2
        && r8.residual <= 1e-8;
    Ok(Outcome {
        ok,
        detail: format!(
            "L=4: {:?} from all inits, max |c - c*| = {worst:.1e}; L=8: {:?} c = {:.8} (c* = {c8:.8}, ratio {:.6}), amplitude {:.4}, residual {:.1e}, iters {}",
            r4.classification,
            r8.classification,
            r8.c_value,
            r8.c_value / c8,
            r8.amplitude,
            r8.residual,
            r8.iterations
        ),
    })
}

fn c8() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let l0 = reference_l0()?;
    let grid: Vec<f64> = (0..=6).map(|i| 4.5 + 0.25 * i as f64).collect();
    let sweep = crate::minimize::sweep_refined(&mp, &kp, &grid, &SolveConfig::default(), 1e-2)?;
    let (ok, detail) = match sweep.bracket {
        Some((lo, hi)) => (
            lo <= l0 && l0 <= hi && hi - lo <= 1e-2,
            format!(
                "bracket [{lo:.5}, {hi:.5}] around L0 = {l0:.5} ({} solves)",
                sweep.records.len()
            ),
        ),
        None => (
            false,
            format!(
                "no constant→nonconstant flip on the grid ({} solves)",
                sweep.records.len()
            ),
        ),
    };
    Ok(Outcome { ok, detail })
}

fn c9() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let ts = [0.0, 1.0, -1.0, 2.0, -2.0];
    let literal = bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Adaptive(1e-10))?;
    let orders = [4, 8, 16];
    let mut lit_seq = Vec::new();
    let mut scaled_seq = Vec::new();
    for &q in &orders {
        lit_seq.push(bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Fixed(q))?);
        scaled_seq.push(scaled_bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Fixed(q))?);
    }
    let scaled = scaled_bubble_residual_with(&mp, &kp, &ts, BubbleQuadrature::Adaptive(1e-10))?;
    let decreasing = lit_seq.windows(2).all(|w| w[1] <= w[0]);
    Ok(Outcome {
        ok: literal <= 1e-4 && decreasing,
        detail: format!(
            "residual of b: {literal:.6e} (orders 4/8/16: {:.3e}/{:.3e}/{:.3e}); \
             scaled bubble λb solves 𝓛u = cu^β to {scaled:.1e} (orders 4/8/16: {:.1e}/{:.1e}/{:.1e})",
            lit_seq[0], lit_seq[1], lit_seq[2], scaled_seq[0], scaled_seq[1], scaled_seq[2]
        ),
    })
}

fn c10() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let l = 6.0;
    let sm = compute_multipliers(&mp, &kp, l, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = TrigPolynomial::random_positive(l, 6, &mut rng);
        let spectral = quadratic_form(&sm, &f.sample(64)?)?;
        let direct = quadratic_form_direct(&mp, &kp, &f, 1024)?;
        worst = worst.max(rel(direct, spectral));
    }
    // at (3, 1/2) the periodized integrand is analytic off the diagonal, so
    // the direct sum is spectrally accurate; (4, 0.3) exercises the ζ correction
    let (mp4, kp4) = params(4, 0.3)?;
    let sm4 = compute_multipliers(&mp4, &kp4, l, 64)?;
    let mut worst4 = 0.0f64;
    for _ in 0..5 {
        let f = TrigPolynomial::random_positive(l, 6, &mut rng);
        let spectral = quadratic_form(&sm4, &f.sample(64)?)?;
        let direct = quadratic_form_direct(&mp4, &kp4, &f, 1024)?;
        worst4 = worst4.max(rel(direct, spectral));
    }
    let eps = 0.1;
    let single = PeriodicProfile::from_fn(l, 64, |t| 1.0 + eps * (2.0 * PI * t / l).cos())?;
    let q = quadratic_form(&sm, &single)?;
    let plancherel = rel(q, 0.5 * l * sm.theta[1] * eps * eps);
    Ok(Outcome {
        ok: worst <= 1e-4 && worst4 <= 1e-4 && plancherel <= 1e-12,
        detail: format!(
            "20 profiles: max rel gap {worst:.2e}; (4,0.3) 5 profiles: max rel gap {worst4:.2e}; single-mode identity rel {plancherel:.1e}"
        ),
    })
}

fn c11() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let cfg = SolveConfig::default();
    let (l1, l2) = (6.0, 9.0);
    let sm1 = compute_multipliers(&mp, &kp, l1, cfg.n)?;
    let r1 = minimize_with_multipliers(&mp, &sm1, &cfg)?;
    let sm2 = compute_multipliers(&mp, &kp, l2, cfg.n)?;
    let competitor = rescale_profile(&r1.profile, l2)?;
    let f2 = functional_f(&mp, &sm2, &competitor)?.f_value;
    let bound = (l2 / l1).powf((mp.beta - 1.0) / (mp.beta + 1.0)) * r1.c_value;
    let cstar9 = constant_energy(&mp, l2);
    Ok(Outcome {
        ok: r1.classification == Classification::Nonconstant && f2 < bound && f2 < cstar9,
        detail: format!(
            "c(6) = {:.8} ({:?}); F_9(rescaled) = {f2:.8} < bound {bound:.8}; c*(9) = {cstar9:.8}",
            r1.c_value, r1.classification
        ),
    })
}

fn c12() -> Result<Outcome> {
    let (mp, kp) = params(3, 0.5)?;
    let mut ok = true;
    let mut detail = String::new();
    for &l in &[4.0, 8.0] {
        let sm = compute_multipliers(&mp, &kp, l, 64)?;
        let rep = linearization_spectrum(&mp, &sm)?;
        let d = (rep.smallest_zero_mean - rep.expected).abs();
        ok &= d <= 1e-8 && rep.mode == 1;
        detail += &format!(
            "L={l}: min zero-mean eigenvalue {:.10} vs θ1-(β-1)c = {:.10} (diff {d:.1e}), mode k={}; ",
            rep.smallest_zero_mean, rep.expected, rep.mode
        );
    }
    // θ_1 by the exact symbol, as an independent anchor
    let exact = {
        let mu = 2.0 * PI / 8.0;
        mu / (0.5 * PI * mu).tanh() - 2.0 / PI - (mp.beta - 1.0) * mp.c_ngamma
    };
    detail += &format!("exact δ at L=8: {exact:.10}");
    Ok(Outcome { ok, detail })
}

/// Run criterion `id` (1..=12).
pub fn run_criterion(id: u8) -> CriterionResult {
    assert!((1..=12).contains(&id), "criterion ids are 1..=12");
    let start = Instant::now();
    let outcome = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => c12(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (checks_passed, detail) = match outcome {
        Ok(o) => (o.ok, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let budget = RUNTIME_BUDGETS[id as usize - 1];
    let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id);
    let detail = match known {
        Some((_, why)) if !checks_passed => format!("{detail} | {why}"),
        _ => detail,
    };
    CriterionResult {
        id,
        name: NAMES[id as usize - 1].to_string(),
        checks_passed,
        seconds,
        budget_seconds: budget,
        passed: checks_passed && seconds <= budget,
        known_unattainable: known.is_some(),
        detail,
    }
}

/// Run the given criteria sequentially, calling `on_result` after each.
pub fn run_selected(ids: &[u8], mut on_result: impl FnMut(&CriterionResult)) -> VerifyReport {
    let mut criteria = Vec::new();
    for &id in ids {
        let r = run_criterion(id);
        on_result(&r);
        criteria.push(r);
    }
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

/// The full battery, or the quick subset.
pub fn run_all(quick: bool, on_result: impl FnMut(&CriterionResult)) -> VerifyReport {
    let ids: Vec<u8> = if quick { QUICK.to_vec() } else { (1..=12).collect() };
    run_selected(&ids, on_result)
}
