use std::f64::consts::PI;

use fracyamabe::bifurcation::{delta_gamma_at, delta_symbol};
use fracyamabe::cylinder::{apply_operator, compute_multipliers, functional_f, quadratic_form, PeriodicProfile};
use fracyamabe::kernel::{KernelParams, ModelParams};
use fracyamabe::minimize::{constant_energy, descend, minimize_with_multipliers, InitKind, SolveConfig};
use fracyamabe::oracle::TrigPolynomial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(n: u32, g: f64) -> (ModelParams, KernelParams) {
    let mp = ModelParams::new(n, g).unwrap();
    let kp = KernelParams::from_model(&mp).unwrap();
    (mp, kp)
}

#[test]
fn delta_decreases_in_period() {
    for &(n, g) in &[(3, 0.3), (3, 0.5), (4, 0.5), (5, 0.7)] {
        let (mp, kp) = params(n, g);
        let ls: Vec<f64> = (1..=40).map(|i| 0.5 * i as f64).collect();
        let d: Vec<f64> = ls.iter().map(|&l| delta_gamma_at(&mp, l).unwrap()).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "({n}, {g})");
        for &l in &[2.0, 5.0, 9.0] {
            let s = delta_symbol(&mp, &kp, l).unwrap();
            assert!((s - delta_gamma_at(&mp, l).unwrap()).abs() < 1e-8, "({n}, {g}) L = {l}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `h Σ v 𝓛v = Q(v) + c h Σ v²` for the spectral operator and quadratic form.
    #[test]
    fn weak_form_consistency(seed in any::<u64>(), l in 2.0f64..12.0) {
        let (mp, kp) = params(3, 0.5);
        let sm = compute_multipliers(&mp, &kp, l, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = TrigPolynomial::random_positive(l, 5, &mut rng);
        let p = f.sample(32).unwrap();
        let lv = apply_operator(&mp, &sm, &p.values);
        let lhs = p.h() * p.values.iter().zip(&lv).map(|(a, b)| a * b).sum::<f64>();
        let rhs = quadratic_form(&sm, &p).unwrap() + mp.c_ngamma * p.integral_abs_pow(2.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    /// The quotient is invariant under positive scaling.
    #[test]
    fn quotient_scale_invariant(seed in any::<u64>(), s in 0.01f64..100.0) {
        let (mp, kp) = params(4, 0.3);
        let sm = compute_multipliers(&mp, &kp, 5.0, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = TrigPolynomial::random_positive(5.0, 4, &mut rng).sample(32).unwrap();
        let a = functional_f(&mp, &sm, &p).unwrap().f_value;
        let b = functional_f(&mp, &sm, &p.scaled(s)).unwrap().f_value;
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn minimizer_ignores_initial_scale() {
    let (mp, kp) = params(3, 0.5);
    let cfg = SolveConfig {
        n: 64,
        ..SolveConfig::default()
    };
    let sm = compute_multipliers(&mp, &kp, 8.0, 64).unwrap();
    let init = PeriodicProfile::from_fn(8.0, 64, |t| 1.0 + 0.2 * (2.0 * PI * t / 8.0).cos()).unwrap();
    let (a, ra) = descend(&mp, &sm, &init, &cfg).unwrap();
    let (b, rb) = descend(&mp, &sm, &init.scaled(10.0), &cfg).unwrap();
    assert!((ra.c_value - rb.c_value).abs() <= 1e-10 * ra.c_value);
    let sup = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(sup <= 1e-8, "{sup}");
}

#[test]
fn minimum_never_exceeds_constant() {
    let (mp, kp) = params(3, 0.5);
    for &l in &[3.0, 5.0, 5.5, 8.0] {
        let cfg = SolveConfig {
            n: 64,
            ..SolveConfig::default()
        };
        let sm = compute_multipliers(&mp, &kp, l, cfg.n).unwrap();
        let r = minimize_with_multipliers(&mp, &sm, &cfg).unwrap();
        assert!(r.c_value <= constant_energy(&mp, l) * (1.0 + 1e-12), "L = {l}");
        assert!(r.profile.min() > 0.0);
    }
}

#[test]
fn seeds_agree_after_phase_normalization() {
    let (mp, kp) = params(3, 0.5);
    let sm = compute_multipliers(&mp, &kp, 8.0, 128).unwrap();
    let solve = |seed| {
        let cfg = SolveConfig {
            n: 128,
            seed,
            inits: vec![InitKind::CosPerturbed],
            ..SolveConfig::default()
        };
        minimize_with_multipliers(&mp, &sm, &cfg).unwrap()
    };
    let (a, b) = (solve(1), solve(2));
    assert!((a.c_value - b.c_value).abs() < 1e-8);
    let sup = a
        .profile
        .values
        .iter()
        .zip(&b.profile.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(sup < 1e-6, "{sup}");
}
