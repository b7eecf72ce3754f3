//! Special functions needed by the cylinder kernel and the bifurcation
//! formula: real Gamma, `log |Γ(x + iy)|`, and the Gauss hypergeometric
//! function on `[0, 1]`.
//!
//! Gamma is evaluated with the Lanczos approximation for `g = 7` and the
//! nine-term coefficient set below (Godfrey's table), combined with the
//! reflection formula for `Re z < 1/2`. The relative accuracy is close to
//! machine precision on the right half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `x` for which `Γ(x)` is representable as an `f64`.
pub const GAMMA_OVERFLOW_X: f64 = 171.624_376_956_302_7;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Maximum number of terms summed by the hypergeometric series.
pub const SERIES_MAX_TERMS: usize = 10_000;
/// Relative size of the last retained series term.
pub const SERIES_TOL: f64 = 1e-14;
/// Width of the band around integer `c - a - b` where the `1 - z`
/// transformation is refused.
pub const DEGENERATE_BAND: f64 = 0.05;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(πx)` with the argument reduced before multiplying by π.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 1.0 || r == 0.0 {
        return 0.0;
    }
    let s = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * s).sin()
}

fn lanczos_sum_real(zm1: f64) -> f64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, &p)| acc + p / (zm1 + (i + 1) as f64))
}

fn lanczos_sum_complex(zm1: Complex64) -> Complex64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(Complex64::new(LANCZOS_COEFFS[0], 0.0), |acc, (i, &p)| {
            acc + p / (zm1 + (i + 1) as f64)
        })
}

/// `Γ(x)` for real `x`.
///
/// Fails with [`Error::Pole`] at non-positive integers and with
/// [`Error::Overflow`] above [`GAMMA_OVERFLOW_X`].
pub fn gamma_real(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("Gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_OVERFLOW_X {
        return Err(Error::Overflow(x));
    }
    if x < 0.5 {
        // Γ(x) Γ(1 - x) = π / sin(πx)
        let g1 = gamma_real(1.0 - x)?;
        return Ok(PI / (sin_pi(x) * g1));
    }
    let zm1 = x - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (zm1 + 0.5));
    Ok((2.0 * PI).sqrt() * half * ((-t).exp() * half) * lanczos_sum_real(zm1))
}

/// `1 / Γ(x)`, which is zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Ok(0.0);
    }
    Ok(1.0 / gamma_real(x)?)
}

/// `log |sin(π(x + iy))|`, stable for large `|y|`.
fn ln_abs_sin_pi(x: f64, y: f64) -> f64 {
    let s = sin_pi(x);
    let ay = PI * y.abs();
    if ay < 20.0 {
        let sh = ay.sinh();
        0.5 * (s * s + sh * sh).ln()
    } else {
        // sinh²(ay) = e^{2ay} (1 - e^{-2ay})² / 4
        let e = (-2.0 * ay).exp();
        ay - std::f64::consts::LN_2 + 0.5 * ((1.0 - e) * (1.0 - e) + 4.0 * s * s * e).ln()
    }
}

/// `log |Γ(x + iy)|`.
///
/// Fails with [`Error::Pole`] when `y = 0` and `x` is a non-positive integer.
pub fn log_abs_gamma(x: f64, y: f64) -> Result<f64> {
    if x.is_nan() || y.is_nan() {
        return Err(Error::Domain("log|Gamma| of NaN".into()));
    }
    if y == 0.0 && is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        // |Γ(z)| |Γ(1 - z)| = π / |sin(πz)|
        let other = log_abs_gamma(1.0 - x, -y)?;
        return Ok(PI.ln() - ln_abs_sin_pi(x, y) - other);
    }
    let zm1 = Complex64::new(x - 1.0, y);
    let t = zm1 + (LANCZOS_G + 0.5);
    let main = (zm1 + 0.5) * t.ln() - t;
    Ok(LN_SQRT_2PI + main.re + lanczos_sum_complex(zm1).norm().ln())
}

/// Parameters `(ã, b̃; c̃)` of `₂F₁(ã, b̃; c̃; z)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Hyp2F1Params {
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub c_tilde: f64,
}

impl Hyp2F1Params {
    pub fn new(a_tilde: f64, b_tilde: f64, c_tilde: f64) -> Result<Self> {
        if is_nonpositive_integer(c_tilde) {
            return Err(Error::ParameterDomain(c_tilde));
        }
        Ok(Self {
            a_tilde,
            b_tilde,
            c_tilde,
        })
    }

    /// `c̃ - ã - b̃`, the exponent that controls the behaviour at `z = 1`.
    pub fn excess(&self) -> f64 {
        self.c_tilde - self.a_tilde - self.b_tilde
    }

    /// True when the `z → 1 - z` transformation hits its logarithmic case.
    pub fn is_degenerate(&self) -> bool {
        let s = self.excess();
        (s - s.round()).abs() < DEGENERATE_BAND
    }

    fn terminates(&self) -> bool {
        self.a_tilde == 0.0
            || self.b_tilde == 0.0
            || is_nonpositive_integer(self.a_tilde)
            || is_nonpositive_integer(self.b_tilde)
    }
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        terms: SERIES_MAX_TERMS,
        last_term: (term / sum).abs(),
    })
}

/// `₂F₁(ã, b̃; c̃; z)` for `z ∈ [0, 1]`.
///
/// Uses the power series for `z ≤ 1/2`, Gauss' summation theorem at `z = 1`
/// and the linear transformation to `1 - z` in between. The transformation
/// is refused with [`Error::DegenerateParameters`] when `c̃ - ã - b̃` is
/// within 0.05 of an integer.
pub fn hyp2f1(p: Hyp2F1Params, z: f64) -> Result<f64> {
    hyp2f1_with_complement(p, z, 1.0 - z)
}

/// Same as [`hyp2f1`], with `1 - z` supplied by the caller so that it keeps
/// full relative precision when `z` is close to one.
pub fn hyp2f1_with_complement(p: Hyp2F1Params, z: f64, one_minus_z: f64) -> Result<f64> {
    if is_nonpositive_integer(p.c_tilde) {
        return Err(Error::ParameterDomain(p.c_tilde));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("hyp2f1 argument {z} outside [0, 1]")));
    }
    let Hyp2F1Params {
        a_tilde: a,
        b_tilde: b,
        c_tilde: c,
    } = p;
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if p.terminates() || z <= 0.5 {
        if z == 1.0 && !p.terminates() && p.excess() <= 0.0 {
            return Err(Error::Domain(format!(
                "hyp2f1 diverges at z = 1 for c - a - b = {}",
                p.excess()
            )));
        }
        return series(a, b, c, z);
    }
    let s = p.excess();
    if one_minus_z == 0.0 {
        if s <= 0.0 {
            return Err(Error::Domain(format!("hyp2f1 diverges at z = 1 for c - a - b = {s}")));
        }
        return Ok(gamma_real(c)? * gamma_real(s)? * recip_gamma(c - a)? * recip_gamma(c - b)?);
    }
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters { c_minus_a_minus_b: s });
    }
    let w = one_minus_z;
    let gc = gamma_real(c)?;
    let first = gc * gamma_real(s)? * recip_gamma(c - a)? * recip_gamma(c - b)?;
    let second = gc * gamma_real(-s)? * recip_gamma(a)? * recip_gamma(b)?;
    let mut out = 0.0;
    if first != 0.0 {
        out += first * series(a, b, 1.0 - s, w)?;
    }
    if second != 0.0 {
        out += second * w.powf(s) * series(c - a, c - b, 1.0 + s, w)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_exact_values() {
        assert_relative_eq!(gamma_real(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_real(2.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(1.5).unwrap(), PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(1.0).unwrap(), 1.0, max_relative = 1e-14);
        // 10! and 20! / 19! style factorials
        assert_relative_eq!(gamma_real(11.0).unwrap(), 3_628_800.0, max_relative = 1e-13);
        assert_relative_eq!(
            gamma_real(21.0).unwrap(),
            2_432_902_008_176_640_000.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_reflection_branch() {
        // Γ(-1/2) = -2√π, Γ(1/4) from tables
        assert_relative_eq!(gamma_real(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_real(0.25).unwrap(), 3.625_609_908_221_908_3, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(0.05).unwrap(), 19.470_085_311_255_512, max_relative = 1e-13);
    }

    #[test]
    fn gamma_poles_and_overflow() {
        assert_eq!(gamma_real(0.0), Err(Error::Pole(0.0)));
        assert_eq!(gamma_real(-3.0), Err(Error::Pole(-3.0)));
        assert!(matches!(gamma_real(200.0), Err(Error::Overflow(_))));
        assert_eq!(recip_gamma(-2.0).unwrap(), 0.0);
    }

    #[test]
    fn gamma_large_argument() {
        // Γ(50) = 49!
        assert_relative_eq!(
            gamma_real(50.0).unwrap(),
            6.082_818_640_342_675e62,
            max_relative = 1e-13
        );
    }

    #[test]
    fn log_abs_gamma_modulus_identities() {
        // |Γ(1+iy)|² = πy / sinh(πy)
        let v = log_abs_gamma(1.0, 1.0).unwrap();
        assert_relative_eq!(v, 0.5 * (PI / PI.sinh()).ln(), max_relative = 1e-13);
        // |Γ(1/2+iy)|² = π / cosh(πy)
        let v = log_abs_gamma(0.5, 1.0).unwrap();
        assert_relative_eq!(v, 0.5 * (PI / PI.cosh()).ln(), max_relative = 1e-13);
        assert!(log_abs_gamma(2.0, 0.0).unwrap().abs() < 1e-15);
        for &y in &[0.3, 2.0, 7.5, 20.0, 49.0] {
            let e1 = 0.5 * (PI * y / (PI * y).sinh()).ln();
            let e2 = 0.5 * (PI / (PI * y).cosh()).ln();
            // differences of logs are relative errors of the moduli
            assert!((2.0 * (log_abs_gamma(1.0, y).unwrap() - e1)).abs() < 1e-11, "y={y}");
            assert!((2.0 * (log_abs_gamma(0.5, y).unwrap() - e2)).abs() < 1e-11, "y={y}");
        }
    }

    #[test]
    fn log_abs_gamma_small_real_part() {
        // |Γ(0.1+iy)|: recurrence Γ(1.1+iy) = (0.1+iy) Γ(0.1+iy)
        for &y in &[0.0, 0.5, 3.0, 30.0] {
            let lhs = log_abs_gamma(1.1, y).unwrap();
            let rhs = log_abs_gamma(0.1, y).unwrap() + 0.5 * (0.01 + y * y).ln();
            assert!((lhs - rhs).abs() < 1e-12, "y={y}: {lhs} vs {rhs}");
        }
        assert_eq!(log_abs_gamma(-2.0, 0.0), Err(Error::Pole(-2.0)));
        assert!(log_abs_gamma(-2.0, 0.1).is_ok());
    }

    #[test]
    fn hyp2f1_trivial_cases() {
        let p = Hyp2F1Params::new(0.3, 1.7, 2.5).unwrap();
        assert_eq!(hyp2f1(p, 0.0).unwrap(), 1.0);
        let q = Hyp2F1Params::new(0.0, 4.0, 2.5).unwrap();
        for &z in &[0.0, 0.3, 0.9, 1.0] {
            assert_eq!(hyp2f1(q, z).unwrap(), 1.0);
        }
        // contiguous-shift property at z = 0
        for j in [-2.0, -1.0, 1.0, 2.0] {
            let r = Hyp2F1Params::new(0.3 + j, 1.7 - j, 2.5).unwrap();
            assert_eq!(hyp2f1(r, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn hyp2f1_parameter_domain() {
        assert_eq!(Hyp2F1Params::new(0.3, 0.4, -1.0), Err(Error::ParameterDomain(-1.0)));
        let p = Hyp2F1Params {
            a_tilde: 0.3,
            b_tilde: 0.4,
            c_tilde: 0.0,
        };
        assert_eq!(hyp2f1(p, 0.2), Err(Error::ParameterDomain(0.0)));
    }

    /// Partial sums of the series at z = 1 converge like 1/N when
    /// c - a - b = 1; one Richardson step on (N, 2N) removes that term.
    fn gauss_sum_oracle(a: f64, b: f64, c: f64, n: usize) -> f64 {
        let partial = |m: usize| {
            let (mut t, mut s) = (1.0f64, 1.0f64);
            for k in 0..m {
                let k = k as f64;
                t *= (a + k) * (b + k) / ((c + k) * (k + 1.0));
                s += t;
            }
            s
        };
        let (s1, s2) = (partial(n), partial(2 * n));
        2.0 * s2 - s1
    }

    #[test]
    fn hyp2f1_gauss_summation() {
        let p = Hyp2F1Params::new(0.25, 0.75, 2.0).unwrap();
        let closed = hyp2f1(p, 1.0).unwrap();
        let oracle = gauss_sum_oracle(0.25, 0.75, 2.0, 200_000);
        assert_relative_eq!(closed, oracle, max_relative = 1e-10);
        assert_relative_eq!(closed, 1.200_421_754_876_141_4, max_relative = 1e-13);
    }

    #[test]
    fn hyp2f1_transformation_matches_series_across_half() {
        // both branches near z = 1/2 must agree
        let p = Hyp2F1Params::new(0.35, 1.15, 2.0).unwrap();
        let lo = hyp2f1(p, 0.5).unwrap();
        let hi = hyp2f1(p, 0.5 + 1e-12).unwrap();
        assert_relative_eq!(lo, hi, max_relative = 1e-11);
        // reference value from an independent multiprecision evaluation
        let p = Hyp2F1Params::new(0.35, 1.15, 2.0).unwrap();
        assert_relative_eq!(hyp2f1(p, 0.9).unwrap(), 1.407_031_804_001_368_8, max_relative = 1e-10);
    }

    #[test]
    fn hyp2f1_degenerate_parameters() {
        // c - a - b = 1 exactly
        let p = Hyp2F1Params::new(0.25, 0.75, 2.0).unwrap();
        assert!(hyp2f1(p, 0.3).is_ok());
        assert!(matches!(hyp2f1(p, 0.8), Err(Error::DegenerateParameters { .. })));
    }

    #[test]
    fn hyp2f1_derivative_property() {
        let cases = [(0.2, 1.1, 2.0, 0.3), (0.35, 1.15, 2.0, 0.7), (0.6, 1.05, 2.5, 0.9)];
        for &(a, b, c, z) in &cases {
            let p = Hyp2F1Params::new(a, b, c).unwrap();
            let h = 1e-5;
            let fd = (hyp2f1(p, z + h).unwrap() - hyp2f1(p, z - h).unwrap()) / (2.0 * h);
            let shifted = Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0).unwrap();
            let exact = a * b / c * hyp2f1(shifted, z).unwrap();
            assert_relative_eq!(fd, exact, max_relative = 1e-5);
        }
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in 0.1f64..20.0) {
            let lhs = gamma_real(x + 1.0).unwrap();
            let rhs = x * gamma_real(x).unwrap();
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }

        #[test]
        fn log_abs_gamma_conjugation(x in 0.1f64..10.0, y in 0.0f64..50.0) {
            prop_assert_eq!(log_abs_gamma(x, y).unwrap(), log_abs_gamma(x, -y).unwrap());
        }

        #[test]
        fn hyp2f1_monotone_in_z(a in 0.05f64..1.5, b in 0.05f64..1.5, s in 0.6f64..0.94, z in 0.0f64..0.98) {
            let p = Hyp2F1Params::new(a, b, a + b + s).unwrap();
            let f0 = hyp2f1(p, z).unwrap();
            let f1 = hyp2f1(p, z + 0.01).unwrap();
            prop_assert!(f1 >= f0);
        }
    }
}
