use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Gamma function pole at x = {0}")]
    Pole(f64),

    #[error("Gamma function overflows for x = {0} (threshold {max})", max = crate::specfun::GAMMA_OVERFLOW_X)]
    Overflow(f64),

    #[error("hypergeometric parameter c = {0} is a non-positive integer")]
    ParameterDomain(f64),

    #[error(
        "degenerate hypergeometric parameters: c - a - b = {c_minus_a_minus_b} is within 0.05 of an integer; use the direct kernel quadrature"
    )]
    DegenerateParameters { c_minus_a_minus_b: f64 },

    #[error("series did not reach tolerance after {terms} terms (last relative term {last_term:e})")]
    SeriesNonConvergence { terms: usize, last_term: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("Richardson extrapolation unstable: stencil estimates differ by {spread:e}")]
    ExtrapolationNonConvergence { spread: f64 },

    #[error("argument {0} lies on the singular lattice of the periodized kernel")]
    SingularArgument(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected (L = {expected_l}, N = {expected_n}), got (L = {got_l}, N = {got_n})")]
    ShapeMismatch {
        expected_l: f64,
        expected_n: usize,
        got_l: f64,
        got_n: usize,
    },

    #[error("profile is identically zero")]
    ZeroProfile,

    #[error("profile is not strictly positive (min value {0:e})")]
    NotPositive(f64),

    #[error("profile collapsed to zero during descent (max value {0:e})")]
    PositivityCollapse(f64),

    #[error("no sign change of the eigenvalue on [{lo}, {hi}]: {samples:?}")]
    Bracket { lo: f64, hi: f64, samples: Vec<(f64, f64)> },
}

impl Error {
    /// Parameter and usage errors, as opposed to numerical failures.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_) | Error::ShapeMismatch { .. } | Error::ZeroProfile
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
