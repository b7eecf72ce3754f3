//! Periodic Delaunay-type solutions of the constant-`Q` fractional Yamabe
//! problem on the cylinder `R × S^{n-1}`, reduced to profiles `v(t)`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published series coefficients are kept digit for digit.
#![allow(clippy::excessive_precision)]

pub mod bifurcation;
pub mod cli;
pub mod cylinder;
pub mod error;
pub mod fourier;
pub mod kernel;
pub mod minimize;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
