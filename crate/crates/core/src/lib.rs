//! Dirichlet character sums and the pretentious distance.
//!
//! - [`arithmetic`]: factorization, prime sieves, and `(Z/qZ)*` with discrete logs.
//! - [`characters`]: characters as exponent vectors, exact values, order, parity, conductor.
//! - [`charsums`]: partial sums and `M(chi)`, Gauss sums, theta and twisted harmonic sums.
//! - [`pretense`]: the distance `D(f, g; y)`.
//! - [`kernels`]: Fejér smoothing of truncated theta sums.
//! - [`euler`]: shifted Dirichlet series and Euler products at `1 + log log y / log y`.
//! - [`polya`]: Pólya's expansion, the odd-twist identity, and the lower-bound ratio.
//! - [`lab`]: scans, verification suites, and CSV/JSON output for the `charlab` binary.

// Range guards are written `!(x >= lo)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod characters;
pub mod charsums;
pub mod error;
pub mod euler;
pub mod kernels;
pub mod lab;
pub mod numeric;
pub mod polya;
pub mod pretense;
pub mod trig;

pub use error::{Error, Result};
