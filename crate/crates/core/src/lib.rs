//! Computational toolkit for the polylogarithmic Hardy space PL².
//!
//! Elements of PL² are series `f(z, s) = Σ a_n zⁿ n⁻ˢ` with square-summable
//! coefficients. Every infinite object is carried at an explicit truncation
//! order `N`, and every statement about the infinite series is restated with
//! an explicit tail bound.
//!
//! Modules:
//!
//! - [`specfun`]: Γ, real ζ, the polylogarithm `Li_s(z)` and the Bose–Einstein integral.
//! - [`quadrature`]: double-exponential quadrature on the half line.
//! - [`hilbert`]: PL² / H² elements, inner product, reproducing kernel, analytic bounds.
//! - [`isometry`]: the isometry `W: H² → PL²` with a coefficient path and a quadrature path.
//! - [`dirichlet`]: Dirichlet convolution, inversion, polynomial-coefficient series and symbol solving.
//! - [`toeplitz`]: sparse operators, Toeplitz compressions, shifts and the divisor decomposition.
//! - [`verify`]: seeded verification suites used by the CLI and the acceptance tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirichlet;
pub mod error;
pub mod hilbert;
pub mod isometry;
pub mod par;
pub mod quadrature;
pub mod specfun;
pub mod toeplitz;
pub mod verify;

mod arith;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use par::Execution;
pub use specfun::EvalParams;

/// Shorthand for a real number lifted into the complex plane.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Shorthand constructor for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
