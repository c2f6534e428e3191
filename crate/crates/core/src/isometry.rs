//! The isometry `W: H² → PL²`, `zⁿ ↦ z^{n+1}(n+1)^{-s}`.
//!
//! On coefficients `W` is a relabelling (`b_k ↦ a_{k+1}`), which is what the
//! algebra uses. [`apply_w_integral`] evaluates the same map through the
//! Mellin-type integral `(1/Γ(s)) ∫₀^∞ x^{s−1} z e^{−x} g(z e^{−x}) dx`, as an
//! independent check on the coefficient path.

use crate::error::{Error, Result};
use crate::hilbert::{H2Element, PL2Element};
use crate::quadrature::integrate_half_line;
use crate::specfun::{check_finite, gamma, EvalParams};
use num_complex::Complex64;

/// Coefficient path: `a_n = b_{n−1}`.
pub fn apply_w(g: &H2Element) -> PL2Element {
    PL2Element {
        series: g.coeffs.clone(),
    }
}

/// Inverse map `f ↦ S* f(·, 0)`: `b_k = a_{k+1}`.
pub fn apply_w_inverse(f: &PL2Element) -> H2Element {
    H2Element {
        coeffs: f.series.clone(),
    }
}

/// `W(g)(z, s)` by quadrature, for |z| < 1 and Re(s) > 0.
///
/// The integral is resolved to `params.tol·|Γ(s)|` so that the value after
/// division by Γ(s) meets `params.tol`.
pub fn apply_w_integral(
    g: &H2Element,
    z: Complex64,
    s: Complex64,
    params: &EvalParams,
) -> Result<Complex64> {
    params.validate()?;
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!("requires Re(s) > 0, got {}", s.re)));
    }
    let gamma_s = gamma(s)?;
    // u = ln x; integrand·x = x^s · w·g(w) with w = z e^{-x}
    let q = integrate_half_line(
        |u| {
            let w = z * (-u.exp()).exp();
            (s * u).exp() * w * g.evaluate(w)
        },
        params.tol * gamma_s.norm(),
        params.quad_nodes,
    )?;
    check_finite(q.value / gamma_s, "apply_w_integral")
}
