//! Double-exponential quadrature for integrals over `(0, ∞)`.
//!
//! Integrals are written in the logarithmic variable `u = ln x`, so the
//! caller supplies `G(u) = F(eᵘ)·eᵘ` and receives `∫₀^∞ F(x) dx`. This keeps
//! powers like `x^{s-1}` well conditioned near the origin: the caller forms
//! `exp(s·u)` directly instead of raising an underflowed `x`.
//!
//! The substitution `u = t − e^{−t}` makes the integrand decay double
//! exponentially at both ends whenever `F` has an integrable power
//! singularity at 0 and exponential decay at ∞, which is the case for every
//! integral in this crate. The trapezoidal rule in `t` is refined by halving
//! the step until two successive levels agree to the requested tolerance.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Outcome of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    /// Nodes evaluated on the final level.
    pub nodes: usize,
}

const INITIAL_STEP: f64 = 0.5;
const MIN_LEVELS: usize = 3;
const MAX_LEVELS: usize = 12;
const T_LIMIT: f64 = 12.0;

/// Integrates `F` over `(0, ∞)` given `g(u) = F(eᵘ)·eᵘ`.
///
/// `max_nodes` caps the node count of a single refinement level; hitting it
/// (or running out of levels) before two levels agree to `tol` is reported
/// as [`Error::Convergence`].
pub fn integrate_half_line<G>(g: G, tol: f64, max_nodes: usize) -> Result<Quadrature>
where
    G: Fn(f64) -> Complex64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut h = INITIAL_STEP;
    let mut previous: Option<Complex64> = None;
    for level in 0..MAX_LEVELS {
        let (value, nodes) = trapezoid(&g, h, tol, max_nodes)?;
        if let Some(prev) = previous {
            let diff = (value - prev).norm();
            if level + 1 >= MIN_LEVELS && diff <= tol {
                return Ok(Quadrature {
                    value,
                    error_estimate: diff,
                    nodes,
                });
            }
        }
        previous = Some(value);
        h *= 0.5;
    }
    Err(Error::Convergence(format!(
        "quadrature refinement stalled after {MAX_LEVELS} levels at tolerance {tol:e}"
    )))
}

/// One trapezoidal sum with step `h`, walking outward from `t = 0` in both
/// directions until the transformed integrand is negligible.
fn trapezoid<G>(g: &G, h: f64, tol: f64, max_nodes: usize) -> Result<(Complex64, usize)>
where
    G: Fn(f64) -> Complex64,
{
    let cutoff = tol * 1e-4;
    let mut sum = transformed(g, 0.0)?;
    let mut nodes = 1usize;
    for direction in [1.0, -1.0] {
        let mut quiet = 0;
        let mut k = 1usize;
        loop {
            let t = direction * k as f64 * h;
            if t.abs() > T_LIMIT {
                break;
            }
            let term = transformed(g, t)?;
            sum += term;
            nodes += 1;
            if nodes > max_nodes {
                return Err(Error::Convergence(format!(
                    "quadrature node budget {max_nodes} exhausted"
                )));
            }
            if (term * h).norm() < cutoff && t.abs() >= 1.0 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
        }
    }
    Ok((sum * h, nodes))
}

#[inline]
fn transformed<G>(g: &G, t: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    let e = (-t).exp();
    let u = t - e;
    let v = g(u) * (1.0 + e);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("integrand at u = {u}")))
    }
}
