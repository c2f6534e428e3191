//! Truncated elements of PL² and H², the coefficient inner product, the
//! reproducing kernel, and the analytic bounds those elements satisfy.
//!
//! The working definition of PL² uses square-summable coefficients: the
//! inner product is `⟨f, g⟩ = Σ a_n conj(b_n)`, which is what makes the
//! isometry with H² and the kernel `K(z, w, s, t) = Li_{s + conj t}(z conj w)`
//! consistent.

use crate::error::{Error, Result};
use crate::specfun::{
    check_finite, geometric_tail_bound, int_pow_neg, polylog, zeta_real, EvalParams,
};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Finite, nonempty list of complex coefficients with no NaN/Inf entries.
///
/// Indexing is by position; the meaning of position 0 (`a_1` for PL²,
/// `b_0` for H²) is fixed by the wrapping type.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams(
                "coefficient series needs at least one entry".into(),
            ));
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite(format!("coefficient at position {i}")));
        }
        Ok(CoefficientSeries { coeffs })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The sequence `e_k` of length `len`: 1 at position `k` (1-based), 0 elsewhere.
    pub fn unit(k: usize, len: usize) -> Result<Self> {
        if k == 0 || k > len {
            return Err(Error::InvalidParams(format!(
                "unit index {k} outside 1..={len}"
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[k - 1] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Entry `n` with 1-based indexing; zero past the end.
    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(n - 1).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffsJson {
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for CoefficientSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsJson {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoefficientSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffsJson::deserialize(deserializer)?;
        CoefficientSeries::new(
            raw.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// `f(z, s) = Σ_{n=1}^N a_n zⁿ n^{-s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PL2Element {
    pub series: CoefficientSeries,
}

/// `g(z) = Σ_{n=0}^{N-1} b_n zⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct H2Element {
    pub coeffs: CoefficientSeries,
}

impl PL2Element {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(PL2Element {
            series: CoefficientSeries::new(coeffs)?,
        })
    }

    /// Basis vector `e_k = z^k / k^s` at truncation `len`.
    pub fn basis(k: usize, len: usize) -> Result<Self> {
        Ok(PL2Element {
            series: CoefficientSeries::unit(k, len)?,
        })
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.series.len()
    }

    /// Coefficient `a_n`, 1-based.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.series.get(n)
    }

    pub fn norm(&self) -> f64 {
        self.series.norm()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl H2Element {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(H2Element {
            coeffs: CoefficientSeries::new(coeffs)?,
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Taylor coefficient `b_k`, 0-based.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k + 1)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Horner evaluation of the polynomial at `z`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .as_slice()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &b| acc * z + b)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// The finite sum without a domain check; valid on the closed disc.
fn finite_sum(f: &PL2Element, z: Complex64, s: Complex64) -> Complex64 {
    let mut zn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, &a) in f.series.as_slice().iter().enumerate() {
        zn *= z;
        sum += a * zn * int_pow_neg(i + 1, s);
    }
    sum
}

/// `f(z, s)` as the exact finite sum, for |z| < 1.
pub fn evaluate(f: &PL2Element, z: Complex64, s: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "evaluation requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    check_finite(finite_sum(f, z, s), "evaluate")
}

/// Bound on `Σ_{n>N} rⁿ n^{-σ}` where `N` is the order of `f`.
///
/// `f` itself, extended by zeros, has no tail. The value returned bounds the
/// tail of any extension of `f` whose further coefficients have modulus at
/// most 1, which is the quantity kernel and reproducing checks need.
pub fn tail_bound(f: &PL2Element, r: f64, sigma: f64) -> f64 {
    geometric_tail_bound(r.abs(), sigma, f.order())
}

/// `⟨f, g⟩ = Σ a_n conj(b_n)`, the shorter series padded with zeros.
pub fn inner_product(f: &PL2Element, g: &PL2Element) -> Complex64 {
    f.series
        .as_slice()
        .iter()
        .zip(g.series.as_slice())
        .map(|(a, b)| a * b.conj())
        .sum()
}

/// Reproducing kernel `K(z, w, s, t) = Li_{s + conj t}(z conj w)`.
pub fn kernel(
    z: Complex64,
    w: Complex64,
    s: Complex64,
    t: Complex64,
    params: &EvalParams,
) -> Result<Complex64> {
    polylog(s + t.conj(), z * w.conj(), params)
}

/// The kernel at `(w, t)` as an element: `a_n = conj(w)ⁿ n^{-conj t}`.
pub fn kernel_element(w: Complex64, t: Complex64, order: usize) -> Result<PL2Element> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "kernel point requires |w| < 1, got |w| = {}",
            w.norm()
        )));
    }
    if order == 0 {
        return Err(Error::InvalidParams(
            "truncation order must be at least 1".into(),
        ));
    }
    let wc = w.conj();
    let tc = t.conj();
    let mut wn = Complex64::new(1.0, 0.0);
    let coeffs = (1..=order)
        .map(|n| {
            wn *= wc;
            wn * int_pow_neg(n, tc)
        })
        .collect();
    PL2Element::new(coeffs)
}

/// `|z·∂_z f(z, s+1) − f(z, s)|`, with the derivative taken coefficientwise.
///
/// The derivative is formed from the coefficients `n·a_n·n^{-(s+1)}` of
/// `z^{n-1}`, independently of [`evaluate`]; the identity holds termwise so
/// the result is pure roundoff.
pub fn derivative_relation_check(f: &PL2Element, z: Complex64, s: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let shifted = s + 1.0;
    let coeffs = f.series.as_slice();
    // Horner on Σ_{n≥1} (n a_n n^{-(s+1)}) z^{n-1}
    let mut deriv = Complex64::new(0.0, 0.0);
    for (i, &a) in coeffs.iter().enumerate().rev() {
        let n = i + 1;
        deriv = deriv * z + a * (n as f64) * int_pow_neg(n, shifted);
    }
    let lhs = z * deriv;
    let rhs = evaluate(f, z, s)?;
    Ok((lhs - rhs).norm())
}

/// Absolute slack added to the right-hand side of the continuity bound.
pub const CONTINUITY_SLACK: f64 = 1e-10;

/// Checks `|f(z,s) − f(z₀,s)| ≤ |z − z₀|·‖f‖·ζ(2σ−2)^{1/2}` for σ = Re(s) > 3/2.
///
/// Both points may lie on the closed unit disc, where the finite sum is
/// still defined.
pub fn continuity_bound_check(
    f: &PL2Element,
    z: Complex64,
    z0: Complex64,
    s: Complex64,
    params: &EvalParams,
) -> Result<bool> {
    let (lhs, rhs) = continuity_bound_sides(f, z, z0, s, params)?;
    Ok(lhs <= rhs + CONTINUITY_SLACK)
}

/// The two sides of the continuity estimate, `(|f(z,s) − f(z₀,s)|, |z−z₀|·‖f‖·ζ(2σ−2)^{1/2})`.
pub fn continuity_bound_sides(
    f: &PL2Element,
    z: Complex64,
    z0: Complex64,
    s: Complex64,
    params: &EvalParams,
) -> Result<(f64, f64)> {
    let sigma = s.re;
    if !(sigma > 1.5) {
        return Err(Error::Domain(format!(
            "continuity bound requires Re(s) > 3/2, got {sigma}"
        )));
    }
    if z.norm() > 1.0 || z0.norm() > 1.0 {
        return Err(Error::Domain(
            "continuity bound requires |z|, |z0| <= 1".into(),
        ));
    }
    let lhs = (finite_sum(f, z, s) - finite_sum(f, z0, s)).norm();
    let zeta = zeta_real(2.0 * sigma - 2.0, params)?;
    let rhs = (z - z0).norm() * f.norm() * zeta.sqrt();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::specfun::polylog;
    use proptest::prelude::*;

    fn el(v: &[(f64, f64)]) -> PL2Element {
        PL2Element::new(v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn evaluate_single_terms() {
        let e1 = PL2Element::basis(1, 4).unwrap();
        let z = c(0.3, -0.4);
        assert_eq!(evaluate(&e1, z, c(2.7, 1.0)).unwrap(), z);
        let e2 = PL2Element::basis(2, 3).unwrap();
        let v = evaluate(&e2, c(0.5, 0.0), c(2.0, 0.0)).unwrap();
        assert!((v - c(0.0625, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn evaluate_ones_approaches_polylog() {
        let n = 200;
        let ones = PL2Element::new(vec![c(1.0, 0.0); n]).unwrap();
        let v = evaluate(&ones, c(0.5, 0.0), c(2.0, 0.0)).unwrap();
        let li = polylog(c(2.0, 0.0), c(0.5, 0.0), &EvalParams::default()).unwrap();
        assert!((v - li).norm() <= tail_bound(&ones, 0.5, 2.0) + 1e-15);
    }

    #[test]
    fn evaluate_domain() {
        let e1 = PL2Element::basis(1, 1).unwrap();
        assert!(matches!(
            evaluate(&e1, c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tail_bound_examples() {
        let f = el(&[(1.0, 0.0); 10]);
        assert_eq!(tail_bound(&f, 0.0, 2.0), 0.0);
        let geometric: f64 = (11..2000).map(|n| 0.5f64.powi(n)).sum();
        assert!(tail_bound(&f, 0.5, 2.0) <= geometric * (1.0 + 1e-12));
        // σ = 0: brute-force tail over 10⁴ terms
        let brute: f64 = (11..=10_010).map(|n| 0.9f64.powi(n)).sum();
        let b = tail_bound(&f, 0.9, 0.0);
        assert!(b >= brute - 1e-12);
        assert!((b - brute).abs() < 1e-9);
        // negative σ still bounds the brute tail
        let brute_neg: f64 = (11..=10_010)
            .map(|n| 0.9f64.powi(n) * (n as f64).powf(1.5))
            .sum();
        assert!(tail_bound(&f, 0.9, -1.5) >= brute_neg);
    }

    #[test]
    fn inner_product_examples() {
        let e1 = PL2Element::basis(1, 3).unwrap();
        let e2 = PL2Element::basis(2, 3).unwrap();
        assert_eq!(inner_product(&e1, &e1), c(1.0, 0.0));
        assert_eq!(inner_product(&e1, &e2), c(0.0, 0.0));
        let f = el(&[(1.0, 0.0), (0.0, 2.0)]);
        let g = el(&[(3.0, 0.0), (1.0, 0.0)]);
        assert_eq!(inner_product(&f, &g), c(3.0, 2.0));
        // zero padding
        let short = el(&[(2.0, 0.0)]);
        assert_eq!(inner_product(&short, &g), c(6.0, 0.0));
    }

    #[test]
    fn kernel_examples() {
        let p = EvalParams::default();
        assert_eq!(
            kernel(c(0.4, 0.1), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), &p).unwrap(),
            c(0.0, 0.0)
        );
        let k = kernel(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0), &p).unwrap();
        let li = polylog(c(2.0, 0.0), c(0.25, 0.0), &p).unwrap();
        assert!((k - li).norm() < 1e-15);
        // s = t = -1/2: Σ n xⁿ = x/(1−x)² at x = 0.42
        let k = kernel(c(0.6, 0.0), c(0.7, 0.0), c(-0.5, 0.0), c(-0.5, 0.0), &p).unwrap();
        let x: f64 = 0.42;
        assert!((k.re - x / (1.0 - x).powi(2)).abs() < 1e-12);
        assert!(k.im.abs() < 1e-15);
    }

    #[test]
    fn kernel_element_examples() {
        let zero = kernel_element(c(0.0, 0.0), c(1.0, 2.0), 5).unwrap();
        assert_eq!(zero.norm(), 0.0);
        assert!(matches!(
            kernel_element(c(1.0, 0.0), c(0.0, 0.0), 5),
            Err(Error::Domain(_))
        ));

        // ‖K_{w,t}‖² is the partial sum of Li_{2 Re t}(|w|²)
        let w = c(0.6, 0.3);
        let t = c(1.5, -2.0);
        let n = 40;
        let k = kernel_element(w, t, n).unwrap();
        let x = w.norm_sqr();
        let partial: f64 = (1..=n)
            .map(|j| x.powi(j as i32) * (j as f64).powf(-2.0 * t.re))
            .sum();
        assert!((k.norm().powi(2) - partial).abs() < 1e-14);
    }

    #[test]
    fn derivative_relation_examples() {
        let e1 = PL2Element::basis(1, 1).unwrap();
        assert!(derivative_relation_check(&e1, c(0.4, 0.2), c(1.0, 0.5)).unwrap() < 1e-15);
        let f = el(&[
            (0.3, -0.2),
            (1.0, 0.5),
            (-0.7, 0.1),
            (0.2, 0.2),
            (0.9, -1.0),
            (0.1, 0.0),
            (-0.4, 0.6),
            (0.8, 0.8),
            (0.0, -0.3),
            (0.5, 0.5),
        ]);
        let r = derivative_relation_check(&f, c(0.3, 0.0), c(1.5, 0.0)).unwrap();
        assert!(r <= 1e-12 * f.norm(), "{r}");
    }

    #[test]
    fn derivative_relation_fifty_terms_near_boundary() {
        // deterministic pseudo-random coefficients in [-1, 1]²
        let coeffs: Vec<Complex64> = (1..=50)
            .map(|n| {
                let x = ((n * 7919) % 997) as f64 / 498.5 - 1.0;
                let y = ((n * 104_729) % 991) as f64 / 495.5 - 1.0;
                c(x, y)
            })
            .collect();
        let f = PL2Element::new(coeffs).unwrap();
        let r = derivative_relation_check(&f, c(0.9, 0.05), c(-2.0, 0.0)).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn continuity_examples() {
        let p = EvalParams::default();
        let f = el(&[(1.0, 2.0), (-0.5, 0.3)]);
        let z = c(0.2, 0.7);
        assert!(continuity_bound_check(&f, z, z, c(2.0, 0.0), &p).unwrap());
        let e1 = PL2Element::basis(1, 1).unwrap();
        assert!(continuity_bound_check(&e1, c(-0.9, 0.1), c(0.5, 0.5), c(2.0, 3.0), &p).unwrap());
        assert!(matches!(
            continuity_bound_check(&e1, z, z, c(1.5, 0.0), &p),
            Err(Error::Domain(_))
        ));
        // closed disc is allowed
        assert!(continuity_bound_check(&f, c(1.0, 0.0), c(0.0, -1.0), c(1.7, 0.0), &p).unwrap());
    }

    #[test]
    fn json_shape() {
        let f = el(&[(1.0, 0.0), (0.5, -2.0)]);
        assert_eq!(f.to_json().unwrap(), r#"{"coeffs":[[1.0,0.0],[0.5,-2.0]]}"#);
        assert!(PL2Element::from_json(r#"{"coeffs":[]}"#).is_err());
        let g = H2Element::from_json(r#"{"coeffs":[[0,1]]}"#).unwrap();
        assert_eq!(g.coeff(0), c(0.0, 1.0));
    }

    fn arb_coeffs(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec(
            (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(a, b)| c(a, b)),
            1..max,
        )
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(v in prop::collection::vec((any::<f64>(), any::<f64>()), 1..20)) {
            let finite: Vec<Complex64> = v.into_iter()
                .map(|(a, b)| c(if a.is_finite() { a } else { 0.0 }, if b.is_finite() { b } else { 0.0 }))
                .collect();
            let f = PL2Element::new(finite).unwrap();
            let back = PL2Element::from_json(&f.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn parseval(v in arb_coeffs(64)) {
            let f = PL2Element::new(v).unwrap();
            let ip = inner_product(&f, &f);
            let n2 = f.norm().powi(2);
            prop_assert!((ip.re - n2).abs() <= 1e-12 * n2.max(1.0));
            prop_assert!(ip.im.abs() <= 1e-12 * n2.max(1.0));
        }

        #[test]
        fn reproducing_property(v in arb_coeffs(48), wr in 0.0f64..0.95, wa in 0.0f64..std::f64::consts::TAU,
                                tr in -1.0f64..3.0, ti in -5.0f64..5.0) {
            let f = PL2Element::new(v).unwrap();
            let w = Complex64::from_polar(wr, wa);
            let t = c(tr, ti);
            let k = kernel_element(w, t, f.order()).unwrap();
            let lhs = inner_product(&f, &k);
            let rhs = evaluate(&f, w, t).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(f.norm()));
        }
    }
}
