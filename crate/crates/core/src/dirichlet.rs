//! Dirichlet-convolution algebra at finite truncation.
//!
//! Scalar sequences use [`CoefficientSeries`] with 1-based meaning. Series
//! whose n-th coefficient is a polynomial in `z` use [`PolySeries`]; these
//! carry the inverse `1/f(z, s) = Σ α_n(z) n^{-s}` and multiplier symbols
//! `φ(z, s) = Σ φ_n(z) n^{-s}`.
//!
//! An element `f = Σ a_n zⁿ n^{-s}` enters the polynomial algebra as the
//! sequence of monomials `a_n zⁿ`. A product lies in PL² exactly when its
//! n-th entry is a multiple of `zⁿ`; [`pl2_defect`] measures the failure.
//!
//! All identities hold for indices `n ≤ N` only.

use crate::error::{Error, Result};
use crate::hilbert::{CoefficientSeries, PL2Element};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Moduli at or below this are treated as zero when classifying.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `c_n = Σ_{d | n} a_d b_{n/d}` for `n ≤ min(N_a, N_b)`.
pub fn dirichlet_convolve(a: &CoefficientSeries, b: &CoefficientSeries) -> CoefficientSeries {
    let n = a.len().min(b.len());
    let (a, b) = (a.as_slice(), b.as_slice());
    let mut c = vec![ZERO; n];
    for d in 1..=n {
        let ad = a[d - 1];
        if ad == ZERO {
            continue;
        }
        for k in 1..=n / d {
            c[d * k - 1] += ad * b[k - 1];
        }
    }
    CoefficientSeries::new(c).expect("convolution of finite series is finite and nonempty")
}

/// Dirichlet inverse with the default singularity threshold.
pub fn dirichlet_inverse(a: &CoefficientSeries) -> Result<CoefficientSeries> {
    dirichlet_inverse_with_threshold(a, DEFAULT_ZERO_THRESHOLD)
}

/// `b_1 = 1/a_1`, `b_n = −(1/a_1) Σ_{d | n, d > 1} a_d b_{n/d}`.
///
/// Fails with [`Error::Singular`] when `|a_1| ≤ threshold`.
pub fn dirichlet_inverse_with_threshold(
    a: &CoefficientSeries,
    threshold: f64,
) -> Result<CoefficientSeries> {
    let a1 = a.get(1);
    if a1.norm() <= threshold {
        return Err(Error::Singular(format!(
            "|a_1| = {} is below {threshold:e}",
            a1.norm()
        )));
    }
    let n = a.len();
    let coeffs = a.as_slice();
    let inv_a1 = a1.inv();
    let mut b = vec![ZERO; n];
    // acc[m] collects Σ_{d | m, d > 1} a_d b_{m/d} as each b_k becomes known
    let mut acc = vec![ZERO; n];
    for k in 1..=n {
        b[k - 1] = if k == 1 { inv_a1 } else { -acc[k - 1] * inv_a1 };
        let bk = b[k - 1];
        for d in 2..=n / k {
            acc[d * k - 1] += coeffs[d - 1] * bk;
        }
    }
    CoefficientSeries::new(b)
}

/// Laurent polynomial `Σ_j c_j z^j` with finitely many nonzero terms.
///
/// Stored as a dense run of coefficients starting at degree `lowest`, with
/// exact zeros trimmed from both ends. The zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    lowest: i32,
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(coef: Complex64, degree: i32) -> Self {
        Poly {
            lowest: degree,
            coeffs: vec![coef],
        }
        .normalized()
    }

    pub fn constant(coef: Complex64) -> Self {
        Self::monomial(coef, 0)
    }

    /// Polynomial from coefficients of degrees `lowest, lowest+1, …`.
    pub fn from_coeffs(lowest: i32, coeffs: Vec<Complex64>) -> Self {
        Poly { lowest, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&ZERO) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == ZERO).count();
        if lead == self.coeffs.len() {
            return Poly::zero();
        }
        self.coeffs.drain(..lead);
        self.lowest += lead as i32;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest degree with a nonzero coefficient; `None` for the zero polynomial.
    pub fn lowest_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lowest)
    }

    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.lowest + self.coeffs.len() as i32 - 1)
    }

    pub fn coefficient(&self, degree: i32) -> Complex64 {
        let i = degree - self.lowest;
        if i < 0 {
            return ZERO;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(ZERO)
    }

    /// Nonzero terms as `(degree, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(move |(i, &c)| (self.lowest + i as i32, c))
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        Poly {
            lowest: self.lowest + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Poly {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
        .normalized()
    }

    /// True when the only term with modulus above `threshold` is at `degree` (or there is none).
    pub fn is_monomial_at(&self, degree: i32, threshold: f64) -> bool {
        self.terms()
            .all(|(j, c)| j == degree || c.norm() <= threshold)
    }

    /// True when every coefficient has modulus at most `threshold`.
    pub fn is_negligible(&self, threshold: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= threshold)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let body = self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
        body * z.powi(self.lowest)
    }

    fn combine(&self, other: &Poly, sign: f64) -> Poly {
        if self.is_zero() {
            return other.scale(Complex64::new(sign, 0.0));
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lowest.min(other.lowest);
        let hi = self.degree().unwrap().max(other.degree().unwrap());
        let coeffs = (lo..=hi)
            .map(|j| self.coefficient(j) + other.coefficient(j) * sign)
            .collect();
        Poly::from_coeffs(lo, coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(self.lowest + rhs.lowest, out)
    }
}

/// Dirichlet series with polynomial coefficients, entries indexed `n = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySeries {
    entries: Vec<Poly>,
}

impl PolySeries {
    pub fn new(entries: Vec<Poly>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParams(
                "poly series needs at least one entry".into(),
            ));
        }
        Ok(PolySeries { entries })
    }

    /// The monomial sequence `a_n zⁿ` of a PL² element.
    pub fn from_element(f: &PL2Element) -> Self {
        let entries = f
            .series
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &a)| Poly::monomial(a, i as i32 + 1))
            .collect();
        PolySeries { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry `n`, 1-based.
    pub fn entry(&self, n: usize) -> &Poly {
        &self.entries[n - 1]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    /// Coefficient of `zⁿ` in entry `n`, for each `n`.
    pub fn diagonal(&self) -> CoefficientSeries {
        CoefficientSeries::new(
            self.entries
                .iter()
                .enumerate()
                .map(|(i, p)| p.coefficient(i as i32 + 1))
                .collect(),
        )
        .expect("nonempty")
    }

    /// `Σ_{d | n} p_d q_{n/d}` for `n ≤ min(len)`.
    pub fn convolve(&self, other: &PolySeries) -> PolySeries {
        let n = self.len().min(other.len());
        let mut out = vec![Poly::zero(); n];
        for d in 1..=n {
            if self.entries[d - 1].is_zero() {
                continue;
            }
            for k in 1..=n / d {
                let prod = &self.entries[d - 1] * &other.entries[k - 1];
                out[d * k - 1] = &out[d * k - 1] + &prod;
            }
        }
        PolySeries { entries: out }
    }

    /// Smallest degree over all entries, or 0 when every entry is zero.
    pub fn min_degree(&self) -> i32 {
        self.entries
            .iter()
            .filter_map(Poly::lowest_degree)
            .min()
            .unwrap_or(0)
            .min(0)
    }

    pub fn to_json(&self) -> Result<String> {
        let min = self.min_degree();
        let entries = self
            .entries
            .iter()
            .map(|p| match p.degree() {
                None => Vec::new(),
                // + 0.0 folds negative zeros
                Some(top) => (min..=top)
                    .map(|j| p.coefficient(j))
                    .map(|c| [c.re + 0.0, c.im + 0.0])
                    .collect(),
            })
            .collect();
        let json = PolySeriesJson {
            min_degree: (min < 0).then_some(min),
            entries,
        };
        Ok(serde_json::to_string(&json)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolySeriesJson = serde_json::from_str(text)?;
        let lowest = raw.min_degree.unwrap_or(0);
        let entries = raw
            .entries
            .into_iter()
            .map(|cs| {
                Poly::from_coeffs(
                    lowest,
                    cs.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect(),
                )
            })
            .collect();
        PolySeries::new(entries)
    }
}

/// Wire form: `{"entries": [[[re, im], …] per degree, …] per n}`, degrees
/// starting at 0, or at `min_degree` when that key is present (Laurent case).
#[derive(Serialize, Deserialize)]
struct PolySeriesJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    min_degree: Option<i32>,
    entries: Vec<Vec<[f64; 2]>>,
}

fn leading_coefficient(f: &PL2Element) -> Result<Complex64> {
    let a1 = f.coeff(1);
    if a1.norm() <= DEFAULT_ZERO_THRESHOLD {
        return Err(Error::Singular(format!(
            "leading coefficient a_1 = {a1} vanishes"
        )));
    }
    Ok(a1)
}

/// `α_n(z)` with `Σ_{d | n} a_d z^d α_{n/d}(z) = [n = 1]`.
///
/// `α_1 = 1/(a_1 z)` is a Laurent monomial of degree −1; every later entry
/// is a genuine polynomial.
pub fn poly_dirichlet_inverse(f: &PL2Element) -> Result<PolySeries> {
    let a1 = leading_coefficient(f)?;
    let inv = a1.inv();
    let n = f.order();
    let mono: Vec<Poly> = (1..=n)
        .map(|d| Poly::monomial(f.coeff(d), d as i32))
        .collect();
    let mut alpha = vec![Poly::zero(); n];
    let mut acc = vec![Poly::zero(); n];
    for k in 1..=n {
        alpha[k - 1] = if k == 1 {
            Poly::monomial(inv, -1)
        } else {
            acc[k - 1].shift(-1).scale(-inv)
        };
        for d in 2..=n / k {
            let term = &mono[d - 1] * &alpha[k - 1];
            acc[d * k - 1] = &acc[d * k - 1] + &term;
        }
    }
    PolySeries::new(alpha)
}

/// The symbol `φ = h / f` as `Σ φ_n(z) n^{-s}`.
///
/// `φ_n = (b_n zⁿ − Σ_{d | n, d < n} φ_d a_{n/d} z^{n/d}) / (a_1 z)`; every
/// term of the numerator has positive degree so the division is exact.
pub fn solve_symbol(f: &PL2Element, h: &PL2Element) -> Result<PolySeries> {
    let a1 = leading_coefficient(f)?;
    let inv = a1.inv();
    let n = f.order().min(h.order());
    let mono: Vec<Poly> = (1..=n)
        .map(|d| Poly::monomial(f.coeff(d), d as i32))
        .collect();
    let mut phi = vec![Poly::zero(); n];
    let mut acc = vec![Poly::zero(); n];
    for k in 1..=n {
        let numerator = &Poly::monomial(h.coeff(k), k as i32) - &acc[k - 1];
        phi[k - 1] = numerator.shift(-1).scale(inv);
        for m in 2..=n / k {
            let term = &phi[k - 1] * &mono[m - 1];
            acc[m * k - 1] = &acc[m * k - 1] + &term;
        }
    }
    PolySeries::new(phi)
}

/// Entry `n` of `φ·f`: `Σ_{d | n} φ_d(z) a_{n/d} z^{n/d}`.
pub fn apply_symbol(phi: &PolySeries, f: &PL2Element) -> PolySeries {
    phi.convolve(&PolySeries::from_element(f))
}

/// `Σ_n Σ_{j ≠ n} |[z^j] entry_n|²`, zero iff entry `n` is a multiple of `zⁿ` for every `n`.
pub fn pl2_defect(p: &PolySeries) -> f64 {
    p.entries
        .iter()
        .enumerate()
        .map(|(i, poly)| {
            let n = i as i32 + 1;
            poly.terms()
                .filter(|&(j, _)| j != n)
                .map(|(_, c)| c.norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Whether `p` lies in PL² after discarding coefficients of modulus `≤ threshold`.
pub fn is_pl2(p: &PolySeries, threshold: f64) -> bool {
    p.entries
        .iter()
        .enumerate()
        .all(|(i, poly)| poly.is_monomial_at(i as i32 + 1, threshold))
}

/// Degree of the coefficient of `φ_4` that depends on the element in [`induction_base_symbol`].
pub const FORCED_DEGREE: i32 = 2;

/// The symbol with `φ_1 = c1`, `φ_2 = c2·z`, `φ_3 = 0`, completed through `n = 4`
/// by [`solve_symbol`] against `f` so that `φ·f` stays in PL² up to `n = 4`.
///
/// Entry 4 must satisfy `φ_4 a_1 z + φ_2 a_2 z² + φ_1 a_4 z⁴ = b_4 z⁴`, so
/// `φ_4 = ((b_4 − c1 a_4)/a_1) z³ − (c2 a_2/a_1) z²`. The `z²` coefficient is
/// fixed by `f` alone; `b_4` is chosen here to make the `z³` coefficient vanish.
pub fn induction_base_symbol(f: &PL2Element, c1: Complex64, c2: Complex64) -> Result<PolySeries> {
    if f.order() < 4 {
        return Err(Error::Precondition(
            "induction base needs an element of order at least 4".into(),
        ));
    }
    let a1 = leading_coefficient(f)?;
    let b = vec![
        c1 * a1,
        c1 * f.coeff(2) + c2 * a1,
        c1 * f.coeff(3),
        c1 * f.coeff(4),
    ];
    let h = PL2Element::new(b)?;
    solve_symbol(f, &h)
}

/// Outcome of running the induction base against two elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingOutcome {
    /// `[z²] φ_4` forced by the first element, `−c2·a_2/a_1`.
    pub forced_f: Complex64,
    /// `[z²] φ_4` forced by the second element, `−c2·d_2/d_1`.
    pub forced_g: Complex64,
    /// `[z¹] φ_4` for each element; identically zero.
    pub linear_f: Complex64,
    pub linear_g: Complex64,
    /// Whether a single `φ_4` can serve both elements.
    pub consistent: bool,
}

/// Runs [`induction_base_symbol`] for `f` and `g` and compares the resulting `φ_4`.
pub fn forcing_check(
    f: &PL2Element,
    g: &PL2Element,
    c1: Complex64,
    c2: Complex64,
) -> Result<ForcingOutcome> {
    let phi_f = induction_base_symbol(f, c1, c2)?;
    let phi_g = induction_base_symbol(g, c1, c2)?;
    let (pf, pg) = (phi_f.entry(4), phi_g.entry(4));
    let diff = pf - pg;
    Ok(ForcingOutcome {
        forced_f: pf.coefficient(FORCED_DEGREE),
        forced_g: pg.coefficient(FORCED_DEGREE),
        linear_f: pf.coefficient(1),
        linear_g: pg.coefficient(1),
        consistent: diff.is_negligible(DEFAULT_ZERO_THRESHOLD),
    })
}
