//! Toeplitz compressions on PL² and the operators built from them.
//!
//! Every operator acts on the basis `e_n = zⁿ/n^s`, `n = 1, 2, …`, and is
//! stored as a [`SparseOperator`] over a finite window: columns `1..=N`
//! (domain) and rows `1..=M` (codomain). Constructors size the codomain so
//! nothing a column maps to is ever clipped: `T_{z^k/m^s}` on `N` columns
//! gets `N + k` rows, `S_{+m}` gets `N + m`, `S_{×m}` gets `mN`.
//!
//! The compression of `z^k m^{-s}` keeps only the term with `n + k = mn`,
//! so it sends `e_{n₀} ↦ e_{n₀+k}` for `n₀ = k/(m−1)` and kills everything
//! else. Summing over `m` gives `T_{z^k ζ(s)}`, which maps `e_n ↦ e_{n+k}`
//! for each divisor `n | k` and therefore has rank `d(k)`.

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// Relative pivot tolerance for numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Largest column count accepted by [`SparseOperator::to_csv`].
pub const CSV_MAX_COLS: usize = 64;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Finite window of an operator on the PL² basis, stored sparsely.
///
/// Indices are 1-based. No `(row, col)` pair appears twice and every stored
/// weight is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseOperator {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseOperator {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zero(n, n);
        for i in 1..=n {
            op.entries.insert((i, i), ONE);
        }
        op
    }

    /// Builds an operator from `(row, col, weight)` triples. Zero weights are dropped.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut op = Self::zero(rows, cols);
        for (r, c, w) in entries {
            if r == 0 || c == 0 || r > rows || c > cols {
                return Err(Error::Dimension(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::NonFinite(format!("weight at ({r}, {c})")));
            }
            if w == ZERO {
                continue;
            }
            if op.entries.insert((r, c), w).is_some() {
                return Err(Error::InvalidParams(format!("duplicate entry ({r}, {c})")));
            }
        }
        Ok(op)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or(ZERO)
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &w)| (r, c, w))
    }

    fn accumulate(&mut self, r: usize, c: usize, w: Complex64) {
        let slot = self.entries.entry((r, c)).or_insert(ZERO);
        *slot += w;
        if *slot == ZERO {
            self.entries.remove(&(r, c));
        }
    }

    /// `self ∘ rhs`. Fails if `rhs` maps a column outside this operator's domain.
    pub fn compose(&self, rhs: &SparseOperator) -> Result<SparseOperator> {
        let mut by_col: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&(r, c), &w) in &self.entries {
            by_col.entry(c).or_default().push((r, w));
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for (&(mid, c), &w) in &rhs.entries {
            if mid > self.cols {
                return Err(Error::Dimension(format!(
                    "composition clips: column {c} maps to row {mid} beyond a domain of {}",
                    self.cols
                )));
            }
            if let Some(targets) = by_col.get(&mid) {
                for &(r, v) in targets {
                    out.accumulate(r, c, v * w);
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum; the window is the larger of the two in each direction.
    pub fn add(&self, other: &SparseOperator) -> SparseOperator {
        let mut out = self.clone();
        out.rows = out.rows.max(other.rows);
        out.cols = out.cols.max(other.cols);
        for (&(r, c), &w) in &other.entries {
            out.accumulate(r, c, w);
        }
        out
    }

    pub fn sub(&self, other: &SparseOperator) -> SparseOperator {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, k: Complex64) -> SparseOperator {
        let mut out = Self::zero(self.rows, self.cols);
        for (&(r, c), &w) in &self.entries {
            out.accumulate(r, c, w * k);
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseOperator {
        SparseOperator {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), &w)| ((c, r), w.conj()))
                .collect(),
        }
    }

    /// Same stored entries, regardless of window size.
    pub fn same_entries(&self, other: &SparseOperator) -> bool {
        self.entries == other.entries
    }

    /// Equality restricted to rows and columns both operators define.
    pub fn eq_on_window(&self, other: &SparseOperator) -> bool {
        self.approx_eq_on_window(other, 0.0)
    }

    /// Entrywise equality within `tol` on the shared window.
    pub fn approx_eq_on_window(&self, other: &SparseOperator, tol: f64) -> bool {
        let (rows, cols) = (self.rows.min(other.rows), self.cols.min(other.cols));
        let inside = |&(&(r, c), _): &(&(usize, usize), &Complex64)| r <= rows && c <= cols;
        let keys: BTreeSet<(usize, usize)> = self
            .entries
            .iter()
            .filter(inside)
            .chain(other.entries.iter().filter(inside))
            .map(|(&k, _)| k)
            .collect();
        keys.into_iter()
            .all(|(r, c)| (self.get(r, c) - other.get(r, c)).norm() <= tol)
    }

    pub fn column_support(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|&(_, c)| c).collect()
    }

    pub fn row_support(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|&(r, _)| r).collect()
    }

    /// At most one entry in every row and every column.
    pub fn is_partial_permutation(&self) -> bool {
        let rows = self.row_support();
        let cols = self.column_support();
        rows.len() == self.nnz() && cols.len() == self.nnz()
    }

    /// Rank of the window.
    ///
    /// Operators with at most one entry per row and column have rank equal
    /// to their entry count, computed exactly. Anything else goes through
    /// Gaussian elimination with complete pivoting, stopping once the best
    /// remaining pivot is below [`RANK_TOLERANCE`] times the largest entry.
    pub fn rank(&self) -> usize {
        if self.is_partial_permutation() {
            return self.nnz();
        }
        self.rank_by_elimination()
    }

    fn rank_by_elimination(&self) -> usize {
        let rows: Vec<usize> = self.row_support().into_iter().collect();
        let cols: Vec<usize> = self.column_support().into_iter().collect();
        let row_ix: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_ix: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let (m, n) = (rows.len(), cols.len());
        let mut a = vec![vec![ZERO; n]; m];
        for (&(r, c), &w) in &self.entries {
            a[row_ix[&r]][col_ix[&c]] = w;
        }
        let scale = self.entries.values().map(|w| w.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let cutoff = RANK_TOLERANCE * scale;
        let mut rank = 0;
        while rank < m.min(n) {
            let (mut pr, mut pc, mut best) = (rank, rank, 0.0);
            for (i, row) in a.iter().enumerate().skip(rank) {
                for (j, v) in row.iter().enumerate().skip(rank) {
                    if v.norm() > best {
                        best = v.norm();
                        pr = i;
                        pc = j;
                    }
                }
            }
            if best <= cutoff {
                break;
            }
            a.swap(rank, pr);
            for row in a.iter_mut() {
                row.swap(rank, pc);
            }
            let pivot = a[rank][rank];
            let pivot_row = a[rank].clone();
            for row in a.iter_mut().skip(rank + 1) {
                let factor = row[rank] / pivot;
                if factor == ZERO {
                    continue;
                }
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(rank) {
                    *x -= factor * p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.rows, self.cols, ZERO);
        for (&(r, c), &w) in &self.entries {
            m[(r - 1, c - 1)] = w;
        }
        m
    }

    /// Largest singular value of the window.
    pub fn operator_norm(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.to_dense()
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// Dense CSV, one line per row. Real weights print as plain numbers.
    pub fn to_csv(&self) -> Result<String> {
        if self.cols > CSV_MAX_COLS {
            return Err(Error::InvalidParams(format!(
                "dense CSV is limited to {CSV_MAX_COLS} columns, operator has {}",
                self.cols
            )));
        }
        let mut out = String::new();
        for r in 1..=self.rows {
            let line: Vec<String> = (1..=self.cols)
                .map(|c| match self.entries.get(&(r, c)) {
                    None => "0".to_string(),
                    Some(w) => format_weight(*w),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let json = OperatorJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), w)| (r, c, w.re, w.im))
                .collect(),
        };
        Ok(serde_json::to_string(&json)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: OperatorJson = serde_json::from_str(text)?;
        Self::from_entries(
            raw.rows,
            raw.cols,
            raw.entries
                .into_iter()
                .map(|(r, c, re, im)| (r, c, Complex64::new(re, im))),
        )
    }
}

fn format_weight(w: Complex64) -> String {
    let mut s = String::new();
    if w.im == 0.0 {
        let _ = write!(s, "{}", w.re);
    } else if w.im > 0.0 {
        let _ = write!(s, "{}+{}i", w.re, w.im);
    } else {
        let _ = write!(s, "{}-{}i", w.re, -w.im);
    }
    s
}

/// Wire form: `{"rows": M, "cols": N, "entries": [[r, c, re, im], …]}`.
#[derive(Serialize, Deserialize)]
struct OperatorJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64, f64)>,
}

fn require_columns(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "truncation order must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Compression of the monomial symbol `z^k m^{-s}` on `n` columns.
///
/// For `m ≥ 2` with `(m−1) | k` and `n₀ = k/(m−1)` in `1..=n`, the single
/// entry `e_{n₀} ↦ e_{n₀+k}`. For `m = 1, k = 0` the identity. Otherwise zero,
/// including `k = 0, m ≥ 2` where `n₀ = 0` is not a basis index.
pub fn toeplitz_elementary(k: usize, m: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    if m == 0 {
        return Err(Error::InvalidParams(
            "Dirichlet index m must be at least 1".into(),
        ));
    }
    if m == 1 {
        return Ok(if k == 0 {
            SparseOperator::identity(n)
        } else {
            SparseOperator::zero(n + k, n)
        });
    }
    let mut op = SparseOperator::zero(n + k, n);
    if k.is_multiple_of(m - 1) {
        let n0 = k / (m - 1);
        if (1..=n).contains(&n0) {
            op.entries.insert((n0 + k, n0), ONE);
        }
    }
    Ok(op)
}

/// `T_{z^k ζ(s)}` on `n` columns: `e_j ↦ e_{j+k}` for every `j | k`, `j ≤ n`.
pub fn toeplitz_zeta(k: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    if k == 0 {
        return Err(Error::Precondition("toeplitz_zeta needs k >= 1".into()));
    }
    let mut op = SparseOperator::zero(n + k, n);
    for j in divisors(k).into_iter().take_while(|&j| j <= n) {
        op.entries.insert((j + k, j), ONE);
    }
    Ok(op)
}

/// Finitely supported symbol `φ(z, s) = Σ c_{n,m} zⁿ m^{-s}`, `n ≥ 0`, `m ≥ 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ToeplitzSymbol {
    coeffs: BTreeMap<(usize, usize), Complex64>,
}

impl ToeplitzSymbol {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut sym = Self::new();
        for (n, m, c) in entries {
            sym.insert(n, m, c)?;
        }
        Ok(sym)
    }

    /// Sets `c_{n,m}`; a zero coefficient removes the term.
    pub fn insert(&mut self, n: usize, m: usize, c: Complex64) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidParams(
                "Dirichlet index m must be at least 1".into(),
            ));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite(format!("symbol coefficient ({n}, {m})")));
        }
        if c == ZERO {
            self.coeffs.remove(&(n, m));
        } else {
            self.coeffs.insert((n, m), c);
        }
        Ok(())
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.coeffs.get(&(n, m)).copied().unwrap_or(ZERO)
    }

    /// `(n, m, c_{n,m})` in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.coeffs.iter().map(|(&(n, m), &c)| (n, m, c))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Distinct powers of `z` present.
    pub fn powers(&self) -> BTreeSet<usize> {
        self.coeffs.keys().map(|&(n, _)| n).collect()
    }

    pub fn max_power(&self) -> usize {
        self.coeffs.keys().map(|&(n, _)| n).max().unwrap_or(0)
    }

    /// The block `φ_{n₀} = Σ_m c_{n₀,m} z^{n₀} m^{-s}`.
    pub fn block(&self, n0: usize) -> ToeplitzSymbol {
        ToeplitzSymbol {
            coeffs: self
                .coeffs
                .range((n0, 0)..=(n0, usize::MAX))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// Terms with power `n ≤ max_n`.
    pub fn head(&self, max_n: usize) -> ToeplitzSymbol {
        ToeplitzSymbol {
            coeffs: self
                .coeffs
                .range(..=(max_n, usize::MAX))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }
}

/// `T_φ = Σ c_{n,m} T_{zⁿ/m^s}` on `n` columns, with `n + max power` rows.
pub fn toeplitz_general(phi: &ToeplitzSymbol, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    let mut op = SparseOperator::zero(n + phi.max_power(), n);
    for (k, m, c) in phi.support() {
        let elementary = toeplitz_elementary(k, m, n)?;
        for (r, col, w) in elementary.entries() {
            op.accumulate(r, col, w * c);
        }
    }
    Ok(op)
}

/// `C_{n₀} = Σ |c_{n₀,m}|` over the `m` whose compression survives: `(m−1) | n₀`
/// for `n₀ ≥ 1`, and only `m = 1` for `n₀ = 0`.
pub fn block_norm_bound(phi: &ToeplitzSymbol, n0: usize) -> f64 {
    phi.block(n0)
        .support()
        .filter(|&(_, m, _)| {
            if n0 == 0 {
                m == 1
            } else {
                m >= 2 && n0.is_multiple_of(m - 1)
            }
        })
        .map(|(_, _, c)| c.norm())
        .sum()
}

/// `S_{+m}: e_j ↦ e_{j+m}` on `n` columns.
pub fn shift_add(m: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    SparseOperator::from_entries(n + m, n, (1..=n).map(|j| (j + m, j, ONE)))
}

/// `S*_{+m}: e_j ↦ e_{j−m}` for `j > m`, else 0, on `n` columns.
pub fn shift_add_adjoint(m: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    SparseOperator::from_entries(n, n, (m + 1..=n).map(|j| (j - m, j, ONE)))
}

/// `S_{×m}: e_j ↦ e_{mj}` on `n` columns.
pub fn shift_mult(m: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    if m == 0 {
        return Err(Error::InvalidParams(
            "multiplicative shift needs m >= 1".into(),
        ));
    }
    SparseOperator::from_entries(m * n, n, (1..=n).map(|j| (m * j, j, ONE)))
}

/// `S*_{×m}: e_j ↦ e_{j/m}` when `m | j`, else 0, on `n` columns.
pub fn shift_mult_adjoint(m: usize, n: usize) -> Result<SparseOperator> {
    require_columns(n)?;
    if m == 0 {
        return Err(Error::InvalidParams(
            "multiplicative shift needs m >= 1".into(),
        ));
    }
    SparseOperator::from_entries(n, n, (1..=n / m).map(|j| (j, m * j, ONE)))
}

/// Diagonal projection keeping `e_{k·r}` for each divisor `r | n` with `k·r ≤ size`.
pub fn projection_pk(k: usize, n: usize, size: usize) -> Result<SparseOperator> {
    require_columns(size)?;
    if k == 0 || n == 0 {
        return Err(Error::InvalidParams("projection needs k, n >= 1".into()));
    }
    SparseOperator::from_entries(
        size,
        size,
        divisors(n)
            .into_iter()
            .map(|r| k * r)
            .filter(|&i| i <= size)
            .map(|i| (i, i, ONE)),
    )
}

/// Which outer additive shift to use in the divisor decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterShift {
    /// `S_{+(nm)}`, the shift that reproduces `T_{z^{nm} ζ(s)}`.
    Product,
    /// `S_{+(m+n)}`, kept for comparison; it does not reproduce `T_{z^{nm} ζ(s)}`.
    Sum,
}

impl OuterShift {
    pub fn amount(self, n: usize, m: usize) -> usize {
        match self {
            OuterShift::Product => n * m,
            OuterShift::Sum => n + m,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OuterShift::Product => "S+(nm)",
            OuterShift::Sum => "S+(m+n)",
        }
    }
}

fn require_coprime(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("n and m must be positive".into()));
    }
    if gcd(n, m) != 1 {
        return Err(Error::Precondition(format!(
            "gcd({n}, {m}) = {} is not 1",
            gcd(n, m)
        )));
    }
    Ok(())
}

/// The summands `S_{+outer} S*_{+kn} S_{×k} T_{zⁿζ} S*_{×k} P_k`, one per `k | m`, on `size` columns.
pub fn decomposition_summands(
    n: usize,
    m: usize,
    size: usize,
    outer: OuterShift,
) -> Result<Vec<(usize, SparseOperator)>> {
    require_coprime(n, m)?;
    if size < n * m {
        return Err(Error::Precondition(format!(
            "truncation {size} is below nm = {}",
            n * m
        )));
    }
    let shift = outer.amount(n, m);
    divisors(m)
        .into_iter()
        .map(|k| {
            let p = projection_pk(k, n, size)?;
            let down = shift_mult_adjoint(k, size)?.compose(&p)?;
            let t = toeplitz_zeta(n, size)?.compose(&down)?;
            let stretched = shift_mult(k, t.rows())?.compose(&t)?;
            let back = shift_add_adjoint(k * n, stretched.rows())?.compose(&stretched)?;
            let out = shift_add(shift, back.rows())?.compose(&back)?;
            Ok((k, out))
        })
        .collect()
}

/// `Σ_{k | m} S_{+outer} S*_{+kn} S_{×k} T_{zⁿζ} S*_{×k} P_k` on `size` columns.
///
/// With [`OuterShift::Product`] this equals `toeplitz_zeta(nm, size)` entry for entry.
pub fn decomposition_rhs(
    n: usize,
    m: usize,
    size: usize,
    outer: OuterShift,
) -> Result<SparseOperator> {
    let summands = decomposition_summands(n, m, size, outer)?;
    let init = SparseOperator::zero(size + n * m, size);
    Ok(summands.iter().fold(init, |acc, (_, op)| acc.add(op)))
}

/// `(rank T_{z^{nm}ζ}, rank T_{zⁿζ}, rank T_{z^mζ})` for coprime `n, m`.
///
/// Each operator is built on `k` columns for its own `k`, which holds every divisor.
pub fn divisor_rank_identity(n: usize, m: usize) -> Result<(usize, usize, usize)> {
    require_coprime(n, m)?;
    let rank = |k: usize| toeplitz_zeta(k, k).map(|op| op.rank());
    Ok((rank(n * m)?, rank(n)?, rank(m)?))
}
