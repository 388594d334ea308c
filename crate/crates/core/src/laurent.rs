//! Truncated Laurent series in `X^{-1}`.
//!
//! A series is `Σ_{i ≥ lead} a_i X^{-i}`. Coefficients with index above
//! `precision` are unknown; `precision = None` means the series is exact and
//! every coefficient past the stored ones is zero.

use serde::{Deserialize, Serialize};

use crate::abs::AbsValue;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::poly::{PolyVector, Polynomial};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    spec: FieldSpec,
    lead: i64,
    coeffs: Vec<u32>,
    precision: Option<i64>,
}

impl std::fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Laurent(lead={}, {:?}, prec={:?})", self.lead, self.coeffs, self.precision)
    }
}

/// JSON form: `{"lead": n, "coeffs": [..], "precision": T}`; a missing or null
/// precision means exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentConfig {
    pub lead: i64,
    pub coeffs: Vec<u32>,
    #[serde(default)]
    pub precision: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    /// `coeffs[j]` is the coefficient of `X^{-(lead + j)}`.
    pub fn new(spec: &FieldSpec, lead: i64, coeffs: Vec<u32>, precision: Option<i64>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= spec.k()) {
            return Err(Error::InvalidArgument(format!("coefficient {c} is not an element of F_{}", spec.k())));
        }
        if let Some(t) = precision {
            if lead + coeffs.len() as i64 - 1 > t {
                return Err(Error::Precision(format!("coefficients stored past precision {t}")));
            }
        }
        Ok(Self::build(spec, lead, coeffs, precision))
    }

    fn build(spec: &FieldSpec, mut lead: i64, mut coeffs: Vec<u32>, precision: Option<i64>) -> Self {
        if let Some(t) = precision {
            let keep = (t - lead + 1).max(0) as usize;
            coeffs.truncate(keep);
        }
        let skip = coeffs.iter().take_while(|&&c| c == 0).count();
        coeffs.drain(..skip);
        lead += skip as i64;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            lead = match precision {
                Some(t) => t + 1,
                None => 0,
            };
        }
        Self { spec: spec.clone(), lead, coeffs, precision }
    }

    pub fn from_config(spec: &FieldSpec, cfg: &LaurentConfig) -> Result<Self> {
        Self::new(spec, cfg.lead, cfg.coeffs.clone(), cfg.precision)
    }

    pub fn config(&self) -> LaurentConfig {
        LaurentConfig { lead: self.lead, coeffs: self.coeffs.clone(), precision: self.precision }
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Self::build(spec, 0, Vec::new(), None)
    }

    /// `X^{-i}`.
    pub fn monomial(spec: &FieldSpec, c: u32, i: i64) -> Self {
        Self::build(spec, i, vec![c], None)
    }

    /// The polynomial `p` viewed as a series: `lead = -deg p`.
    pub fn from_poly(p: &Polynomial) -> Self {
        let coeffs: Vec<u32> = p.coeffs().iter().rev().copied().collect();
        let lead = -(coeffs.len() as i64 - 1);
        Self::build(p.spec(), lead, coeffs, None)
    }

    /// A point of the unit ball given by its first `coeffs.len()` fractional
    /// digits `a_1, a_2, …`, with precision equal to that depth.
    pub fn from_digits(spec: &FieldSpec, digits: &[u32]) -> Self {
        Self::build(spec, 1, digits.to_vec(), Some(digits.len() as i64))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// First index that may hold a nonzero coefficient.
    pub fn lead(&self) -> i64 {
        self.lead
    }

    /// Coefficient of `X^{-i}`.
    pub fn coeff(&self, i: i64) -> Result<u32> {
        if let Some(t) = self.precision {
            if i > t {
                return Err(Error::Precision(format!("coefficient {i} beyond precision {t}")));
            }
        }
        if i < self.lead {
            return Ok(0);
        }
        Ok(self.coeffs.get((i - self.lead) as usize).copied().unwrap_or(0))
    }

    /// True when every known coefficient vanishes (the value may still be
    /// nonzero past the precision).
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `|f| = k^{-i}` for the first nonzero coefficient index `i`. Fails when
    /// all known coefficients vanish on a truncated series.
    pub fn abs(&self) -> Result<AbsValue> {
        if self.coeffs.is_empty() {
            return match self.precision {
                None => Ok(AbsValue::Zero),
                Some(t) => Err(Error::Precision(format!("all coefficients up to {t} vanish"))),
            };
        }
        Ok(AbsValue::Pow(-self.lead))
    }

    /// An upper bound for `|f|` that is always decidable.
    pub fn abs_upper_bound(&self) -> AbsValue {
        match self.abs() {
            Ok(a) => a,
            Err(_) => AbsValue::Pow(-(self.precision.expect("truncated") + 1)),
        }
    }

    fn last_index(&self) -> i64 {
        self.lead + self.coeffs.len() as i64 - 1
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u32, u32) -> u32) -> Self {
        assert!(self.spec == other.spec, "series over different fields");
        let precision = min_prec(self.precision, other.precision);
        let lo = self.lead.min(other.lead);
        let mut hi = self.last_index().max(other.last_index());
        if let Some(t) = precision {
            hi = hi.min(t);
        }
        let coeffs = (lo..=hi)
            .map(|i| op(self.coeff(i).unwrap_or(0), other.coeff(i).unwrap_or(0)))
            .collect();
        Self::build(&self.spec, lo, coeffs, precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.spec.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.spec.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.spec.neg(c)).collect();
        Self::build(&self.spec, self.lead, coeffs, self.precision)
    }

    pub fn scale(&self, c: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.spec.mul(a, c)).collect();
        let precision = if c == 0 { None } else { self.precision };
        Self::build(&self.spec, self.lead, coeffs, precision)
    }

    /// Multiplication by `X^d`.
    pub fn shift(&self, d: i64) -> Self {
        Self::build(&self.spec, self.lead - d, self.coeffs.clone(), self.precision.map(|t| t - d))
    }

    /// Product with precision `min(P_f + lead_g, P_g + lead_f)`. When no
    /// coefficient is determined the result is zero up to that precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert!(self.spec == other.spec, "series over different fields");
        let f = &self.spec;
        if (self.is_exact() && self.coeffs.is_empty()) || (other.is_exact() && other.coeffs.is_empty()) {
            return Ok(Self::zero(f));
        }
        let precision = min_prec(self.precision.map(|t| t + other.lead), other.precision.map(|t| t + self.lead));
        let lead = self.lead + other.lead;
        let mut len = self.coeffs.len() + other.coeffs.len();
        if let Some(t) = precision {
            len = len.min((t - lead + 1).max(0) as usize);
        }
        let mut out = vec![0u32; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Self::build(f, lead, out, precision))
    }

    /// Multiplicative inverse, computed to absolute index `precision`. The
    /// input must have a decidable nonzero leading coefficient.
    pub fn inverse(&self, precision: i64) -> Result<Self> {
        let f = &self.spec;
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let out_lead = -self.lead;
        let mut limit = precision;
        if let Some(t) = self.precision {
            // coefficient out_lead + j needs input coefficients up to lead + j
            limit = limit.min(out_lead + (t - self.lead));
        }
        if limit < out_lead {
            return Err(Error::Precision("inverse window empty".into()));
        }
        let n = (limit - out_lead + 1) as usize;
        let inv0 = f.inv(self.coeffs[0])?;
        let mut out = vec![0u32; n];
        for j in 0..n {
            let mut acc = if j == 0 { 1 } else { 0 };
            for i in 1..=j.min(self.coeffs.len() - 1) {
                acc = f.sub(acc, f.mul(self.coeffs[i], out[j - i]));
            }
            out[j] = f.mul(acc, inv0);
        }
        Ok(Self::build(f, out_lead, out, Some(limit)))
    }

    /// `p / q` to absolute index `precision`.
    pub fn from_ratio(p: &Polynomial, q: &Polynomial, precision: i64) -> Result<Self> {
        let inv = Self::from_poly(q).inverse(precision + q.degree().ok_or(Error::DivisionByZero)? as i64)?;
        let out = Self::from_poly(p).mul(&inv)?;
        Ok(Self::build(p.spec(), out.lead, out.coeffs, out.precision.map(|t| t.min(precision))))
    }

    /// The part with negative powers of `X` only: indices `≥ 1`.
    pub fn frac_part(&self) -> Self {
        if self.lead >= 1 {
            return self.clone();
        }
        let skip = ((1 - self.lead) as usize).min(self.coeffs.len());
        Self::build(&self.spec, 1, self.coeffs[skip..].to_vec(), self.precision)
    }

    /// The polynomial part; fails when some coefficient of it is unknown.
    pub fn int_part(&self) -> Result<Polynomial> {
        if let Some(t) = self.precision {
            if t < 0 {
                return Err(Error::Precision("polynomial part not determined".into()));
            }
        }
        let top = (-self.lead).max(-1);
        let coeffs = (0..=top).map(|e| self.coeff(-e).unwrap_or(0)).collect();
        Ok(Polynomial::from_raw(&self.spec, coeffs))
    }

    /// `‖f‖`, the distance to the nearest polynomial.
    pub fn dist_to_poly(&self) -> Result<AbsValue> {
        self.frac_part().abs()
    }

    /// Same series with its precision lowered to `t`.
    pub fn truncate(&self, t: i64) -> Self {
        let precision = Some(self.precision.map_or(t, |p| p.min(t)));
        Self::build(&self.spec, self.lead, self.coeffs.clone(), precision)
    }
}

/// `max_j |v_j|`. Entries whose known digits all vanish are bounded by their
/// precision; the maximum is decided only if those bounds are dominated by a
/// decided entry.
pub fn max_abs(v: &[LaurentSeries]) -> Result<AbsValue> {
    let mut best = AbsValue::Zero;
    let mut undecided = AbsValue::Zero;
    for e in v {
        match e.abs() {
            Ok(a) => best = best.max(a),
            Err(_) => undecided = undecided.max(e.abs_upper_bound()),
        }
    }
    if undecided > best {
        return Err(Error::Precision("size not determined by the known digits".into()));
    }
    Ok(best)
}

/// `‖v‖ = max_j |frac(v_j)|`, the distance to the nearest polynomial vector.
pub fn dist_nearest_poly_vec(v: &[LaurentSeries]) -> Result<AbsValue> {
    let fracs: Vec<_> = v.iter().map(LaurentSeries::frac_part).collect();
    max_abs(&fracs)
}

/// Whether `|f| < k^{-r}`, i.e. every coefficient with index `<= r` vanishes.
pub fn abs_below(f: &LaurentSeries, r: i64) -> Result<bool> {
    if let Some(t) = f.precision() {
        if t < r {
            return Err(Error::Precision(format!("need coefficients up to {r}, have {t}")));
        }
    }
    Ok(f.is_known_zero() || f.lead() > r)
}

/// An `m × n` matrix of series, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentSeries>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentSeries>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if entries.iter().any(|e| e.spec != entries[0].spec) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self { rows, cols, entries })
    }

    /// A point of `U` at depth `T`: `digits[(i*n + j)*T + t - 1]` is `a_{ij,t}`.
    pub fn from_digits(spec: &FieldSpec, rows: usize, cols: usize, depth: usize, digits: &[u32]) -> Result<Self> {
        if digits.len() != rows * cols * depth {
            return Err(Error::Dimension("digit count does not match m*n*T".into()));
        }
        let entries = digits.chunks(depth.max(1)).take(rows * cols).map(|c| LaurentSeries::from_digits(spec, c));
        let entries: Vec<_> = if depth == 0 {
            (0..rows * cols).map(|_| LaurentSeries::from_digits(spec, &[])).collect()
        } else {
            entries.collect()
        };
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&LaurentSeries) -> LaurentSeries) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix shapes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    /// `|A|_∞`; fails if an entry's size is not decided.
    pub fn norm_inf(&self) -> Result<AbsValue> {
        let mut best = AbsValue::Zero;
        for e in &self.entries {
            best = best.max(e.abs()?);
        }
        Ok(best)
    }

    /// Every entry has absolute value `< 1`.
    pub fn in_unit_cube(&self) -> bool {
        self.entries.iter().all(|e| e.lead >= 1)
    }
}

/// The row vector `qA`.
pub fn row_times_matrix(q: &PolyVector, a: &LaurentMatrix) -> Result<Vec<LaurentSeries>> {
    if q.m() != a.rows {
        return Err(Error::Dimension(format!("q has {} entries, A has {} rows", q.m(), a.rows)));
    }
    if q.spec() != a.entries[0].spec() {
        return Err(Error::FieldMismatch);
    }
    let spec = q.spec();
    (0..a.cols)
        .map(|j| {
            let mut acc = LaurentSeries::zero(spec);
            for i in 0..a.rows {
                acc = acc.add(&LaurentSeries::from_poly(q.get(i)).mul(a.get(i, j))?);
            }
            Ok(acc)
        })
        .collect()
}
