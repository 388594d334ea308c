//! Measures of `B`, `B'`, `B''` and their intersections.
//!
//! Fix one column of `A` and write its entries as `a_i = Σ_{t≥1} a_{i,t} X^{-t}`.
//! The coefficient of `X^e` in `q·a` is `Σ_i Σ_t q_{i,e+t} a_{i,t}`, which is a
//! linear form in the digits. `‖q·a‖ < k^{-r}` says the forms for
//! `e = -1, …, -r` vanish (matrix `H`); the polynomial part of `q·a`, which is
//! the unique candidate for `p`, is given by the forms for `e = 0, …, deg q - 1`
//! (matrix `M`). With digits uniform, `M·a` is uniform on `V = M(ker H)` given
//! `H·a = 0`, so
//!
//! `μ = #{y ∈ V : coprimality holds} · k^{-(rank H + dim V)}`
//!
//! per column, and columns are independent.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::KadicMeasure;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::laurent::{abs_below, row_times_matrix, LaurentMatrix};
use crate::linalg::{for_each_in_span, span_basis, Matrix};
use crate::poly::{PolyVector, Polynomial};

/// Largest `dim V · log2 k` we enumerate.
pub const MAX_IMAGE_BITS: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SetKind {
    /// `B(q, ε)`: no coprimality.
    B,
    /// `B'(q, ε)`, `m = 1`: `(q, p_j) = 1`.
    BPrime,
    /// `B''(q, ε)`: `(gcd(q_1, …, q_m), p_j) = 1`.
    BDoublePrime,
}

/// A resonant neighbourhood with `ε = k^{-r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonantSet {
    pub kind: SetKind,
    pub q: PolyVector,
    pub r: i64,
}

impl ResonantSet {
    pub fn b(q: PolyVector, r: i64) -> Self {
        Self { kind: SetKind::B, q, r }
    }

    pub fn b_prime(q: Polynomial, r: i64) -> Self {
        Self { kind: SetKind::BPrime, q: PolyVector::scalar(q), r }
    }

    pub fn b_dprime(q: PolyVector, r: i64) -> Self {
        Self { kind: SetKind::BDoublePrime, q, r }
    }

    /// Digit depth needed to decide membership: `max(r, 0) + max deg q_i`.
    pub fn required_precision(&self) -> usize {
        self.r.max(0) as usize + self.q.max_degree().unwrap_or(0)
    }

    /// The polynomial that each `p_j` must be coprime to, if any.
    fn coprime_target(&self) -> Result<Option<Polynomial>> {
        let g = match self.kind {
            SetKind::B => return Ok(None),
            SetKind::BPrime => {
                if self.q.m() != 1 {
                    return Err(Error::Dimension("B' is defined for m = 1 only".into()));
                }
                self.q.get(0).monic()
            }
            SetKind::BDoublePrime => self.q.gcd()?,
        };
        if self.r < 0 {
            return Err(Error::EpsilonTooLarge(format!(
                "ε = k^{} ≥ k: the components around different p overlap",
                -self.r
            )));
        }
        Ok(if g.degree() == Some(0) { None } else { Some(g) })
    }

    fn validate(&self) -> Result<()> {
        if self.q.is_zero() {
            return Err(Error::ZeroPolynomial("resonant set"));
        }
        Ok(())
    }
}

/// Whether `a` lies in `set`. The only candidate `p` is the polynomial part
/// of `q·a`, since `a ∈ U` puts every other polynomial at distance `≥ 1`.
pub fn contains(set: &ResonantSet, a: &LaurentMatrix) -> Result<bool> {
    set.validate()?;
    if !a.in_unit_cube() {
        return Err(Error::InvalidArgument("matrix is not in the unit cube".into()));
    }
    let target = set.coprime_target()?;
    for col in row_times_matrix(&set.q, a)? {
        if !abs_below(&col.frac_part(), set.r)? {
            return Ok(false);
        }
        if let Some(g) = &target {
            if !g.is_coprime(&col.int_part()?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn required_precision(sets: &[ResonantSet]) -> usize {
    sets.iter().map(ResonantSet::required_precision).max().unwrap_or(0)
}

/// Rows of `H` for one column: the coefficients of `X^{-s}`, `s = 1..=r`, in
/// `q·a` as linear forms in the digits `a_{i,t}` (variable `i·depth + t - 1`).
pub fn frac_rows(q: &PolyVector, r: i64, depth: usize) -> Result<Vec<Vec<u32>>> {
    let mut rows = Vec::new();
    for s in 1..=r.max(0) as usize {
        let mut row = vec![0u32; q.m() * depth];
        for (i, qi) in q.entries().iter().enumerate() {
            for (d, &c) in qi.coeffs().iter().enumerate() {
                let t = s + d;
                if c == 0 {
                    continue;
                }
                if t > depth {
                    return Err(Error::Precision(format!("depth {depth} < r + deg q = {}", r as usize + qi.degree().unwrap_or(0))));
                }
                row[i * depth + t - 1] = c;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rows of `M` for one column: the coefficients of `X^e`, `e = 0..deg q`, in
/// `q·a`. Row `e` is the coefficient of `X^e`.
pub fn poly_rows(q: &PolyVector, depth: usize) -> Vec<Vec<u32>> {
    let d = q.max_degree().unwrap_or(0);
    (0..d)
        .map(|e| {
            let mut row = vec![0u32; q.m() * depth];
            for (i, qi) in q.entries().iter().enumerate() {
                for t in 1..=depth {
                    let c = qi.coeff(e + t);
                    if c != 0 {
                        row[i * depth + t - 1] = c;
                    }
                }
            }
            row
        })
        .collect()
}

struct Predicate {
    target: Polynomial,
    offset: usize,
    len: usize,
}

fn column_measure(spec: &FieldSpec, m: usize, sets: &[ResonantSet], depth: usize) -> Result<KadicMeasure> {
    let vars = m * depth;
    let mut h = Matrix::zeros(spec, 0, vars);
    let mut mrows: Vec<Vec<u32>> = Vec::new();
    let mut preds = Vec::new();
    for set in sets {
        set.validate()?;
        if set.q.m() != m {
            return Err(Error::Dimension("sets with different m".into()));
        }
        if set.q.spec() != spec {
            return Err(Error::FieldMismatch);
        }
        let target = set.coprime_target()?;
        if set.required_precision() > depth {
            return Err(Error::Precision(format!(
                "depth {depth} below the required {}",
                set.required_precision()
            )));
        }
        for row in frac_rows(&set.q, set.r, depth)? {
            h.push_row(&row);
        }
        if let Some(target) = target {
            let rows = poly_rows(&set.q, depth);
            preds.push(Predicate { target, offset: mrows.len(), len: rows.len() });
            mrows.extend(rows);
        }
    }
    let kernel = h.kernel();
    let rank = vars - kernel.len();
    if preds.is_empty() {
        return Ok(KadicMeasure::power(spec.k(), rank as i64));
    }
    let mm = Matrix::from_rows(spec, vars, &mrows);
    let images: Vec<Vec<u32>> = kernel.iter().map(|v| mm.mul_vec(v)).collect();
    let basis = span_basis(spec, mrows.len(), &images);
    let bits = basis.len() as f64 * (spec.k() as f64).log2();
    if bits > MAX_IMAGE_BITS {
        return Err(Error::ScaleExceeded(format!("image of dimension {} over F_{}", basis.len(), spec.k())));
    }
    let mut good = 0u64;
    for_each_in_span(spec, mrows.len(), &basis, |y| {
        let ok = preds.iter().all(|p| {
            let coeffs = y[p.offset..p.offset + p.len].to_vec();
            let poly = Polynomial::from_raw(spec, coeffs);
            p.target.is_coprime(&poly)
        });
        if ok {
            good += 1;
        }
    });
    Ok(KadicMeasure::new(spec.k(), BigUint::from(good), (rank + basis.len()) as i64))
}

/// `μ(∩ sets)` for `m × n` matrices, computed at digit depth `depth`.
pub fn measure_intersection(sets: &[ResonantSet], n: usize, depth: usize) -> Result<KadicMeasure> {
    let first = sets.first().ok_or_else(|| Error::InvalidArgument("no sets given".into()))?;
    if n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    let spec = first.q.spec().clone();
    let col = column_measure(&spec, first.q.m(), sets, depth)?;
    Ok(col.pow(n as u32))
}

pub fn measure_set(set: &ResonantSet, n: usize, depth: usize) -> Result<KadicMeasure> {
    measure_intersection(std::slice::from_ref(set), n, depth)
}

/// `μ(B(q, k^{-r}))`.
pub fn measure_b(q: &PolyVector, r: i64, n: usize, depth: usize) -> Result<KadicMeasure> {
    measure_set(&ResonantSet::b(q.clone(), r), n, depth)
}

/// `μ(B'(q, k^{-r}))`.
pub fn measure_b_prime(q: &Polynomial, r: i64, n: usize, depth: usize) -> Result<KadicMeasure> {
    measure_set(&ResonantSet::b_prime(q.clone(), r), n, depth)
}

/// `μ(B''(q, k^{-r}))`.
pub fn measure_b_dprime(q: &PolyVector, r: i64, n: usize, depth: usize) -> Result<KadicMeasure> {
    measure_set(&ResonantSet::b_dprime(q.clone(), r), n, depth)
}
