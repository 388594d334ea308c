//! Distances to the affine sets `H(q, p)`, the inclusion between the
//! neighbourhoods `B(q; ρ)` and `B̃(q; ρ̃)`, and the scaling of balls by `X^{r0}`.

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use super::{frac_rows, KadicMeasure};
use crate::abs::AbsValue;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::laurent::{max_abs, row_times_matrix, LaurentMatrix, LaurentSeries};
use crate::linalg::{in_span, span_basis, Matrix};
use crate::poly::{polys_below_degree, PolyVector};

/// `dist(A, H(q, p))` in the max norm, where `H(q, p) = {A' ∈ U : qA' = p}`.
///
/// Moving `A` by `D` changes `qA` by `qD` and `|qD|_∞ ≤ |q|_∞ |D|_∞`, with
/// equality for `D` supported on a coordinate of maximal degree, so the
/// distance is `|qA - p|_∞ / |q|_∞`.
pub fn dist_to_h(a: &LaurentMatrix, q: &PolyVector, p: &PolyVector) -> Result<AbsValue> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("affine set H(0, p)"));
    }
    if p.m() != a.cols() {
        return Err(Error::Dimension(format!("p has {} entries, A has {} columns", p.m(), a.cols())));
    }
    let qn = q.norm_inf();
    if p.norm_inf() >= qn {
        return Err(Error::EmptyAffineSet(format!("|p| = {} is not below |q| = {qn}", p.norm_inf())));
    }
    let qa = row_times_matrix(q, a)?;
    let diffs: Vec<LaurentSeries> = qa.iter().zip(p.entries()).map(|(c, pj)| c.sub(&LaurentSeries::from_poly(pj))).collect();
    Ok(match max_abs(&diffs)? {
        AbsValue::Zero => AbsValue::Zero,
        d => d.div(qn),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    /// `ρ = k^{-r}`.
    pub r: i64,
    /// `ρ̃ = k^{-s}`.
    pub s: i64,
    pub depth: usize,
    /// The first `s` digits of each entry of one column of a point of
    /// `B(q; ρ)` whose cylinder misses `B̃(q; ρ̃)`, entry by entry.
    pub witness: Option<Vec<u32>>,
}

/// Checks `B(q; k^{-r}) ⊆ B̃(q; k^{-s})` where
/// `B̃(q; ε) = {A ∈ U : dist(A, ∪_p H(q, p)) < ε}`.
///
/// Both sets are subgroups of `U` determined column by column, and `B̃` is
/// determined by the first `s` digits. So the inclusion holds iff the
/// projection of `B` to those digits lies in the projection of
/// `L = ∪_p H(q, p)`. Both projections are computed as spans of kernel vectors
/// at digit depth `depth`; `L` is cut to the constraints visible at that depth.
pub fn check_inclusion(q: &PolyVector, r: i64, s: i64, depth: usize) -> Result<InclusionReport> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("inclusion check"));
    }
    let spec = q.spec();
    let d = q.max_degree().unwrap();
    let mut report = InclusionReport { holds: true, r, s, depth, witness: None };
    if s <= 0 {
        // B̃ is all of U: the zero matrix lies in H(q, 0)
        return Ok(report);
    }
    let s = s as usize;
    if depth < s + d || (depth as i64) < r + d as i64 {
        return Err(Error::Precision(format!("depth {depth} too small for s = {s}, r = {r}, deg q = {d}")));
    }
    let m = q.m();
    let vars = m * depth;
    let project = |v: &[u32]| -> Vec<u32> {
        (0..m).flat_map(|i| v[i * depth..i * depth + s].iter().copied()).collect()
    };
    let proj_basis = |rows: Vec<Vec<u32>>| -> Vec<Vec<u32>> {
        let kernel = Matrix::from_rows(spec, vars, &rows).kernel();
        let projected: Vec<_> = kernel.iter().map(|v| project(v)).collect();
        span_basis(spec, m * s, &projected)
    };
    let b = proj_basis(frac_rows(q, r, depth)?);
    let l = proj_basis(frac_rows(q, (depth - d) as i64, depth)?);
    report.witness = b.into_iter().find(|v| !in_span(spec, m * s, &l, v));
    report.holds = report.witness.is_none();
    Ok(report)
}

/// The inclusion `B(q; ρ(k^N)) ⊆ B̃(q; ρ̃(k^N))` with `ρ = k^{-r}` and
/// `ρ̃ = ρ k^{-N+1}`, for `q` with `|q|_∞ = k^N`.
pub fn check_shrunk_inclusion(q: &PolyVector, n_t: usize, r: i64, depth: usize) -> Result<InclusionReport> {
    if q.max_degree() != Some(n_t) {
        return Err(Error::InvalidArgument(format!("q has |q| = {}, expected k^{n_t}", q.norm_inf())));
    }
    check_inclusion(q, r, r + n_t as i64 - 1, depth)
}

/// A ball `{A : |A - c|_∞ < k^{-depth}}` in `m × n` matrices over `U`, given
/// by the first `depth` digits of each entry of its centre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub m: usize,
    pub n: usize,
    pub depth: usize,
    pub digits: Vec<u32>,
}

impl Cylinder {
    pub fn new(m: usize, n: usize, depth: usize, digits: Vec<u32>) -> Result<Self> {
        if digits.len() != m * n * depth {
            return Err(Error::Dimension("digit count does not match m*n*depth".into()));
        }
        Ok(Self { m, n, depth, digits })
    }

    pub fn random<R: Rng>(spec: &FieldSpec, m: usize, n: usize, depth: usize, rng: &mut R) -> Self {
        let digits = (0..m * n * depth).map(|_| rng.gen_range(0..spec.k())).collect();
        Self { m, n, depth, digits }
    }

    fn digit(&self, entry: usize, t: usize) -> u32 {
        self.digits[entry * self.depth + t - 1]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleReport {
    pub r0: usize,
    /// `μ(X^{r0} C)`, recounted.
    pub scaled: KadicMeasure,
    /// `k^{mn r0} μ(C)`.
    pub predicted: KadicMeasure,
    pub holds: bool,
}

/// Recounts `μ(X^{r0} C)` and compares it with `k^{mn r0} μ(C)`.
///
/// `X^{r0} C` is split along the translates `P + U` with `P` a polynomial
/// matrix of degree `< r0`; in each translate the points `P + F` whose image
/// `X^{-r0}(P + F)` lies in `C` are counted by Laurent arithmetic.
pub fn scale_measure_check(spec: &FieldSpec, c: &Cylinder, r0: usize) -> Result<ScaleReport> {
    let entries = c.m * c.n;
    let tail = c.depth.saturating_sub(r0);
    let bits = (entries * (tail + r0)) as f64 * (spec.k() as f64).log2();
    if bits > super::brute::MAX_BRUTE_BITS {
        return Err(Error::ScaleExceeded(format!("{bits} bits of enumeration")));
    }
    let k = spec.k() as u64;
    let polys: Vec<_> = polys_below_degree(spec, r0).collect();
    let fracs: Vec<Vec<u32>> = (0..k.pow(tail as u32))
        .map(|mut i| {
            (0..tail)
                .map(|_| {
                    let d = (i % k) as u32;
                    i /= k;
                    d
                })
                .collect()
        })
        .collect();
    // each entry is scaled independently, so the count factors over entries
    let mut total = BigUint::from(1u32);
    for e in 0..entries {
        let mut count = 0u64;
        for p in &polys {
            for f in &fracs {
                let point = LaurentSeries::from_poly(p).add(&LaurentSeries::from_digits(spec, f));
                let back = point.shift(-(r0 as i64));
                let inside = (1..=c.depth).all(|t| back.coeff(t as i64).ok() == Some(c.digit(e, t)));
                if inside {
                    count += 1;
                }
            }
        }
        total *= count;
    }
    let scaled = KadicMeasure::new(spec.k(), total, (entries * tail) as i64);
    let predicted = KadicMeasure::power(spec.k(), (entries * c.depth) as i64).scale_pow((entries * r0) as i64);
    let holds = scaled == predicted;
    Ok(ScaleReport { r0, scaled, predicted, holds })
}
