//! Measures by exhaustive enumeration of `U` at a fixed digit depth.
//!
//! Membership is decided from the definitions: `A ∈ B(q, k^{-r})` when some
//! `p ∈ F[X]^n` with `|p|_∞ ≤ |q|_∞` (and the coprimality condition for `B'`,
//! `B''`) has `|qA - p|_∞ < k^{-r}`. All arithmetic goes through Laurent series;
//! nothing here shares code with the linear-algebra route.

use num_bigint::BigUint;

use super::{KadicMeasure, ResonantSet, SetKind};
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::laurent::{abs_below, row_times_matrix, LaurentMatrix, LaurentSeries};
use crate::poly::{polys_below_degree, Polynomial};

/// Largest `m·n·depth·log2 k` we enumerate.
pub const MAX_BRUTE_BITS: f64 = 24.0;

fn candidates(set: &ResonantSet) -> Result<(Vec<Polynomial>, Option<Polynomial>)> {
    let spec = set.q.spec();
    let d = set.q.max_degree().ok_or(Error::ZeroPolynomial("resonant set"))?;
    let target = match set.kind {
        SetKind::B => None,
        SetKind::BPrime => Some(set.q.get(0).clone()),
        SetKind::BDoublePrime => Some(set.q.gcd()?),
    };
    let ps = polys_below_degree(spec, d + 1)
        .filter(|p| target.as_ref().is_none_or(|g| g.is_coprime(p)))
        .collect();
    Ok((ps, target))
}

/// Whether the matrix `a` lies in `set`, at the precision carried by `a`.
pub fn contains(set: &ResonantSet, a: &LaurentMatrix) -> Result<bool> {
    let (ps, _) = candidates(set)?;
    contains_with(set, &ps, a)
}

fn contains_with(set: &ResonantSet, ps: &[Polynomial], a: &LaurentMatrix) -> Result<bool> {
    let qa = row_times_matrix(&set.q, a)?;
    for col in &qa {
        let mut hit = false;
        for p in ps {
            if abs_below(&col.sub(&LaurentSeries::from_poly(p)), set.r)? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `visit` with every depth-`depth` point of `U` in `m × n` matrices.
pub fn for_each_point(
    spec: &FieldSpec,
    m: usize,
    n: usize,
    depth: usize,
    mut visit: impl FnMut(&LaurentMatrix) -> Result<()>,
) -> Result<()> {
    let digits = m * n * depth;
    if digits as f64 * (spec.k() as f64).log2() > MAX_BRUTE_BITS {
        return Err(Error::ScaleExceeded(format!("{digits} digits over F_{}", spec.k())));
    }
    let total = (spec.k() as u64).pow(digits as u32);
    let k = spec.k() as u64;
    let mut buf = vec![0u32; digits];
    for idx in 0..total {
        let mut x = idx;
        for d in buf.iter_mut() {
            *d = (x % k) as u32;
            x /= k;
        }
        visit(&LaurentMatrix::from_digits(spec, m, n, depth, &buf)?)?;
    }
    Ok(())
}

/// `μ(∩ sets)` by counting depth-`depth` cylinders.
pub fn measure_intersection(sets: &[ResonantSet], n: usize, depth: usize) -> Result<KadicMeasure> {
    let first = sets.first().ok_or_else(|| Error::InvalidArgument("no sets given".into()))?;
    let spec = first.q.spec().clone();
    let m = first.q.m();
    let prepared: Vec<_> = sets.iter().map(|s| candidates(s).map(|c| c.0)).collect::<Result<_>>()?;
    let mut count = 0u64;
    for_each_point(&spec, m, n, depth, |a| {
        for (set, ps) in sets.iter().zip(&prepared) {
            if !contains_with(set, ps, a)? {
                return Ok(());
            }
        }
        count += 1;
        Ok(())
    })?;
    Ok(KadicMeasure::new(spec.k(), BigUint::from(count), (m * n * depth) as i64))
}

pub fn measure_set(set: &ResonantSet, n: usize, depth: usize) -> Result<KadicMeasure> {
    measure_intersection(std::slice::from_ref(set), n, depth)
}
