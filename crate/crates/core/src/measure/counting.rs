use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{polys_below_degree, PolyVector, Polynomial};

/// Whether `q` and `q'` span a line over `F(X)`.
pub fn linearly_dependent(q: &PolyVector, q2: &PolyVector) -> Result<bool> {
    if q.m() != q2.m() {
        return Err(Error::Dimension("vectors of different length".into()));
    }
    if q.is_zero() || q2.is_zero() {
        return Ok(true);
    }
    Ok(q.primitive()?.1 == q2.primitive()?.1)
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    /// `λ` and `λ'` after ordering so that `|λ| ≥ |λ'|`.
    pub lambda: Polynomial,
    pub lambda_prime: Polynomial,
    pub swapped: bool,
    /// Admissible pairs `(p_j, p'_j)` in a single coordinate with
    /// `|p_j| < |q|_∞`, `|p'_j| < |q'|_∞`: the pairs whose sets `H` are nonempty.
    pub per_coordinate: u64,
    /// `per_coordinate^n`.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub count: BigUint,
    /// The same with `|p_j| ≤ |q|_∞`, `|p'_j| ≤ |q'|_∞`.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub count_inclusive: BigUint,
    /// `(|q'|ε + |q|ε')^n` as an exact rational string.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub bound: BigRational,
    pub within_bound: bool,
    pub inclusive_within_bound: bool,
}

/// The number of pairs `p, p' ∈ F[X]^n` with `|p|_∞ < |q|_∞`,
/// `|p'|_∞ < |q'|_∞`, `(p_j, λ) = (p'_j, λ') = 1` and
/// `|λ' p_j - λ p'_j| < ε |λ'|` for all `j`, where `q = λ q̂`, `q' = λ' q̂`
/// with `q̂` primitive and the pair ordered so that `|λ| ≥ |λ'|`
/// (`ε = k^{-r}`, `ε' = k^{-r'}`). The count with `≤` in the norm
/// conditions is reported alongside.
pub fn count_n(q: &PolyVector, q2: &PolyVector, r: i64, r2: i64, n: usize) -> Result<CountReport> {
    if q.is_zero() || q2.is_zero() {
        return Err(Error::ZeroPolynomial("counting pairs"));
    }
    if !linearly_dependent(q, q2)? {
        return Err(Error::NotDependent);
    }
    let spec = q.spec();
    let k = BigInt::from(spec.k());
    let (l1, _) = q.primitive()?;
    let (l2, _) = q2.primitive()?;
    let bound_base = pow_k(&k, q2.max_degree().unwrap() as i64 - r) + pow_k(&k, q.max_degree().unwrap() as i64 - r2);
    let bound = num_traits::pow(bound_base, n);

    let swapped = l1.degree() < l2.degree();
    let (big, small, qa, qb, eps) = if swapped { (l2, l1, q2, q, r2) } else { (l1, l2, q, q2, r) };
    let da = qa.max_degree().unwrap();
    let db = qb.max_degree().unwrap();
    let ps: Vec<Polynomial> = polys_below_degree(spec, da + 1).filter(|p| p.is_coprime(&big)).collect();
    let ps2: Vec<Polynomial> = polys_below_degree(spec, db + 1).filter(|p| p.is_coprime(&small)).collect();
    // |λ' p - λ p'| < k^{-eps} |λ'|  ⇔  deg(λ' p - λ p') < deg λ' - eps
    let limit = small.degree().unwrap() as i64 - eps;
    let (mut per, mut inclusive) = (0u64, 0u64);
    for p in &ps {
        let lp = small.mul(p);
        for p2 in &ps2 {
            let diff = lp.sub(&big.mul(p2));
            if diff.degree().is_none_or(|d| (d as i64) < limit) {
                inclusive += 1;
                if p.degree().is_none_or(|d| d < da) && p2.degree().is_none_or(|d| d < db) {
                    per += 1;
                }
            }
        }
    }
    let count = BigUint::from(per).pow(n as u32);
    let count_inclusive = BigUint::from(inclusive).pow(n as u32);
    let within_bound = BigRational::from_integer(BigInt::from(count.clone())) <= bound;
    let inclusive_within_bound = BigRational::from_integer(BigInt::from(count_inclusive.clone())) <= bound;
    Ok(CountReport {
        lambda: big,
        lambda_prime: small,
        swapped,
        per_coordinate: per,
        count,
        count_inclusive,
        bound,
        within_bound,
        inclusive_within_bound,
    })
}

fn pow_k(k: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(k.pow(e as u32))
    } else {
        BigRational::new(BigInt::from(1), k.pow((-e) as u32))
    }
}
