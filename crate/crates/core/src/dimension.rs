//! Dimension formulas for `W_S(m, n; ψ)` and `W(m, n; ψ)`, their mutual
//! consistency, and the s-length of the natural cover.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{self, log_k, ApproxFunction, SetFamily};
use crate::serde_util::format_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    FullMeasure,
    Dimension,
    CriticalUndecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionVerdict {
    pub regime: Regime,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub dim: BigRational,
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_str")]
    pub v_s: Option<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_str")]
    pub lambda: Option<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_str")]
    pub eta: Option<BigRational>,
}

fn opt_str<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::serde_util::rational_opt(r, s)
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be at least 1".into()));
    }
    Ok(())
}

/// `n(m - 1) + (n + v(S))/(1 + λ)`.
pub fn theorem1_dimension(m: usize, n: usize, v_s: &BigRational, lambda: &BigRational) -> BigRational {
    int(n * (m - 1)) + (int(n) + v_s) / (BigRational::one() + lambda)
}

/// The measure and dimension of `W_S(m, n; ψ)` from `v(S)` and `λ(ψ)`: full
/// measure when `nλ < v(S)`, otherwise dimension `n(m - 1) + (n + v(S))/(1 + λ)`,
/// with the measure undecided at `nλ = v(S)`.
pub fn theorem1_verdict(m: usize, n: usize, v_s: &BigRational, lambda: &BigRational) -> Result<DimensionVerdict> {
    check_mn(m, n)?;
    if v_s.is_negative() || *v_s > int(m) {
        return Err(Error::InvalidArgument(format!("v(S) = {} outside [0, {m}]", format_rational(v_s))));
    }
    if lambda.is_negative() {
        return Err(Error::InvalidArgument("λ must be non-negative".into()));
    }
    let nl = int(n) * lambda;
    let (regime, dim) = if nl < *v_s {
        (Regime::FullMeasure, int(m * n))
    } else if nl == *v_s {
        (Regime::CriticalUndecided, theorem1_dimension(m, n, v_s, lambda))
    } else {
        (Regime::Dimension, theorem1_dimension(m, n, v_s, lambda))
    };
    Ok(DimensionVerdict { regime, dim, m, n, v_s: Some(v_s.clone()), lambda: Some(lambda.clone()), eta: None })
}

/// `dim W(m, n; ψ) = n(m - 1) + min(η(ψ), n)`.
pub fn theorem2_verdict(m: usize, n: usize, eta: &BigRational) -> Result<DimensionVerdict> {
    check_mn(m, n)?;
    if eta.is_negative() {
        return Err(Error::InvalidArgument("η must be non-negative".into()));
    }
    let dim = int(n * (m - 1)) + eta.clone().min(int(n));
    Ok(DimensionVerdict { regime: Regime::Dimension, dim, m, n, v_s: None, lambda: None, eta: Some(eta.clone()) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub theorem1: DimensionVerdict,
    /// Theorem 2 with `η` of `ψ̂` in closed form, where available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem2_exact: Option<DimensionVerdict>,
    /// `η` of `ψ̂` estimated from block sums.
    pub eta_estimate: f64,
    pub theorem2_estimate: f64,
    pub difference: f64,
    pub agree: bool,
}

/// Compares the two dimension formulas for `ψ = |q|_∞^{-v}` restricted to `S`:
/// Theorem 1 with `v(S)` and `λ = v`, Theorem 2 with `η(ψ̂)`.
pub fn consistency_check(s: &SetFamily, v: &BigRational, n: usize, n_max: usize, tolerance: f64) -> Result<ConsistencyReport> {
    let m = s.m();
    let v_s = exponents::v_of_s_rational(s, n_max)?;
    let theorem1 = theorem1_verdict(m, n, &v_s, v)?;
    let psi = ApproxFunction::power(s.spec(), m, v.clone()).restricted(s)?;
    let eta = exponents::eta_of_psi(&psi, n, n_max, tolerance)?;
    let theorem2_estimate = (n * (m - 1)) as f64 + eta.estimate.min(n as f64);
    let theorem2_exact = match s.kind() {
        exponents::FamilyKind::AllNonzero => {
            Some(theorem2_verdict(m, n, &(int(m + n) / (BigRational::one() + v.clone().max(BigRational::zero()))))?)
        }
        _ => None,
    };
    let difference = (theorem1.dim.to_f64().unwrap() - theorem2_estimate).abs();
    let agree = match &theorem2_exact {
        Some(t2) => t2.dim == theorem1.dim && difference <= tolerance,
        None => difference <= tolerance,
    };
    Ok(ConsistencyReport { theorem1, theorem2_exact, eta_estimate: eta.estimate, theorem2_estimate, difference, agree })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverBlock {
    pub n: usize,
    /// `log_k` of the number of balls covering one neighbourhood of `H(q, p)`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub balls_exponent: BigRational,
    /// `log_k` of the ball radius, up to the factor 2.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub radius_exponent: BigRational,
    /// `log_k` of the block's contribution to the s-length majorant.
    pub log_term: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub s: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub lambda: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub v_s: BigRational,
    /// `n(m - 1) + (n + v(S))/(1 + λ)`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub threshold: BigRational,
    /// `s` exceeds the threshold.
    pub above_threshold: bool,
    /// The `ε` actually used: the supplied one, halved until the majorant's
    /// block exponent is negative when `s` is above the threshold.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub epsilon: BigRational,
    /// `log_k M`.
    pub m_exponent: usize,
    pub blocks: Vec<CoverBlock>,
    /// `log_k` of the partial sums over `k^j ≤ |q|_∞ ≤ k^{N_max}`, for
    /// `j = log_k M, …, N_max`.
    pub tail_sums: Vec<Option<f64>>,
    /// Growth rate of the block terms: negative means geometric decay in `M`.
    pub growth: Option<f64>,
    pub converges: bool,
}

/// The s-length majorant of the cover by balls of radius
/// `2|q|_∞^{-λ+ε-1}` around the neighbourhoods of `H(q, p)`,
/// `Σ_{q ∈ S, |q|_∞ ≥ M} Σ_{|p| ≤ |q|_∞} |q|_∞^{(1+λ-ε)n(m-1)} |q|_∞^{-(1+λ-ε)s}`,
/// with its implied constants set to 1.
pub fn s_length(
    s_family: &SetFamily,
    lambda: &BigRational,
    epsilon: &BigRational,
    s: &BigRational,
    m_exponent: usize,
    n: usize,
    n_max: usize,
) -> Result<CoverReport> {
    let m = s_family.m();
    check_mn(m, n)?;
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    if !s.is_positive() || *s > int(m * n) {
        return Err(Error::InvalidArgument(format!("s = {} outside (0, {}]", format_rational(s), m * n)));
    }
    if m_exponent > n_max {
        return Err(Error::InvalidArgument("M exceeds k^N_max".into()));
    }
    let v_s = exponents::v_of_s_rational(s_family, n_max.max(4))?;
    let threshold = theorem1_dimension(m, n, &v_s, lambda);
    let above_threshold = *s > threshold;
    let k = s_family.spec().k();
    // per-q exponent of |q|_∞: n from the count of p, then the balls and radius
    let exponent = |eps: &BigRational| {
        let scale = BigRational::one() + lambda - eps;
        int(n) + &scale * int(n * (m - 1)) - &scale * s
    };
    let mut epsilon = epsilon.clone();
    if above_threshold {
        for _ in 0..64 {
            if (&v_s + exponent(&epsilon)).is_negative() {
                break;
            }
            epsilon /= BigInt::from(2);
        }
    }
    let per_q = exponent(&epsilon);
    let per_q_f = per_q.to_f64().unwrap();
    let scale = BigRational::one() + lambda - &epsilon;
    let blocks: Vec<CoverBlock> = (0..=n_max)
        .map(|b| {
            let count = s_family.block_count(b);
            let log_term = (!count.is_zero() && b >= m_exponent).then(|| log_k(&count, k) + b as f64 * per_q_f);
            CoverBlock {
                n: b,
                balls_exponent: &scale * int(n * (m - 1) * b),
                radius_exponent: -(&scale * int(b)),
                log_term,
            }
        })
        .collect();
    let kf = k as f64;
    let mut tail_sums = vec![None; n_max + 1 - m_exponent];
    let mut acc: Option<f64> = None;
    for b in (m_exponent..=n_max).rev() {
        if let Some(t) = blocks[b].log_term {
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    let hi = a.max(t);
                    hi + (kf.powf(a - hi) + kf.powf(t - hi)).ln() / kf.ln()
                }
            });
        }
        tail_sums[b - m_exponent] = acc;
    }
    let logs: Vec<Option<f64>> = blocks.iter().map(|b| b.log_term).collect();
    let growth = tail_slope_of(&logs);
    Ok(CoverReport {
        s: s.clone(),
        lambda: lambda.clone(),
        v_s,
        threshold,
        above_threshold,
        epsilon,
        m_exponent,
        blocks,
        tail_sums,
        growth,
        converges: growth.is_some_and(|g| g < 0.0),
    })
}

/// Growth rate of block terms: slope over the last half of the nonempty
/// blocks.
fn tail_slope_of(logs: &[Option<f64>]) -> Option<f64> {
    let pts: Vec<(usize, f64)> = logs.iter().enumerate().filter_map(|(i, l)| l.map(|l| (i, l))).collect();
    let (&(n1, y1), &(n0, y0)) = (pts.last()?, pts.get(pts.len() / 2)?);
    if n1 == n0 {
        return None;
    }
    Some((y1 - y0) / (n1 - n0) as f64)
}
