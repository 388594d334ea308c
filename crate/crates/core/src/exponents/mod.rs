//! The exponents `v(S)`, `λ(ψ)`, `η(ψ)` and the counting quantities
//! `C(N, v; ψ)`, `γ(v; ψ)`, `δ(v; ψ)`, `δ(ψ)`, `C(N; S)`, `γ(S)`.
//!
//! Limits and limsups are estimated from exact block counts. A limsup of
//! `log_k a_N / N` is estimated as the largest slope of `log_k a` across a
//! dyadic window `[N/2, N]` in the tail `N_max/2 ≤ N ≤ N_max`, which removes
//! constant factors from the counts.

mod family;
mod psi;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use family::{all_block_count, BlockRow, BlockTable, DegreeRule, FamilyConfig, FamilyKind, SetFamily};
pub use psi::{ApproxFunction, ProfilePart, PsiConfig};

use crate::error::{Error, Result};

/// Default tolerance for limit estimates.
pub const DEFAULT_TOLERANCE: f64 = 0.1;

/// `log_k x` for arbitrarily large `x > 0`.
pub fn log_k(x: &BigUint, k: u32) -> f64 {
    let bits = x.bits();
    let (mantissa, shift) = if bits > 512 { (x >> (bits - 64), bits - 64) } else { (x.clone(), 0) };
    (mantissa.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2) / (k as f64).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    #[serde(serialize_with = "crate::serde_util::rational_opt")]
    pub exact: Option<BigRational>,
    /// The window `[N', N]` that attained the estimate.
    pub window: [usize; 2],
}

/// Largest dyadic-window slope over the tail of `values` (indexed by `N`,
/// `None` where the underlying count is zero).
fn tail_slope(values: &[Option<f64>]) -> Option<(f64, [usize; 2])> {
    let n_max = values.len().checked_sub(1)?;
    let mut best: Option<(f64, [usize; 2])> = None;
    for n in (n_max / 2).max(1)..=n_max {
        let Some(y) = values[n] else { continue };
        let lower = (0..=n / 2).rev().find(|&j| values[j].is_some());
        let (slope, from) = match lower {
            Some(j) => ((y - values[j].unwrap()) / (n - j) as f64, j),
            None => (y / n as f64, 0),
        };
        if best.is_none_or(|(b, _)| slope > b) {
            best = Some((slope, [from, n]));
        }
    }
    best
}

fn logs(counts: &[BigUint], k: u32) -> Vec<Option<f64>> {
    counts.iter().map(|c| (!c.is_zero()).then(|| log_k(c, k))).collect()
}

fn check_infinite(s: &SetFamily) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if s.is_finite() {
        return Err(Error::FiniteFamily);
    }
    Ok(())
}

/// `#S_N` and `C(k^N; S)` for `N ≤ N_max`.
pub fn block_counts(s: &SetFamily, n_max: usize) -> BlockTable {
    s.block_table(n_max)
}

/// `v(S)`, the convergence exponent of `Σ_{q ∈ S} |q|_∞^{-v}`.
///
/// Grouped by blocks the series is `Σ_N #S_N k^{-Nv}`, so by the root test
/// `v(S) = limsup log_k #S_N / N`, estimated from the block counts.
pub fn v_of_s(s: &SetFamily, n_max: usize) -> Result<Estimate> {
    if n_max < 4 {
        return Err(Error::InvalidArgument("N_max must be at least 4".into()));
    }
    check_infinite(s)?;
    let table = s.block_table(n_max);
    let (estimate, window) = tail_slope(&logs(&table.counts(), s.spec().k())).unwrap_or((0.0, [0, n_max]));
    Ok(Estimate { estimate: estimate.max(0.0), exact: s.oracle_v(), window })
}

/// `γ(S) = sup{γ : limsup C(N; S) N^{-γ} > 0}`, from the cumulative counts.
///
/// `C` is a step function, so only the norms where it jumps (`S_N ≠ ∅`) are
/// used as window ends; otherwise a window ending just after a jump and one
/// starting just before one see a spurious slope.
pub fn gamma_of_s(s: &SetFamily, n_max: usize) -> Result<Estimate> {
    check_infinite(s)?;
    let table = s.block_table(n_max);
    let k = s.spec().k();
    let values: Vec<Option<f64>> = table
        .rows
        .iter()
        .map(|row| (!row.count.is_zero()).then(|| log_k(&row.cumulative, k)))
        .collect();
    let (estimate, window) = tail_slope(&values).unwrap_or((0.0, [0, n_max]));
    Ok(Estimate { estimate: estimate.max(0.0), exact: s.oracle_v(), window })
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaEstimate {
    pub estimate: f64,
    #[serde(serialize_with = "crate::serde_util::rational_opt")]
    pub exact: Option<BigRational>,
    /// `max - min` of `-log_k ψ / log_k |q|_∞` over the last quarter of the
    /// range; a large spread means the limit does not exist.
    pub oscillation: f64,
    pub converged: bool,
}

/// `λ(ψ) = lim -log ψ(q) / log |q|_∞` along `S`, estimated by the
/// least-squares slope of `-log_k ψ` against `N` over the tail.
pub fn lambda_of_psi(psi: &ApproxFunction, s: &SetFamily, n_max: usize, tolerance: f64) -> Result<LambdaEstimate> {
    let points: Vec<(f64, f64)> =
        (1..=n_max).filter_map(|n| psi.exponent_along(s, n).map(|e| (n as f64, -e as f64))).collect();
    if points.is_empty() {
        return Err(Error::PsiVanishes);
    }
    let tail: Vec<_> = points.iter().copied().filter(|&(n, _)| n >= (n_max / 2) as f64).collect();
    let tail = if tail.len() >= 2 { tail } else { points.clone() };
    let estimate = if tail.len() >= 2 {
        let len = tail.len() as f64;
        let mx = tail.iter().map(|p| p.0).sum::<f64>() / len;
        let my = tail.iter().map(|p| p.1).sum::<f64>() / len;
        let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = tail.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    } else {
        tail[0].1 / tail[0].0
    };
    let quarter: Vec<f64> =
        points.iter().filter(|&&(n, _)| n >= (3 * n_max / 4) as f64).map(|&(n, y)| y / n).collect();
    let oscillation = if quarter.len() >= 2 {
        quarter.iter().cloned().fold(f64::MIN, f64::max) - quarter.iter().cloned().fold(f64::MAX, f64::min)
    } else {
        0.0
    };
    Ok(LambdaEstimate {
        estimate,
        exact: psi.power_exponent().cloned(),
        oscillation,
        converged: oscillation <= tolerance,
    })
}

/// `log_k` of the block term `Σ_{|q|_∞ = k^N} |q|_∞^n (ψ(q)/|q|_∞)^η`, with
/// `ψ` capped at `1`.
fn eta_block_log(psi: &ApproxFunction, n: usize, big_n: usize, eta: f64) -> Option<f64> {
    let k = psi.spec().k();
    let terms: Vec<f64> = psi
        .profile(big_n)
        .into_iter()
        .filter(|p| !p.count.is_zero())
        .filter_map(|p| {
            let e = p.exponent?.min(0);
            Some(log_k(&p.count, k) + (n * big_n) as f64 + (e - big_n as i64) as f64 * eta)
        })
        .collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return None;
    }
    let kf = k as f64;
    Some(top + terms.iter().map(|t| kf.powf(t - top)).sum::<f64>().ln() / kf.ln())
}

/// The growth rate `limsup log_k T_N(η) / N` of the block terms.
fn eta_growth(psi: &ApproxFunction, n: usize, n_max: usize, eta: f64) -> Option<f64> {
    let values: Vec<Option<f64>> = (0..=n_max).map(|b| eta_block_log(psi, n, b, eta)).collect();
    tail_slope(&values).map(|(s, _)| s)
}

fn eta_root(psi: &ApproxFunction, n: usize, n_max: usize) -> Result<f64> {
    let hi_bound = (psi.m() + n) as f64;
    let growth = |eta: f64| eta_growth(psi, n, n_max, eta).unwrap_or(f64::NEG_INFINITY);
    if (0..=n_max).all(|b| eta_block_log(psi, n, b, 0.0).is_none()) {
        return Err(Error::PsiVanishes);
    }
    if growth(0.0) < 0.0 {
        return Ok(0.0);
    }
    if growth(hi_bound) >= 0.0 {
        return Ok(hi_bound);
    }
    let (mut lo, mut hi) = (0.0, hi_bound);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if growth(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaEstimate {
    pub estimate: f64,
    #[serde(serialize_with = "crate::serde_util::rational_opt")]
    pub exact: Option<BigRational>,
    /// The estimate using only blocks up to `3 N_max / 4`.
    pub shorter: f64,
    /// The two estimates differ by more than the tolerance.
    pub slow_convergence: bool,
}

/// `η(ψ) = inf{η : Σ_q |q|_∞^n (ψ(q)/|q|_∞)^η < ∞}`, the root of the block
/// growth rate as a function of `η`.
pub fn eta_of_psi(psi: &ApproxFunction, n: usize, n_max: usize, tolerance: f64) -> Result<EtaEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let estimate = eta_root(psi, n, n_max)?;
    let shorter = eta_root(psi, n, (3 * n_max / 4).max(2)).unwrap_or(0.0);
    let exact = match psi.config() {
        PsiConfig::Power { v } | PsiConfig::PowerLog { v, .. } => {
            let v = if v.is_negative() { BigRational::zero() } else { v.clone() };
            Some(BigRational::from_integer(BigInt::from(psi.m() + n)) / (v + BigRational::one()))
        }
        _ => None,
    };
    Ok(EtaEstimate { estimate, exact, shorter, slow_convergence: (estimate - shorter).abs() > tolerance })
}

/// Whether `k^e ≥ k^{-vN}`.
fn at_least_power(e: Option<i64>, v: &BigRational, big_n: usize) -> bool {
    e.is_some_and(|e| BigRational::from_integer(e.into()) >= -(v * BigInt::from(big_n)))
}

/// `C(k^j, v; ψ) = #{q : |q|_∞ ≤ k^j, ψ(q) ≥ |q|_∞^{-v}}`.
pub fn c_of(j: usize, v: &BigRational, psi: &ApproxFunction) -> BigUint {
    (0..=j)
        .flat_map(|b| psi.profile(b).into_iter().filter(move |p| at_least_power(p.exponent, v, b)))
        .map(|p| p.count)
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaEstimate {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub v: BigRational,
    pub estimate: f64,
    /// `C(N, v; ψ)` showed no growth over the tail.
    pub bounded: bool,
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub count: BigUint,
}

/// `γ(v; ψ)`, with `bounded` set when `C(N, v; ψ)` stays constant over the
/// tail (the estimate is then `0`).
pub fn gamma_of(v: &BigRational, psi: &ApproxFunction, n_max: usize) -> GammaEstimate {
    let mut total = BigUint::zero();
    let cumulative: Vec<BigUint> = (0..=n_max)
        .map(|b| {
            for p in psi.profile(b) {
                if at_least_power(p.exponent, v, b) {
                    total += p.count;
                }
            }
            total.clone()
        })
        .collect();
    let bounded = cumulative[n_max] == cumulative[n_max / 2];
    let estimate = if bounded {
        0.0
    } else {
        tail_slope(&logs(&cumulative, psi.spec().k())).map_or(0.0, |(s, _)| s.max(0.0))
    };
    GammaEstimate { v: v.clone(), estimate, bounded, count: cumulative[n_max].clone() }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaEstimate {
    pub gamma: GammaEstimate,
    pub delta: f64,
}

/// `δ(v; ψ) = (n + γ(v; ψ)) / (v + 1)`, or `0` when `C(N, v; ψ)` is bounded.
pub fn delta_of(v: &BigRational, psi: &ApproxFunction, n: usize, n_max: usize) -> DeltaEstimate {
    let gamma = gamma_of(v, psi, n_max);
    let delta = if gamma.bounded { 0.0 } else { (n as f64 + gamma.estimate) / (v.to_f64().unwrap() + 1.0) };
    DeltaEstimate { gamma, delta }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaSup {
    pub delta: f64,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub argmax: BigRational,
    pub per_v: Vec<DeltaEstimate>,
}

/// The grid `{i·step : 0 ≤ i·step ≤ ⌈top⌉}`.
pub fn v_grid(top: f64, step: &BigRational) -> Vec<BigRational> {
    let top = BigRational::from_integer(BigInt::from(top.max(0.0).ceil() as i64));
    let mut out = Vec::new();
    let mut v = BigRational::zero();
    while v <= top {
        out.push(v.clone());
        v += step;
    }
    out
}

/// `δ(ψ) = sup_v δ(v; ψ)` over a finite grid.
pub fn delta_sup(psi: &ApproxFunction, n: usize, grid: &[BigRational], n_max: usize) -> Result<DeltaSup> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty v grid".into()));
    }
    let per_v: Vec<DeltaEstimate> = grid.iter().map(|v| delta_of(v, psi, n, n_max)).collect();
    let best = per_v
        .iter()
        .enumerate()
        .fold(0, |b, (i, d)| if d.delta > per_v[b].delta { i } else { b });
    Ok(DeltaSup { delta: per_v[best].delta, argmax: grid[best].clone(), per_v })
}

/// Whether `c ≥ k^{x}` for a rational `x`.
fn count_at_least_power(c: &BigUint, k: u32, x: &BigRational) -> bool {
    if c.is_zero() {
        return false;
    }
    if !x.is_positive() {
        return true;
    }
    let a = x.numer().to_u32().expect("exponent fits in u32");
    let b = x.denom().to_u32().expect("denominator fits in u32");
    c.pow(b) >= BigUint::from(k).pow(a)
}

/// All `N ≤ N_max` with `#S_N ≥ k^{N(v - δ)}`.
pub fn large_blocks_witnesses(s: &SetFamily, v: &BigRational, delta: &BigRational, n_max: usize) -> Result<Vec<usize>> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("δ must be positive".into()));
    }
    let k = s.spec().k();
    Ok((0..=n_max)
        .filter(|&n| count_at_least_power(&s.block_count(n), k, &((v - delta) * BigInt::from(n))))
        .collect())
}

/// `v(S)` from the closed form when known, otherwise from the estimator (as
/// a rational with denominator 1000).
pub fn v_of_s_rational(s: &SetFamily, n_max: usize) -> Result<BigRational> {
    if let Some(v) = s.oracle_v() {
        return Ok(v);
    }
    let e = v_of_s(s, n_max)?.estimate;
    Ok(BigRational::new(BigInt::from((e * 1000.0).round() as i64), BigInt::from(1000)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitBlock {
    pub n: usize,
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub total: BigUint,
    /// Size of the `S'` part of the block.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub s_prime: BigUint,
    /// Size of the `S(v, θ)` part of the block, one entry per `v ∈ V`.
    pub parts: Vec<String>,
    /// Vectors in no part.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub uncovered: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartSums {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub v: BigRational,
    /// `log_k` of the block sums `Σ |q|_∞^{n - (v + 1 - θ)η}` over the part.
    pub block_logs: Vec<Option<f64>>,
    pub growth: Option<f64>,
    pub converges: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub eta: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub theta: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub mu: BigRational,
    #[serde(serialize_with = "rationals")]
    pub cover: Vec<BigRational>,
    pub blocks: Vec<SplitBlock>,
    /// Every vector up to `N_max` lies in `S'` or some `S(v, θ)`.
    pub partition_holds: bool,
    /// `log_k` of the block sums of `|q|_∞^n (ψ(q)/|q|_∞)^η` over `S'`.
    pub s_prime_logs: Vec<Option<f64>>,
    pub s_prime_growth: Option<f64>,
    pub s_prime_converges: bool,
    pub parts: Vec<PartSums>,
}

fn rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::serde_util::format_rational))
}

/// Splits `F[X]^m` into `S' = {ψ(q) < |q|_∞^{-μ}}` and the sets
/// `S(v, θ) = {|q|_∞^{-v} ≤ ψ(q) ≤ |q|_∞^{-v+θ}}` for `v` in a finite cover
/// `V = {θ, 2θ, …}` of `[0, μ]`, block by block up to `N_max`, and reports
/// the growth of the block sums of each part. `μ` defaults to `(m + n)/η`.
pub fn split_s_prime_and_svtheta(
    psi: &ApproxFunction,
    n: usize,
    eta: &BigRational,
    theta: &BigRational,
    mu: Option<&BigRational>,
    n_max: usize,
) -> Result<SplitReport> {
    if !theta.is_positive() {
        return Err(Error::InvalidArgument("θ must be positive".into()));
    }
    if !eta.is_positive() {
        return Err(Error::InvalidArgument("η must be positive".into()));
    }
    let k = psi.spec().k();
    let mu = mu.cloned().unwrap_or_else(|| BigRational::from_integer(BigInt::from(psi.m() + n)) / eta);
    let mut cover = Vec::new();
    let mut v = theta.clone();
    loop {
        cover.push(v.clone());
        if v >= mu {
            break;
        }
        v += theta;
    }
    let eta_f = eta.to_f64().unwrap();
    let theta_f = theta.to_f64().unwrap();
    let mut blocks = Vec::new();
    let mut partition_holds = true;
    let mut s_prime_logs = Vec::new();
    let mut part_logs: Vec<Vec<Option<f64>>> = vec![Vec::new(); cover.len()];
    for b in 0..=n_max {
        let bn = BigRational::from_integer(BigInt::from(b));
        let mut row = SplitBlock {
            n: b,
            total: BigUint::zero(),
            s_prime: BigUint::zero(),
            parts: Vec::new(),
            uncovered: BigUint::zero(),
        };
        let mut part_counts = vec![BigUint::zero(); cover.len()];
        let mut sp_terms = Vec::new();
        for p in psi.profile(b) {
            if p.count.is_zero() {
                continue;
            }
            row.total += &p.count;
            let e = p.exponent.map(|e| e.min(0));
            let mut covered = false;
            let in_s_prime = match e {
                None => true,
                Some(e) => BigRational::from_integer(e.into()) < -(&mu * &bn),
            };
            if in_s_prime {
                row.s_prime += &p.count;
                covered = true;
                if let Some(e) = e {
                    sp_terms.push(log_k(&p.count, k) + (n * b) as f64 + (e - b as i64) as f64 * eta_f);
                }
            }
            if let Some(e) = e {
                let er = BigRational::from_integer(e.into());
                for (i, v) in cover.iter().enumerate() {
                    if er >= -(v * &bn) && er <= (theta - v) * &bn {
                        part_counts[i] += &p.count;
                        covered = true;
                    }
                }
            }
            if !covered {
                row.uncovered += &p.count;
                partition_holds = false;
            }
        }
        s_prime_logs.push(log_sum(&sp_terms, k));
        for (i, v) in cover.iter().enumerate() {
            let vf = v.to_f64().unwrap();
            part_logs[i].push((!part_counts[i].is_zero()).then(|| {
                log_k(&part_counts[i], k) + b as f64 * (n as f64 - (vf + 1.0 - theta_f) * eta_f)
            }));
        }
        row.parts = part_counts.iter().map(|c| c.to_string()).collect();
        blocks.push(row);
    }
    let s_prime_growth = tail_slope(&s_prime_logs).map(|(s, _)| s);
    let parts = cover
        .iter()
        .zip(part_logs)
        .map(|(v, logs)| {
            let growth = tail_slope(&logs).map(|(s, _)| s);
            PartSums { v: v.clone(), block_logs: logs, growth, converges: growth.is_none_or(|g| g < 0.0) }
        })
        .collect();
    Ok(SplitReport {
        eta: eta.clone(),
        theta: theta.clone(),
        mu,
        cover,
        blocks,
        partition_holds,
        s_prime_converges: s_prime_growth.is_none_or(|g| g < 0.0),
        s_prime_logs,
        s_prime_growth,
        parts,
    })
}

fn log_sum(terms: &[f64], k: u32) -> Option<f64> {
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return None;
    }
    let kf = k as f64;
    Some(top + terms.iter().map(|t| kf.powf(t - top)).sum::<f64>().ln() / kf.ln())
}
