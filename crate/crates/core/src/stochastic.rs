//! The counting variables `ν_t(A) = #{q ∈ S_{N_t} : A ∈ B'(q, ρ(k^{N_t}))}`
//! (`B''` when `m ≥ 2`), their moments, and the Borel–Cantelli ratio.
//!
//! Membership in `B'(q, k^r)` depends on the first `deg q - r` digits of each
//! entry only, so sampling digits uniformly at that depth is exact Haar
//! sampling of `ν_t`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::SetFamily;
use crate::laurent::LaurentMatrix;
use crate::measure::{self, KadicMeasure, ResonantSet};
use crate::poly::PolyVector;

/// Monte Carlo work is split into this many independent streams regardless
/// of the thread count.
pub const SHARDS: u64 = 64;

/// Largest `#S_{N_t}` for the exact second moment.
pub const MAX_BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoSpec {
    #[serde(with = "crate::serde_util::rational_str")]
    pub v_s: BigRational,
    #[serde(with = "crate::serde_util::rational_str")]
    pub delta: BigRational,
    pub n: usize,
}

/// `ρ(k^N) = k^{-N(v(S) - δ)/n} log_k N`, with `k^exponent ≤ ρ < k^{exponent+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rho {
    pub norm_exponent: usize,
    pub raw: f64,
    /// `log_k ρ`.
    pub log_raw: f64,
    pub exponent: i64,
    /// The exponent was positive and has been replaced by `0`.
    pub capped: bool,
}

pub fn rho(k: u32, big_n: usize, spec: &RhoSpec) -> Result<Rho> {
    if big_n < 2 {
        return Err(Error::InvalidArgument(format!("ρ needs N ≥ 2 so that log N > 0, got {big_n}")));
    }
    if spec.n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    if spec.delta <= BigRational::zero() {
        return Err(Error::InvalidArgument("δ must be positive".into()));
    }
    let power = -(&spec.v_s - &spec.delta) * BigRational::from_integer(big_n.into()) / BigRational::from_integer(spec.n.into());
    let logk = |x: f64| if k == 2 { x.log2() } else { x.ln() / (k as f64).ln() };
    let log_raw = power.to_f64().unwrap() + logk(logk(big_n as f64));
    let exact = (log_raw + 1e-12).floor() as i64;
    Ok(Rho {
        norm_exponent: big_n,
        raw: (k as f64).powf(log_raw),
        log_raw,
        exponent: exact.min(0),
        capped: exact > 0,
    })
}

/// The neighbourhood of `q` used by `ν_t`.
pub fn event(q: &PolyVector, rho_exponent: i64) -> ResonantSet {
    if q.m() == 1 {
        ResonantSet::b_prime(q.get(0).clone(), -rho_exponent)
    } else {
        ResonantSet::b_dprime(q.clone(), -rho_exponent)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub n_t: usize,
    pub rho: Rho,
    pub set_count: usize,
    pub depth: usize,
    pub mean: KadicMeasure,
    pub second_moment: KadicMeasure,
    pub variance: KadicMeasure,
    /// `σ² / E`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub variance_ratio: BigRational,
    /// `1 / E`, the bound on `μ(ν_t = 0)`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub zero_bound: BigRational,
    /// `E / (ρ^n #S_{N_t})` with the quantized `ρ`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub mean_over_scale: BigRational,
}

impl MomentReport {
    /// `σ² ≤ c E`.
    pub fn variance_within(&self, c: &BigRational) -> bool {
        self.variance.to_rational() <= c * self.mean.to_rational()
    }
}

fn block_events(s: &SetFamily, n_t: usize, spec: &RhoSpec) -> Result<(Rho, Vec<ResonantSet>)> {
    let rho = rho(s.spec().k(), n_t, spec)?;
    let block = s.enumerate_block(n_t);
    Ok((rho.clone(), block.iter().map(|q| event(q, rho.exponent)).collect()))
}

fn depth_for(events: &[ResonantSet], depth: Option<usize>) -> Result<usize> {
    let need = measure::required_precision(events).max(1);
    match depth {
        Some(d) if d < need => Err(Error::Precision(format!("depth {d} below the required {need}"))),
        Some(d) => Ok(d),
        None => Ok(need),
    }
}

/// Exact `E(ν_t)` and `E(ν_t²)` at `N_t = n_t`.
pub fn nu_exact_moments(s: &SetFamily, n_t: usize, spec: &RhoSpec, depth: Option<usize>) -> Result<MomentReport> {
    let k = s.spec().k();
    let (rho, events) = block_events(s, n_t, spec)?;
    if events.len() > MAX_BLOCK {
        return Err(Error::ScaleExceeded(format!("#S_N = {} > {MAX_BLOCK}", events.len())));
    }
    let depth = depth_for(&events, depth)?;
    let n = spec.n;
    let singles: Vec<KadicMeasure> =
        events.par_iter().map(|e| measure::measure_set(e, n, depth)).collect::<Result<_>>()?;
    let rows: Vec<KadicMeasure> = (0..events.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = KadicMeasure::zero(k);
            for j in i + 1..events.len() {
                let both = measure::measure_intersection(&[events[i].clone(), events[j].clone()], n, depth)?;
                acc = acc.add(&both);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mean = singles.iter().fold(KadicMeasure::zero(k), |a, b| a.add(b));
    let cross = rows.iter().fold(KadicMeasure::zero(k), |a, b| a.add(b));
    let second_moment = mean.add(&cross.add(&cross));
    let variance = second_moment
        .checked_sub(&mean.mul(&mean))
        .ok_or_else(|| Error::InvalidArgument("negative variance: inconsistent measures".into()))?;
    let e = mean.to_rational();
    let scale = KadicMeasure::power(k, -rho.exponent).pow(n as u32).mul_int(&BigUint::from(events.len())).to_rational();
    let (variance_ratio, zero_bound) = if e.is_zero() {
        (BigRational::zero(), BigRational::zero())
    } else {
        (variance.to_rational() / &e, e.recip())
    };
    let mean_over_scale = if scale.is_zero() { BigRational::zero() } else { &e / scale };
    Ok(MomentReport {
        n_t,
        rho,
        set_count: events.len(),
        depth,
        mean,
        second_moment,
        variance,
        variance_ratio,
        zero_bound,
        mean_over_scale,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n_t: usize,
    pub rho_exponent: i64,
    pub samples: u64,
    pub seed: u64,
    pub shards: u64,
    pub depth: usize,
    pub mean: f64,
    pub std_error: f64,
    pub second_moment: f64,
    pub zero_frequency: f64,
    pub zero_std_error: f64,
}

impl MonteCarloReport {
    /// `|mean - E| ≤ 5 SE`.
    pub fn mean_consistent(&self, exact: &BigRational) -> bool {
        (self.mean - exact.to_f64().unwrap()).abs() <= 5.0 * self.std_error
    }

    /// Zero frequency at most `1/E + 5 SE`.
    pub fn zero_bound_holds(&self, exact: &BigRational) -> bool {
        if exact.is_zero() {
            return true;
        }
        self.zero_frequency <= exact.recip().to_f64().unwrap() + 5.0 * self.zero_std_error
    }
}

#[derive(Default)]
struct Tally {
    sum: u64,
    sum_sq: u64,
    zeros: u64,
}

/// Samples `ν_t` at `samples` Haar-random points of `U`.
pub fn nu_monte_carlo(
    s: &SetFamily,
    n_t: usize,
    spec: &RhoSpec,
    samples: u64,
    seed: u64,
    depth: Option<usize>,
) -> Result<MonteCarloReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let field = s.spec().clone();
    let (rho, events) = block_events(s, n_t, spec)?;
    let depth = depth_for(&events, depth)?;
    let (m, n) = (s.m(), spec.n);
    let k = field.k();
    let tallies: Vec<Tally> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut t = Tally::default();
            let mut digits = vec![0u32; m * n * depth];
            for _ in 0..count {
                digits.iter_mut().for_each(|d| *d = rng.gen_range(0..k));
                let a = LaurentMatrix::from_digits(&field, m, n, depth, &digits)?;
                let mut nu = 0u64;
                for e in &events {
                    nu += u64::from(measure::contains(e, &a)?);
                }
                t.sum += nu;
                t.sum_sq += nu * nu;
                t.zeros += u64::from(nu == 0);
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let total = tallies.iter().fold(Tally::default(), |a, b| Tally {
        sum: a.sum + b.sum,
        sum_sq: a.sum_sq + b.sum_sq,
        zeros: a.zeros + b.zeros,
    });
    let sf = samples as f64;
    let mean = total.sum as f64 / sf;
    let second_moment = total.sum_sq as f64 / sf;
    let var = if samples > 1 { (second_moment - mean * mean).max(0.0) * sf / (sf - 1.0) } else { 0.0 };
    let zero_frequency = total.zeros as f64 / sf;
    Ok(MonteCarloReport {
        n_t,
        rho_exponent: rho.exponent,
        samples,
        seed,
        shards: SHARDS,
        depth,
        mean,
        std_error: (var / sf).sqrt(),
        second_moment,
        zero_frequency,
        zero_std_error: (zero_frequency * (1.0 - zero_frequency) / sf).sqrt(),
    })
}

/// `(Σ_{i≤N} μ(A_i))² / Σ_{i,j≤N} μ(A_i ∩ A_j)` over the first `n_events` events.
pub fn borel_cantelli_ratio(events: &[ResonantSet], n_events: usize, n: usize, depth: usize) -> Result<BigRational> {
    let events = &events[..n_events.min(events.len())];
    let first = events.first().ok_or_else(|| Error::InvalidArgument("no events given".into()))?;
    let k = first.q.spec().k();
    let singles: Vec<KadicMeasure> =
        events.par_iter().map(|e| measure::measure_set(e, n, depth)).collect::<Result<_>>()?;
    let rows: Vec<KadicMeasure> = (0..events.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = KadicMeasure::zero(k);
            for j in i + 1..events.len() {
                acc = acc.add(&measure::measure_intersection(&[events[i].clone(), events[j].clone()], n, depth)?);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let sum = singles.iter().fold(KadicMeasure::zero(k), |a, b| a.add(b));
    let cross = rows.iter().fold(KadicMeasure::zero(k), |a, b| a.add(b));
    let denom = sum.add(&cross.add(&cross));
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(sum.mul(&sum).to_rational() / denom.to_rational())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldSpec;
    use crate::poly::{enumerate_polys, totient};
    use crate::serde_util::parse_rational;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn spec(v: &str, d: &str, n: usize) -> RhoSpec {
        RhoSpec { v_s: r(v), delta: r(d), n }
    }

    #[test]
    fn rho_examples() {
        let x = rho(2, 4, &spec("1", "1/2", 1)).unwrap();
        assert_eq!(x.exponent, -1);
        assert!((x.raw - 0.5).abs() < 1e-12);
        assert!(!x.capped);
        let big = rho(2, 4, &spec("1", "2", 1)).unwrap();
        assert!(big.capped);
        assert_eq!(big.exponent, 0);
        assert!(rho(2, 2, &spec("1", "1/10", 1)).unwrap().raw > 0.0);
        assert!(rho(2, 1, &spec("1", "1/10", 1)).is_err());
        assert!(rho(2, 3, &spec("1", "0", 1)).is_err());
        // quantized ≤ raw < k · quantized
        for big_n in 2..30 {
            let x = rho(3, big_n, &spec("2", "1/3", 2)).unwrap();
            let q = 3f64.powi(x.exponent as i32);
            assert!(q <= x.raw * (1.0 + 1e-12) && x.raw < 3.0 * q, "{big_n}");
        }
    }

    #[test]
    fn mean_is_sum_of_one_dimensional_measures() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::all(&f2, 1);
        let sp = spec("1", "1/10", 1);
        let rep = nu_exact_moments(&s, 3, &sp, None).unwrap();
        assert_eq!(rep.rho.exponent, -3);
        assert_eq!(rep.set_count, 8);
        let mut want = BigRational::zero();
        for q in enumerate_polys(&f2, 3, true) {
            let phi = BigRational::from_integer(totient(&q).unwrap().into());
            want += phi / BigRational::from_integer(8.into()) / BigRational::from_integer(8.into());
        }
        assert_eq!(rep.mean.to_rational(), want);
        assert!(rep.variance.to_rational() >= BigRational::zero());
    }

    #[test]
    fn single_member_block() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let one = PolyVector::from_coeffs(&f2, &[vec![1, 0, 0, 1]]).unwrap();
        let s = SetFamily::new(&f2, 1, crate::exponents::FamilyKind::Explicit { vectors: vec![vec![one.get(0).coeffs().to_vec()]] }).unwrap();
        let rep = nu_exact_moments(&s, 3, &spec("1", "1/10", 1), None).unwrap();
        let e = rep.mean.to_rational();
        assert_eq!(rep.variance.to_rational(), &e - &e * &e);
        assert!(rep.variance_within(&BigRational::from_integer(1.into())));
    }

    #[test]
    fn empty_block_gives_zero() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::new(&f2, 1, crate::exponents::FamilyKind::Lacunary { powers_of: None, degrees: vec![1] }).unwrap();
        let mc = nu_monte_carlo(&s, 3, &spec("1", "1/10", 1), 50, 1, None).unwrap();
        assert_eq!(mc.mean, 0.0);
        assert_eq!(mc.zero_frequency, 1.0);
        let ex = nu_exact_moments(&s, 3, &spec("1", "1/10", 1), None).unwrap();
        assert!(ex.mean.is_zero());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::all(&f2, 1);
        let sp = spec("1", "1/10", 1);
        let a = nu_monte_carlo(&s, 3, &sp, 500, 9, None).unwrap();
        let b = nu_monte_carlo(&s, 3, &sp, 500, 9, None).unwrap();
        assert_eq!(a, b);
        let c = nu_monte_carlo(&s, 3, &sp, 500, 10, None).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn borel_cantelli_single_and_independent() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let q = PolyVector::from_coeffs(&f2, &[vec![0, 1], vec![1]]).unwrap();
        let one = [ResonantSet::b(q, 2)];
        assert_eq!(borel_cantelli_ratio(&one, 1, 1, 4).unwrap(), r("1/4"));
        let vs: [[&[u32]; 2]; 8] = [
            [&[1], &[]],
            [&[], &[1]],
            [&[1], &[1]],
            [&[0, 1], &[1]],
            [&[1], &[0, 1]],
            [&[0, 1], &[1, 1]],
            [&[1, 1], &[0, 1]],
            [&[1, 1], &[1]],
        ];
        let events: Vec<ResonantSet> = vs
            .iter()
            .map(|c| ResonantSet::b(PolyVector::from_coeffs(&f2, &[c[0].to_vec(), c[1].to_vec()]).unwrap(), 2))
            .collect();
        for a in &events {
            for b in &events {
                if a != b {
                    assert!(!measure::linearly_dependent(&a.q, &b.q).unwrap());
                }
            }
        }
        // N²p² / (N²p² + Np(1-p)) with p = 1/4, N = 8
        assert_eq!(borel_cantelli_ratio(&events, 8, 1, 4).unwrap(), r("8/11"));
        let zero = [ResonantSet::b_prime(crate::poly::Polynomial::x(&f2), 1)];
        assert!(borel_cantelli_ratio(&zero, 1, 1, 2).is_ok());
    }
}
