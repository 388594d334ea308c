//! Multiplicative functions on `F_k[X]`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{factor, Polynomial};
use crate::error::Result;

/// `0` unless `f` is squarefree, otherwise `(-1)^ω(f)`.
pub fn mobius(f: &Polynomial) -> Result<i8> {
    let fx = factor(f)?;
    if !fx.is_squarefree() {
        return Ok(0);
    }
    Ok(if fx.omega() % 2 == 0 { 1 } else { -1 })
}

/// The order of the unit group of `F[X]/(q)`: the number of `q'` with
/// `|q'| < |q|` and `gcd(q, q') = 1`, computed as
/// `|q| ∏_{P | q} (1 - |P|^{-1})`. Nonzero constants give 1.
pub fn totient(q: &Polynomial) -> Result<BigUint> {
    let fx = factor(q)?;
    let k = BigUint::from(q.spec().k());
    let mut out = k.pow(q.degree().expect("nonzero") as u32);
    for (p, _) in &fx.factors {
        let norm = k.pow(p.degree().expect("irreducible") as u32);
        out = out / &norm * (norm - 1u32);
    }
    Ok(out)
}

/// Number of monic `q'` with `|q'| < |q|` coprime to `q`. Equals
/// `totient(q) / (k - 1)` for non-constant `q` and 0 for constants, where the
/// range is empty.
pub fn totient_monic(q: &Polynomial) -> Result<BigUint> {
    if q.degree() == Some(0) {
        return Ok(BigUint::zero());
    }
    Ok(totient(q)? / (q.spec().k() - 1))
}

/// Number of monic irreducible polynomials of degree `d >= 1` over `F_k`,
/// `(1/d) Σ_{e | d} μ(e) k^{d/e}`.
pub fn irreducible_count(k: u32, d: u32) -> BigUint {
    assert!(d >= 1);
    let k = BigInt::from(k);
    let mut sum = BigInt::zero();
    for e in 1..=d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let mu = integer_mobius(e);
        if mu != 0 {
            sum += BigInt::from(mu) * k.pow(d / e);
        }
    }
    (sum / BigInt::from(d)).to_biguint().expect("positive")
}

fn integer_mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `∏_{d ≤ deg} (1 - k^{-d})^{I(d)}` with `I(d)` the number of monic
/// irreducibles of degree `d`. Every `q` of degree at most `deg` has
/// `totient(q) / |q|` at least this value.
pub fn totient_ratio_floor(k: u32, deg: u32) -> BigRational {
    let mut out = BigRational::one();
    for d in 1..=deg {
        let norm = BigInt::from(k).pow(d);
        let factor = BigRational::new(&norm - 1, norm);
        let count: u32 = irreducible_count(k, d).try_into().expect("small degree");
        out *= num_traits::pow(factor, count as usize);
    }
    out
}
