//! The polynomial ring `F_k[X]`.

mod arith;
mod factor;
mod vector;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use crate::abs::AbsValue;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;

pub use arith::{irreducible_count, mobius, totient, totient_monic, totient_ratio_floor};
pub use factor::{factor, factor_trial_division, is_irreducible, squarefree_decomposition, Factorization};
pub use vector::{enumerate_vectors, PolyVector};

/// A polynomial in canonical form: `coeffs[i]` is the coefficient of `X^i` and
/// the last stored coefficient is nonzero. The zero polynomial has no
/// coefficients.
#[derive(Clone)]
pub struct Polynomial {
    spec: FieldSpec,
    coeffs: Vec<u32>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.spec == other.spec
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{coeff}X")?,
                _ => write!(f, "{coeff}X^{i}")?,
            }
        }
        Ok(())
    }
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Polynomial {
    /// Builds a polynomial from coefficient indices, lowest degree first.
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= spec.k()) {
            return Err(Error::InvalidArgument(format!("coefficient {c} is not an element of F_{}", spec.k())));
        }
        trim(&mut coeffs);
        Ok(Self { spec: spec.clone(), coeffs })
    }

    pub(crate) fn from_raw(spec: &FieldSpec, mut coeffs: Vec<u32>) -> Self {
        trim(&mut coeffs);
        Self { spec: spec.clone(), coeffs }
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Self { spec: spec.clone(), coeffs: Vec::new() }
    }

    pub fn one(spec: &FieldSpec) -> Self {
        Self::constant(spec, 1)
    }

    pub fn constant(spec: &FieldSpec, c: u32) -> Self {
        Self::from_raw(spec, vec![c])
    }

    /// `c · X^d`.
    pub fn monomial(spec: &FieldSpec, c: u32, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Self::from_raw(spec, coeffs)
    }

    pub fn x(spec: &FieldSpec) -> Self {
        Self::monomial(spec, 1, 1)
    }

    /// The polynomial whose coefficients are the base-`k` digits of `index`,
    /// lowest degree first. Every polynomial of degree `< d` has a unique index
    /// below `k^d`.
    pub fn from_index(spec: &FieldSpec, mut index: u64) -> Self {
        let k = spec.k() as u64;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % k) as u32);
            index /= k;
        }
        Self { spec: spec.clone(), coeffs }
    }

    pub fn index(&self) -> u64 {
        let k = self.spec.k() as u64;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * k + c as u64)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// `|f| = k^{deg f}`, `|0| = 0`.
    pub fn abs(&self) -> AbsValue {
        match self.degree() {
            None => AbsValue::Zero,
            Some(d) => AbsValue::Pow(d as i64),
        }
    }

    fn same_field(&self, other: &Self) {
        assert!(self.spec == other.spec, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = &self.spec;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_raw(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = &self.spec;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_raw(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.spec;
        Self { spec: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = &self.spec;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `X^d`.
    pub fn shift(&self, d: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; d];
        coeffs.extend_from_slice(&self.coeffs);
        Self { spec: self.spec.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.spec);
        }
        let f = &self.spec;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_raw(f, out)
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor);
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.spec;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(divisor.lead())?;
        let mut q = vec![0u32; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c == 0 {
                continue;
            }
            let shift = top - dd;
            q[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, b));
            }
        }
        r.truncate(dd);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub(crate) fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divmod(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "{divisor} does not divide {self}");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.spec.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// The monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other);
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd(0, 0)"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.gcd(other).map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.spec;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_prime(i as u64)))
            .collect();
        Self::from_raw(f, coeffs)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut result = Self::one(&self.spec).rem(modulus).expect("nonzero modulus");
        let mut base = self.rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        result
    }

    pub fn pow_mod_big(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut result = Self::one(&self.spec).rem(modulus).expect("nonzero modulus");
        let base = self.rem(modulus).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, modulus);
            if e.bit(i) {
                result = result.mul_mod(&base, modulus);
            }
        }
        result
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.spec), |acc, _| acc.mul(self))
    }
}

/// All polynomials of exact degree `d`, monic only if requested, in increasing
/// index order.
pub fn enumerate_polys(spec: &FieldSpec, d: usize, monic: bool) -> impl Iterator<Item = Polynomial> + '_ {
    let k = spec.k() as u64;
    let low = k.pow(d as u32);
    let leads = if monic { 1..2 } else { 1..k };
    leads.flat_map(move |lead| (0..low).map(move |i| Polynomial::from_index(spec, i + lead * low)))
}

/// All polynomials of degree `< d`, zero included: `k^d` of them.
pub fn polys_below_degree(spec: &FieldSpec, d: usize) -> impl Iterator<Item = Polynomial> + '_ {
    (0..(spec.k() as u64).pow(d as u32)).map(move |i| Polynomial::from_index(spec, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(spec: &FieldSpec, c: &[u32]) -> Polynomial {
        Polynomial::new(spec, c.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form_and_degree() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let z = p(&f2, &[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.abs(), AbsValue::Zero);
        assert_eq!(p(&f2, &[1, 0, 1, 0]).coeffs(), &[1, 0, 1]);
        assert_eq!(p(&f2, &[1, 0, 1]).abs(), AbsValue::Pow(2));
        assert!(Polynomial::new(&f2, vec![2]).is_err());
    }

    #[test]
    fn division_examples() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let (q, r) = p(&f2, &[1, 0, 1]).divmod(&p(&f2, &[1, 1])).unwrap();
        assert_eq!(q, p(&f2, &[1, 1]));
        assert!(r.is_zero());
        let f3 = FieldSpec::of_order(3).unwrap();
        let (q, r) = p(&f3, &[0, 0, 1]).divmod(&p(&f3, &[1, 1])).unwrap();
        assert_eq!(q, p(&f3, &[2, 1]));
        assert_eq!(r, p(&f3, &[1]));
        let a = p(&f3, &[2, 1, 0, 2]);
        assert_eq!(a.mul(&Polynomial::one(&f3)), a);
        assert_eq!(a.divmod(&Polynomial::zero(&f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let f2 = FieldSpec::of_order(2).unwrap();
        assert_eq!(p(&f2, &[1, 0, 1]).gcd(&p(&f2, &[1, 1])).unwrap(), p(&f2, &[1, 1]));
        assert_eq!(p(&f2, &[0, 1]).gcd(&p(&f2, &[1, 1])).unwrap(), Polynomial::one(&f2));
        let f3 = FieldSpec::of_order(3).unwrap();
        let a = p(&f3, &[1, 2, 2]);
        assert_eq!(a.gcd(&Polynomial::zero(&f3)).unwrap(), a.monic());
        assert!(Polynomial::zero(&f3).gcd(&Polynomial::zero(&f3)).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let monic: Vec<_> = enumerate_polys(&f2, 1, true).collect();
        assert_eq!(monic, vec![p(&f2, &[0, 1]), p(&f2, &[1, 1])]);
        let f3 = FieldSpec::of_order(3).unwrap();
        assert_eq!(enumerate_polys(&f3, 0, true).collect::<Vec<_>>(), vec![Polynomial::one(&f3)]);
        assert_eq!(enumerate_polys(&f2, 2, false).count(), 4);
        assert_eq!(enumerate_polys(&f3, 2, false).count(), 18);
        assert_eq!(enumerate_polys(&f3, 3, true).count(), 27);
        assert!(enumerate_polys(&f3, 3, false).all(|q| q.degree() == Some(3)));
    }

    #[test]
    fn index_round_trip() {
        let f = FieldSpec::of_order(4).unwrap();
        for i in 0..256 {
            assert_eq!(Polynomial::from_index(&f, i).index(), i);
        }
    }

    #[test]
    fn derivative_in_characteristic_three() {
        let f3 = FieldSpec::of_order(3).unwrap();
        // d/dX (X^3 + 2X^2 + X) = 4X + 1 = X + 1
        assert_eq!(p(&f3, &[0, 1, 2, 1]).derivative(), p(&f3, &[1, 1]));
    }

    #[test]
    fn absolute_value_is_multiplicative_and_ultrametric() {
        let f3 = FieldSpec::of_order(3).unwrap();
        let all: Vec<_> = polys_below_degree(&f3, 3).collect();
        for a in &all {
            for b in &all {
                assert_eq!(a.mul(b).abs(), a.abs().mul(b.abs()));
                let s = a.add(b).abs();
                assert!(s <= a.abs().max(b.abs()));
                if a.abs() != b.abs() {
                    assert_eq!(s, a.abs().max(b.abs()));
                }
            }
        }
    }
}
