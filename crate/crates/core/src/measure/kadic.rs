use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// An exact measure `num · k^{-exp}`, kept with `num` not divisible by `k`
/// (and `exp = 0` when `num = 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KadicMeasure {
    k: u32,
    num: BigUint,
    exp: i64,
}

impl fmt::Debug for KadicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `num/k^exp`, e.g. `3/2^5`; an integer when `exp ≤ 0`.
impl fmt::Display for KadicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp <= 0 {
            return write!(f, "{}", &self.num * BigUint::from(self.k).pow((-self.exp) as u32));
        }
        write!(f, "{}/{}^{}", self.num, self.k, self.exp)
    }
}

/// `{"num": "3", "exp": 5, "value": "3/2^5"}`.
impl Serialize for KadicMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KadicMeasure", 3)?;
        st.serialize_field("num", &self.num.to_string())?;
        st.serialize_field("exp", &self.exp)?;
        st.serialize_field("value", &self.to_string())?;
        st.end()
    }
}

impl KadicMeasure {
    pub fn new(k: u32, num: BigUint, exp: i64) -> Self {
        assert!(k >= 2);
        let mut m = Self { k, num, exp };
        m.canonicalize();
        m
    }

    pub fn zero(k: u32) -> Self {
        Self::new(k, BigUint::zero(), 0)
    }

    pub fn one(k: u32) -> Self {
        Self::new(k, BigUint::one(), 0)
    }

    /// `k^{-e}`.
    pub fn power(k: u32, e: i64) -> Self {
        Self::new(k, BigUint::one(), e)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let k = BigUint::from(self.k);
        loop {
            let (q, r) = self.num.div_rem(&k);
            if !r.is_zero() {
                break;
            }
            self.num = q;
            self.exp -= 1;
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn scaled_num(&self, exp: i64) -> BigUint {
        debug_assert!(exp >= self.exp);
        &self.num * BigUint::from(self.k).pow((exp - self.exp) as u32)
    }

    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let e = self.exp.max(other.exp);
        Self::new(self.k, self.scaled_num(e) + other.scaled_num(e), e)
    }

    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        Self::new(self.k, &self.num * &other.num, self.exp + other.exp)
    }

    #[must_use]
    pub fn pow(&self, n: u32) -> Self {
        Self::new(self.k, self.num.pow(n), self.exp * n as i64)
    }

    /// `self - other`, or `None` when negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.k, other.k);
        let e = self.exp.max(other.exp);
        let (a, b) = (self.scaled_num(e), other.scaled_num(e));
        (a >= b).then(|| Self::new(self.k, a - b, e))
    }

    /// Multiplication by `k^{e}`.
    #[must_use]
    pub fn scale_pow(&self, e: i64) -> Self {
        Self::new(self.k, self.num.clone(), self.exp - e)
    }

    /// Multiplication by a non-negative integer.
    #[must_use]
    pub fn mul_int(&self, c: &BigUint) -> Self {
        Self::new(self.k, &self.num * c, self.exp)
    }

    pub fn to_rational(&self) -> BigRational {
        let k = BigInt::from(self.k);
        let num = BigInt::from(self.num.clone());
        if self.exp >= 0 {
            BigRational::new(num, k.pow(self.exp as u32))
        } else {
            BigRational::from_integer(num * k.pow((-self.exp) as u32))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap_or(f64::INFINITY) * (self.k as f64).powi(-self.exp as i32)
    }
}

impl PartialOrd for KadicMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KadicMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.k, other.k);
        if self.is_zero() || other.is_zero() {
            return self.num.cmp(&other.num);
        }
        let e = self.exp.max(other.exp);
        self.scaled_num(e).cmp(&other.scaled_num(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let m = KadicMeasure::new(2, BigUint::from(12u32), 5);
        assert_eq!(m.num(), &BigUint::from(3u32));
        assert_eq!(m.exp(), 3);
        assert_eq!(KadicMeasure::new(3, BigUint::zero(), 9), KadicMeasure::zero(3));
        assert_eq!(m.to_string(), "3/2^3");
        assert_eq!(KadicMeasure::new(2, BigUint::from(3u32), -2).to_string(), "12");
        assert_eq!(KadicMeasure::one(3).to_string(), "1");
    }

    #[test]
    fn arithmetic_and_order() {
        let a = KadicMeasure::power(2, 3);
        let b = KadicMeasure::power(2, 3);
        assert_eq!(a.add(&b), KadicMeasure::power(2, 2));
        assert_eq!(a.mul(&b), KadicMeasure::power(2, 6));
        assert!(KadicMeasure::power(2, 4) < a);
        assert!(KadicMeasure::zero(2) < KadicMeasure::power(2, 40));
        assert_eq!(a.pow(2).to_rational(), BigRational::new(1.into(), 64.into()));
        assert_eq!(KadicMeasure::power(3, -2).to_rational(), BigRational::from_integer(9.into()));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"num":"1","exp":3,"value":"1/2^3"}"#);
    }
}
