//! Serialization of exact rationals as `"p/q"` strings.

use num_rational::BigRational;
use serde::Serializer;

pub fn rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn rational_opt<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn biguint<S: Serializer>(n: &num_bigint::BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Rationals read from `"p/q"`, decimal strings or JSON integers, and written
/// as `"p/q"`.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        super::rational(r, s)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(BigRational::from_integer(i.into())),
            Raw::Text(t) => super::parse_rational(&t).ok_or_else(|| de::Error::custom(format!("not a rational: {t:?}"))),
        }
    }
}

/// `"3/4"`, or `"2"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3/4"`, `"-2"` or a decimal such as `"0.125"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once('/') {
        let num = a.trim().parse().ok()?;
        let den: num_bigint::BigInt = b.trim().parse().ok()?;
        if den == 0.into() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let num: num_bigint::BigInt = digits.parse().ok()?;
        let den = num_bigint::BigInt::from(10).pow(frac.len() as u32);
        let r = BigRational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    Some(BigRational::from_integer(text.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["3/4", "2", "-7/3", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("0.125").unwrap()), "1/8");
        assert_eq!(format_rational(&parse_rational("-1.5").unwrap()), "-3/2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }
}
