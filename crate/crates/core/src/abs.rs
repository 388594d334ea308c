use std::fmt;

use serde::{Deserialize, Serialize};

/// A value of the non-Archimedean absolute value: `0` or `k^e`.
///
/// The derived order puts `Zero` below every power, and powers compare by
/// exponent, which is exactly the order of the real numbers they denote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbsValue {
    Zero,
    Pow(i64),
}

impl AbsValue {
    pub const ONE: AbsValue = AbsValue::Pow(0);

    pub fn exponent(self) -> Option<i64> {
        match self {
            AbsValue::Zero => None,
            AbsValue::Pow(e) => Some(e),
        }
    }

    pub fn is_zero(self) -> bool {
        self == AbsValue::Zero
    }

    #[must_use]
    pub fn mul(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::Pow(a), AbsValue::Pow(b)) => AbsValue::Pow(a + b),
            _ => AbsValue::Zero,
        }
    }

    /// Division by a nonzero value.
    #[must_use]
    pub fn div(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::Pow(a), AbsValue::Pow(b)) => AbsValue::Pow(a - b),
            (AbsValue::Zero, _) => AbsValue::Zero,
            (_, AbsValue::Zero) => panic!("division by |0|"),
        }
    }

    pub fn to_f64(self, k: u32) -> f64 {
        match self {
            AbsValue::Zero => 0.0,
            AbsValue::Pow(e) => (k as f64).powi(e as i32),
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::Pow(e) => write!(f, "k^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_products() {
        assert!(AbsValue::Zero < AbsValue::Pow(-100));
        assert!(AbsValue::Pow(-1) < AbsValue::Pow(2));
        assert_eq!(AbsValue::Pow(2).mul(AbsValue::Pow(-5)), AbsValue::Pow(-3));
        assert_eq!(AbsValue::Zero.mul(AbsValue::Pow(3)), AbsValue::Zero);
        assert_eq!(AbsValue::Pow(1).div(AbsValue::Pow(3)), AbsValue::Pow(-2));
    }
}
