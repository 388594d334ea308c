//! Approximation functions `ψ : F[X]^m → {k^r : r ∈ ℤ} ∪ {0}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::family::{all_block_count, FamilyConfig, SetFamily};
use crate::abs::AbsValue;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::laurent::{dist_nearest_poly_vec, row_times_matrix, LaurentMatrix};
use crate::poly::PolyVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PsiConfig {
    /// `ψ(q) = |q|_∞^{-v}`, rounded down to a power of `k`.
    Power {
        #[serde(with = "crate::serde_util::rational_str")]
        v: BigRational,
    },
    /// `ψ(q) = |q|_∞^{-v} (log_k |q|_∞)^{-a}`, rounded down to a power of `k`.
    PowerLog {
        #[serde(with = "crate::serde_util::rational_str")]
        v: BigRational,
        #[serde(with = "crate::serde_util::rational_str")]
        a: BigRational,
    },
    /// `ψ̂(q) = ψ(q)` on `set`, `0` elsewhere.
    IndicatorRestricted { inner: Box<PsiConfig>, set: FamilyConfig },
    /// `ψ(q) = k^{exponents[N]}` for `|q|_∞ = k^N`; `null` entries and
    /// norms past the end give `0`.
    Table { exponents: Vec<Option<i64>> },
}

#[derive(Debug, Clone)]
enum Kind {
    Power(BigRational),
    PowerLog(BigRational, BigRational),
    Indicator(Box<ApproxFunction>, SetFamily),
    Table(Vec<Option<i64>>),
}

#[derive(Debug, Clone)]
pub struct ApproxFunction {
    spec: FieldSpec,
    m: usize,
    kind: Kind,
    config: PsiConfig,
}

/// One group of a norm block on which `ψ` is constant: `count` vectors with
/// `ψ = k^exponent` (`None` for `ψ = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfilePart {
    pub count: BigUint,
    pub exponent: Option<i64>,
}

impl ApproxFunction {
    pub fn new(spec: &FieldSpec, m: usize, config: &PsiConfig) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let kind = match config {
            PsiConfig::Power { v } => Kind::Power(v.clone()),
            PsiConfig::PowerLog { v, a } => Kind::PowerLog(v.clone(), a.clone()),
            PsiConfig::IndicatorRestricted { inner, set } => {
                let inner = ApproxFunction::new(spec, m, inner)?;
                if matches!(inner.kind, Kind::Indicator(..)) {
                    return Err(Error::InvalidArgument("nested restrictions are not supported".into()));
                }
                if set.m != m {
                    return Err(Error::Dimension(format!("restriction set has m = {}, ψ has m = {m}", set.m)));
                }
                Kind::Indicator(Box::new(inner), SetFamily::from_config(spec, set)?)
            }
            PsiConfig::Table { exponents } => Kind::Table(exponents.clone()),
        };
        Ok(Self { spec: spec.clone(), m, kind, config: config.clone() })
    }

    pub fn power(spec: &FieldSpec, m: usize, v: BigRational) -> Self {
        Self::new(spec, m, &PsiConfig::Power { v }).expect("m >= 1")
    }

    /// `ψ̂`: this function restricted to `set`.
    pub fn restricted(&self, set: &SetFamily) -> Result<Self> {
        Self::new(&self.spec, self.m, &PsiConfig::IndicatorRestricted { inner: Box::new(self.config.clone()), set: set.config() })
    }

    pub fn config(&self) -> &PsiConfig {
        &self.config
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The restriction set of `ψ̂`, if any.
    pub fn support(&self) -> Option<&SetFamily> {
        match &self.kind {
            Kind::Indicator(_, s) => Some(s),
            _ => None,
        }
    }

    /// `v` for the power kinds, seen through a restriction.
    pub fn power_exponent(&self) -> Option<&BigRational> {
        match &self.kind {
            Kind::Power(v) | Kind::PowerLog(v, _) => Some(v),
            Kind::Indicator(inner, _) => inner.power_exponent(),
            Kind::Table(_) => None,
        }
    }

    /// `log_k ψ` at norm `k^N` for the kinds that depend on the norm only.
    fn norm_exponent(&self, n: usize) -> Option<i64> {
        match &self.kind {
            Kind::Power(v) => Some(floor_neg(v, n)),
            Kind::PowerLog(v, a) => {
                if a.is_zero() || n < 2 {
                    return Some(floor_neg(v, n));
                }
                let exact = -(v * BigInt::from(n));
                let log = (n as f64).ln() / (self.spec.k() as f64).ln();
                let x = exact.to_f64().unwrap() - a.to_f64().unwrap() * log;
                Some((x + 1e-9).floor() as i64)
            }
            Kind::Table(t) => t.get(n).copied().flatten(),
            Kind::Indicator(..) => unreachable!("restrictions are not norm functions"),
        }
    }

    /// The value `ψ(q)`.
    pub fn eval(&self, q: &PolyVector) -> AbsValue {
        let Some(n) = q.max_degree() else { return AbsValue::Zero };
        match &self.kind {
            Kind::Indicator(inner, set) => {
                if set.contains(q) {
                    inner.eval(q)
                } else {
                    AbsValue::Zero
                }
            }
            _ => self.norm_exponent(n).map_or(AbsValue::Zero, AbsValue::Pow),
        }
    }

    /// The norm block `|q|_∞ = k^N` of `F[X]^m \ {0}`, split by the value of `ψ`.
    pub fn profile(&self, n: usize) -> Vec<ProfilePart> {
        let all = all_block_count(self.spec.k(), self.m, n);
        match &self.kind {
            Kind::Indicator(inner, set) => {
                let inside = set.block_count(n);
                let outside = &all - &inside;
                vec![
                    ProfilePart { count: inside, exponent: inner.norm_exponent(n) },
                    ProfilePart { count: outside, exponent: None },
                ]
            }
            _ => vec![ProfilePart { count: all, exponent: self.norm_exponent(n) }],
        }
    }

    /// `log_k ψ` on the part of the block `k^N` where `ψ` is nonzero and which
    /// meets `along`, if any.
    pub fn exponent_along(&self, along: &SetFamily, n: usize) -> Option<i64> {
        if along.block_count(n).is_zero() {
            return None;
        }
        match &self.kind {
            Kind::Indicator(inner, set) => {
                if set.block_count(n).is_zero() {
                    None
                } else {
                    inner.norm_exponent(n)
                }
            }
            _ => self.norm_exponent(n),
        }
    }

    /// Whether `‖qA‖ < ψ(q)`, the defining condition of `W(m, n; ψ)`.
    pub fn approximates(&self, q: &PolyVector, a: &LaurentMatrix) -> Result<bool> {
        let AbsValue::Pow(e) = self.eval(q) else { return Ok(false) };
        let dist = dist_nearest_poly_vec(&row_times_matrix(q, a)?)?;
        Ok(dist < AbsValue::Pow(e))
    }
}

/// `⌊-v N⌋`.
fn floor_neg(v: &BigRational, n: usize) -> i64 {
    (-(v * BigInt::from(n))).floor().to_integer().to_i64().expect("exponent fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::family::FamilyKind;
    use crate::poly::enumerate_vectors;

    fn r(s: &str) -> BigRational {
        crate::serde_util::parse_rational(s).unwrap()
    }

    #[test]
    fn quantized_power_rounds_down() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let psi = ApproxFunction::power(&f2, 1, r("5/2"));
        assert_eq!(psi.norm_exponent(3), Some(-8));
        assert_eq!(psi.norm_exponent(0), Some(0));
        let pl = ApproxFunction::new(&f2, 1, &PsiConfig::PowerLog { v: r("2"), a: r("1") }).unwrap();
        // 2^{-8} / log_2 2^4 = 2^{-10}
        assert_eq!(pl.norm_exponent(4), Some(-10));
        assert_eq!(pl.norm_exponent(3), Some(-8));
    }

    #[test]
    fn profile_matches_enumeration() {
        let f3 = FieldSpec::of_order(3).unwrap();
        let set = SetFamily::new(&f3, 2, FamilyKind::MonicCoords).unwrap();
        let psi = ApproxFunction::power(&f3, 2, r("3/2")).restricted(&set).unwrap();
        for n in 0..=2 {
            let mut tally = std::collections::BTreeMap::<Option<i64>, usize>::new();
            for q in enumerate_vectors(&f3, 2, n) {
                *tally.entry(psi.eval(&q).exponent()).or_default() += 1;
            }
            for part in psi.profile(n) {
                if part.count.is_zero() {
                    continue;
                }
                assert_eq!(BigUint::from(tally[&part.exponent]), part.count);
            }
        }
    }

    #[test]
    fn config_round_trip() {
        let cfg: PsiConfig = serde_json::from_str(r#"{"kind":"POWER","v":"3"}"#).unwrap();
        assert_eq!(cfg, PsiConfig::Power { v: r("3") });
        let cfg: PsiConfig = serde_json::from_str(r#"{"kind":"POWER","v":2}"#).unwrap();
        assert_eq!(cfg, PsiConfig::Power { v: r("2") });
        let nested = r#"{"kind":"INDICATOR_RESTRICTED","inner":{"kind":"POWER","v":"1/2"},"set":{"kind":"ALL_NONZERO","m":1}}"#;
        let cfg: PsiConfig = serde_json::from_str(nested).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<PsiConfig>(&text).unwrap(), cfg);
    }
}
