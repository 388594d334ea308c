//! Families `S ⊆ F[X]^m \ {0}` and their norm blocks
//! `S_N = {q ∈ S : k^N ≤ |q|_∞ < k^{N+1}}`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::poly::{enumerate_vectors, PolyVector};

/// Degrees allowed in one coordinate. The zero polynomial is always allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeRule {
    Any,
    Zero,
    Even,
    Odd,
    MultipleOf(usize),
    Degrees(Vec<usize>),
}

impl DegreeRule {
    fn allows(&self, d: usize) -> bool {
        match self {
            DegreeRule::Any => true,
            DegreeRule::Zero => false,
            DegreeRule::Even => d.is_multiple_of(2),
            DegreeRule::Odd => d % 2 == 1,
            DegreeRule::MultipleOf(t) => d.is_multiple_of(*t),
            DegreeRule::Degrees(list) => list.contains(&d),
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self, DegreeRule::Zero | DegreeRule::Degrees(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    /// Every nonzero vector.
    AllNonzero,
    /// Vectors whose coordinates are all monic.
    MonicCoords,
    /// Vectors with `log_k |q|_∞` in `degrees` or a power of `powers_of`.
    Lacunary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        powers_of: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        degrees: Vec<usize>,
    },
    /// Nonzero vectors whose `i`-th coordinate is zero or has a degree allowed
    /// by `rules[i]`.
    DegreePattern { rules: Vec<DegreeRule> },
    /// A finite list, given as coefficient vectors (lowest degree first).
    Explicit { vectors: Vec<Vec<Vec<u32>>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyConfig {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub m: usize,
}

#[derive(Debug, Clone)]
pub struct SetFamily {
    spec: FieldSpec,
    m: usize,
    kind: FamilyKind,
    explicit: Vec<PolyVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub n: usize,
    /// `#S_N`.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub count: BigUint,
    /// `C(k^N; S) = #{q ∈ S : |q|_∞ ≤ k^N}`.
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub cumulative: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockTable {
    pub rows: Vec<BlockRow>,
}

impl BlockTable {
    pub fn counts(&self) -> Vec<BigUint> {
        self.rows.iter().map(|r| r.count.clone()).collect()
    }

    pub fn cumulative(&self) -> Vec<BigUint> {
        self.rows.iter().map(|r| r.cumulative.clone()).collect()
    }
}

fn pow_k(k: u32, e: usize) -> BigUint {
    BigUint::from(k).pow(e as u32)
}

/// Number of vectors in `F[X]^m` with `|q|_∞ = k^N`.
pub fn all_block_count(k: u32, m: usize, n: usize) -> BigUint {
    pow_k(k, m * (n + 1)) - pow_k(k, m * n)
}

impl SetFamily {
    pub fn new(spec: &FieldSpec, m: usize, kind: FamilyKind) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let mut explicit = Vec::new();
        match &kind {
            FamilyKind::Lacunary { powers_of: Some(b), .. } if *b < 2 => {
                return Err(Error::InvalidArgument("lacunary base must be at least 2".into()));
            }
            FamilyKind::DegreePattern { rules } => {
                if rules.len() != m {
                    return Err(Error::Dimension(format!("{} degree rules for m = {m}", rules.len())));
                }
                if rules.iter().any(|r| matches!(r, DegreeRule::MultipleOf(0))) {
                    return Err(Error::InvalidArgument("multiple_of must be positive".into()));
                }
            }
            FamilyKind::Explicit { vectors } => {
                for v in vectors {
                    let q = PolyVector::from_coeffs(spec, v)?;
                    if q.m() != m {
                        return Err(Error::Dimension(format!("explicit vector of length {} for m = {m}", q.m())));
                    }
                    if q.is_zero() {
                        return Err(Error::InvalidArgument("the zero vector cannot belong to S".into()));
                    }
                    if !explicit.contains(&q) {
                        explicit.push(q);
                    }
                }
            }
            _ => {}
        }
        Ok(Self { spec: spec.clone(), m, kind, explicit })
    }

    pub fn from_config(spec: &FieldSpec, cfg: &FamilyConfig) -> Result<Self> {
        Self::new(spec, cfg.m, cfg.kind.clone())
    }

    pub fn all(spec: &FieldSpec, m: usize) -> Self {
        Self::new(spec, m, FamilyKind::AllNonzero).expect("m >= 1")
    }

    pub fn config(&self) -> FamilyConfig {
        FamilyConfig { kind: self.kind.clone(), m: self.m }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    fn lacunary_degree(powers_of: Option<usize>, degrees: &[usize], d: usize) -> bool {
        if degrees.contains(&d) {
            return true;
        }
        let Some(b) = powers_of else { return false };
        let mut p = 1usize;
        while p < d {
            p = p.saturating_mul(b);
        }
        p == d
    }

    pub fn contains(&self, q: &PolyVector) -> bool {
        if q.m() != self.m || q.is_zero() {
            return false;
        }
        match &self.kind {
            FamilyKind::AllNonzero => true,
            FamilyKind::MonicCoords => q.entries().iter().all(|c| c.is_monic()),
            FamilyKind::Lacunary { powers_of, degrees } => {
                Self::lacunary_degree(*powers_of, degrees, q.max_degree().unwrap())
            }
            FamilyKind::DegreePattern { rules } => {
                q.entries().iter().zip(rules).all(|(c, r)| c.degree().is_none_or(|d| r.allows(d)))
            }
            FamilyKind::Explicit { .. } => self.explicit.contains(q),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            FamilyKind::AllNonzero | FamilyKind::MonicCoords => false,
            FamilyKind::Lacunary { powers_of, .. } => powers_of.is_none(),
            FamilyKind::DegreePattern { rules } => rules.iter().all(DegreeRule::is_finite),
            FamilyKind::Explicit { .. } => true,
        }
    }

    /// `v(S)` where it is known in closed form.
    pub fn oracle_v(&self) -> Option<BigRational> {
        if self.is_finite() {
            return None;
        }
        let v = match &self.kind {
            FamilyKind::DegreePattern { rules } => rules.iter().filter(|r| !r.is_finite()).count(),
            _ => self.m,
        };
        Some(BigRational::from_integer(v.into()))
    }

    /// Number of polynomials of degree `≤ n` (zero included) allowed by `rule`;
    /// `n = -1` counts the zero polynomial alone.
    fn coord_count(&self, rule: &DegreeRule, n: i64) -> BigUint {
        let k = self.spec.k();
        let mut c = BigUint::one();
        for d in 0..=n.max(-1) {
            if d >= 0 && rule.allows(d as usize) {
                c += pow_k(k, d as usize) * (k - 1);
            }
        }
        c
    }

    fn monic_count(&self, n: i64) -> BigUint {
        (0..=n).filter(|&d| d >= 0).map(|d| pow_k(self.spec.k(), d as usize)).sum()
    }

    /// `#S_N`, in closed form.
    pub fn block_count(&self, n: usize) -> BigUint {
        let k = self.spec.k();
        let product = |f: &dyn Fn(usize, i64) -> BigUint, n: i64| -> BigUint { (0..self.m).map(|i| f(i, n)).product() };
        match &self.kind {
            FamilyKind::AllNonzero => all_block_count(k, self.m, n),
            FamilyKind::MonicCoords => {
                let f = |_: usize, n: i64| self.monic_count(n);
                product(&f, n as i64) - product(&f, n as i64 - 1)
            }
            FamilyKind::Lacunary { powers_of, degrees } => {
                if Self::lacunary_degree(*powers_of, degrees, n) {
                    all_block_count(k, self.m, n)
                } else {
                    BigUint::zero()
                }
            }
            FamilyKind::DegreePattern { rules } => {
                let f = |i: usize, n: i64| self.coord_count(&rules[i], n);
                product(&f, n as i64) - product(&f, n as i64 - 1)
            }
            FamilyKind::Explicit { .. } => {
                BigUint::from(self.explicit.iter().filter(|q| q.max_degree() == Some(n)).count())
            }
        }
    }

    pub fn block_table(&self, n_max: usize) -> BlockTable {
        let mut total = BigUint::zero();
        let rows = (0..=n_max)
            .map(|n| {
                let count = self.block_count(n);
                total += &count;
                BlockRow { n, count, cumulative: total.clone() }
            })
            .collect();
        BlockTable { rows }
    }

    /// The members of `S_N`, by enumeration of `F[X]^m`.
    pub fn enumerate_block(&self, n: usize) -> Vec<PolyVector> {
        if let FamilyKind::Explicit { .. } = self.kind {
            return self.explicit.iter().filter(|q| q.max_degree() == Some(n)).cloned().collect();
        }
        enumerate_vectors(&self.spec, self.m, n).filter(|q| self.contains(q)).collect()
    }

    /// The largest `N` with `S_N` possibly nonempty, for finite families.
    fn finite_top(&self) -> Option<usize> {
        if !self.is_finite() {
            return None;
        }
        Some(match &self.kind {
            FamilyKind::Lacunary { degrees, .. } => degrees.iter().copied().max().unwrap_or(0),
            FamilyKind::DegreePattern { rules } => rules
                .iter()
                .filter_map(|r| match r {
                    DegreeRule::Degrees(l) => l.iter().copied().max(),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
            _ => self.explicit.iter().filter_map(|q| q.max_degree()).max().unwrap_or(0),
        })
    }

    /// Total size when finite.
    pub fn len(&self) -> Option<BigUint> {
        self.finite_top().map(|top| (0..=top).map(|n| self.block_count(n)).sum())
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_some_and(|l| l.is_zero())
    }
}
