use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::Polynomial;
use crate::abs::AbsValue;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;

/// A row vector `(q_1, …, q_m)` of polynomials over one field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyVector {
    entries: Vec<Polynomial>,
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl PolyVector {
    pub fn new(entries: Vec<Polynomial>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::Dimension("a vector needs m >= 1 entries".into()))?;
        if entries.iter().any(|e| e.spec() != first.spec()) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self { entries })
    }

    /// Builds from coefficient arrays, lowest degree first.
    pub fn from_coeffs(spec: &FieldSpec, coeffs: &[Vec<u32>]) -> Result<Self> {
        let entries = coeffs.iter().map(|c| Polynomial::new(spec, c.clone())).collect::<Result<_>>()?;
        Self::new(entries)
    }

    pub fn scalar(q: Polynomial) -> Self {
        Self { entries: vec![q] }
    }

    pub fn zero(spec: &FieldSpec, m: usize) -> Self {
        assert!(m >= 1);
        Self { entries: vec![Polynomial::zero(spec); m] }
    }

    /// The vector whose entries are `Polynomial::from_index` of the base
    /// `k^len` digits of `index`, first entry lowest.
    pub fn from_index(spec: &FieldSpec, m: usize, len: usize, mut index: u64) -> Self {
        let block = (spec.k() as u64).pow(len as u32);
        let entries = (0..m)
            .map(|_| {
                let e = Polynomial::from_index(spec, index % block);
                index /= block;
                e
            })
            .collect();
        Self { entries }
    }

    pub fn spec(&self) -> &FieldSpec {
        self.entries[0].spec()
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Polynomial {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// `|q|_∞`.
    pub fn norm_inf(&self) -> AbsValue {
        self.entries.iter().map(Polynomial::abs).max().expect("m >= 1")
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Polynomial::degree).max()
    }

    /// Monic gcd of the coordinates.
    pub fn gcd(&self) -> Result<Polynomial> {
        let spec = self.spec();
        let mut g = Polynomial::zero(spec);
        for e in &self.entries {
            if !e.is_zero() {
                g = if g.is_zero() { e.monic() } else { g.gcd(e)? };
            }
        }
        if g.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of the zero vector"));
        }
        Ok(g)
    }

    pub fn scale(&self, c: &Polynomial) -> Self {
        Self { entries: self.entries.iter().map(|e| e.mul(c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m());
        Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m());
        Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    /// `q / gcd(q)`, normalised so its first nonzero entry is monic, together
    /// with the factor `λ` such that `q = λ · primitive`.
    pub fn primitive(&self) -> Result<(Polynomial, PolyVector)> {
        let g = self.gcd()?;
        let first = self.entries.iter().find(|e| !e.is_zero()).expect("nonzero");
        let unit = first.lead();
        let lambda = g.scale(unit);
        let prim = Self { entries: self.entries.iter().map(|e| e.div_exact(&lambda)).collect() };
        Ok((lambda, prim))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl Serialize for PolyVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.m()))?;
        for e in &self.entries {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// All `q ∈ F[X]^m` with `|q|_∞ = k^N`, in increasing index order.
pub fn enumerate_vectors(spec: &FieldSpec, m: usize, n: usize) -> impl Iterator<Item = PolyVector> + '_ {
    let k = spec.k() as u64;
    let total = k.pow((m * (n + 1)) as u32);
    (0..total)
        .map(move |i| PolyVector::from_index(spec, m, n + 1, i))
        .filter(move |v| v.max_degree() == Some(n))
}
