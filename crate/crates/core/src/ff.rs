//! Arithmetic in the finite field `F_{p^l}`.
//!
//! Elements are stored as their polynomial-basis index: the base-`p` digits of
//! `rep` are the coefficients `c_0, c_1, ..., c_{l-1}` of `c_0 + c_1 t + ...`
//! modulo the defining polynomial. Multiplication goes through log/antilog
//! tables built from the reference polynomial-basis product.
//!
//! The hot paths (polynomials, linear algebra) work on raw `u32` indices through
//! [`FieldSpec`]; [`FieldElement`] is the checked, self-describing wrapper.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field we build tables for.
pub const MAX_ORDER: u64 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 256;

struct Tables {
    p: u32,
    l: u32,
    k: u32,
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// Construction data for `F_{p^l}` plus the derived arithmetic tables.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.l == other.0.l && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.l, self.0.modulus)
    }
}

/// JSON form of a field: `{"p": 2, "l": 2, "modulus": [1, 1, 1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    pub l: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p as coefficient vectors, lowest degree first.
// Only used to build and validate the field itself.
fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn prime_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = mod_inv(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn digits(mut index: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (index % p as u64) as u32;
        index /= p as u64;
    }
    out
}

/// Irreducibility over F_p by trial division against every monic polynomial of
/// degree 1..=deg/2.
fn is_irreducible_prime(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for index in 0..count {
            let mut g = digits(index, p, d);
            g.push(1);
            if prime_poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `l` over F_p, ordering candidates by the
/// base-p integer formed from their lower coefficients.
fn default_modulus(p: u32, l: u32) -> Vec<u32> {
    if l == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(l);
    for index in 0..count {
        let mut f = digits(index, p, l as usize);
        f.push(1);
        if is_irreducible_prime(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds `F_{p^l}`; `modulus` defaults to the first irreducible in
    /// lexicographic order.
    pub fn new(p: u32, l: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if l == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let k = (p as u64)
            .checked_pow(l)
            .filter(|&k| k <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{l} exceeds {MAX_ORDER} elements")))?;
        let modulus = match modulus {
            Some(m) => {
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField("modulus coefficient out of range".into()));
                }
                let m = trim(m);
                if m.len() != l as usize + 1 || m[l as usize] != 1 {
                    return Err(Error::InvalidField(format!("modulus must be monic of degree {l}")));
                }
                if !is_irreducible_prime(&m, p) {
                    return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
                }
                m
            }
            None => default_modulus(p, l),
        };
        Ok(Self(Arc::new(Tables::build(p, l, k as u32, modulus))))
    }

    /// The field with `k` elements, `k` a prime power, default modulus.
    pub fn of_order(k: u32) -> Result<Self> {
        for p in 2..=k {
            if k.is_multiple_of(p) {
                let mut l = 0;
                let mut rest = k;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    l += 1;
                }
                if rest != 1 {
                    return Err(Error::InvalidField(format!("{k} is not a prime power")));
                }
                return Self::new(p, l, None);
            }
        }
        Err(Error::InvalidField(format!("{k} is not a prime power")))
    }

    pub fn from_config(cfg: &FieldConfig) -> Result<Self> {
        Self::new(cfg.p, cfg.l, cfg.modulus.clone())
    }

    pub fn config(&self) -> FieldConfig {
        FieldConfig { p: self.0.p, l: self.0.l, modulus: Some(self.0.modulus.clone()) }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn l(&self) -> u32 {
        self.0.l
    }

    /// Number of elements.
    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let t = &self.0;
        if t.p == 2 {
            return a ^ b;
        }
        if let Some(table) = &t.add {
            return table[(a * t.k + b) as usize];
        }
        t.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        let order = t.k - 1;
        let s = t.log[a as usize] + t.log[b as usize];
        t.exp[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &self.0;
        let order = t.k - 1;
        let l = t.log[a as usize];
        Ok(t.exp[((order - l) % order) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.0;
        let order = (t.k - 1) as u64;
        t.exp[((t.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Image of a prime-field scalar `c ∈ F_p`.
    pub fn from_prime(&self, c: u64) -> u32 {
        (c % self.0.p as u64) as u32
    }

    /// Polynomial-basis product computed directly, without the tables.
    pub fn mul_reference(&self, a: u32, b: u32) -> u32 {
        self.0.mul_reference(a, b)
    }

    pub fn element(&self, rep: u32) -> Result<FieldElement> {
        if rep >= self.0.k {
            return Err(Error::InvalidArgument(format!("{rep} is not below field order {}", self.0.k)));
        }
        Ok(FieldElement { rep, spec: self.clone() })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { rep: 0, spec: self.clone() }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { rep: 1, spec: self.clone() }
    }
}

impl Tables {
    fn build(p: u32, l: u32, k: u32, modulus: Vec<u32>) -> Self {
        let mut t = Tables { p, l, k, modulus, log: vec![0; k as usize], exp: Vec::new(), add: None, neg: Vec::new() };
        t.neg = (0..k)
            .map(|a| t.from_digits(&t.to_digits(a).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();
        if p != 2 && k <= ADD_TABLE_LIMIT {
            let mut table = vec![0; (k * k) as usize];
            for a in 0..k {
                for b in 0..k {
                    table[(a * k + b) as usize] = t.add_digits(a, b);
                }
            }
            t.add = Some(table);
        }
        // Search for a primitive element by its multiplicative order.
        let order = k - 1;
        let generator = (1..k)
            .find(|&g| {
                let mut x = g;
                let mut n = 1;
                while x != 1 {
                    x = t.mul_reference(x, g);
                    n += 1;
                }
                n == order
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut x = 1;
        for i in 0..order {
            exp.push(x);
            t.log[x as usize] = i;
            x = t.mul_reference(x, generator);
        }
        t.exp = exp;
        t
    }

    fn to_digits(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.p, self.l as usize)
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.l {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_reference(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.to_digits(a), self.to_digits(b));
        let mut prod = vec![0u32; 2 * self.l as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = prime_poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.l as usize, 0);
        self.from_digits(&r)
    }
}

/// A checked field element carrying its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    rep: u32,
    spec: FieldSpec,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl FieldElement {
    pub fn rep(&self) -> u32 {
        self.rep
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.rep == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { rep: self.spec.add(self.rep, other.rep), spec: self.spec.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { rep: self.spec.sub(self.rep, other.rep), spec: self.spec.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { rep: self.spec.mul(self.rep, other.rep), spec: self.spec.clone() })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self { rep: self.spec.inv(self.rep)?, spec: self.spec.clone() })
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { rep: self.spec.pow(self.rep, e), spec: self.spec.clone() }
    }
}

/// All `k` elements, `0` first, then `1`, then increasing index.
pub fn enumerate(spec: &FieldSpec) -> Vec<FieldElement> {
    (0..spec.k()).map(|rep| FieldElement { rep, spec: spec.clone() }).collect()
}
