//! Factorization over `F_k`: squarefree decomposition, distinct-degree
//! splitting, then equal-degree splitting (Cantor–Zassenhaus for odd `k`, the
//! trace map in characteristic 2). Degrees up to 4 go through trial division.

use num_bigint::BigUint;
use num_traits::One;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;

/// Monic irreducible factors with multiplicities, sorted, plus the leading
/// coefficient of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn product(&self, spec: &FieldSpec) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(spec, self.unit), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    /// Number of distinct irreducible factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

pub fn factor(f: &Polynomial) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    if f.degree() <= Some(4) {
        return factor_trial_division(f);
    }
    let spec = f.spec().clone();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&part) {
            for irreducible in equal_degree(&block, d) {
                factors.push((irreducible, mult));
            }
        }
    }
    factors.sort();
    let unit = f.lead();
    debug_assert_eq!(Factorization { unit, factors: factors.clone() }.product(&spec), *f);
    Ok(Factorization { unit, factors })
}

/// Plain trial division by monic polynomials in increasing order.
pub fn factor_trial_division(f: &Polynomial) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    let spec = f.spec();
    let unit = f.lead();
    let mut rest = f.monic();
    let mut factors = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        for candidate in super::enumerate_polys(spec, d, true) {
            let mut e = 0;
            while candidate.divides(&rest) {
                rest = rest.div_exact(&candidate);
                e += 1;
            }
            if e > 0 {
                factors.push((candidate, e));
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        match factors.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// `g` with `g(X)^p = f(X)`, for `f` whose exponents are all multiples of `p`.
fn pth_root(f: &Polynomial) -> Polynomial {
    let spec = f.spec();
    let p = spec.p() as usize;
    // c^{1/p} = c^{p^{l-1}} in F_{p^l}
    let root_exp = (spec.p() as u64).pow(spec.l() - 1);
    let coeffs = f.coeffs().iter().step_by(p).map(|&c| spec.pow(c, root_exp)).collect();
    Polynomial::from_raw(spec, coeffs)
}

/// Pairwise coprime monic squarefree parts with multiplicities; the product of
/// `part^mult` is `monic(f)`.
pub fn squarefree_decomposition(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree decomposition"));
    }
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, &mut out);
    out.sort();
    Ok(out)
}

fn sqf_rec(f: &Polynomial, scale: u32, out: &mut Vec<(Polynomial, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = f.spec().p();
    let d = f.derivative();
    if d.is_zero() {
        sqf_rec(&pth_root(f), scale * p, out);
        return;
    }
    let mut c = f.gcd(&d).expect("f nonzero");
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w nonzero");
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        sqf_rec(&pth_root(&c), scale * p, out);
    }
}

/// Splits a monic squarefree polynomial into products of irreducibles of equal
/// degree.
fn distinct_degree(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let spec = f.spec();
    let q = spec.k() as u64;
    let x = Polynomial::x(spec);
    let mut rest = f.clone();
    let mut h = x.rem(&rest).expect("nonzero");
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest);
        let g = h.sub(&x).gcd(&rest).expect("rest nonzero");
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`. Splitting
/// candidates are taken in increasing index order, so the result is
/// deterministic.
fn equal_degree(f: &Polynomial, d: usize) -> Vec<Polynomial> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let spec = f.spec();
    let q = spec.k() as u64;
    let one = Polynomial::one(spec);
    let odd_exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1u32;
    let trace_terms = spec.l() as usize * d;
    let limit = q.saturating_pow(n as u32);
    for index in 2..limit {
        let a = Polynomial::from_index(spec, index);
        let b = if spec.p() == 2 {
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..trace_terms {
                term = term.mul_mod(&term, f);
                acc = acc.add(&term);
            }
            acc
        } else {
            a.pow_mod_big(&odd_exp, f).sub(&one)
        };
        let g = b.gcd(f).expect("f nonzero");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut left = equal_degree(&g, d);
            left.extend(equal_degree(&f.div_exact(&g), d));
            return left;
        }
    }
    unreachable!("a splitting element exists below |f|")
}

/// Rabin's test.
pub fn is_irreducible(f: &Polynomial) -> bool {
    let Some(n) = f.degree().filter(|&n| n > 0) else {
        return false;
    };
    let f = f.monic();
    let spec = f.spec();
    let q = spec.k() as u64;
    let x = Polynomial::x(spec);
    let frob = |times: usize| {
        let mut h = x.rem(&f).expect("nonzero");
        for _ in 0..times {
            h = h.pow_mod(q, &f);
        }
        h
    };
    if frob(n).sub(&x.rem(&f).expect("nonzero")).is_zero() {
        let mut m = n;
        let mut r = 2;
        let mut primes = Vec::new();
        while m > 1 {
            if m % r == 0 {
                primes.push(r);
                while m % r == 0 {
                    m /= r;
                }
            }
            r += 1;
        }
        primes.into_iter().all(|r| frob(n / r).sub(&x).gcd(&f).expect("f nonzero").is_one())
    } else {
        false
    }
}
