//! Box counting for a finite surrogate of `W_S(m, n; ψ) ∩ U`.
//!
//! A depth-`T` cylinder fixes the first `T` digits of every entry of `A`. It
//! survives if it meets `{A : ‖qA‖ < ψ(q)}` for some `q ∈ S` in the cutoff
//! band `k^{j_min} ≤ |q|_∞ < k^J`. For one `q` and one column `a`, the set is
//! the kernel of the matrix `H` of [`crate::measure::frac_rows`], so the
//! cylinder meets it iff the fixed digits satisfy the relations of `H` that do
//! not involve free digits. Those relations are read off a row echelon form
//! with the free variables ordered first.
//!
//! The band defaults to the single block `|q|_∞ = k^{J-1}`. Lower blocks
//! swamp the count: `ψ(q) = 1` for constant `q`, which makes every cylinder
//! survive, and in general a block with `(1 + λ) N < T` contributes about
//! `k^{T - (λ - 1) N}` cylinders.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abs::AbsValue;
use crate::dimension::theorem1_verdict;
use crate::error::{Error, Result};
use crate::exponents::{ApproxFunction, SetFamily};
use crate::ff::FieldSpec;
use crate::linalg::Matrix;
use crate::measure::frac_rows;
use crate::poly::PolyVector;

/// Added to `⌈T/(1 + λ)⌉` by [`choose_cutoff`].
pub const CUTOFF_MARGIN: usize = 1;
/// Exhaustive mode enumerates at most `2^26` cylinders.
pub const EXHAUSTIVE_BITS: f64 = 26.0;
/// Largest candidate set propagation mode builds at one depth.
pub const MAX_CANDIDATES: usize = 1 << 24;

/// `J = ⌈T/(1 + λ)⌉ + 1`, so that the band `|q|_∞ = k^{J-1}` has
/// `(1 + λ)(J - 1) ≥ T`: its resonant neighbourhoods are no wider than a
/// depth-`T` cylinder. A heuristic; reports include `J ± 1`.
pub fn choose_cutoff(t: usize, lambda: &BigRational) -> Result<usize> {
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument("λ must be positive".into()));
    }
    let t = BigRational::from_integer(t.into());
    let base = (t / (BigRational::from_integer(1.into()) + lambda)).ceil().to_integer();
    Ok(base.to_usize().expect("cutoff fits in usize") + CUTOFF_MARGIN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every cylinder at every depth is tested.
    Exhaustive,
    /// Depth `T + 1` survivors are searched among children of depth-`T`
    /// survivors.
    Propagation,
    /// Exhaustive when the guard allows it, otherwise propagation.
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxCountRun {
    pub n: usize,
    /// Final digit depth `T`.
    pub depth: usize,
    /// `J`; defaults to [`choose_cutoff`] with `λ` the exponent of `ψ`.
    #[serde(default)]
    pub cutoff: Option<usize>,
    /// `j_min`; defaults to `J - 1`.
    #[serde(default)]
    pub lowest_block: Option<usize>,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthRow {
    pub depth: usize,
    pub survivors: u64,
    /// `log_k N_T / T`, `0` when nothing survives.
    pub estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sensitivity {
    pub cutoff: usize,
    /// `None` when the run exceeds the scale guard.
    pub survivors: Option<u64>,
    pub estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxCountReport {
    pub k: u32,
    pub m: usize,
    pub n: usize,
    pub depth: usize,
    pub cutoff: usize,
    pub lowest_block: usize,
    pub mode: Mode,
    /// Vectors of the band with `ψ(q) ≠ 0`.
    pub vectors: usize,
    pub series: Vec<DepthRow>,
    #[serde(serialize_with = "crate::serde_util::rational_opt")]
    pub prediction: Option<BigRational>,
    /// Final estimate minus the prediction.
    pub gap: Option<f64>,
    pub sensitivity: Vec<Sensitivity>,
}

impl BoxCountReport {
    pub fn final_estimate(&self) -> f64 {
        self.series.last().map_or(0.0, |r| r.estimate)
    }

    /// Whether the estimates over depths `≥ from` never increase and never
    /// drop below the prediction.
    pub fn approaches_from_above(&self, from: usize) -> bool {
        let Some(p) = self.prediction.as_ref().and_then(|p| p.to_f64()) else { return false };
        let tail: Vec<f64> = self.series.iter().filter(|r| r.depth >= from).map(|r| r.estimate).collect();
        tail.windows(2).all(|w| w[1] <= w[0] + 1e-12) && tail.iter().all(|&e| e >= p - 1e-12)
    }
}

/// The relations a depth-`t` prefix must satisfy for one column to meet
/// `{a : ‖qa‖ < k^{-r}}`; `None` when there are none.
fn prefix_relations(spec: &FieldSpec, q: &PolyVector, r: i64, t: usize) -> Result<Option<Matrix>> {
    if r <= 0 {
        return Ok(None);
    }
    let m = q.m();
    let d = q.max_degree().expect("nonzero vector");
    let full = (r as usize + d).max(t);
    let h = frac_rows(q, r, full)?;
    let free = m * (full - t);
    // free digits first, then the prefix in the order `i * t + s - 1`
    let position = |i: usize, s: usize| {
        if s > t {
            i * (full - t) + (s - t - 1)
        } else {
            free + i * t + s - 1
        }
    };
    let mut mat = Matrix::zeros(spec, h.len(), m * full);
    for (row, coeffs) in h.iter().enumerate() {
        for i in 0..m {
            for s in 1..=full {
                let c = coeffs[i * full + s - 1];
                if c != 0 {
                    mat.set(row, position(i, s), c);
                }
            }
        }
    }
    let pivots = mat.rref_in_place();
    let rows: Vec<Vec<u32>> =
        pivots.iter().enumerate().filter(|(_, &p)| p >= free).map(|(row, _)| mat.row(row)[free..].to_vec()).collect();
    if rows.is_empty() {
        return Ok(None);
    }
    Ok(Some(Matrix::from_rows(spec, m * t, &rows)))
}

/// Per-vector relations at one depth. An empty list of matrices for some
/// vector means every cylinder survives.
struct Relations {
    per_vector: Vec<Option<Matrix>>,
    width: usize,
}

impl Relations {
    fn build(spec: &FieldSpec, band: &[(PolyVector, i64)], m: usize, t: usize) -> Result<Self> {
        let per_vector = band.iter().map(|(q, r)| prefix_relations(spec, q, *r, t)).collect::<Result<_>>()?;
        Ok(Self { per_vector, width: m * t })
    }

    /// `digits` holds one block of `m t` digits per column.
    fn survives(&self, digits: &[u32]) -> bool {
        self.per_vector.iter().any(|rel| match rel {
            None => true,
            Some(l) => digits.chunks(self.width).all(|col| l.mul_vec(col).iter().all(|&x| x == 0)),
        })
    }
}

fn decode(mut index: u64, k: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (index % k as u64) as u32;
            index /= k as u64;
            d
        })
        .collect()
}

fn exhaustive_count(rel: &Relations, k: u32, len: usize) -> u64 {
    let total = (k as u64).pow(len as u32);
    (0..total).into_par_iter().filter(|&i| rel.survives(&decode(i, k, len))).count() as u64
}

/// Children of a depth-`t` cylinder at depth `t + 1`, in the column layout.
fn children(parent: &[u32], k: u32, cols: usize, m: usize, t: usize) -> Vec<Vec<u32>> {
    let entries = cols * m;
    let total = (k as u64).pow(entries as u32);
    (0..total)
        .map(|index| {
            let new = decode(index, k, entries);
            let mut child = Vec::with_capacity(entries * (t + 1));
            for e in 0..entries {
                child.extend_from_slice(&parent[e * t..(e + 1) * t]);
                child.push(new[e]);
            }
            child
        })
        .collect()
}

fn log_k(x: u64, k: u32) -> f64 {
    (x as f64).ln() / (k as f64).ln()
}

fn estimate(survivors: u64, k: u32, depth: usize) -> f64 {
    if survivors == 0 || depth == 0 {
        0.0
    } else {
        log_k(survivors, k) / depth as f64
    }
}

/// The band `k^{lowest} ≤ |q|_∞ < k^{cutoff}` with `r = -log_k ψ(q)`.
fn band(s: &SetFamily, psi: &ApproxFunction, lowest: usize, cutoff: usize) -> Vec<(PolyVector, i64)> {
    (lowest..cutoff)
        .flat_map(|b| s.enumerate_block(b))
        .filter_map(|q| match psi.eval(&q) {
            AbsValue::Pow(e) => Some((q, -e)),
            AbsValue::Zero => None,
        })
        .collect()
}

struct Counter<'a> {
    spec: &'a FieldSpec,
    m: usize,
    n: usize,
    mode: Mode,
}

impl Counter<'_> {
    fn exhaustive_allowed(&self, t: usize) -> bool {
        (self.m * self.n * t) as f64 * (self.spec.k() as f64).log2() <= EXHAUSTIVE_BITS
    }

    fn resolve(&self, depth: usize) -> Result<Mode> {
        match self.mode {
            Mode::Exhaustive if !self.exhaustive_allowed(depth) => Err(Error::ScaleExceeded(format!(
                "k^(mnT) cylinders with mnT·log2 k > {EXHAUSTIVE_BITS}"
            ))),
            Mode::Auto if self.exhaustive_allowed(depth) => Ok(Mode::Exhaustive),
            Mode::Auto => Ok(Mode::Propagation),
            mode => Ok(mode),
        }
    }

    /// Survivor counts at depths `1..=depth`.
    fn series(&self, band: &[(PolyVector, i64)], depth: usize) -> Result<Vec<u64>> {
        let k = self.spec.k();
        match self.resolve(depth)? {
            Mode::Exhaustive => (1..=depth)
                .map(|t| {
                    let rel = Relations::build(self.spec, band, self.m, t)?;
                    Ok(exhaustive_count(&rel, k, self.m * self.n * t))
                })
                .collect(),
            _ => {
                let mut counts = Vec::with_capacity(depth);
                let mut alive: Vec<Vec<u32>> = vec![Vec::new()];
                let branching = (k as usize).pow((self.m * self.n) as u32);
                for t in 1..=depth {
                    if alive.len().saturating_mul(branching) > MAX_CANDIDATES {
                        return Err(Error::ScaleExceeded(format!("more than {MAX_CANDIDATES} candidates at depth {t}")));
                    }
                    let rel = Relations::build(self.spec, band, self.m, t)?;
                    let (m, n) = (self.m, self.n);
                    alive = alive
                        .par_iter()
                        .flat_map_iter(|p| children(p, k, n, m, t - 1).into_iter().filter(|c| rel.survives(c)))
                        .collect();
                    counts.push(alive.len() as u64);
                }
                Ok(counts)
            }
        }
    }
}

/// Survivor counts and estimates at depths `1..=T`, with the dimension
/// predicted from `v(S)` and `λ(ψ)` when both are known exactly.
pub fn box_count(s: &SetFamily, psi: &ApproxFunction, run: &BoxCountRun) -> Result<BoxCountReport> {
    let spec = s.spec();
    let m = s.m();
    if psi.m() != m {
        return Err(Error::Dimension(format!("S has m = {m}, ψ has m = {}", psi.m())));
    }
    if psi.spec() != spec {
        return Err(Error::FieldMismatch);
    }
    if run.n == 0 || run.depth == 0 {
        return Err(Error::InvalidArgument("n and the depth must be at least 1".into()));
    }
    let lambda = psi.power_exponent().cloned();
    let cutoff = match (run.cutoff, &lambda) {
        (Some(j), _) => j,
        (None, Some(l)) => choose_cutoff(run.depth, l)?,
        (None, None) => return Err(Error::InvalidArgument("ψ has no exponent; give the cutoff J".into())),
    };
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff J must be at least 1".into()));
    }
    let lowest = run.lowest_block.unwrap_or(cutoff - 1);
    if lowest >= cutoff {
        return Err(Error::InvalidArgument(format!("lowest block {lowest} is not below the cutoff {cutoff}")));
    }
    let counter = Counter { spec, m, n: run.n, mode: run.mode };
    let mode = counter.resolve(run.depth)?;
    let k = spec.k();

    let members = band(s, psi, lowest, cutoff);
    let series: Vec<DepthRow> = counter
        .series(&members, run.depth)?
        .into_iter()
        .enumerate()
        .map(|(i, survivors)| DepthRow { depth: i + 1, survivors, estimate: estimate(survivors, k, i + 1) })
        .collect();

    let mut sensitivity = Vec::new();
    for j in [cutoff.checked_sub(1), Some(cutoff + 1)].into_iter().flatten().filter(|&j| j >= 1) {
        let low = match run.lowest_block {
            Some(l) => l.min(j - 1),
            None => j - 1,
        };
        let alt = band(s, psi, low, j);
        let survivors = match counter.series(&alt, run.depth) {
            Ok(series) => series.last().copied(),
            Err(Error::ScaleExceeded(_)) => None,
            Err(e) => return Err(e),
        };
        let estimate = survivors.map(|c| estimate(c, k, run.depth));
        sensitivity.push(Sensitivity { cutoff: j, survivors, estimate });
    }

    let prediction = match (s.oracle_v(), &lambda) {
        (Some(v), Some(l)) => theorem1_verdict(m, run.n, &v, l).ok().map(|v| v.dim),
        _ => None,
    };
    let last = series.last().map_or(0.0, |r| r.estimate);
    let gap = prediction.as_ref().and_then(|p| p.to_f64()).map(|p| last - p);
    Ok(BoxCountReport {
        k,
        m,
        n: run.n,
        depth: run.depth,
        cutoff,
        lowest_block: lowest,
        mode,
        vectors: members.len(),
        series,
        prediction,
        gap,
        sensitivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::PsiConfig;

    fn r(s: &str) -> BigRational {
        crate::serde_util::parse_rational(s).unwrap()
    }

    fn run(depth: usize, cutoff: Option<usize>, lowest: Option<usize>, mode: Mode) -> BoxCountRun {
        BoxCountRun { n: 1, depth, cutoff, lowest_block: lowest, mode }
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(choose_cutoff(12, &r("3")).unwrap(), 4);
        assert_eq!(choose_cutoff(10, &r("1")).unwrap(), 6);
        assert_eq!(choose_cutoff(14, &r("3")).unwrap(), 5);
        assert_eq!(choose_cutoff(10, &r("1000000")).unwrap(), 1 + CUTOFF_MARGIN);
        assert!(choose_cutoff(10, &r("0")).is_err());
    }

    #[test]
    fn psi_one_keeps_everything() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::all(&f2, 1);
        let psi = ApproxFunction::power(&f2, 1, r("0"));
        let rep = box_count(&s, &psi, &run(6, Some(3), Some(0), Mode::Exhaustive)).unwrap();
        assert!(rep.series.iter().all(|row| row.survivors == 1 << row.depth));
        assert_eq!(rep.final_estimate(), 1.0);
    }

    #[test]
    fn psi_zero_keeps_nothing() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::all(&f2, 1);
        let psi = ApproxFunction::new(&f2, 1, &PsiConfig::Table { exponents: vec![] }).unwrap();
        let rep = box_count(&s, &psi, &run(5, Some(3), Some(0), Mode::Exhaustive)).unwrap();
        assert_eq!(rep.vectors, 0);
        assert!(rep.series.iter().all(|row| row.survivors == 0 && row.estimate == 0.0));
    }

    #[test]
    fn modes_agree() {
        for k in [2, 3] {
            let f = FieldSpec::of_order(k).unwrap();
            for m in [1, 2] {
                let s = SetFamily::all(&f, m);
                let psi = ApproxFunction::power(&f, m, r("2"));
                let depth = if k == 3 || m == 2 { 4 } else { 9 };
                let a = box_count(&s, &psi, &run(depth, Some(2), Some(1), Mode::Exhaustive)).unwrap();
                let b = box_count(&s, &psi, &run(depth, Some(2), Some(1), Mode::Propagation)).unwrap();
                let ca: Vec<u64> = a.series.iter().map(|x| x.survivors).collect();
                let cb: Vec<u64> = b.series.iter().map(|x| x.survivors).collect();
                assert_eq!(ca, cb, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn exhaustive_guard() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let s = SetFamily::all(&f2, 1);
        let psi = ApproxFunction::power(&f2, 1, r("30"));
        assert!(matches!(box_count(&s, &psi, &run(27, None, None, Mode::Exhaustive)), Err(Error::ScaleExceeded(_))));
        // X keeps a_1 free, X + 1 forces constant digits: 0…0, 10…0, 1…1
        let rep = box_count(&s, &psi, &run(27, Some(2), None, Mode::Auto)).unwrap();
        assert_eq!(rep.mode, Mode::Propagation);
        assert_eq!(rep.series.last().unwrap().survivors, 3);
        // J - 1 = 1 is the block of constants, where every cylinder survives
        assert_eq!(rep.sensitivity[0].survivors, None);
    }
}
