//! Dense linear algebra over `F_k`: reduced row echelon form, rank, kernels,
//! solving, and spans.

use crate::ff::FieldSpec;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self { spec: spec.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    /// All rows must have length `cols`.
    pub fn from_rows(spec: &FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Self { spec: spec.clone(), rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let f = &self.spec;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.spec.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(r, j);
                    if v != 0 {
                        let cur = self.get(i, j);
                        self.set(i, j, f.sub(cur, f.mul(factor, v)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (m, pivots) = self.rref();
        let f = &self.spec;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0; self.cols];
                x[free] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = f.neg(m.get(r, free));
                }
                x
            })
            .collect()
    }

    /// Some `x` with `Mx = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.spec, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// A basis (in reduced echelon form) of the span of `vectors`, each of length
/// `dim`.
pub fn span_basis(spec: &FieldSpec, dim: usize, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let (m, pivots) = Matrix::from_rows(spec, dim, vectors).rref();
    (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(spec: &FieldSpec, dim: usize, basis: &[Vec<u32>], v: &[u32]) -> bool {
    let mut rows = basis.to_vec();
    let before = span_basis(spec, dim, &rows).len();
    rows.push(v.to_vec());
    span_basis(spec, dim, &rows).len() == before
}

/// Calls `visit` with every vector of the span of `basis` (which must be
/// linearly independent), `k^{basis.len()}` of them, in a fixed order.
pub fn for_each_in_span(spec: &FieldSpec, dim: usize, basis: &[Vec<u32>], mut visit: impl FnMut(&[u32])) {
    let k = spec.k();
    let d = basis.len();
    let mut digits = vec![0u32; d];
    let mut v = vec![0u32; dim];
    loop {
        visit(&v);
        // odometer step on the coefficient indices; v tracks Σ c_i · basis[i]
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            let old = digits[i];
            let new = if old + 1 == k { 0 } else { old + 1 };
            digits[i] = new;
            for (x, &b) in v.iter_mut().zip(&basis[i]) {
                *x = spec.add(spec.sub(*x, spec.mul(old, b)), spec.mul(new, b));
            }
            if new != 0 {
                break;
            }
            i += 1;
        }
    }
}
