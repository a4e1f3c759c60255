//! Deterministic exact linear algebra over ℚ(i).
//!
//! Everything downstream (derivation spans, calculus relation spaces,
//! Levi-Civita systems, windowed torus cohomology) reduces to ranks, kernels,
//! and affine solution families of matrices over [`GaussianRational`]. The
//! routines here are exact and reproducible: the forward pass is fraction-free
//! (Bareiss cross-multiplication, no divisions), pivots are chosen as the
//! first nonzero entry scanning columns left to right and rows top to bottom,
//! and reported bases are normalized reduced echelon forms. Identical inputs
//! give identical outputs on every run and platform.

use crate::scalar::GaussianRational;

/// A dense rows×cols matrix over ℚ(i), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Mat {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    /// The n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == n_cols),
            "ragged rows: expected uniform length {n_cols}"
        );
        Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Row count.
    pub fn n_rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    /// Entry at (r, c).
    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    /// Overwrites the entry at (r, c).
    pub fn set(&mut self, r: usize, c: usize, value: GaussianRational) {
        self.data[r * self.cols + c] = value;
    }

    /// The r-th row as a slice.
    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix transpose.
    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Matrix product self·rhs.
    #[must_use]
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let add = a * rhs.get(k, c);
                    if !add.is_zero() {
                        let cur = out.get(r, c) + add;
                        out.set(r, c, cur);
                    }
                }
            }
        }
        out
    }

    /// Entry-wise sum.
    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entry-wise difference.
    #[must_use]
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entry-wise scaling.
    #[must_use]
    pub fn scale(&self, c: &GaussianRational) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entry-wise complex conjugate.
    #[must_use]
    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(GaussianRational::conj).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// True iff every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussianRational::is_zero)
    }

    /// Rank via the fraction-free forward pass.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.forward_eliminate().len()
    }

    /// In-place fraction-free forward elimination (Bareiss update, first
    /// nonzero pivot scanning columns left to right). Returns the pivot
    /// columns in order; afterwards `self` is upper echelon with untouched
    /// pivot scaling.
    fn forward_eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prev_pivot = GaussianRational::one();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // First nonzero entry in this column at or below pivot_row.
            let found = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero());
            let Some(src) = found else { continue };
            if src != pivot_row {
                self.swap_rows(src, pivot_row);
            }
            let pivot = self.get(pivot_row, col).clone();
            for r in pivot_row + 1..self.rows {
                let factor = self.get(r, col).clone();
                // Bareiss: row_r := (pivot·row_r − factor·row_pivot) / prev_pivot.
                // The division is exact, keeping entries from blowing up.
                for c in col..self.cols {
                    let value = &(&pivot * self.get(r, c)) - &(&factor * self.get(pivot_row, c));
                    let value = value
                        .checked_div(&prev_pivot)
                        .expect("Bareiss divisor is a previous nonzero pivot");
                    self.set(r, c, value);
                }
            }
            prev_pivot = pivot;
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form with its pivot columns. The forward pass is
    /// fraction-free; the back-substitution normalizes pivots to 1, so the
    /// result is the canonical RREF of the row space.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut work = self.clone();
        let pivots = work.forward_eliminate();
        // Normalize pivot rows, then clear above each pivot.
        for (r, &col) in pivots.iter().enumerate() {
            let inv = work
                .get(r, col)
                .inv()
                .expect("pivot entries are nonzero by construction");
            for c in col..work.cols {
                let value = work.get(r, c) * &inv;
                work.set(r, c, value);
            }
        }
        for (r, &col) in pivots.iter().enumerate().rev() {
            for above in 0..r {
                let factor = work.get(above, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..work.cols {
                    let value = work.get(above, c) - &(&factor * work.get(r, c));
                    work.set(above, c, value);
                }
            }
        }
        // Zero out the (numerically already eliminated) rows below the rank
        // so the returned matrix is exactly echelon.
        for r in pivots.len()..work.rows {
            for c in 0..work.cols {
                work.set(r, c, GaussianRational::zero());
            }
        }
        (work, pivots)
    }

    /// Canonical basis of the right kernel {x : A·x = 0}: one vector per free
    /// column, with a 1 in the free coordinate, in ascending free-column
    /// order.
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Solves A·x = b exactly. Returns `None` when inconsistent, otherwise
    /// the particular solution with all free coordinates set to zero,
    /// together with the canonical kernel basis.
    pub fn solve_affine(
        &self,
        b: &[GaussianRational],
    ) -> Option<(Vec<GaussianRational>, Vec<Vec<GaussianRational>>)> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut augmented = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                augmented.set(r, c, self.get(r, c).clone());
            }
            augmented.set(r, self.cols, b[r].clone());
        }
        let (rref, pivots) = augmented.rref();
        if pivots.contains(&self.cols) {
            return None; // A row reduced to 0 = 1.
        }
        let mut particular = vec![GaussianRational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = rref.get(r, self.cols).clone();
        }
        Some((particular, self.kernel()))
    }

    /// True iff `v` lies in the row span.
    pub fn row_span_contains(&self, v: &[GaussianRational]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        if v.iter().all(GaussianRational::is_zero) {
            return true;
        }
        let mut stacked = self.clone();
        stacked.rows += 1;
        stacked.data.extend(v.iter().cloned());
        stacked.rank() == self.rank()
    }

    /// Coordinates of `v` in the given row basis (solves basisᵀ·x = v), or
    /// `None` when `v` is outside the span.
    pub fn coordinates_in_rows(&self, v: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        self.transpose().solve_affine(v).map(|(particular, _)| particular)
    }
}

/// Applies a row vector to a matrix: xᵀ·A, the action used for one-form
/// coefficient updates.
pub fn row_times_mat(x: &[GaussianRational], a: &Mat) -> Vec<GaussianRational> {
    assert_eq!(x.len(), a.n_rows(), "shape mismatch");
    let mut out = vec![GaussianRational::zero(); a.n_cols()];
    for (r, xr) in x.iter().enumerate() {
        if xr.is_zero() {
            continue;
        }
        for (c, slot) in out.iter_mut().enumerate() {
            let term = xr * a.get(r, c);
            if !term.is_zero() {
                *slot += term;
            }
        }
    }
    out
}

/// Dot product of coefficient vectors (no conjugation).
pub fn dot(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    assert_eq!(a.len(), b.len(), "length mismatch");
    let mut acc = GaussianRational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}
