//! Dense exact linear algebra over `Q(zeta_N)`.
//!
//! Gaussian elimination with exact division; the pivot in each column is
//! chosen with the smallest coefficient height to limit entry growth. No
//! floating point is used anywhere.

use rayon::prelude::*;

use crate::cyclo::{CycloField, CycloNum};

/// Failure modes of [`ExactMatrix::solve_many`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// These target columns do not lie in the column span.
    NotInSpan(Vec<usize>),
    /// The coefficient matrix does not have full column rank.
    RankDeficient { rank: usize, cols: usize },
}

/// Row-major matrix whose entries all live in one field `Q(zeta_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: CycloField,
    entries: Vec<CycloNum>,
}

impl ExactMatrix {
    pub fn zeros(field: &CycloField, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            field: field.clone(),
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &CycloField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_fn(
        field: &CycloField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycloNum,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                assert_eq!(v.order(), field.order(), "entry order mismatch");
                entries.push(v);
            }
        }
        ExactMatrix { rows, cols, field: field.clone(), entries }
    }

    pub fn from_rows(field: &CycloField, rows: Vec<Vec<CycloNum>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let entries: Vec<CycloNum> = rows.into_iter().flatten().collect();
        assert!(entries.iter().all(|e| e.order() == field.order()));
        ExactMatrix { rows: nrows, cols: ncols, field: field.clone(), entries }
    }

    /// Stack columns side by side (same row count).
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field.order(), other.field.order());
        let mut m = ExactMatrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.at_mut(r, c) = self.at(r, c).clone();
            }
            for c in 0..other.cols {
                *m.at_mut(r, self.cols + c) = other.at(r, c).clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &CycloNum {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut CycloNum {
        &mut self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn set_column(&mut self, c: usize, col: &[CycloNum]) {
        assert_eq!(col.len(), self.rows);
        for (r, v) in col.iter().enumerate() {
            *self.at_mut(r, c) = v.clone();
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    let e = self.at(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = &acc + &(e * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        ExactMatrix::from_fn(&self.field, self.rows, other.cols, |r, c| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                let a = self.at(r, k);
                let b = other.at(k, c);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank together with a basis of the right kernel.
    ///
    /// Each kernel vector has length `cols`, and `rank + kernel.len() == cols`.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<CycloNum>>) {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut kernel = Vec::with_capacity(self.cols - rank);
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -r.at(row, free);
            }
            kernel.push(v);
        }
        (rank, kernel)
    }

    /// Solve `self * x = t` for every column `t` of `targets` at once, with
    /// a single elimination pass over the augmented matrix.
    ///
    /// The coefficient matrix must have full column rank (which is what the
    /// basis-certification steps establish).
    pub fn solve_many(&self, targets: &ExactMatrix) -> Result<Vec<Vec<CycloNum>>, SolveError> {
        assert_eq!(self.rows, targets.rows);
        let aug = self.hstack(targets);
        let (r, pivots) = aug.rref();
        let mut bad = Vec::new();
        let mut rank = 0;
        for &p in &pivots {
            if p >= self.cols {
                bad.push(p - self.cols);
            } else {
                rank += 1;
            }
        }
        if !bad.is_empty() {
            return Err(SolveError::NotInSpan(bad));
        }
        if rank < self.cols {
            return Err(SolveError::RankDeficient { rank, cols: self.cols });
        }
        let mut out = Vec::with_capacity(targets.cols);
        for j in 0..targets.cols {
            let mut x = vec![self.field.zero(); self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                x[col] = r.at(row, self.cols + j).clone();
            }
            out.push(x);
        }
        Ok(out)
    }
}

/// In-place RREF; parallelizes the row updates when the matrix is large.
fn rref_in_place(m: &mut ExactMatrix) -> Vec<usize> {
    let rows = m.rows;
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        if next_row >= rows {
            break;
        }
        // smallest coefficient height among nonzero candidates
        let pivot_row = (next_row..rows)
            .filter(|&r| !m.at(r, col).is_zero())
            .min_by_key(|&r| m.at(r, col).coefficient_height());
        let Some(pivot_row) = pivot_row else { continue };
        if pivot_row != next_row {
            for c in 0..cols {
                let a = next_row * cols + c;
                let b = pivot_row * cols + c;
                m.entries.swap(a, b);
            }
        }
        let inv = m.at(next_row, col).inverse().expect("nonzero pivot");
        for c in col..cols {
            if !m.at(next_row, c).is_zero() {
                *m.at_mut(next_row, c) = m.at(next_row, c) * &inv;
            }
        }
        let (before, rest) = m.entries.split_at_mut(next_row * cols);
        let (pivot_slice, after) = rest.split_at_mut(cols);
        let eliminate = |row: &mut [CycloNum]| {
            let factor = row[col].clone();
            if factor.is_zero() {
                return;
            }
            for (c, p) in pivot_slice.iter().enumerate().skip(col) {
                if !p.is_zero() {
                    row[c] = &row[c] - &(p * &factor);
                }
            }
        };
        if rows * cols > 4096 {
            before.par_chunks_mut(cols).for_each(eliminate);
            after.par_chunks_mut(cols).for_each(eliminate);
        } else {
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}
