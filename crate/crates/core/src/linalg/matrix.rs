use std::fmt;

use super::echelon::rref;
use super::field::Field;
use super::sparse::{self, Accumulator, SparseVec};
use super::subspace::Subspace;

/// Sparse row-major matrix over an exact field. Acts on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.nrows, self.ncols, self.field.name())?;
        for i in 0..self.nrows.min(24) {
            let row: Vec<String> = (0..self.ncols.min(24))
                .map(|j| self.field.format(&self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, nrows: usize, ncols: usize) -> Self {
        Matrix {
            field: field.clone(),
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Matrix {
            field: field.clone(),
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    pub fn from_rows(field: &F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.iter().all(|(j, _)| *j < ncols)));
        Matrix {
            field: field.clone(),
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(field: &F, nrows: usize, cols: &[SparseVec<F::Elem>]) -> Self {
        Matrix::from_rows(field, nrows, cols.to_vec()).transpose_to(nrows)
    }

    fn transpose_to(&self, nrows: usize) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                rows[*j].push((i, x.clone()));
            }
        }
        Matrix {
            field: self.field.clone(),
            nrows,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn from_dense(field: &F, ncols: usize, data: &[Vec<F::Elem>]) -> Self {
        let rows = data.iter().map(|r| sparse::from_dense(field, r)).collect();
        Matrix::from_rows(field, ncols, rows)
    }

    pub fn from_i64(field: &F, ncols: usize, data: &[Vec<i64>]) -> Self {
        let rows = data
            .iter()
            .map(|r| {
                let d: Vec<F::Elem> = r.iter().map(|&x| field.from_i64(x)).collect();
                sparse::from_dense(field, &d)
            })
            .collect();
        Matrix::from_rows(field, ncols, rows)
    }

    /// Sums duplicate entries.
    pub fn from_triplets(
        field: &F,
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Self {
        let mut accs: Vec<Accumulator<F>> = (0..nrows).map(|_| Accumulator::new(field)).collect();
        for (i, j, x) in entries {
            assert!(i < nrows && j < ncols, "entry ({i},{j}) out of range");
            accs[i].add(j, x);
        }
        let rows = accs.into_iter().map(|a| a.finish()).collect();
        Matrix {
            field: field.clone(),
            nrows,
            ncols,
            rows,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }
    pub fn row(&self, i: usize) -> &SparseVec<F::Elem> {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        sparse::get(&self.rows[i], j)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows
            .iter()
            .map(|r| sparse::to_dense(&self.field, r, self.ncols))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        self.transpose_to(self.ncols)
    }

    pub fn column(&self, j: usize) -> SparseVec<F::Elem> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| sparse::get(r, j).map(|x| (i, x.clone())))
            .collect()
    }

    pub fn columns(&self) -> Vec<SparseVec<F::Elem>> {
        self.transpose().rows
    }

    /// `self * v` for a sparse column vector `v`.
    pub fn apply(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let x = sparse::dot(&self.field, r, v);
            if !self.field.is_zero(&x) {
                out.push((i, x));
            }
        }
        out
    }

    pub fn apply_dense(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ncols, "dimension mismatch in apply");
        self.rows
            .iter()
            .map(|r| {
                let mut acc = self.field.zero();
                for (j, x) in r {
                    self.field.add_mul_assign(&mut acc, x, &v[*j]);
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in mul");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = Accumulator::new(&self.field);
                for (k, x) in r {
                    acc.add_scaled(x, &other.rows[*k]);
                }
                acc.finish()
            })
            .collect();
        Matrix::from_rows(&self.field, other.ncols, rows)
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        self.axpy(&self.field.one(), other)
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        self.axpy(&self.field.neg(&self.field.one()), other)
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &F::Elem, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            (self.nrows, self.ncols),
            (other.nrows, other.ncols),
            "dimension mismatch in add"
        );
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| sparse::axpy(&self.field, a, c, b))
            .collect();
        Matrix::from_rows(&self.field, self.ncols, rows)
    }

    pub fn scale(&self, c: &F::Elem) -> Matrix<F> {
        let rows = self
            .rows
            .iter()
            .map(|r| sparse::scale(&self.field, c, r))
            .collect();
        Matrix::from_rows(&self.field, self.ncols, rows)
    }

    pub fn neg(&self) -> Matrix<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }

    /// Block matrix `[self | other]`.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.nrows, other.nrows);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, x)| (j + self.ncols, x.clone())));
                r
            })
            .collect();
        Matrix::from_rows(&self.field, self.ncols + other.ncols, rows)
    }

    /// Block matrix `[self ; other]`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix::from_rows(&self.field, self.ncols, rows)
    }

    /// Canonical reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let (rows, piv) = rref(&self.field, self.ncols, self.rows.clone());
        (Matrix::from_rows(&self.field, self.ncols, rows), piv)
    }

    pub fn rank(&self) -> usize {
        rref(&self.field, self.ncols, self.rows.clone()).1.len()
    }

    pub fn row_space(&self) -> Subspace<F> {
        Subspace::from_spanning(&self.field, self.ncols, self.rows.clone())
    }

    /// Column space, a subspace of the codomain.
    pub fn image(&self) -> Subspace<F> {
        Subspace::from_spanning(&self.field, self.nrows, self.columns())
    }

    /// `{ v : self * v = 0 }`, a subspace of the domain.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, piv) = rref(&self.field, self.ncols, self.rows.clone());
        let is_piv = {
            let mut m = vec![false; self.ncols];
            for &p in &piv {
                m[p] = true;
            }
            m
        };
        // Entries of the echelon rows at free columns, grouped by column.
        let mut by_col: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); self.ncols];
        for (i, row) in r.iter().enumerate() {
            for (j, x) in row {
                if !is_piv[*j] {
                    by_col[*j].push((piv[i], x.clone()));
                }
            }
        }
        let vecs = (0..self.ncols)
            .filter(|&j| !is_piv[j])
            .map(|j| {
                let mut v: SparseVec<F::Elem> = by_col[j]
                    .iter()
                    .map(|(p, x)| (*p, self.field.neg(x)))
                    .collect();
                v.push((j, self.field.one()));
                v.sort_by_key(|(k, _)| *k);
                v
            })
            .collect();
        Subspace::from_spanning(&self.field, self.ncols, vecs)
    }

    /// Two-sided inverse, if square and nonsingular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(&self.field, n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let rows = r
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(j, _)| *j >= n)
                    .map(|(j, x)| (j - n, x.clone()))
                    .collect()
            })
            .collect();
        Some(Matrix::from_rows(&self.field, n, rows))
    }

    /// Some `x` with `self * x = b`.
    pub fn solve(&self, b: &SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let bcol = Matrix::from_columns(&self.field, self.nrows, std::slice::from_ref(b));
        let aug = self.hstack(&bcol);
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = Vec::new();
        for (i, &p) in piv.iter().enumerate() {
            if let Some(v) = sparse::get(&r.rows[i], self.ncols) {
                x.push((p, v.clone()));
            }
        }
        Some(x)
    }

    /// Submatrix of the given rows and columns, in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_map[c] = k;
        }
        let out = rows
            .iter()
            .map(|&i| {
                let mut r: SparseVec<F::Elem> = self.rows[i]
                    .iter()
                    .filter(|(j, _)| col_map[*j] != usize::MAX)
                    .map(|(j, x)| (col_map[*j], x.clone()))
                    .collect();
                r.sort_by_key(|(k, _)| *k);
                r
            })
            .collect();
        Matrix::from_rows(&self.field, cols.len(), out)
    }
}
