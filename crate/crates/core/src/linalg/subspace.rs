use std::collections::HashMap;

use super::echelon::rref;
use super::field::Field;
use super::matrix::Matrix;
use super::sparse::{self, SparseVec};

/// A subspace of `F^n`, stored as its canonical reduced echelon basis.
/// Two subspaces are equal exactly when their stored bases are equal.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    basis: Vec<SparseVec<F::Elem>>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}
impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> Subspace<F> {
    pub fn from_spanning(field: &F, ambient: usize, vecs: Vec<SparseVec<F::Elem>>) -> Self {
        let (basis, pivots) = rref(field, ambient, vecs);
        Self::from_rref(field, ambient, basis, pivots)
    }

    fn from_rref(
        field: &F,
        ambient: usize,
        basis: Vec<SparseVec<F::Elem>>,
        pivots: Vec<usize>,
    ) -> Self {
        let pivot_row = pivots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots,
            pivot_row,
        }
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Self::from_rref(field, ambient, Vec::new(), Vec::new())
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| vec![(i, field.one())]).collect();
        Self::from_rref(field, ambient, basis, (0..ambient).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn basis(&self) -> &[SparseVec<F::Elem>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    /// Index of the basis vector whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<usize> {
        self.pivot_row.get(&col).copied()
    }

    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(&self.field, self.ambient, self.basis.clone())
    }

    /// Canonical representative of `v` modulo this subspace: zero at every pivot.
    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let mut acc = sparse::Accumulator::new(&self.field);
        for (j, x) in v {
            acc.add(*j, x.clone());
            if let Some(&r) = self.pivot_row.get(j) {
                acc.add_scaled(&self.field.neg(x), &self.basis[r]);
            }
        }
        acc.finish()
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the stored basis, read at the pivots.
    /// Only meaningful when `v` lies in the subspace.
    pub fn coords_unchecked(&self, v: &SparseVec<F::Elem>) -> Vec<F::Elem> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (j, x) in v {
            if let Some(&r) = self.pivot_row.get(j) {
                out[r] = x.clone();
            }
        }
        out
    }

    pub fn coords(&self, v: &SparseVec<F::Elem>) -> Option<Vec<F::Elem>> {
        self.contains(v).then(|| self.coords_unchecked(v))
    }

    /// Vector with the given basis coordinates.
    pub fn combine(&self, coords: &[F::Elem]) -> SparseVec<F::Elem> {
        let mut acc = sparse::Accumulator::new(&self.field);
        for (c, b) in coords.iter().zip(&self.basis) {
            acc.add_scaled(c, b);
        }
        acc.finish()
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::from_spanning(&self.field, self.ambient, v)
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() > other.dim() {
            return other.intersect(self);
        }
        // Combinations of self's basis whose residual modulo `other` vanishes.
        let k = self.dim();
        let n = self.ambient;
        let rows: Vec<SparseVec<F::Elem>> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = other.reduce(b);
                r.push((n + i, self.field.one()));
                r
            })
            .collect();
        let (r, piv) = rref(&self.field, n + k, rows);
        let vecs = r
            .iter()
            .zip(&piv)
            .filter(|(_, &p)| p >= n)
            .map(|(row, _)| {
                let coeffs: Vec<F::Elem> = {
                    let mut c = vec![self.field.zero(); k];
                    for (j, x) in row {
                        c[j - n] = x.clone();
                    }
                    c
                };
                self.combine(&coeffs)
            })
            .collect();
        Subspace::from_spanning(&self.field, n, vecs)
    }

    /// Intersection of a nonempty family.
    pub fn intersect_all(spaces: &[Subspace<F>]) -> Option<Subspace<F>> {
        let (first, rest) = spaces.split_first()?;
        Some(rest.iter().fold(first.clone(), |acc, s| acc.intersect(s)))
    }

    /// Vectors orthogonal to this subspace under the standard pairing.
    pub fn annihilator(&self) -> Subspace<F> {
        self.basis_matrix().kernel()
    }

    /// Columns outside the pivot set, indexing a basis of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivot_row.contains_key(c))
            .collect()
    }

    /// `(projection, section)` for the quotient by this subspace, using the
    /// free columns as quotient basis. `projection * section = identity`.
    pub fn quotient_map(&self) -> (Matrix<F>, Matrix<F>) {
        let free = self.free_columns();
        let mut pos = vec![usize::MAX; self.ambient];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let f = &self.field;
        let proj_cols: Vec<SparseVec<F::Elem>> = (0..self.ambient)
            .map(|j| {
                let red = self.reduce(&vec![(j, f.one())]);
                red.into_iter().map(|(c, x)| (pos[c], x)).collect()
            })
            .collect();
        let proj = Matrix::from_columns(f, free.len(), &proj_cols);
        let sec_cols: Vec<SparseVec<F::Elem>> = free.iter().map(|&c| vec![(c, f.one())]).collect();
        let sec = Matrix::from_columns(f, self.ambient, &sec_cols);
        (proj, sec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::Rationals;
    use proptest::prelude::*;

    fn space(data: &[Vec<i64>], n: usize) -> Subspace<Rationals> {
        Matrix::from_i64(&Rationals, n, data).row_space()
    }

    #[test]
    fn canonical_equality() {
        let a = space(&[vec![1, 1, 0], vec![0, 1, 1]], 3);
        let b = space(&[vec![1, 2, 1], vec![1, 0, -1]], 3);
        assert_eq!(a, b);
        assert_ne!(a, space(&[vec![1, 0, 0]], 3));
    }

    #[test]
    fn known_intersection() {
        let a = space(&[vec![1, 0, 0], vec![0, 1, 0]], 3);
        let b = space(&[vec![0, 1, 0], vec![0, 0, 1]], 3);
        assert_eq!(a.intersect(&b), space(&[vec![0, 1, 0]], 3));
    }

    fn arb_space(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), 0..5)
    }

    proptest! {
        #[test]
        fn intersection_dimension_formula(a in arb_space(5), b in arb_space(5)) {
            let (a, b) = (space(&a, 5), space(&b, 5));
            let i = a.intersect(&b);
            prop_assert_eq!(i.dim() + a.sum(&b).dim(), a.dim() + b.dim());
            prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
            // Oracle: intersection as annihilator of the sum of annihilators.
            let oracle = a.annihilator().sum(&b.annihilator()).annihilator();
            prop_assert_eq!(i, oracle);
        }

        #[test]
        fn quotient_round_trip(a in arb_space(5), v in proptest::collection::vec(-3i64..=3, 5)) {
            let a = space(&a, 5);
            let (p, s) = a.quotient_map();
            prop_assert_eq!(p.mul(&s), Matrix::identity(&Rationals, 5 - a.dim()));
            let q = Rationals;
            let v = sparse::from_dense(&q, &v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>());
            let back = s.apply(&p.apply(&v));
            // v and its lift differ by an element of the subspace.
            prop_assert!(a.contains(&sparse::axpy(&q, &v, &q.from_i64(-1), &back)));
            prop_assert_eq!(a.annihilator().dim(), 5 - a.dim());
        }
    }
}
