use std::collections::BTreeMap;

use super::field::Field;
use super::sparse::SparseVec;

/// Below this many entries the dense elimination path is used.
const DENSE_LIMIT: usize = 64 * 64;

/// Reduced row echelon form of the span of `rows`, each of length `ncols`.
/// Returns the nonzero rows ordered by pivot column and the pivot columns.
/// The result is canonical: it depends only on the span.
pub fn rref<F: Field>(
    field: &F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
) -> (Vec<SparseVec<F::Elem>>, Vec<usize>) {
    if rows.len().saturating_mul(ncols) <= DENSE_LIMIT {
        rref_dense(field, ncols, rows)
    } else {
        rref_sparse(field, ncols, rows)
    }
}

pub fn rref_sparse<F: Field>(
    field: &F,
    _ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
) -> (Vec<SparseVec<F::Elem>>, Vec<usize>) {
    // Forward pass: each stored row has a leading 1 at its key.
    let mut piv: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let mut acc: BTreeMap<usize, F::Elem> = row.into_iter().collect();
        loop {
            let Some((&lead, _)) = acc.iter().next() else {
                break;
            };
            match piv.get(&lead) {
                Some(p) => {
                    let c = field.neg(&acc.remove(&lead).unwrap());
                    for (j, x) in p.iter().skip(1) {
                        let t = field.mul(&c, x);
                        match acc.get_mut(j) {
                            Some(y) => {
                                *y = field.add(y, &t);
                                if field.is_zero(y) {
                                    acc.remove(j);
                                }
                            }
                            None => {
                                acc.insert(*j, t);
                            }
                        }
                    }
                }
                None => {
                    let inv = field.inv(&acc[&lead]);
                    let r: SparseVec<F::Elem> =
                        acc.into_iter().map(|(j, x)| (j, field.mul(&inv, &x))).collect();
                    piv.insert(lead, r);
                    break;
                }
            }
        }
    }
    // Back substitution from the last pivot upwards.
    let cols: Vec<usize> = piv.keys().copied().collect();
    let mut done: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
    for &c in cols.iter().rev() {
        let row = piv.remove(&c).unwrap();
        let mut acc = super::sparse::Accumulator::new(field);
        for (j, x) in &row {
            match done.get(j) {
                Some(p) if *j != c => acc.add_scaled(&field.neg(x), p),
                _ => {}
            }
        }
        let correction = acc.finish();
        let mut merged: BTreeMap<usize, F::Elem> = row.into_iter().collect();
        for (j, x) in correction {
            match merged.get_mut(&j) {
                Some(y) => {
                    *y = field.add(y, &x);
                    if field.is_zero(y) {
                        merged.remove(&j);
                    }
                }
                None => {
                    merged.insert(j, x);
                }
            }
        }
        done.insert(c, merged.into_iter().collect());
    }
    let pivots: Vec<usize> = done.keys().copied().collect();
    (done.into_values().collect(), pivots)
}

pub fn rref_dense<F: Field>(
    field: &F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
) -> (Vec<SparseVec<F::Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<F::Elem>> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| super::sparse::to_dense(field, r, ncols))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        // Prefer the pivot with the smallest representation.
        let best = (rank..m.len())
            .filter(|&i| !field.is_zero(&m[i][col]))
            .min_by_key(|&i| field.size_hint(&m[i][col]));
        let Some(b) = best else { continue };
        m.swap(rank, b);
        let inv = field.inv(&m[rank][col]);
        for x in m[rank].iter_mut().skip(col) {
            *x = field.mul(&inv, x);
        }
        let prow = m[rank].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == rank || field.is_zero(&r[col]) {
                continue;
            }
            let c = field.neg(&r[col]);
            for j in col..ncols {
                if !field.is_zero(&prow[j]) {
                    field.add_mul_assign(&mut r[j], &c, &prow[j]);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    let out = m
        .iter()
        .map(|r| super::sparse::from_dense(field, r))
        .collect();
    (out, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use crate::linalg::sparse::from_dense;
    use proptest::prelude::*;

    fn rows_q(v: &[Vec<i64>]) -> Vec<SparseVec<num_rational::BigRational>> {
        let q = Rationals;
        v.iter()
            .map(|r| from_dense(&q, &r.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>()))
            .collect()
    }

    #[test]
    fn known_rref() {
        let q = Rationals;
        let rows = rows_q(&[vec![0, 2, 4, 2], vec![1, 1, 1, 1], vec![1, 2, 3, 2]]);
        let (r, p) = rref_sparse(&q, 4, rows.clone());
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r, rows_q(&[vec![1, 0, -1, 0], vec![0, 1, 2, 1]]));
        assert_eq!(rref_dense(&q, 4, rows), (r, p));
    }

    proptest! {
        #[test]
        fn dense_and_sparse_agree(
            data in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 7), 0..9)
        ) {
            let q = Rationals;
            let rows = rows_q(&data);
            prop_assert_eq!(rref_dense(&q, 7, rows.clone()), rref_sparse(&q, 7, rows));
            let f = PrimeField::new(7).unwrap();
            let rows: Vec<_> = data.iter()
                .map(|r| from_dense(&f, &r.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>()))
                .collect();
            prop_assert_eq!(rref_dense(&f, 7, rows.clone()), rref_sparse(&f, 7, rows));
        }
    }
}
