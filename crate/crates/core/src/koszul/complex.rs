//! The Koszul chain complex `M ⊗ W_nu(q)` and cochain complex
//! `Hom(W_nu(p), M)`, one weight slice at a time.
//!
//! A chain slice at total weight t in degree q has basis
//! `m_i ⊗ w_k` with `m_i` in `M_{t - nu(q)}`, indexed `i * dim W + k`.
//! A cochain slice at shift s in degree p has basis `m_i ⊗ w_k^*` with
//! `m_i` in `M_{nu(p) + s}`, indexed the same way.

use crate::bimodule::GradedBimodule;
use crate::linalg::{Field, Matrix};
use crate::presentation::parse::Side;
use crate::presentation::word;
use crate::presentation::{nu, Algebra, Seg};

/// Pushes `coeff * mat` as a block from `(i, src_k)` to `(i', dst_k)`.
pub(crate) fn push_block<F: Field>(
    f: &F,
    trip: &mut Vec<(usize, usize, F::Elem)>,
    mat: &Matrix<F>,
    (src_k, src_w): (usize, usize),
    (dst_k, dst_w): (usize, usize),
    coeff: &F::Elem,
) {
    for (i2, row) in mat.rows().iter().enumerate() {
        for (i, x) in row {
            trip.push((i2 * dst_w + dst_k, i * src_w + src_k, f.mul(coeff, x)));
        }
    }
}

pub fn chain_coeff_weight(alg: &Algebra<impl Field>, q: usize, t: i64) -> i64 {
    t - nu(alg.n(), q) as i64
}

pub fn chain_dim<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> usize {
    m.dim(chain_coeff_weight(alg, q, t)) * alg.w_dim(nu(alg.n(), q))
}

/// Whether the degree-q chain space at total weight t is known.
pub fn chain_known<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> bool {
    alg.w_dim(nu(alg.n(), q)) == 0 || m.is_known(chain_coeff_weight(alg, q, t))
}

/// Whether the homology at `(q, t)` only involves known components.
pub fn chain_slice_exact<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> bool {
    chain_known(alg, m, q, t) && chain_known(alg, m, q + 1, t) && (q == 0 || chain_known(alg, m, q - 1, t))
}

/// `b_K` from degree q to degree q-1 at total weight t (q >= 1).
pub fn chain_differential<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> Matrix<F> {
    assert!(q >= 1, "chain differential needs q >= 1");
    let f = alg.field();
    let n = alg.n();
    let d = alg.num_gens();
    let (nq, nq1) = (nu(n, q), nu(n, q - 1));
    let (dw, dw1) = (alg.w_dim(nq), alg.w_dim(nq1));
    let r = t - nq as i64;
    let (rows, cols) = (m.dim(t - nq1 as i64) * dw1, m.dim(r) * dw);
    let mut trip = Vec::new();
    if rows > 0 && cols > 0 {
        if q % 2 == 1 {
            // m x_1 ⊗ x_2 … x_nu  -  x_nu m ⊗ x_1 … x_{nu-1}
            let neg = f.neg(&f.one());
            let first = alg.split(nq, &[Seg::Free(1), Seg::W(nq - 1)]);
            let last = alg.split(nq, &[Seg::W(nq - 1), Seg::Free(1)]);
            for k in 0..dw {
                for term in &first[k] {
                    let g = word::decode(d, term.idx[0], 1)[0];
                    let mat = m.action_gen(Side::Right, g, r);
                    push_block(f, &mut trip, &mat, (k, dw), (term.idx[1], dw1), &term.coeff);
                }
                for term in &last[k] {
                    let g = word::decode(d, term.idx[1], 1)[0];
                    let mat = m.action_gen(Side::Left, g, r);
                    let c = f.mul(&neg, &term.coeff);
                    push_block(f, &mut trip, &mat, (k, dw), (term.idx[0], dw1), &c);
                }
            }
        } else {
            // sum_i (x_{..} … x_nu) m (x_1 … x_i) ⊗ middle
            for i in 0..n {
                let j = n - 1 - i;
                let table = alg.split(nq, &[Seg::Free(i), Seg::W(nq1), Seg::Free(j)]);
                for (k, terms) in table.iter().enumerate() {
                    for term in terms {
                        let u = word::decode(d, term.idx[0], i);
                        let v = word::decode(d, term.idx[2], j);
                        let ru = m.word_action(Side::Right, &u, r);
                        let lv = m.word_action(Side::Left, &v, r + i as i64);
                        let mat = lv.mul(&ru);
                        push_block(f, &mut trip, &mat, (k, dw), (term.idx[1], dw1), &term.coeff);
                    }
                }
            }
        }
    }
    Matrix::from_triplets(f, rows, cols, trip)
}

pub fn cochain_coeff_weight(alg: &Algebra<impl Field>, p: usize, s: i64) -> i64 {
    nu(alg.n(), p) as i64 + s
}

pub fn cochain_dim<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, p: usize, s: i64) -> usize {
    m.dim(cochain_coeff_weight(alg, p, s)) * alg.w_dim(nu(alg.n(), p))
}

pub fn cochain_known<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, p: usize, s: i64) -> bool {
    alg.w_dim(nu(alg.n(), p)) == 0 || m.is_known(cochain_coeff_weight(alg, p, s))
}

pub fn cochain_slice_exact<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, p: usize, s: i64) -> bool {
    cochain_known(alg, m, p, s)
        && cochain_known(alg, m, p + 1, s)
        && (p == 0 || cochain_known(alg, m, p - 1, s))
}

/// `b_K` from degree p to degree p+1 at shift s.
pub fn cochain_differential<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, p: usize, s: i64) -> Matrix<F> {
    let f = alg.field();
    let n = alg.n();
    let d = alg.num_gens();
    let (np, np1) = (nu(n, p), nu(n, p + 1));
    let (dw, dw1) = (alg.w_dim(np), alg.w_dim(np1));
    let r = np as i64 + s;
    let r1 = np1 as i64 + s;
    let (rows, cols) = (m.dim(r1) * dw1, m.dim(r) * dw);
    let mut trip = Vec::new();
    if rows > 0 && cols > 0 {
        if p % 2 == 0 {
            // f(x_1 … x_nu) x_{nu+1}  -  x_1 f(x_2 … x_{nu+1})
            let neg = f.neg(&f.one());
            let tail = alg.split(np1, &[Seg::W(np), Seg::Free(1)]);
            let head = alg.split(np1, &[Seg::Free(1), Seg::W(np)]);
            for k2 in 0..dw1 {
                for term in &tail[k2] {
                    let g = word::decode(d, term.idx[1], 1)[0];
                    let mat = m.action_gen(Side::Right, g, r);
                    push_block(f, &mut trip, &mat, (term.idx[0], dw), (k2, dw1), &term.coeff);
                }
                for term in &head[k2] {
                    let g = word::decode(d, term.idx[0], 1)[0];
                    let mat = m.action_gen(Side::Left, g, r);
                    let c = f.mul(&neg, &term.coeff);
                    push_block(f, &mut trip, &mat, (term.idx[1], dw), (k2, dw1), &c);
                }
            }
        } else {
            // sum_i x_1 … x_i f(x_{i+1} … x_{i+nu}) x_{i+nu+1} … x_{nu(p+1)}
            for i in 0..n {
                let j = n - 1 - i;
                let table = alg.split(np1, &[Seg::Free(i), Seg::W(np), Seg::Free(j)]);
                for (k2, terms) in table.iter().enumerate() {
                    for term in terms {
                        let u = word::decode(d, term.idx[0], i);
                        let v = word::decode(d, term.idx[2], j);
                        let rv = m.word_action(Side::Right, &v, r);
                        let lu = m.word_action(Side::Left, &u, r + j as i64);
                        let mat = lu.mul(&rv);
                        push_block(f, &mut trip, &mat, (term.idx[1], dw), (k2, dw1), &term.coeff);
                    }
                }
            }
        }
    }
    Matrix::from_triplets(f, rows, cols, trip)
}
