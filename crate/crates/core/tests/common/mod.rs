//! Builders for test elements written in the notation used by hand.
#![allow(dead_code)]

use koszul_core::koszul::k_blocks;
use koszul_core::linalg::sparse::{Accumulator, SparseVec};
use koszul_core::linalg::{Field, Matrix, Rationals};
use koszul_core::presentation::{nu, word, Algebra};
use koszul_core::presets::preset_algebra;

pub type Q = Rationals;
pub type Elem = <Rationals as Field>::Elem;

pub fn alg(name: &str) -> Algebra<Q> {
    preset_algebra(name, &Rationals).unwrap()
}

pub fn q(x: i64) -> Elem {
    Rationals.from_i64(x)
}

/// Parses `x*y` style words over generators `x, y` (`1` is the empty word).
pub fn w(s: &str) -> Vec<usize> {
    if s == "1" {
        return Vec::new();
    }
    s.split('*')
        .map(|g| match g {
            "x" => 0,
            "y" => 1,
            other => panic!("unknown generator {other}"),
        })
        .collect()
}

/// Element of `V^len` from `(coeff, word)` terms.
pub fn tensor(terms: &[(i64, &str)]) -> (usize, SparseVec<Elem>) {
    let len = w(terms[0].1).len();
    let mut acc = Accumulator::new(&Rationals);
    for (c, s) in terms {
        let ws = w(s);
        assert_eq!(ws.len(), len);
        acc.add(word::encode(2, &ws), q(*c));
    }
    (len, acc.finish())
}

/// Element of `A` from `(coeff, word)` terms, all of one weight.
pub fn a_elem(a: &Algebra<Q>, terms: &[(i64, &str)]) -> (usize, SparseVec<Elem>) {
    let len = w(terms[0].1).len();
    let mut acc = Accumulator::new(&Rationals);
    for (c, s) in terms {
        acc.add_scaled(&q(*c), &a.project_word(&w(s)));
    }
    (len, acc.finish())
}

/// Coordinates of a tensor in the echelon basis of `W_len`.
pub fn w_coords(a: &Algebra<Q>, len: usize, v: &SparseVec<Elem>) -> Vec<Elem> {
    a.w_space(len).coords(v).expect("tensor lies in W")
}

/// Cochain `W_len -> A` prescribed on a user basis of `W_len`: `basis[j]`
/// maps to `values[j]` (weight `r`). Returned in slice coordinates.
pub fn cochain_on_basis(
    a: &Algebra<Q>,
    len: usize,
    basis: &[SparseVec<Elem>],
    values: &[SparseVec<Elem>],
) -> SparseVec<Elem> {
    let ws = a.w_space(len);
    let dw = ws.dim();
    assert_eq!(basis.len(), dw, "user basis has the wrong size");
    let total = word::pow(a.num_gens(), len);
    let m = Matrix::from_columns(&Rationals, total, basis);
    let mut acc = Accumulator::new(&Rationals);
    for (k, b) in ws.basis().iter().enumerate() {
        let c = m.solve(b).expect("user basis spans W");
        for (j, x) in &c {
            for (i, y) in &values[*j] {
                acc.add(i * dw + k, Rationals.mul(x, y));
            }
        }
    }
    acc.finish()
}

/// Chain `sum coeff * m ⊗ t` of `A ⊗ W_len` in slice coordinates.
pub fn chain_elem(a: &Algebra<Q>, terms: &[(i64, &str, &SparseVec<Elem>)], len: usize) -> SparseVec<Elem> {
    let dw = a.w_dim(len);
    let mut acc = Accumulator::new(&Rationals);
    for (c, m, t) in terms {
        let (_, mv) = a_elem(a, &[(*c, m)]);
        let wc = w_coords(a, len, t);
        for (i, x) in &mv {
            for (k, y) in wc.iter().enumerate() {
                acc.add(i * dw + k, Rationals.mul(x, y));
            }
        }
    }
    acc.finish()
}

/// Element `sum coeff * l ⊗ t ⊗ r` of `K_q` at total weight `t`.
pub fn k_elem(a: &Algebra<Q>, qdeg: usize, tw: i64, terms: &[(i64, &str, &SparseVec<Elem>, &str)]) -> SparseVec<Elem> {
    let kb = k_blocks(a, qdeg, tw);
    let len = nu(a.n(), qdeg);
    let mut acc = Accumulator::new(&Rationals);
    for (c, l, t, r) in terms {
        let (i, lv) = a_elem(a, &[(*c, l)]);
        let (j, rv) = a_elem(a, &[(1, r)]);
        assert_eq!((i + j + len) as i64, tw);
        let off = kb.offset(i).unwrap();
        let dj = a.dim(j as i64);
        let wc = w_coords(a, len, t);
        for (ai, x) in &lv {
            for (k, y) in wc.iter().enumerate() {
                for (bi, z) in &rv {
                    let v = Rationals.mul(&Rationals.mul(x, y), z);
                    acc.add(off + (ai * kb.dim_w + k) * dj + bi, v);
                }
            }
        }
    }
    acc.finish()
}
