//! The Koszul bimodule complex `K(A)` with `K_q = A ⊗ W_nu(q) ⊗ A`, and its
//! identification with the chain complex of the outer square `A ⊗ A`.
//!
//! At total weight t, `K_q` is the sum over `i + j = t - nu(q)` of blocks
//! `A_i ⊗ W ⊗ A_j`, with basis `a ⊗ w_k ⊗ b` indexed
//! `offset + (a * dim W + k) * dim A_j + b`.

use crate::bimodule::{BimoduleKind, GradedBimodule};
use crate::error::{Error, Result};
use crate::homology::SliceHomology;
use crate::linalg::sparse::SparseVec;
use crate::linalg::{Field, Matrix};
use crate::presentation::word;
use crate::presentation::{nu, Algebra, Seg};

use super::complex::{chain_differential, chain_dim};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KBlocks {
    /// `(i, j, offset)`
    pub blocks: Vec<(usize, usize, usize)>,
    pub dim_w: usize,
    pub dim: usize,
}

impl KBlocks {
    pub fn offset(&self, i: usize) -> Option<usize> {
        self.blocks.iter().find(|b| b.0 == i).map(|b| b.2)
    }
}

pub fn k_blocks<F: Field>(alg: &Algebra<F>, q: usize, t: i64) -> KBlocks {
    let nq = nu(alg.n(), q) as i64;
    let dim_w = alg.w_dim(nq as usize);
    let mut blocks = Vec::new();
    let mut off = 0;
    if t >= nq {
        let total = (t - nq) as usize;
        for i in 0..=total {
            let j = total - i;
            blocks.push((i, j, off));
            off += alg.dim(i as i64) * dim_w * alg.dim(j as i64);
        }
    }
    KBlocks {
        blocks,
        dim_w,
        dim: off,
    }
}

/// `d: K_q -> K_{q-1}` at total weight t.
pub fn k_differential<F: Field>(alg: &Algebra<F>, q: usize, t: i64) -> Matrix<F> {
    assert!(q >= 1);
    let f = alg.field();
    let n = alg.n();
    let d = alg.num_gens();
    let (nq, nq1) = (nu(n, q), nu(n, q - 1));
    let src = k_blocks(alg, q, t);
    let dst = k_blocks(alg, q - 1, t);
    let (dw, dw1) = (src.dim_w, dst.dim_w);
    let mut trip = Vec::new();
    // Each contribution multiplies a on the right by u and b on the left by v.
    let mut emit = |i: usize, j: usize, off: usize, k: usize, k2: usize, u: &[usize], v: &[usize], c: &F::Elem| {
        let (i2, j2) = (i + u.len(), j + v.len());
        let Some(off2) = dst.offset(i2) else { return };
        let au = alg.right_word_matrix(i, u);
        let vb = alg.left_word_matrix(v, j);
        let (dj, dj2) = (alg.dim(j as i64), alg.dim(j2 as i64));
        for (a2, row_a) in au.rows().iter().enumerate() {
            for (a, x) in row_a {
                for (b2, row_b) in vb.rows().iter().enumerate() {
                    for (b, y) in row_b {
                        let val = f.mul(c, &f.mul(x, y));
                        trip.push((off2 + (a2 * dw1 + k2) * dj2 + b2, off + (a * dw + k) * dj + b, val));
                    }
                }
            }
        }
    };
    for &(i, j, off) in &src.blocks {
        if q % 2 == 1 {
            let neg = f.neg(&f.one());
            let first = alg.split(nq, &[Seg::Free(1), Seg::W(nq - 1)]);
            let last = alg.split(nq, &[Seg::W(nq - 1), Seg::Free(1)]);
            for k in 0..dw {
                for term in &first[k] {
                    let g = word::decode(d, term.idx[0], 1);
                    emit(i, j, off, k, term.idx[1], &g, &[], &term.coeff);
                }
                for term in &last[k] {
                    let g = word::decode(d, term.idx[1], 1);
                    emit(i, j, off, k, term.idx[0], &[], &g, &f.mul(&neg, &term.coeff));
                }
            }
        } else {
            for l in 0..n {
                let r = n - 1 - l;
                let table = alg.split(nq, &[Seg::Free(l), Seg::W(nq1), Seg::Free(r)]);
                for (k, terms) in table.iter().enumerate() {
                    for term in terms {
                        let u = word::decode(d, term.idx[0], l);
                        let v = word::decode(d, term.idx[2], r);
                        emit(i, j, off, k, term.idx[1], &u, &v, &term.coeff);
                    }
                }
            }
        }
    }
    Matrix::from_triplets(f, dst.dim, src.dim, trip)
}

pub fn k_homology<F: Field>(alg: &Algebra<F>, q: usize, t: i64) -> SliceHomology<F> {
    let dim = k_blocks(alg, q, t).dim;
    let out = (q >= 1).then(|| k_differential(alg, q, t));
    let inc = k_differential(alg, q + 1, t);
    SliceHomology::new(alg.field(), dim, Some(&inc), out.as_ref())
}

/// The inner right action `(b ⊗ w ⊗ a)(u ⊗ u') = u' b ⊗ w ⊗ a u` on `K_q`.
pub fn k_inner_action<F: Field>(alg: &Algebra<F>, u: &[usize], u2: &[usize], q: usize, t: i64) -> Matrix<F> {
    let f = alg.field();
    let src = k_blocks(alg, q, t);
    let t2 = t + (u.len() + u2.len()) as i64;
    let dst = k_blocks(alg, q, t2);
    let dw = src.dim_w;
    let mut trip = Vec::new();
    for &(i, j, off) in &src.blocks {
        let (i2, j2) = (i + u2.len(), j + u.len());
        let off2 = dst.offset(i2).expect("block exists");
        let lb = alg.left_word_matrix(u2, i);
        let ra = alg.right_word_matrix(j, u);
        let (dj, dj2) = (alg.dim(j as i64), alg.dim(j2 as i64));
        for k in 0..dw {
            for (b2, row_b) in lb.rows().iter().enumerate() {
                for (b, x) in row_b {
                    for (a2, row_a) in ra.rows().iter().enumerate() {
                        for (a, y) in row_a {
                            trip.push((off2 + (b2 * dw + k) * dj2 + a2, off + (b * dw + k) * dj + a, f.mul(x, y)));
                        }
                    }
                }
            }
        }
    }
    Matrix::from_triplets(f, dst.dim, src.dim, trip)
}

/// `Phi: (alpha ⊗ beta) ⊗ w -> beta ⊗ w ⊗ alpha`, from the chains of the
/// outer square in degree q at total weight t to `K_q`.
pub fn phi_matrix<F: Field>(alg: &Algebra<F>, sq: &GradedBimodule<F>, q: usize, t: i64) -> Result<Matrix<F>> {
    if sq.kind() != BimoduleKind::OuterSquare {
        return Err(Error::Invalid("Phi needs the outer square".into()));
    }
    let f = alg.field();
    let r = t - nu(alg.n(), q) as i64;
    let kb = k_blocks(alg, q, t);
    let dw = kb.dim_w;
    let ncols = chain_dim(alg, sq, q, t);
    let mut trip = Vec::new();
    for &(i, j, off) in sq.outer_blocks(r) {
        // alpha in A_i, beta in A_j; target block has beta first.
        let koff = kb.offset(j).expect("block exists");
        let (di, dj) = (alg.dim(i as i64), alg.dim(j as i64));
        for alpha in 0..di {
            for beta in 0..dj {
                let mi = off + alpha * dj + beta;
                for k in 0..dw {
                    trip.push((koff + (beta * dw + k) * di + alpha, mi * dw + k, f.one()));
                }
            }
        }
    }
    Ok(Matrix::from_triplets(f, kb.dim, ncols, trip))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub slices_checked: usize,
    pub bijective: bool,
    pub chain_map: bool,
    pub equivariant: bool,
    pub first_failure: Option<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.chain_map && self.equivariant
    }
}

/// Checks that Phi is bijective, commutes with the differentials and
/// intertwines the inner actions by `u ⊗ u'` with `u, u'` empty or a
/// generator, on degrees `0..=q_max` and total weights `0..=t_max`.
pub fn verify_phi<F: Field>(alg: &Algebra<F>, q_max: usize, t_max: i64) -> PhiReport {
    let sq = GradedBimodule::outer_square(alg, t_max + 2);
    let mut rep = PhiReport {
        slices_checked: 0,
        bijective: true,
        chain_map: true,
        equivariant: true,
        first_failure: None,
    };
    let fail = |rep: &mut PhiReport, what: &str, q: usize, t: i64| {
        if rep.first_failure.is_none() {
            rep.first_failure = Some(format!("{what} fails at q={q} t={t}"));
        }
    };
    let d = alg.num_gens();
    let mut gens: Vec<Vec<usize>> = vec![Vec::new()];
    gens.extend((0..d).map(|g| vec![g]));
    for q in 0..=q_max {
        for t in 0..=t_max {
            rep.slices_checked += 1;
            let phi = phi_matrix(alg, &sq, q, t).expect("outer square");
            if phi.nrows() != phi.ncols() || (phi.nrows() > 0 && phi.inverse().is_none()) {
                rep.bijective = false;
                fail(&mut rep, "bijectivity", q, t);
            }
            if q >= 1 {
                let lhs = phi_matrix(alg, &sq, q - 1, t).unwrap().mul(&chain_differential(alg, &sq, q, t));
                let rhs = k_differential(alg, q, t).mul(&phi);
                if lhs != rhs {
                    rep.chain_map = false;
                    fail(&mut rep, "chain map", q, t);
                }
            }
            let r = t - nu(alg.n(), q) as i64;
            for u in &gens {
                for u2 in &gens {
                    let t2 = t + (u.len() + u2.len()) as i64;
                    if t2 > t_max {
                        continue;
                    }
                    let inner = sq.inner_action(alg, u, u2, r).expect("outer square");
                    let dw = alg.w_dim(nu(alg.n(), q));
                    let lifted = kron_identity(&inner, dw);
                    let lhs = phi_matrix(alg, &sq, q, t2).unwrap().mul(&lifted);
                    let rhs = k_inner_action(alg, u, u2, q, t).mul(&phi);
                    if lhs != rhs {
                        rep.equivariant = false;
                        fail(&mut rep, "equivariance", q, t);
                    }
                }
            }
        }
    }
    rep
}

/// `mat ⊗ id_k` in the `i * k + j` layout.
pub(crate) fn kron_identity<F: Field>(mat: &Matrix<F>, k: usize) -> Matrix<F> {
    let mut trip = Vec::new();
    for (i2, row) in mat.rows().iter().enumerate() {
        for (i, x) in row {
            for j in 0..k {
                trip.push((i2 * k + j, i * k + j, x.clone()));
            }
        }
    }
    Matrix::from_triplets(mat.field(), mat.nrows() * k, mat.ncols() * k, trip)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoszulVerdict<E> {
    /// `K(A)` is exact in degrees `1..=degree_bound` at weights up to the bound.
    KoszulUpToBound { degree_bound: usize, weight_bound: i64 },
    NotKoszul {
        degree: usize,
        weight: i64,
        witness: SparseVec<E>,
        text: String,
    },
}

impl<E> KoszulVerdict<E> {
    pub fn is_koszul(&self) -> bool {
        matches!(self, KoszulVerdict::KoszulUpToBound { .. })
    }
}

/// Searches for homology of `K(A)` in positive degrees.
pub fn is_n_koszul<F: Field>(alg: &Algebra<F>, degree_bound: usize, weight_bound: i64) -> KoszulVerdict<F::Elem> {
    for q in 1..=degree_bound {
        for t in nu(alg.n(), q) as i64..=weight_bound {
            let h = k_homology(alg, q, t);
            if let Some(w) = h.representatives().first() {
                return KoszulVerdict::NotKoszul {
                    degree: q,
                    weight: t,
                    witness: w.clone(),
                    text: format_k_element(alg, q, t, w),
                };
            }
        }
    }
    KoszulVerdict::KoszulUpToBound {
        degree_bound,
        weight_bound,
    }
}

/// Formats an element of `K_q` at total weight t as a sum of `a⊗w⊗b`.
pub fn format_k_element<F: Field>(alg: &Algebra<F>, q: usize, t: i64, v: &SparseVec<F::Elem>) -> String {
    let f = alg.field();
    let kb = k_blocks(alg, q, t);
    let nq = nu(alg.n(), q);
    let mut parts = Vec::new();
    for (idx, c) in v {
        let &(i, j, off) = kb.blocks.iter().rev().find(|b| b.2 <= *idx).expect("block");
        let local = idx - off;
        let dj = alg.dim(j as i64);
        let (ak, b) = (local / dj, local % dj);
        let (a, k) = (ak / kb.dim_w, ak % kb.dim_w);
        let cs = f.format(c);
        let (neg, abs) = match cs.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, cs),
        };
        let sep = match (parts.is_empty(), neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        let coeff = if abs == "1" { String::new() } else { format!("{abs}*") };
        parts.push(format!(
            "{sep}{coeff}{}⊗{}⊗{}",
            alg.a_label(i, a),
            alg.w_label(nq, k),
            alg.a_label(j, b)
        ));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.concat()
    }
}
