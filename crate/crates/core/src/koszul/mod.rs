//! Koszul chain and cochain complexes, the bimodule complex `K(A)`, and
//! their (co)homology.

pub mod bimodule_complex;
pub mod complex;

use std::ops::RangeInclusive;

use rayon::prelude::*;

pub use bimodule_complex::{
    is_n_koszul, k_blocks, k_differential, k_homology, phi_matrix, verify_phi, KBlocks, KoszulVerdict, PhiReport,
};
pub use complex::{
    chain_differential, chain_dim, chain_slice_exact, cochain_differential, cochain_dim, cochain_slice_exact,
};

use crate::bimodule::GradedBimodule;
use crate::homology::{Direction, Exactness, HomologyReport, SliceHomology, SliceResult};
use crate::linalg::Field;
use crate::presentation::{nu, Algebra};

/// Homology of `M ⊗ W_nu(.)` in degree q at total weight t.
pub fn chain_homology<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> SliceHomology<F> {
    let dim = chain_dim(alg, m, q, t);
    let out = (q >= 1).then(|| chain_differential(alg, m, q, t));
    let inc = chain_differential(alg, m, q + 1, t);
    SliceHomology::new(alg.field(), dim, Some(&inc), out.as_ref())
}

/// Cohomology of `Hom(W_nu(.), M)` in degree p at shift s.
pub fn cochain_homology<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, p: usize, s: i64) -> SliceHomology<F> {
    let dim = cochain_dim(alg, m, p, s);
    let inc = (p >= 1).then(|| cochain_differential(alg, m, p - 1, s));
    let out = cochain_differential(alg, m, p, s);
    SliceHomology::new(alg.field(), dim, inc.as_ref(), Some(&out))
}

fn exactness(ok: bool) -> Exactness {
    if ok {
        Exactness::Exact
    } else {
        Exactness::Truncated
    }
}

/// `HK_q(A, M)_r` keyed by degree and coefficient weight r.
pub fn koszul_homology<F: Field>(
    alg: &Algebra<F>,
    m: &GradedBimodule<F>,
    degrees: RangeInclusive<usize>,
    weights: RangeInclusive<i64>,
) -> HomologyReport<F> {
    let keys: Vec<(usize, i64)> = degrees
        .flat_map(|q| weights.clone().map(move |r| (q, r)))
        .collect();
    let n = alg.n();
    let results: Vec<_> = keys
        .par_iter()
        .map(|&(q, r)| {
            let t = r + nu(n, q) as i64;
            let h = chain_homology(alg, m, q, t);
            let res = SliceResult {
                dim: h.dim(),
                exactness: exactness(chain_slice_exact(alg, m, q, t)),
                representatives: h.representatives().to_vec(),
            };
            ((q, r), res)
        })
        .collect();
    let mut report = HomologyReport::new("HK", Direction::Homology, "r");
    report.entries.extend(results);
    report
}

/// `HK^p(A, M)_r` keyed by degree and coefficient weight `r = nu(p) + s`.
pub fn koszul_cohomology<F: Field>(
    alg: &Algebra<F>,
    m: &GradedBimodule<F>,
    degrees: RangeInclusive<usize>,
    weights: RangeInclusive<i64>,
) -> HomologyReport<F> {
    let keys: Vec<(usize, i64)> = degrees
        .flat_map(|p| weights.clone().map(move |r| (p, r)))
        .collect();
    let n = alg.n();
    let results: Vec<_> = keys
        .par_iter()
        .map(|&(p, r)| {
            let s = r - nu(n, p) as i64;
            let h = cochain_homology(alg, m, p, s);
            let res = SliceResult {
                dim: h.dim(),
                exactness: exactness(cochain_slice_exact(alg, m, p, s)),
                representatives: h.representatives().to_vec(),
            };
            ((p, r), res)
        })
        .collect();
    let mut report = HomologyReport::new("HK", Direction::Cohomology, "r");
    report.entries.extend(results);
    report
}
