mod common;

use common::*;
use koszul_core::bimodule::GradedBimodule;
use koszul_core::duality::{DiagramReport, DiagramStatus};
use koszul_core::hochschild::*;
use koszul_core::homology::Exactness;
use koszul_core::koszul::{koszul_cohomology, koszul_homology};
use koszul_core::linalg::sparse::{self, Accumulator, SparseVec};
use koszul_core::linalg::{Field, Rationals};
use koszul_core::presentation::Algebra;
use koszul_core::products::random_vec;
use koszul_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn all_pass(reports: &[DiagramReport]) -> usize {
    for r in reports {
        assert!(r.passed(), "{r}");
    }
    reports.iter().filter(|r| r.status == DiagramStatus::Pass).count()
}

/// Index of a generator in the basis of `A_1`.
fn g1(a: &Algebra<Q>, g: usize) -> usize {
    a.component(1).index_of(&[g]).unwrap()
}

/// The derivation `∂/∂x_g` of a commutative algebra, as a 1-cochain of
/// shift -1 on inputs of weight `<= cutoff`.
fn partial(a: &Algebra<Q>, m: &GradedBimodule<Q>, g: usize, cutoff: usize) -> HCochain<Elem> {
    let slice = Bar::new(a, m).cochain_slice(1, -1, cutoff);
    let mut acc = Accumulator::new(&Rationals);
    for b in &slice.blocks {
        let comp = a.component(b.ws[0]);
        for (j, word) in comp.normal_words().iter().enumerate() {
            let count = word.iter().filter(|&&x| x == g).count();
            if count == 0 {
                continue;
            }
            let pos = word.iter().position(|&x| x == g).unwrap();
            let mut rest = word.clone();
            rest.remove(pos);
            for (k, c) in a.project_word(&rest) {
                acc.add(b.encode(k, &[j]), Rationals.mul(&q(count as i64), &c));
            }
        }
    }
    HCochain::new(1, -1, cutoff, acc.finish())
}

#[test]
fn compositions_are_counted_by_binomials() {
    for total in 0..8 {
        for parts in 0..5 {
            let c = compositions(total, parts, 1);
            let expect = match (parts, total) {
                (0, _) => usize::from(total == 0),
                (_, 0) => 0,
                _ => binom(total - 1, parts - 1),
            };
            assert_eq!(c.len(), expect, "total={total} parts={parts}");
            assert!(c.iter().all(|v| v.iter().sum::<usize>() == total && v.iter().all(|&x| x >= 1)));
            let weak = compositions(total, parts, 0);
            let expect = if parts == 0 { usize::from(total == 0) } else { binom(total + parts - 1, parts - 1) };
            assert_eq!(weak.len(), expect);
        }
    }
}

/// Coefficients of `H_A(z) (H_A(z) - 1)^q` up to `z^n`.
fn bar_series(h: &[usize], qd: usize, n: usize) -> Vec<usize> {
    let mut out = h[..=n].to_vec();
    for _ in 0..qd {
        let mut next = vec![0; n + 1];
        for (i, x) in out.iter().enumerate() {
            for j in 1..=n - i {
                next[i + j] += x * h[j];
            }
        }
        out = next;
    }
    out
}

#[test]
fn slice_dimensions_match_the_hilbert_series() {
    for name in ["bergsol-ex5", "sym2", "monomial-xyx"] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, 10);
        let bar = Bar::new(&a, &m);
        let h = a.hilbert(7);
        for qd in 0..=4usize {
            let series = bar_series(&h, qd, 7);
            for t in 0..=7i64 {
                assert_eq!(bar.chain_slice(qd, t).dim, series[t as usize], "{name} q={qd} t={t}");
            }
        }
    }
}

#[test]
fn bar_differentials_square_to_zero() {
    for name in ["bergsol-ex5", "sym2", "monomial-xyx", "ext2"] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, 12);
        let bar = Bar::new(&a, &m);
        for t in 0..=5 {
            for qd in 2..=5 {
                let bb = bar.chain_differential(qd - 1, t).mul(&bar.chain_differential(qd, t));
                assert!(bb.is_zero(), "{name} b^2 q={qd} t={t}");
            }
        }
        for s in -3..=2 {
            for p in 0..=2 {
                let dd = bar.cochain_differential(p + 1, s, 4).mul(&bar.cochain_differential(p, s, 4));
                assert!(dd.is_zero(), "{name} δ^2 p={p} s={s}");
            }
        }
    }
}

#[test]
fn differentials_keep_total_weight_but_not_coefficient_weight() {
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 6);
    let bar = Bar::new(&a, &m);
    // z = x ⊗ y at total weight 2: b z = xy - yx = xy, with coefficient weight 2.
    let src = bar.chain_slice(1, 2);
    let blk = src.block(&[1]).unwrap();
    assert_eq!(blk.r, 1);
    let z = vec![(blk.encode(g1(&a, 0), &[g1(&a, 1)]), q(1))];
    let bz = bar.chain_differential(1, 2).apply(&z);
    let dst = bar.chain_slice(0, 2);
    let (xy_len, xy) = a_elem(&a, &[(1, "x*y")]);
    assert_eq!(xy_len, 2);
    let blk0 = dst.block(&[]).unwrap();
    assert_eq!(blk0.r, 2);
    let expect: SparseVec<Elem> = xy.iter().map(|(k, c)| (blk0.encode(*k, &[]), c.clone())).collect();
    assert_eq!(bz, expect);
    assert_ne!(blk0.r, blk.r);
}

#[test]
fn symmetric_algebra_homology_matches_differential_forms() {
    // HH_q(k[x, y])_t = Ω^q in total weight t.
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 8);
    let rep = hochschild_homology(&a, &m, 0..=3, 0..=6);
    for t in 0..=6i64 {
        let t_ = t as usize;
        let expect = [t_ + 1, 2 * t_, t_.saturating_sub(1), 0];
        for qd in 0..=3 {
            let e = rep.get(qd, t).unwrap();
            assert_eq!(e.exactness, Exactness::Exact);
            assert_eq!(e.dim, expect[qd], "q={qd} t={t}");
        }
    }
}

#[test]
fn symmetric_algebra_cohomology_matches_polyvector_fields() {
    // HH^p(k[x, y])_s = A_{s+p} ⊗ Λ^p(V*).
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, cochain_window(4, 2));
    let rep = hochschild_cohomology(&a, &m, 0..=3, -3..=2, 4, false);
    for s in -3..=2i64 {
        for p in 0..=3usize {
            let w = s + p as i64;
            let expect = if p > 2 || w < 0 { 0 } else { (w as usize + 1) * binom(2, p) };
            let e = rep.get(p, s).unwrap();
            assert_eq!(e.dim, expect, "p={p} s={s}");
            assert!(matches!(e.exactness, Exactness::Windowed { .. }));
        }
    }
}

#[test]
fn homology_in_degree_zero_is_the_commutator_quotient() {
    for name in ["bergsol-ex5", "monomial-xyx", "sym2"] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, 8);
        let hh = hochschild_homology(&a, &m, 0..=0, 0..=6);
        let hk = koszul_homology(&a, &m, 0..=0, 0..=6);
        for t in 0..=6 {
            assert_eq!(hh.dim(0, t), hk.dim(0, t), "{name} t={t}");
        }
    }
}

#[test]
fn reduced_and_unnormalized_complexes_agree() {
    for name in ["bergsol-ex5", "sym2"] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, 10);
        let red = Bar::new(&a, &m);
        let full = Bar::unnormalized(&a, &m);
        for t in 0..=3 {
            for qd in 0..=3 {
                assert!(full.chain_slice(qd, t).dim > red.chain_slice(qd, t).dim || qd == 0);
                assert_eq!(red.chain_homology(qd, t).dim(), full.chain_homology(qd, t).dim(), "{name} q={qd} t={t}");
            }
        }
        for s in -2..=1 {
            for p in 0..=2 {
                assert_eq!(
                    red.truncated_cohomology(p, s, 3).dim(),
                    full.truncated_cohomology(p, s, 3).dim(),
                    "{name} p={p} s={s}"
                );
            }
        }
    }
}

#[test]
fn bergsol_cohomology_dimensions() {
    let a = alg("bergsol-ex5");
    let cutoff = 6;
    let m = GradedBimodule::regular(&a, 0, cochain_window(cutoff, cutoff as i64));
    let w = cutoff as i64;
    let hh = hochschild_cohomology(&a, &m, 0..=3, -w..=w, cutoff, true);
    for e in hh.entries.values() {
        assert_eq!(e.exactness, Exactness::Windowed { stable: true });
    }
    assert_eq!(hh.total_dim(2), 1);
    assert_eq!(hh.total_dim(3), 2);
    assert_eq!(hh.dim(2, -1), Some(1));
    let hk = koszul_cohomology(&a, &m, 0..=1, 0..=w);
    for r in 0..=w {
        assert_eq!(hh.dim(0, r), hk.dim(0, r), "HH^0 vs HK^0 at {r}");
        // HK^1 at coefficient weight r sits at shift r - 1.
        assert_eq!(hh.dim(1, r - 1), hk.dim(1, r), "HH^1 vs HK^1 at {r}");
    }
}

#[test]
fn finite_dimensional_cohomology_needs_no_lift() {
    let a = alg("monomial-x2");
    let m = GradedBimodule::regular(&a, 0, 4);
    let bar = Bar::new(&a, &m);
    let st = bar.stable_cohomology(2, -2, 4, 6);
    assert!(st.complete);
    assert_eq!(st.dim(), st.truncated.dim());
    let hh = hochschild_cohomology(&a, &m, 0..=3, -3..=1, 4, true);
    assert!(hh.entries.values().all(|e| e.exactness == Exactness::Exact));
}

#[test]
fn unit_is_a_two_sided_cup_identity() {
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 12);
    let one = unit_hcochain(&Rationals, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, s) in [(1, -1), (2, -1), (1, 0), (2, 1)] {
        let dim = Bar::new(&a, &m).cochain_slice(p, s, 5).dim;
        let f = HCochain::new(p, s, 5, random_vec(&Rationals, &mut rng, dim));
        assert_eq!(hochschild_cup(&a, (&m, &one), (&m, &f)).unwrap(), f);
        assert_eq!(hochschild_cup(&a, (&m, &f), (&m, &one)).unwrap(), f);
    }
}

#[test]
fn products_of_degree_one_match_the_formulas() {
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 8);
    let dx = partial(&a, &m, 0, 4);
    let dy = partial(&a, &m, 1, 4);
    let (x, y) = (g1(&a, 0), g1(&a, 1));
    let bar = Bar::new(&a, &m);
    // z = y ⊗ x at total weight 2.
    let zs = bar.chain_slice(1, 2);
    let z = HChain::new(1, 2, vec![(zs.block(&[1]).unwrap().encode(y, &[x]), q(1))]);
    let ts = bar.chain_slice(0, 1);
    let y0 = ts.block(&[]).unwrap().encode(y, &[]);
    // z ⌢ dx = -(y · dx(x)) = -y
    let right = hochschild_cap_right(&a, (&m, &z), (&m, &dx)).unwrap();
    assert_eq!(right, HChain::new(0, 1, vec![(y0, q(-1))]));
    // dx ⌢ z = dx(x) · y = y
    let left = hochschild_cap_left(&a, (&m, &dx), (&m, &z)).unwrap();
    assert_eq!(left, HChain::new(0, 1, vec![(y0, q(1))]));
    // (dx ⌣ dy)(x, y) = -dx(x) dy(y) = -1, and zero on (y, x).
    let c = hochschild_cup(&a, (&m, &dx), (&m, &dy)).unwrap();
    let cs = bar.cochain_slice(2, -2, 4);
    let blk = cs.block(&[1, 1]).unwrap();
    assert_eq!(sparse::get(&c.v, blk.encode(0, &[x, y])), Some(&q(-1)));
    assert_eq!(sparse::get(&c.v, blk.encode(0, &[y, x])), None);
}

#[test]
fn partial_derivatives_are_cocycles_and_their_cup_is_a_class() {
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 10);
    let bar = Bar::new(&a, &m);
    let dx = partial(&a, &m, 0, 4);
    let dy = partial(&a, &m, 1, 4);
    assert!(hochschild_d(&a, &m, &dx).v.is_empty());
    assert!(hochschild_d(&a, &m, &dy).v.is_empty());
    let xy = hochschild_cup(&a, (&m, &dx), (&m, &dy)).unwrap();
    let yx = hochschild_cup(&a, (&m, &dy), (&m, &dx)).unwrap();
    assert!(hochschild_d(&a, &m, &xy).v.is_empty());
    let st = bar.stable_cohomology(2, -2, 4, 6);
    assert_eq!(st.dim(), 1);
    // dx ⌣ dy is the nonzero class; dx ⌣ dy + dy ⌣ dx is a coboundary.
    assert!(!st.truncated.is_boundary(&xy.v));
    let sum = sparse::axpy(&Rationals, &xy.v, &q(1), &yx.v);
    assert!(st.truncated.is_boundary(&sum));
}

#[test]
fn cup_is_graded_commutative_on_classes() {
    for (name, cutoff, smax) in [("bergsol-ex5", 5usize, 5i64), ("sym2", 4, 1), ("monomial-xyx", 3, 0)] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, cochain_window(cutoff, smax));
        let classes = basis_classes(&a, &m, 2, -(cutoff as i64)..=smax, cutoff);
        assert!(!classes.is_empty());
        let rep = check_cup_commutativity(&a, &m, &classes, 3).unwrap();
        assert!(rep.pairs > 0);
        assert_eq!(rep.violations, 0, "{name}: {rep}");
    }
}

#[test]
fn cap_rejects_short_cochains_and_bad_degrees() {
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 8);
    let dx = partial(&a, &m, 0, 2);
    let z = HChain::new(1, 4, Vec::new());
    assert!(matches!(hochschild_cap_left(&a, (&m, &dx), (&m, &z)), Err(Error::Truncated(_))));
    let z0 = HChain::new(0, 1, Vec::new());
    assert!(matches!(hochschild_cap_right(&a, (&m, &z0), (&m, &dx)), Err(Error::Invalid(_))));
    let md = GradedBimodule::dual(&m, false);
    let g = HCochain::new(0, 0, 2, Vec::new());
    assert!(matches!(hochschild_cup(&a, (&md, &g), (&md, &g)), Err(Error::UnsupportedPairing(_))));
}

#[test]
fn eta_is_a_chain_isomorphism_and_xi_zeta_are_invertible() {
    for name in ["bergsol-ex5", "sym2", "monomial-xyx"] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, 7);
        let d = HochschildDuality::new(&a, &m);
        let mut nonzero = 0;
        for qd in 0..=3 {
            for t in 0..=5 {
                let e = d.check_eta(qd, t);
                assert_eq!(e.status, DiagramStatus::Pass, "{name} {e}");
                let s = d.check_slice(qd, t);
                assert!(s.exact && s.passed(), "{name} {s}");
                assert_eq!(s.homology, s.cohomology);
                nonzero += usize::from(s.homology > 0);
            }
        }
        assert!(nonzero >= 5, "{name}");
    }
}

#[test]
fn unit_class_diagrams_commute() {
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 6);
    let one = unit_hcochain(&Rationals, 6);
    let reps = verify_hochschild_cupcap_duality(&a, &m, &m, &one, 3, 0..=5).unwrap();
    assert_eq!(all_pass(&reps), reps.len());
}

#[test]
fn bergsol_degree_one_classes_satisfy_the_duality() {
    let a = alg("bergsol-ex5");
    let cutoff = 5;
    let reg = GradedBimodule::regular(&a, 0, cochain_window(cutoff, 5));
    let m = GradedBimodule::regular(&a, 0, 10);
    let classes: Vec<_> = basis_classes(&a, &reg, 1, 0..=5, cutoff).into_iter().filter(|c| c.p == 1).collect();
    assert!(classes.len() >= 5);
    let mut class_level = 0;
    for al in &classes {
        let reps = verify_hochschild_cupcap_duality(&a, &reg, &m, al, 3, 0..=5).unwrap();
        all_pass(&reps);
        class_level += reps.iter().filter(|r| r.diagram == "capsym" && r.status == DiagramStatus::Pass).count();
    }
    assert!(class_level > 10);
}

#[test]
fn symmetric_algebra_degree_two_class_at_q_two() {
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 10);
    let dx = partial(&a, &m, 0, 6);
    let dy = partial(&a, &m, 1, 6);
    let al = hochschild_cup(&a, (&m, &dx), (&m, &dy)).unwrap();
    let reps = verify_hochschild_cupcap_duality(&a, &m, &m, &al, 2, 0..=6).unwrap();
    let passed = all_pass(&reps);
    assert!(reps.iter().any(|r| r.diagram == "7.6" && r.status == DiagramStatus::Pass));
    assert_eq!(passed, reps.len());
}

#[test]
fn plain_transpose_breaks_the_right_cap_square() {
    // p = 1, q = 2: (-1)^{pq} = 1 but the graded transpose carries (-1)^{(q-p)p} = -1.
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 8);
    let d = HochschildDuality::new(&a, &m);
    let dx = partial(&a, &m, 0, 6);
    let cap_r = d.cap_matrix(&m, &dx, 2, 3, false);
    let cup_l = d.cup_matrix(&m, &dx, 2, 3, true);
    assert!(!cup_l.is_zero());
    assert_eq!(cap_r.transpose().scale(&q(-1)), cup_l);
    assert_ne!(cap_r.transpose(), cup_l);
}

#[test]
fn non_cocycle_alpha_is_rejected() {
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 10);
    let dim = Bar::new(&a, &m).cochain_slice(1, 0, 4).dim;
    let f = HCochain::new(1, 0, 4, vec![(0, q(1))]);
    assert!(dim > 0);
    assert!(!hochschild_d(&a, &m, &f).v.is_empty());
    let err = verify_hochschild_cupcap_duality(&a, &m, &m, &f, 2, 0..=3).unwrap_err();
    assert!(matches!(err, Error::NotClosed(_)));
}

#[test]
fn koszul_comparison_on_presets() {
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, cochain_window(5, 3));
    let rep = compare_koszul_hochschild(&a, &m, 3, 5);
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.lines.iter().filter(|l| l.relation == "=").count(), 2);
    assert_eq!(rep.inclusion.len(), 4);

    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, cochain_window(4, 2));
    let rep = compare_koszul_hochschild(&a, &m, 2, 4);
    assert!(rep.passed(), "{rep}");
    let l0 = rep.lines.iter().find(|l| l.r == 0 && l.relation == "=").unwrap();
    assert_eq!((l0.koszul, l0.hochschild), (1, 1));
    assert!(rep.inclusion.iter().all(|l| l.chain_map && l.surjective() && l.injective()));

    let a = alg("monomial-xyx");
    let m = GradedBimodule::regular(&a, 0, cochain_window(3, 0));
    let rep = compare_koszul_hochschild(&a, &m, 1, 3);
    assert!(rep.passed(), "{rep}");
    assert!(rep.inclusion.is_empty());
}

#[test]
fn inclusion_is_a_chain_map() {
    let a = alg("sym2");
    let m = GradedBimodule::regular(&a, 0, 8);
    let bar = Bar::new(&a, &m);
    for t in 0..=5 {
        for qd in 1..=3 {
            let lhs = bar.chain_differential(qd, t).mul(&inclusion_matrix(&a, &m, qd, t));
            let rhs = inclusion_matrix(&a, &m, qd - 1, t).mul(&koszul_core::koszul::chain_differential(&a, &m, qd, t));
            assert!(lhs.sub(&rhs).is_zero(), "q={qd} t={t}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cap_with_a_cocycle_respects_classes(seed in any::<u64>(), qd in 1usize..=3, t in 2i64..=5) {
        let a = alg("bergsol-ex5");
        let m = GradedBimodule::regular(&a, 0, 10);
        let bar = Bar::new(&a, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let classes = basis_classes(&a, &m, 1, 0..=1, 5);
        let f = classes.iter().find(|c| c.p == 1).unwrap();
        let h = bar.chain_homology(qd, t);
        let k = h.kernel().basis();
        prop_assume!(!k.is_empty());
        let mut z = Vec::new();
        for v in k {
            let c = Rationals.from_i64((rand::Rng::gen_range(&mut rng, -3..=3)) as i64);
            z = sparse::axpy(&Rationals, &z, &c, v);
        }
        let w = random_vec(&Rationals, &mut rng, bar.chain_slice(qd + 1, t).dim);
        let bw = bar.chain_differential(qd + 1, t).apply(&w);
        let z2 = sparse::axpy(&Rationals, &z, &q(1), &bw);
        let target = bar.chain_homology(qd - 1, t + f.s);
        for left in [true, false] {
            let cap = |v: &SparseVec<Elem>| {
                let c = HChain::new(qd, t, v.clone());
                if left {
                    hochschild_cap_left(&a, (&m, f), (&m, &c)).unwrap()
                } else {
                    hochschild_cap_right(&a, (&m, &c), (&m, f)).unwrap()
                }
            };
            let (x, y) = (cap(&z), cap(&z2));
            prop_assert!(target.is_cycle(&x.v));
            prop_assert_eq!(target.canonical(&x.v), target.canonical(&y.v));
        }
    }

    #[test]
    fn cochain_level_squares_hold_for_random_cochains(seed in any::<u64>(), p in 0usize..=2, s in -1i64..=1) {
        let a = alg("sym2");
        let m = GradedBimodule::regular(&a, 0, 8);
        let d = HochschildDuality::new(&a, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = Bar::new(&a, &m).cochain_slice(p, s, 4).dim;
        let f = HCochain::new(p, s, 4, random_vec(&Rationals, &mut rng, dim));
        for qd in p..=3 {
            for t in 0..=4 {
                for r in d.check_diagrams(&m, &f, qd, t).unwrap() {
                    if r.diagram == "7.4" || r.diagram == "7.5" {
                        prop_assert_eq!(r.status, DiagramStatus::Pass, "{}", r);
                    }
                }
            }
        }
    }
}
