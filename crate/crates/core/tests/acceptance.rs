//! Acceptance criteria, one test per criterion. Each test prints a line
//! `criterion N: PASS` or `criterion N: FAIL (...)` and then asserts.
//!
//! Run all of them, including the two known-red ones, with
//! `cargo test --test acceptance -- --include-ignored --nocapture --test-threads=1`.

mod common;

use common::*;
use koszul_core::bimodule::GradedBimodule;
use koszul_core::duality::{basis_cocycle_classes, check_commutativity_consequence, DiagramStatus, Duality};
use koszul_core::hochschild::{
    basis_classes, cochain_window, compare_koszul_hochschild, hochschild_cohomology, verify_hochschild_cupcap_duality,
    Bar,
};
use koszul_core::homology::Exactness;
use koszul_core::koszul::{
    cochain_homology, cochain_slice_exact, is_n_koszul, k_differential, k_homology, koszul_cohomology, verify_phi,
    KoszulVerdict,
};
use koszul_core::linalg::sparse;
use koszul_core::linalg::{Field, Matrix, Rationals};
use koszul_core::presentation::{check_single_monomial, nu, Algebra, MonomialVerdict};
use koszul_core::products::{cup, cup_bracket, verify_identities, Cochain, IdentityBounds, KClass};

/// Collects named checks for one criterion.
struct Criterion {
    n: usize,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(n: usize) -> Self {
        Criterion {
            n,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("criterion {}: PASS ({} checks)", self.n, self.checks);
        } else {
            println!(
                "criterion {}: FAIL ({} of {} checks failed: {})",
                self.n,
                self.failures.len(),
                self.checks,
                self.failures.join("; ")
            );
        }
        assert!(self.failures.is_empty(), "criterion {} failed: {:?}", self.n, self.failures);
    }
}

/// Elements of `A_r` commuting with every generator.
fn center_dim(a: &Algebra<Q>, r: usize) -> usize {
    let dim = a.dim(r as i64);
    let mut rows: Option<Matrix<Q>> = None;
    for g in 0..a.num_gens() {
        let gen = vec![(g, Rationals.one())];
        let cols: Vec<_> = (0..dim)
            .map(|u| {
                let e = vec![(u, Rationals.one())];
                let l = a.mul(&gen, 1, &e, r);
                let rr = a.mul(&e, r, &gen, 1);
                sparse::axpy(&Rationals, &l, &q(-1), &rr)
            })
            .collect();
        let m = Matrix::from_columns(&Rationals, a.dim(r as i64 + 1), &cols);
        rows = Some(match rows {
            None => m,
            Some(prev) => prev.vstack(&m),
        });
    }
    rows.unwrap().kernel().dim()
}

#[test]
#[ignore = "red: HK^3 of bergsol-ex5 is 2-dimensional (w*⊗1 is an extra class); see README"]
fn criterion_01_bergsol_cohomology() {
    let mut c = Criterion::new(1);
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 8 + a.n() as i64);
    let rep = koszul_cohomology(&a, &m, 0..=5, 0..=8);
    c.check(rep.entries.values().all(|e| e.exactness.is_exact()), "slices exact");
    let row = |p: usize| (0..=8).map(|r| rep.dim(p, r).unwrap()).collect::<Vec<_>>();

    let h0 = row(0);
    c.check(h0[..4] == [1, 0, 2, 1] && h0[4..].iter().all(|&d| d == 1), format!("HK^0 dims {h0:?}"));
    let center: Vec<usize> = (0..=8).map(|r| center_dim(&a, r)).collect();
    c.check(h0 == center, "HK^0 matches the center");
    let h1 = row(1);
    c.check(h1[0] == 0 && h1[1..].iter().all(|&d| d == 1), format!("HK^1 dims {h1:?}"));

    let (_, x) = tensor(&[(1, "x")]);
    let (_, y) = tensor(&[(1, "y")]);
    let (_, r1) = tensor(&[(1, "y*x")]);
    let (_, r2) = tensor(&[(1, "y*y"), (-1, "x*y")]);
    let (_, wv) = tensor(&[(1, "y*y*x"), (-1, "x*y*x")]);
    // HK^1 generators: x*⊗x + y*⊗y and x*⊗x^i, i >= 2
    let f = cochain_on_basis(&a, 1, &[x.clone(), y.clone()], &[a_elem(&a, &[(1, "x")]).1, a_elem(&a, &[(1, "y")]).1]);
    let h = cochain_homology(&a, &m, 1, 0);
    c.check(h.is_cycle(&f) && !h.is_boundary(&f), "x*⊗x + y*⊗y is a nonzero class");
    for i in 2..=8 {
        let xi = vec!["x"; i].join("*");
        let f = cochain_on_basis(&a, 1, &[x.clone(), y.clone()], &[a_elem(&a, &[(1, &xi)]).1, vec![]]);
        let h = cochain_homology(&a, &m, 1, i as i64 - 1);
        c.check(h.is_cycle(&f) && !h.is_boundary(&f), format!("x*⊗x^{i} is a nonzero class"));
    }

    c.check(rep.total_dim(2) == 1, format!("dim HK^2 = {}", rep.total_dim(2)));
    let f = cochain_on_basis(&a, 2, &[r1.clone(), r2.clone()], &[a_elem(&a, &[(1, "y")]).1, vec![]]);
    let h = cochain_homology(&a, &m, 2, -1);
    c.check(h.dim() == 1 && h.is_cycle(&f) && !h.is_boundary(&f), "r1*⊗y generates HK^2");

    c.check(rep.total_dim(3) == 1, format!("dim HK^3 = {} (expected 1)", rep.total_dim(3)));
    let f = cochain_on_basis(&a, 3, &[wv], &[a_elem(&a, &[(1, "x*y")]).1]);
    let h = cochain_homology(&a, &m, 3, -1);
    c.check(h.dim() == 1 && h.is_cycle(&f) && !h.is_boundary(&f), "w*⊗xy is a nonzero class");

    for p in 4..=5 {
        c.check(rep.total_dim(p) == 0, format!("HK^{p} = 0"));
    }
    c.finish();
}

#[test]
#[ignore = "red: the stated witness equals d((x - y)⊗w⊗1), so it lies in the image; see README"]
fn criterion_02_non_koszul_witness() {
    let mut c = Criterion::new(2);
    let a = alg("bergsol-ex5");
    let (_, r1) = tensor(&[(1, "y*x")]);
    let (_, r2) = tensor(&[(1, "y*y"), (-1, "x*y")]);
    let z = k_elem(&a, 2, 4, &[(1, "y", &r2, "x"), (-1, "x", &r2, "x"), (-1, "x*x", &r1, "1")]);
    c.check(!z.is_empty(), "witness is nonzero");
    c.check(k_differential(&a, 2, 4).apply(&z).is_empty(), "witness in ker d_1");
    c.check(!k_differential(&a, 3, 4).image().contains(&z), "witness not in im d_2");
    c.check(!is_n_koszul(&a, 6, 8).is_koszul(), "check-koszul returns not_koszul");
    c.finish();
}

#[test]
fn criterion_03_bergsol_cups_vanish() {
    let mut c = Criterion::new(3);
    let a = alg("bergsol-ex5");
    let m = GradedBimodule::regular(&a, 0, 12);
    let rep = koszul_cohomology(&a, &m, 1..=5, 0..=8);
    let classes: Vec<Cochain<Elem>> = rep
        .entries
        .iter()
        .filter(|(_, r)| r.exactness.is_exact())
        .flat_map(|(&(p, r), res)| {
            res.representatives
                .iter()
                .map(move |v| Cochain::new(p, r - nu(2, p) as i64, v.clone()))
        })
        .collect();
    c.check(classes.len() >= 10, format!("{} positive-degree classes", classes.len()));
    let mut products = 0;
    for f in &classes {
        for g in &classes {
            let prod = cup(&a, (&m, f), (&m, g)).unwrap();
            if nu(2, prod.p) as i64 + prod.s > 10 {
                continue;
            }
            products += 1;
            let exact = cochain_slice_exact(&a, &m, prod.p, prod.s);
            let h = cochain_homology(&a, &m, prod.p, prod.s);
            c.check(
                exact && h.is_boundary(&prod.v),
                format!("({},{}) ⌣ ({},{})", f.p, f.s, g.p, g.s),
            );
        }
    }
    c.check(products > 50, format!("{products} products"));
    c.finish();
}

fn hh_dims(c: &mut Criterion, a: &Algebra<Q>, cutoff: usize, recheck: bool) -> (usize, usize) {
    let w = cutoff as i64;
    let m = GradedBimodule::regular(a, 0, cochain_window(cutoff, w));
    let hh = hochschild_cohomology(a, &m, 0..=3, -w..=w, cutoff, recheck);
    if recheck {
        for (&(p, s), e) in &hh.entries {
            c.check(e.exactness == Exactness::Windowed { stable: true }, format!("HH^{p} at shift {s} stable"));
        }
        let hk = koszul_cohomology(a, &m, 0..=1, 0..=w);
        for r in 0..=w {
            c.check(hh.dim(0, r) == hk.dim(0, r), format!("HH^0 = HK^0 at {r}"));
            c.check(hh.dim(1, r - 1) == hk.dim(1, r), format!("HH^1 = HK^1 at {r}"));
        }
    }
    (hh.total_dim(2), hh.total_dim(3))
}

#[test]
fn criterion_04_bergsol_hochschild_dims() {
    let mut c = Criterion::new(4);
    let a = alg("bergsol-ex5");
    let (h2, h3) = hh_dims(&mut c, &a, 8, true);
    c.check(h2 == 1, format!("dim HH^2 = {h2}"));
    c.check(h3 == 2, format!("dim HH^3 = {h3}"));
    let wide = hh_dims(&mut c, &a, 10, false);
    c.check(wide == (h2, h3), format!("dims at t <= 10: {wide:?}"));
    c.finish();
}

#[test]
fn criterion_05_low_weight_comparison() {
    let mut c = Criterion::new(5);
    for (name, cutoff) in [("bergsol-ex5", 5usize), ("sym2", 4), ("monomial-xyx", 3)] {
        let a = alg(name);
        let m = GradedBimodule::regular(&a, 0, cochain_window(cutoff, 1));
        let rep = compare_koszul_hochschild(&a, &m, 1, cutoff);
        let eq: Vec<_> = rep.lines.iter().filter(|l| l.relation == "=").collect();
        c.check(eq.len() == 2, format!("{name}: {} equality lines", eq.len()));
        for l in eq {
            c.check(l.exact && l.holds(), format!("{name}: {l}"));
        }
    }
    c.finish();
}

#[test]
fn criterion_06_structural_identities() {
    let mut c = Criterion::new(6);
    for name in ["bergsol-ex5", "sym2", "ext2", "monomial-xyx", "monomial-x3"] {
        let a = alg(name);
        for qd in 1..=4 {
            for t in 0..=6 + nu(a.n(), qd) as i64 {
                let d2 = k_differential(&a, qd, t).mul(&k_differential(&a, qd + 1, t));
                c.check(d2.is_zero(), format!("{name}: d^2 on K_{} at t={t}", qd + 1));
            }
        }
        let m = GradedBimodule::regular(&a, 0, 8);
        let bar = Bar::new(&a, &m);
        for qd in 1..=4 {
            for t in 0..=6 {
                let b2 = bar.chain_differential(qd, t).mul(&bar.chain_differential(qd + 1, t));
                c.check(b2.is_zero(), format!("{name}: Hochschild b^2 at q={} t={t}", qd + 1));
            }
        }
        let rep = verify_identities(
            &a,
            IdentityBounds {
                max_degree: 4,
                max_weight: 6,
                trials: 20,
                seed: 20,
            },
        );
        for chk in &rep.checks {
            c.check(chk.cases > 0 && chk.passed(), format!("{name}: {} {:?}", chk.name, chk.first_failure));
        }
    }
    c.finish();
}

#[test]
fn criterion_07_koszul_duality() {
    let mut c = Criterion::new(7);
    for name in ["bergsol-ex5", "sym2", "monomial-xyx"] {
        let a = alg(name);
        let reg = GradedBimodule::regular(&a, 0, 8);
        let ad = GradedBimodule::dual(&reg, false);
        let alphas = basis_cocycle_classes(&a, &reg, 2).unwrap();
        for m in [&reg, &ad] {
            let d = Duality::new(&a, m);
            for s in d.check_slices(3) {
                c.check(s.passed(), format!("{name} {}: {s}", m.label()));
            }
            let mut class_level = 0;
            for alpha in &alphas {
                let reps = d.verify_cupcap_diagrams(&reg, alpha, 3).unwrap();
                for r in &reps {
                    c.check(r.passed(), format!("{name} {}: {r}", m.label()));
                    if r.diagram == "4.7" && r.status == DiagramStatus::Pass {
                        class_level += 1;
                    }
                }
            }
            c.check(class_level > 0, format!("{name} {}: class-level squares checked", m.label()));
        }
    }
    c.finish();
}

#[test]
fn criterion_08_hochschild_duality() {
    let mut c = Criterion::new(8);
    for (name, cutoff, smax) in [("sym2", 4usize, 1i64), ("bergsol-ex5", 5, 5)] {
        let a = alg(name);
        let reg = GradedBimodule::regular(&a, 0, cochain_window(cutoff, smax));
        let m = GradedBimodule::regular(&a, 0, 10);
        let classes = basis_classes(&a, &reg, 2, -(cutoff as i64)..=smax, cutoff);
        c.check(classes.iter().any(|f| f.p == 2), format!("{name}: degree-2 classes present"));
        let mut capsym = 0;
        for al in &classes {
            let reps = verify_hochschild_cupcap_duality(&a, &reg, &m, al, 3, 0..=cutoff as i64).unwrap();
            for r in &reps {
                c.check(r.passed(), format!("{name}: {r}"));
                if r.diagram == "capsym" && r.status == DiagramStatus::Pass {
                    capsym += 1;
                }
            }
        }
        c.check(capsym > 0, format!("{name}: class-level pairs checked"));
    }
    c.finish();
}

#[test]
fn criterion_09_monomial_family() {
    let mut c = Criterion::new(9);
    let xyx = alg("monomial-xyx");
    for p in xyx.n() + 1..=10 {
        c.check(xyx.w_dim(p) == 0, format!("xyx: W_{p} = 0"));
    }
    let v = check_single_monomial(xyx.presentation());
    c.check(v == MonomialVerdict::NotKoszul, format!("xyx: {}", v.as_str()));
    c.check(!is_n_koszul(&xyx, 4, 8).is_koszul(), "xyx: K(A) has positive-degree homology");

    let x3 = alg("monomial-x3");
    let v = check_single_monomial(x3.presentation());
    c.check(v == MonomialVerdict::Koszul, format!("x^3: {}", v.as_str()));
    for qd in 2..=5 {
        for t in 0..=9 {
            c.check(k_homology(&x3, qd, t).dim() == 0, format!("x^3: K(A) exact at q={qd} t={t}"));
        }
    }
    c.check(
        matches!(is_n_koszul(&x3, 5, 9), KoszulVerdict::KoszulUpToBound { .. }),
        "x^3: check returns koszul",
    );
    c.finish();
}

#[test]
fn criterion_10_phi() {
    let mut c = Criterion::new(10);
    for name in ["bergsol-ex5", "monomial-xyx"] {
        let a = alg(name);
        let rep = verify_phi(&a, 6, 6);
        c.check(rep.bijective, format!("{name}: phi bijective {:?}", rep.first_failure));
        c.check(rep.chain_map, format!("{name}: Phi chain map {:?}", rep.first_failure));
        c.check(rep.equivariant, format!("{name}: Phi equivariant {:?}", rep.first_failure));
    }
    c.finish();
}

#[test]
fn criterion_11_koszul_controls() {
    let mut c = Criterion::new(11);
    for name in ["sym2", "ext2"] {
        let a = alg(name);
        for qd in 2..=6 {
            for t in 0..=8 {
                c.check(k_homology(&a, qd, t).dim() == 0, format!("{name}: K(A) exact at q={qd} t={t}"));
            }
        }
        let (reports, implication) = check_commutativity_consequence(&a, 3, 6).unwrap();
        c.check(implication, format!("{name}: implication"));
        for r in &reports {
            c.check(r.cup_pairs > 0 && r.cup_commutes(), format!("{name}: {r}"));
            c.check(r.cap_pairs > 0 && r.cap_symmetric(), format!("{name}: {r}"));
        }
        // cup brackets of classes in A-coefficients, directly
        let m = GradedBimodule::regular(&a, 0, 10);
        let classes = basis_cocycle_classes(&a, &m, 3).unwrap();
        for x in &classes {
            for y in &classes {
                let br = cup_bracket(&a, (&m, &x.cochain()), (&m, &y.cochain())).unwrap();
                if !cochain_slice_exact(&a, &m, br.p, br.s) {
                    continue;
                }
                let ok = KClass::of_cochain(&a, &m, &br).map(|k| k.is_zero()).unwrap_or(false);
                c.check(ok, format!("{name}: [{},{}]⌣ at shifts {} {}", x.degree, y.degree, x.weight, y.weight));
            }
        }
    }
    c.finish();
}
