//! Koszul cup and cap products on cochains and chains, their brackets,
//! class-level products, and the derivation and associativity checks.
//!
//! A cochain of degree p and shift s is a vector in the cochain slice
//! `Hom(W_nu(p), M)` with coefficients in `M_{nu(p)+s}`; a chain of degree
//! q and total weight t is a vector of `M_{t-nu(q)} ⊗ W_nu(q)`. Products
//! are only formed when one coefficient bimodule is `A`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimodule::{BimoduleKind, GradedBimodule};
use crate::error::{Error, Result};
use crate::homology::SliceHomology;
use crate::koszul::complex::{
    chain_coeff_weight, chain_differential, chain_dim, cochain_coeff_weight, cochain_differential, cochain_dim,
};
use crate::koszul::{chain_homology, cochain_homology};
use crate::linalg::sparse::{Accumulator, SparseVec};
use crate::linalg::{Field, Matrix};
use crate::presentation::parse::Side;
use crate::presentation::word;
use crate::presentation::{nu, Algebra, Seg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<E> {
    pub p: usize,
    pub s: i64,
    pub v: SparseVec<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<E> {
    pub q: usize,
    pub t: i64,
    pub v: SparseVec<E>,
}

impl<E> Cochain<E> {
    pub fn new(p: usize, s: i64, v: SparseVec<E>) -> Self {
        Cochain { p, s, v }
    }
}

impl<E> Chain<E> {
    pub fn new(q: usize, t: i64, v: SparseVec<E>) -> Self {
        Chain { q, t, v }
    }
}

/// The 0-cochain with value `1` in `A_0`.
pub fn unit_cochain<F: Field>(f: &F) -> Cochain<F::Elem> {
    Cochain::new(0, 0, vec![(0, f.one())])
}

/// Splits a slice vector `sum c (m_i ⊗ w_k)` into one coefficient vector
/// per `w_k`.
fn by_w<E: Clone>(v: &SparseVec<E>, dim_w: usize) -> Vec<SparseVec<E>> {
    let mut out = vec![Vec::new(); dim_w];
    for (idx, c) in v {
        out[idx % dim_w].push((idx / dim_w, c.clone()));
    }
    out
}

fn push_at<F: Field>(
    f: &F,
    acc: &mut Accumulator<'_, F>,
    c: &F::Elem,
    val: &SparseVec<F::Elem>,
    k: usize,
    dim_w: usize,
) {
    for (i, x) in val {
        acc.add(i * dim_w + k, f.mul(c, x));
    }
}

/// `lhs ⊗_A rhs` with `lhs` in `P_{rl}` and `rhs` in `Q_{rr}`, realized in
/// whichever factor is not `A`.
fn tensor_a<F: Field>(
    alg: &Algebra<F>,
    (pm, lhs, rl): (&GradedBimodule<F>, &SparseVec<F::Elem>, i64),
    (qm, rhs, rr): (&GradedBimodule<F>, &SparseVec<F::Elem>, i64),
) -> Result<SparseVec<F::Elem>> {
    if lhs.is_empty() || rhs.is_empty() {
        return Ok(Vec::new());
    }
    if pm.kind() == BimoduleKind::Regular {
        Ok(qm.act_elem(alg, Side::Left, lhs, rl as usize, rr, rhs))
    } else if qm.kind() == BimoduleKind::Regular {
        Ok(pm.act_elem(alg, Side::Right, rhs, rr as usize, rl, lhs))
    } else {
        Err(unsupported(pm, qm))
    }
}

fn unsupported<F: Field>(pm: &GradedBimodule<F>, qm: &GradedBimodule<F>) -> Error {
    Error::UnsupportedPairing(format!("{} ⊗_A {}", pm.label(), qm.label()))
}

fn check_pairing<F: Field>(pm: &GradedBimodule<F>, qm: &GradedBimodule<F>) -> Result<()> {
    if pm.kind() == BimoduleKind::Regular || qm.kind() == BimoduleKind::Regular {
        Ok(())
    } else {
        Err(unsupported(pm, qm))
    }
}

/// The bimodule the product lands in.
fn product_target<'a, F: Field>(pm: &'a GradedBimodule<F>, qm: &'a GradedBimodule<F>) -> &'a GradedBimodule<F> {
    if pm.kind() == BimoduleKind::Regular {
        qm
    } else {
        pm
    }
}

fn decode(alg: &Algebra<impl Field>, c: usize, len: usize) -> Vec<usize> {
    word::decode(alg.num_gens(), c, len)
}

/// `u · x · v` inside `M`, with `x` in `M_r`.
fn sandwich<F: Field>(
    m: &GradedBimodule<F>,
    u: &[usize],
    x: &SparseVec<F::Elem>,
    r: i64,
    v: &[usize],
) -> SparseVec<F::Elem> {
    let y = m.act_word(Side::Right, v, r, x);
    m.act_word(Side::Left, u, r + v.len() as i64, &y)
}

/// Koszul cup product `f ⌣ g` for `f` with coefficients in `pm` and `g` in
/// `qm`; one of them must be `A`. The result has shift `f.s + g.s`.
pub fn cup<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    (qm, g): (&GradedBimodule<F>, &Cochain<F::Elem>),
) -> Result<Cochain<F::Elem>> {
    check_pairing(pm, qm)?;
    let fld = alg.field();
    let n = alg.n();
    let (p, q) = (f.p, g.p);
    let (np, nq, npq) = (nu(n, p), nu(n, q), nu(n, p + q));
    let (dwp, dwq, dw) = (alg.w_dim(np), alg.w_dim(nq), alg.w_dim(npq));
    let (rf, rg) = (cochain_coeff_weight(alg, p, f.s), cochain_coeff_weight(alg, q, g.s));
    let fv = by_w(&f.v, dwp);
    let gv = by_w(&g.v, dwq);
    let mut acc = Accumulator::new(fld);
    if dw > 0 {
        if p % 2 == 0 || q % 2 == 0 {
            let table = alg.split(npq, &[Seg::W(np), Seg::W(nq)]);
            for (k, terms) in table.iter().enumerate() {
                for t in terms {
                    let val = tensor_a(alg, (pm, &fv[t.idx[0]], rf), (qm, &gv[t.idx[1]], rg))?;
                    push_at(fld, &mut acc, &t.coeff, &val, k, dw);
                }
            }
        } else {
            let neg = fld.neg(&fld.one());
            for i in 0..=n - 2 {
                for j in 0..=n - 2 - i {
                    let l = n - 2 - i - j;
                    let segs = [Seg::Free(i), Seg::W(np), Seg::Free(l), Seg::W(nq), Seg::Free(j)];
                    let table = alg.split(npq, &segs);
                    for (k, terms) in table.iter().enumerate() {
                        for t in terms {
                            let (u, mid, v) = (decode(alg, t.idx[0], i), decode(alg, t.idx[2], l), decode(alg, t.idx[4], j));
                            let left = sandwich(pm, &u, &fv[t.idx[1]], rf, &mid);
                            let right = sandwich(qm, &[], &gv[t.idx[3]], rg, &v);
                            let rl = rf + (i + l) as i64;
                            let val = tensor_a(alg, (pm, &left, rl), (qm, &right, rg + j as i64))?;
                            push_at(fld, &mut acc, &fld.mul(&neg, &t.coeff), &val, k, dw);
                        }
                    }
                }
            }
        }
    }
    Ok(Cochain::new(p + q, f.s + g.s, acc.finish()))
}

/// Left Koszul cap `f ⌢ z`: `f` with coefficients in `pm`, `z` in `mm`.
/// Returns the zero chain of degree 0 when `p > q`.
pub fn cap_left<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    (mm, z): (&GradedBimodule<F>, &Chain<F::Elem>),
) -> Result<Chain<F::Elem>> {
    cap(alg, (pm, f), (mm, z), Side::Left)
}

/// Right Koszul cap `z ⌢ f`.
pub fn cap_right<F: Field>(
    alg: &Algebra<F>,
    (mm, z): (&GradedBimodule<F>, &Chain<F::Elem>),
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
) -> Result<Chain<F::Elem>> {
    cap(alg, (pm, f), (mm, z), Side::Right)
}

fn cap<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    (mm, z): (&GradedBimodule<F>, &Chain<F::Elem>),
    side: Side,
) -> Result<Chain<F::Elem>> {
    check_pairing(pm, mm)?;
    let (p, q) = (f.p, z.q);
    let t_out = z.t + f.s;
    if p > q {
        return Ok(Chain::new(0, t_out, Vec::new()));
    }
    let fld = alg.field();
    let n = alg.n();
    let (np, nq, nd) = (nu(n, p), nu(n, q), nu(n, q - p));
    let (dwp, dwq, dw) = (alg.w_dim(np), alg.w_dim(nq), alg.w_dim(nd));
    let rf = cochain_coeff_weight(alg, p, f.s);
    let rz = chain_coeff_weight(alg, q, z.t);
    let fv = by_w(&f.v, dwp);
    let zv = by_w(&z.v, dwq);
    let mut acc = Accumulator::new(fld);
    if dw > 0 {
        if p % 2 == 0 || (q - p) % 2 == 0 {
            // left: (f(tail) ⊗ m) ⊗ head; right: ± (m ⊗ f(head)) ⊗ tail
            let (segs, fi, wi) = match side {
                Side::Left => ([Seg::W(nd), Seg::W(np)], 1, 0),
                Side::Right => ([Seg::W(np), Seg::W(nd)], 0, 1),
            };
            let sign = if side == Side::Right && (p * q) % 2 == 1 {
                fld.neg(&fld.one())
            } else {
                fld.one()
            };
            let table = alg.split(nq, &segs);
            for (k, terms) in table.iter().enumerate() {
                for t in terms {
                    if zv[k].is_empty() {
                        continue;
                    }
                    let fval = &fv[t.idx[fi]];
                    let val = match side {
                        Side::Left => tensor_a(alg, (pm, fval, rf), (mm, &zv[k], rz))?,
                        Side::Right => tensor_a(alg, (mm, &zv[k], rz), (pm, fval, rf))?,
                    };
                    push_at(fld, &mut acc, &fld.mul(&sign, &t.coeff), &val, t.idx[wi], dw);
                }
            }
        } else {
            // p odd, q even: sums over i + j <= N - 2
            let neg = fld.neg(&fld.one());
            for i in 0..=n - 2 {
                for j in 0..=n - 2 - i {
                    let l = n - 2 - i - j;
                    let segs = match side {
                        Side::Left => [Seg::Free(i), Seg::W(nd), Seg::Free(l), Seg::W(np), Seg::Free(j)],
                        Side::Right => [Seg::Free(i), Seg::W(np), Seg::Free(l), Seg::W(nd), Seg::Free(j)],
                    };
                    let table = alg.split(nq, &segs);
                    for (k, terms) in table.iter().enumerate() {
                        if zv[k].is_empty() {
                            continue;
                        }
                        for t in terms {
                            let (u, mid, v) = (decode(alg, t.idx[0], i), decode(alg, t.idx[2], l), decode(alg, t.idx[4], j));
                            // v m u
                            let vmu = sandwich(mm, &v, &zv[k], rz, &u);
                            let rm = rz + (i + j) as i64;
                            let (val, wi, c) = match side {
                                Side::Left => {
                                    let mf = sandwich(pm, &mid, &fv[t.idx[3]], rf, &[]);
                                    let val = tensor_a(alg, (pm, &mf, rf + l as i64), (mm, &vmu, rm))?;
                                    (val, t.idx[1], fld.mul(&neg, &t.coeff))
                                }
                                Side::Right => {
                                    let fm = sandwich(pm, &[], &fv[t.idx[1]], rf, &mid);
                                    let val = tensor_a(alg, (mm, &vmu, rm), (pm, &fm, rf + l as i64))?;
                                    (val, t.idx[3], t.coeff.clone())
                                }
                            };
                            push_at(fld, &mut acc, &c, &val, wi, dw);
                        }
                    }
                }
            }
        }
    }
    Ok(Chain::new(q - p, t_out, acc.finish()))
}

fn sign_pow<F: Field>(f: &F, e: usize) -> F::Elem {
    if e % 2 == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// `[f, g]_⌣ = f ⌣ g - (-1)^{pq} g ⌣ f`.
pub fn cup_bracket<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    (qm, g): (&GradedBimodule<F>, &Cochain<F::Elem>),
) -> Result<Cochain<F::Elem>> {
    let fld = alg.field();
    let a = cup(alg, (pm, f), (qm, g))?;
    let b = cup(alg, (qm, g), (pm, f))?;
    let c = fld.neg(&sign_pow(fld, f.p * g.p));
    Ok(Cochain::new(a.p, a.s, crate::linalg::sparse::axpy(fld, &a.v, &c, &b.v)))
}

/// `[f, z]_⌢ = f ⌢ z - (-1)^{pq} z ⌢ f`.
pub fn cap_bracket<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    (mm, z): (&GradedBimodule<F>, &Chain<F::Elem>),
) -> Result<Chain<F::Elem>> {
    let fld = alg.field();
    let a = cap_left(alg, (pm, f), (mm, z))?;
    let b = cap_right(alg, (mm, z), (pm, f))?;
    let c = fld.neg(&sign_pow(fld, f.p * z.q));
    Ok(Chain::new(a.q, a.t, crate::linalg::sparse::axpy(fld, &a.v, &c, &b.v)))
}

/// Applies `b_K` to a cochain.
pub fn cochain_d<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, f: &Cochain<F::Elem>) -> Cochain<F::Elem> {
    let d = cochain_differential(alg, m, f.p, f.s);
    Cochain::new(f.p + 1, f.s, d.apply(&f.v))
}

/// Applies `b_K` to a chain; degree-0 chains map to zero in degree 0.
pub fn chain_d<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, z: &Chain<F::Elem>) -> Chain<F::Elem> {
    if z.q == 0 {
        return Chain::new(0, z.t, Vec::new());
    }
    let d = chain_differential(alg, m, z.q, z.t);
    Chain::new(z.q - 1, z.t, d.apply(&z.v))
}

/// Matrix of `g ↦ f ⌣ g` (or `g ↦ g ⌣ f` when `f_on_left` is false) from
/// the cochain slice `(q, s)` of `qm`.
pub fn cup_matrix<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    qm: &GradedBimodule<F>,
    (q, s): (usize, i64),
    f_on_left: bool,
) -> Result<Matrix<F>> {
    let fld = alg.field();
    let target = product_target(pm, qm);
    let dim = cochain_dim(alg, qm, q, s);
    let rows = cochain_dim(alg, target, f.p + q, f.s + s);
    let mut cols = Vec::with_capacity(dim);
    for c in 0..dim {
        let g = Cochain::new(q, s, vec![(c, fld.one())]);
        let out = if f_on_left {
            cup(alg, (pm, f), (qm, &g))?
        } else {
            cup(alg, (qm, &g), (pm, f))?
        };
        cols.push(out.v);
    }
    Ok(Matrix::from_columns(fld, rows, &cols))
}

/// Matrix of `z ↦ f ⌢ z` (`Side::Left`) or `z ↦ z ⌢ f` (`Side::Right`) on
/// the chain slice `(q, t)` of `mm`.
pub fn cap_matrix<F: Field>(
    alg: &Algebra<F>,
    (pm, f): (&GradedBimodule<F>, &Cochain<F::Elem>),
    mm: &GradedBimodule<F>,
    (q, t): (usize, i64),
    side: Side,
) -> Result<Matrix<F>> {
    let fld = alg.field();
    let target = product_target(pm, mm);
    let dim = chain_dim(alg, mm, q, t);
    let rows = if f.p > q {
        0
    } else {
        chain_dim(alg, target, q - f.p, t + f.s)
    };
    let mut cols = Vec::with_capacity(dim);
    for c in 0..dim {
        let z = Chain::new(q, t, vec![(c, fld.one())]);
        cols.push(cap(alg, (pm, f), (mm, &z), side)?.v);
    }
    Ok(Matrix::from_columns(fld, rows, &cols))
}

/// A (co)homology class: a representative together with the slice homology
/// used to compare classes.
#[derive(Clone, Debug)]
pub struct KClass<F: Field> {
    pub degree: usize,
    /// Shift s for cohomology, total weight t for homology.
    pub weight: i64,
    pub cohomology: bool,
    pub rep: SparseVec<F::Elem>,
    pub slice: SliceHomology<F>,
}

impl<F: Field> KClass<F> {
    /// Cohomology class of a cocycle; errors if `f` is not a cocycle.
    pub fn of_cochain(alg: &Algebra<F>, m: &GradedBimodule<F>, f: &Cochain<F::Elem>) -> Result<Self> {
        let slice = cochain_homology(alg, m, f.p, f.s);
        if !slice.is_cycle(&f.v) {
            return Err(Error::NotClosed(format!("cochain of degree {} is not a cocycle", f.p)));
        }
        Ok(KClass {
            degree: f.p,
            weight: f.s,
            cohomology: true,
            rep: slice.canonical(&f.v),
            slice,
        })
    }

    /// Homology class of a cycle; errors if `z` is not a cycle.
    pub fn of_chain(alg: &Algebra<F>, m: &GradedBimodule<F>, z: &Chain<F::Elem>) -> Result<Self> {
        let slice = chain_homology(alg, m, z.q, z.t);
        if !slice.is_cycle(&z.v) {
            return Err(Error::NotClosed(format!("chain of degree {} is not a cycle", z.q)));
        }
        Ok(KClass {
            degree: z.q,
            weight: z.t,
            cohomology: false,
            rep: slice.canonical(&z.v),
            slice,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn cochain(&self) -> Cochain<F::Elem> {
        Cochain::new(self.degree, self.weight, self.rep.clone())
    }

    pub fn chain(&self) -> Chain<F::Elem> {
        Chain::new(self.degree, self.weight, self.rep.clone())
    }

    /// Whether `v` (same slice) represents this class.
    pub fn represented_by(&self, v: &SparseVec<F::Elem>) -> bool {
        self.slice.is_cycle(v) && self.slice.canonical(v) == self.rep
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Cup,
    CapLeft,
    CapRight,
}

/// Product of two classes, reduced to its canonical representative. For
/// `Cup`, `b` is a cohomology class with coefficients in `bm`; for the caps,
/// `b` is a homology class in `bm`. `a` always has coefficients in `am`.
pub fn class_product<F: Field>(
    alg: &Algebra<F>,
    (am, a): (&GradedBimodule<F>, &KClass<F>),
    (bm, b): (&GradedBimodule<F>, &KClass<F>),
    kind: ProductKind,
) -> Result<KClass<F>> {
    if !a.cohomology {
        return Err(Error::Invalid("first factor must be a cohomology class".into()));
    }
    let target = product_target(am, bm);
    match kind {
        ProductKind::Cup => {
            if !b.cohomology {
                return Err(Error::Invalid("cup needs two cohomology classes".into()));
            }
            let c = cup(alg, (am, &a.cochain()), (bm, &b.cochain()))?;
            KClass::of_cochain(alg, target, &c)
        }
        ProductKind::CapLeft | ProductKind::CapRight => {
            if b.cohomology {
                return Err(Error::Invalid("cap needs a homology class".into()));
            }
            let z = b.chain();
            let c = if kind == ProductKind::CapLeft {
                cap_left(alg, (am, &a.cochain()), (bm, &z))?
            } else {
                cap_right(alg, (bm, &z), (am, &a.cochain()))?
            };
            KClass::of_chain(alg, target, &c)
        }
    }
}

/// Seeded random vector with entries in `-3..=3`.
pub fn random_vec<F: Field>(f: &F, rng: &mut impl Rng, dim: usize) -> SparseVec<F::Elem> {
    (0..dim)
        .filter_map(|i| {
            let x: i64 = rng.gen_range(-3..=3);
            (x != 0).then(|| (i, f.from_i64(x)))
        })
        .collect()
}

/// Outcome of one identity family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str) -> Self {
        IdentityCheck {
            name: name.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, ctx: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(ctx());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<IdentityCheck>,
    /// For `N > 2`: chain-level associativity failures seen while checking
    /// classes. Informational; these are expected to occur.
    pub chain_level_failures: usize,
    pub chain_level_example: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

/// Bounds for [`verify_identities`].
#[derive(Clone, Copy, Debug)]
pub struct IdentityBounds {
    /// Largest degree of any factor or product.
    pub max_degree: usize,
    /// Largest coefficient weight of any factor or product.
    pub max_weight: i64,
    pub trials: usize,
    pub seed: u64,
}

fn add_signed<F: Field>(f: &F, a: &SparseVec<F::Elem>, sign: usize, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    crate::linalg::sparse::axpy(f, a, &sign_pow(f, sign), b)
}

/// Draws random elements of slices: arbitrary vectors, or random
/// (co)cycles when class-level comparisons are wanted.
struct Sampler<'a, F: Field> {
    alg: &'a Algebra<F>,
    a: &'a GradedBimodule<F>,
    classes: bool,
    co: BTreeMap<(usize, i64), SliceHomology<F>>,
    ch: BTreeMap<(usize, i64), SliceHomology<F>>,
}

impl<'a, F: Field> Sampler<'a, F> {
    fn cochain_slice(&mut self, sl: (usize, i64)) -> &SliceHomology<F> {
        let (alg, a) = (self.alg, self.a);
        self.co.entry(sl).or_insert_with(|| cochain_homology(alg, a, sl.0, sl.1))
    }

    fn chain_slice(&mut self, sl: (usize, i64)) -> &SliceHomology<F> {
        let (alg, a) = (self.alg, self.a);
        self.ch.entry(sl).or_insert_with(|| chain_homology(alg, a, sl.0, sl.1))
    }

    fn cochain(&mut self, rng: &mut ChaCha8Rng, sl: (usize, i64)) -> Cochain<F::Elem> {
        let f = self.alg.field();
        let v = if self.classes {
            random_in(f, rng, self.cochain_slice(sl))
        } else {
            random_vec(f, rng, cochain_dim(self.alg, self.a, sl.0, sl.1))
        };
        Cochain::new(sl.0, sl.1, v)
    }

    fn chain(&mut self, rng: &mut ChaCha8Rng, sl: (usize, i64)) -> Chain<F::Elem> {
        let f = self.alg.field();
        let v = if self.classes {
            random_in(f, rng, self.chain_slice(sl))
        } else {
            random_vec(f, rng, chain_dim(self.alg, self.a, sl.0, sl.1))
        };
        Chain::new(sl.0, sl.1, v)
    }

    fn same_cochain(&mut self, x: &Cochain<F::Elem>, y: &Cochain<F::Elem>) -> bool {
        if !self.classes || x.v == y.v {
            return x.v == y.v;
        }
        let d = crate::linalg::sparse::axpy(self.alg.field(), &x.v, &self.alg.field().neg(&self.alg.field().one()), &y.v);
        self.cochain_slice((x.p, x.s)).is_boundary(&d)
    }

    fn same_chain(&mut self, x: &Chain<F::Elem>, y: &Chain<F::Elem>) -> bool {
        if !self.classes || x.v == y.v {
            return x.v == y.v;
        }
        let d = crate::linalg::sparse::axpy(self.alg.field(), &x.v, &self.alg.field().neg(&self.alg.field().one()), &y.v);
        self.chain_slice((x.q, x.t)).is_boundary(&d)
    }
}

/// Random cocycle (or cycle) in a slice: a random combination of the
/// kernel basis.
fn random_in<F: Field>(f: &F, rng: &mut impl Rng, h: &SliceHomology<F>) -> SparseVec<F::Elem> {
    let coords: Vec<F::Elem> = (0..h.kernel().dim()).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect();
    h.kernel().combine(&coords)
}

/// Random-trial check of `d^2 = 0`, the derivation rules for cup and both
/// caps, and the four associativity rules. Associativity is checked on
/// (co)chains when `N = 2` and on classes of random (co)cycles otherwise.
/// Coefficients are in `A`. Every factor and every product stays within
/// the degree and weight bounds; each trial draws fresh elements for every
/// admissible combination of slices.
pub fn verify_identities<F: Field>(alg: &Algebra<F>, bounds: IdentityBounds) -> IdentityReport {
    let fld = alg.field();
    let n = alg.n();
    let maxd = bounds.max_degree;
    let maxw = bounds.max_weight;
    let extra = n as i64 - 2;
    // Room for one differential above a product.
    let a = GradedBimodule::regular(alg, 0, maxw + n as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let chain_level = n == 2;
    let level = if chain_level { "cochains" } else { "classes" };
    let mut dd = IdentityCheck::new("d^2 = 0");
    let mut der_cup = IdentityCheck::new("b(f⌣g) = b(f)⌣g + (-1)^p f⌣b(g)");
    let mut der_capl = IdentityCheck::new("b(f⌢z) = b(f)⌢z + (-1)^p f⌢b(z)");
    let mut der_capr = IdentityCheck::new("b(z⌢f) = b(z)⌢f + (-1)^q z⌢b(f)");
    let mut assoc = [
        IdentityCheck::new(&format!("(f⌣g)⌣h = f⌣(g⌣h) on {level}")),
        IdentityCheck::new(&format!("f⌢(g⌢z) = (f⌣g)⌢z on {level}")),
        IdentityCheck::new(&format!("(z⌢g)⌢f = z⌢(g⌣f) on {level}")),
        IdentityCheck::new(&format!("f⌢(z⌢g) = (f⌢z)⌢g on {level}")),
    ];

    // Slices listed with their coefficient weight.
    let cochain_slices: Vec<((usize, i64), i64)> = (0..=maxd)
        .flat_map(|p| (0..=maxw).map(move |r| ((p, r - nu(n, p) as i64), r)))
        .filter(|&((p, s), _)| cochain_dim(alg, &a, p, s) > 0)
        .collect();
    let chain_slices: Vec<((usize, i64), i64)> = (0..=maxd)
        .flat_map(|q| (0..=maxw).map(move |r| ((q, r + nu(n, q) as i64), r)))
        .filter(|&((q, t), _)| chain_dim(alg, &a, q, t) > 0)
        .collect();
    // Coefficient weight of a product of factors of degrees `ps`.
    let prod_weight = |ps: &[usize], ws: &[i64]| -> i64 {
        let mut deg = ps[0];
        let mut w = ws[0];
        for (&p, &x) in ps[1..].iter().zip(&ws[1..]) {
            w += x + if deg % 2 == 1 && p % 2 == 1 { extra } else { 0 };
            deg += p;
        }
        w
    };

    let mut plain = Sampler {
        alg,
        a: &a,
        classes: false,
        co: BTreeMap::new(),
        ch: BTreeMap::new(),
    };
    for trial in 0..bounds.trials {
        for &(sl, _) in &cochain_slices {
            let f = plain.cochain(&mut rng, sl);
            let ddf = cochain_d(alg, &a, &cochain_d(alg, &a, &f));
            dd.record(ddf.v.is_empty(), || format!("cochain p={} s={} trial {trial}", sl.0, sl.1));
        }
        for &(sl, _) in &chain_slices {
            if sl.0 >= 2 {
                let z = plain.chain(&mut rng, sl);
                let ddz = chain_d(alg, &a, &chain_d(alg, &a, &z));
                dd.record(ddz.v.is_empty(), || format!("chain q={} t={} trial {trial}", sl.0, sl.1));
            }
        }
        for &(fs, wf) in &cochain_slices {
            let f = plain.cochain(&mut rng, fs);
            let df = cochain_d(alg, &a, &f);
            for &(gs, wg) in &cochain_slices {
                if fs.0 + gs.0 + 1 > maxd || prod_weight(&[fs.0, gs.0], &[wf, wg]) > maxw {
                    continue;
                }
                let g = plain.cochain(&mut rng, gs);
                let lhs = cochain_d(alg, &a, &cup(alg, (&a, &f), (&a, &g)).unwrap());
                let r1 = cup(alg, (&a, &df), (&a, &g)).unwrap();
                let r2 = cup(alg, (&a, &f), (&a, &cochain_d(alg, &a, &g))).unwrap();
                let rhs = add_signed(fld, &r1.v, f.p, &r2.v);
                der_cup.record(lhs.v == rhs, || format!("p={} s={} q={} s'={} trial {trial}", fs.0, fs.1, gs.0, gs.1));
            }
            for &(zs, wz) in &chain_slices {
                if fs.0 + 1 > zs.0 || wf + wz + extra > maxw {
                    continue;
                }
                let z = plain.chain(&mut rng, zs);
                let dz = chain_d(alg, &a, &z);
                let lhs = chain_d(alg, &a, &cap_left(alg, (&a, &f), (&a, &z)).unwrap());
                let r1 = cap_left(alg, (&a, &df), (&a, &z)).unwrap();
                let r2 = cap_left(alg, (&a, &f), (&a, &dz)).unwrap();
                let rhs = add_signed(fld, &r1.v, f.p, &r2.v);
                der_capl.record(lhs.v == rhs, || format!("p={} s={} q={} t={} trial {trial}", fs.0, fs.1, zs.0, zs.1));
                let lhs = chain_d(alg, &a, &cap_right(alg, (&a, &z), (&a, &f)).unwrap());
                let r1 = cap_right(alg, (&a, &dz), (&a, &f)).unwrap();
                let r2 = cap_right(alg, (&a, &z), (&a, &df)).unwrap();
                let rhs = add_signed(fld, &r1.v, z.q, &r2.v);
                der_capr.record(lhs.v == rhs, || format!("p={} s={} q={} t={} trial {trial}", fs.0, fs.1, zs.0, zs.1));
            }
        }
    }

    let mut smp = Sampler {
        alg,
        a: &a,
        classes: !chain_level,
        co: BTreeMap::new(),
        ch: BTreeMap::new(),
    };
    let cup3: Vec<_> = cochain_slices
        .iter()
        .flat_map(|&x| cochain_slices.iter().map(move |&y| (x, y)))
        .flat_map(|(x, y)| cochain_slices.iter().map(move |&z| (x, y, z)))
        .filter(|&((f, wf), (g, wg), (h, wh))| {
            f.0 + g.0 + h.0 <= maxd && prod_weight(&[f.0, g.0, h.0], &[wf, wg, wh]) <= maxw
        })
        .collect();
    let cap3: Vec<_> = cochain_slices
        .iter()
        .flat_map(|&x| cochain_slices.iter().map(move |&y| (x, y)))
        .flat_map(|(x, y)| chain_slices.iter().map(move |&z| (x, y, z)))
        .filter(|&((f, wf), (g, wg), (z, wz))| f.0 + g.0 <= z.0 && wf + wg + wz + 2 * extra <= maxw)
        .collect();
    let mut chain_failures = 0;
    let mut chain_example = None;
    for trial in 0..bounds.trials {
        for &((fs, _), (gs, _), (hs, _)) in &cup3 {
            let (f, g, h) = (smp.cochain(&mut rng, fs), smp.cochain(&mut rng, gs), smp.cochain(&mut rng, hs));
            let l = cup(alg, (&a, &cup(alg, (&a, &f), (&a, &g)).unwrap()), (&a, &h)).unwrap();
            let r = cup(alg, (&a, &f), (&a, &cup(alg, (&a, &g), (&a, &h)).unwrap())).unwrap();
            let ok = smp.same_cochain(&l, &r);
            assoc[0].record(ok, || format!("{fs:?} {gs:?} {hs:?} trial {trial}"));
            if !chain_level {
                // Counterexample search on arbitrary cochains.
                let (f, g, h) = (plain.cochain(&mut rng, fs), plain.cochain(&mut rng, gs), plain.cochain(&mut rng, hs));
                let l = cup(alg, (&a, &cup(alg, (&a, &f), (&a, &g)).unwrap()), (&a, &h)).unwrap();
                let r = cup(alg, (&a, &f), (&a, &cup(alg, (&a, &g), (&a, &h)).unwrap())).unwrap();
                if l.v != r.v {
                    chain_failures += 1;
                    chain_example.get_or_insert_with(|| format!("(f⌣g)⌣h at {fs:?} {gs:?} {hs:?} trial {trial}"));
                }
            }
        }
        for &((fs, _), (gs, _), (zs, _)) in &cap3 {
            let (f, g, z) = (smp.cochain(&mut rng, fs), smp.cochain(&mut rng, gs), smp.chain(&mut rng, zs));
            let ctx = || format!("{fs:?} {gs:?} {zs:?} trial {trial}");
            let l = cap_left(alg, (&a, &f), (&a, &cap_left(alg, (&a, &g), (&a, &z)).unwrap())).unwrap();
            let r = cap_left(alg, (&a, &cup(alg, (&a, &f), (&a, &g)).unwrap()), (&a, &z)).unwrap();
            let ok = smp.same_chain(&l, &r);
            assoc[1].record(ok, ctx);
            if !chain_level {
                let (f, g, z) = (plain.cochain(&mut rng, fs), plain.cochain(&mut rng, gs), plain.chain(&mut rng, zs));
                let l = cap_left(alg, (&a, &f), (&a, &cap_left(alg, (&a, &g), (&a, &z)).unwrap())).unwrap();
                let r = cap_left(alg, (&a, &cup(alg, (&a, &f), (&a, &g)).unwrap()), (&a, &z)).unwrap();
                if l.v != r.v {
                    chain_failures += 1;
                    chain_example.get_or_insert_with(|| format!("f⌢(g⌢z) at {fs:?} {gs:?} {zs:?} trial {trial}"));
                }
            }
            let l = cap_right(alg, (&a, &cap_right(alg, (&a, &z), (&a, &g)).unwrap()), (&a, &f)).unwrap();
            let r = cap_right(alg, (&a, &z), (&a, &cup(alg, (&a, &g), (&a, &f)).unwrap())).unwrap();
            let ok = smp.same_chain(&l, &r);
            assoc[2].record(ok, ctx);
            let l = cap_left(alg, (&a, &f), (&a, &cap_right(alg, (&a, &z), (&a, &g)).unwrap())).unwrap();
            let r = cap_right(alg, (&a, &cap_left(alg, (&a, &f), (&a, &z)).unwrap()), (&a, &g)).unwrap();
            let ok = smp.same_chain(&l, &r);
            assoc[3].record(ok, ctx);
        }
    }

    let mut checks = vec![dd, der_cup, der_capl, der_capr];
    checks.extend(assoc);
    IdentityReport {
        seed: bounds.seed,
        trials: bounds.trials,
        checks,
        chain_level_failures: chain_failures,
        chain_level_example: chain_example,
    }
}
