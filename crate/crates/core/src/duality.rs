//! The dual complex `C = (M ⊗ W_nu(.))*`, the maps `eta`, `xi` and `zeta`,
//! and exact checks of the cup-cap duality diagrams.
//!
//! The dual of the chain slice `(q, t)` uses the dual basis, so `C^q_t`
//! and the cochain slice `(q, -t)` of `M*` share coordinates and `eta` is
//! an identity matrix. Transposes of cap operators carry the Koszul sign
//! `(-1)^{(q-p)p}`.
//!
//! Diagram ids: `4.1` is the chain map property of `eta`; `4.2` and `4.3`
//! are right and left linearity of `eta` at cochain level; `4.4` is the
//! bracket square at cochain level; `4.5`, `4.6` and `4.7` are the class
//! level squares through `zeta` for `(alpha ⌢ -)*`, `(- ⌢ alpha)*` and the
//! bracket.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::bimodule::GradedBimodule;
use crate::error::{Error, Result};
use crate::homology::SliceHomology;
use crate::koszul::complex::{chain_known, chain_slice_exact, cochain_differential, cochain_known};
use crate::koszul::{chain_differential, chain_dim, chain_homology, cochain_homology};
use crate::linalg::sparse::{self, Accumulator};
use crate::linalg::{Field, Matrix};
use crate::presentation::parse::Side;
use crate::presentation::{nu, Algebra};
use crate::products::{cap_matrix, cup_matrix, Cochain, KClass};

fn sign<F: Field>(f: &F, e: usize) -> F::Elem {
    f.sign(e % 2 == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramStatus {
    Pass,
    Fail,
    /// A slice involved is not fully inside the window.
    Skipped,
}

impl DiagramStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagramStatus::Pass => "pass",
            DiagramStatus::Fail => "fail",
            DiagramStatus::Skipped => "skipped",
        }
    }
}

/// Outcome of one square on one slice. `t` is the total weight of the
/// degree-q chain slice; `defect` is the largest entry (by size) of the
/// difference of the two composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramReport {
    pub diagram: &'static str,
    pub p: usize,
    pub q: usize,
    pub t: i64,
    pub status: DiagramStatus,
    pub defect: String,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.status != DiagramStatus::Fail
    }

    pub fn failed(diagram: &'static str, (p, q, t): (usize, usize, i64), defect: &str) -> Self {
        DiagramReport {
            diagram,
            p,
            q,
            t,
            status: DiagramStatus::Fail,
            defect: defect.to_string(),
        }
    }
}

impl fmt::Display for DiagramReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diagram={} p={} q={} t={} status={} defect={}",
            self.diagram,
            self.p,
            self.q,
            self.t,
            self.status.as_str(),
            self.defect
        )
    }
}

pub(crate) fn compare<F: Field>(diagram: &'static str, (p, q, t): (usize, usize, i64), x: &Matrix<F>, y: &Matrix<F>) -> DiagramReport {
    let f = x.field();
    assert_eq!((x.nrows(), x.ncols()), (y.nrows(), y.ncols()), "diagram {diagram}: shape mismatch");
    let diff = x.sub(y);
    let mut worst = f.zero();
    for row in diff.rows() {
        for (_, c) in row {
            if f.size_hint(c) > f.size_hint(&worst) || f.is_zero(&worst) {
                worst = c.clone();
            }
        }
    }
    let status = if diff.is_zero() {
        DiagramStatus::Pass
    } else {
        DiagramStatus::Fail
    };
    DiagramReport {
        diagram,
        p,
        q,
        t,
        status,
        defect: f.format(&worst),
    }
}

pub(crate) fn skipped(diagram: &'static str, (p, q, t): (usize, usize, i64)) -> DiagramReport {
    DiagramReport {
        diagram,
        p,
        q,
        t,
        status: DiagramStatus::Skipped,
        defect: "-".to_string(),
    }
}

type Cache<F> = Mutex<HashMap<(usize, i64), Arc<SliceHomology<F>>>>;

/// A coefficient bimodule `M` with its graded dual `M*` and cached slice
/// (co)homology of `M ⊗ W`, of `C` and of `Hom(W, M*)`.
pub struct Duality<'a, F: Field> {
    pub alg: &'a Algebra<F>,
    pub m: &'a GradedBimodule<F>,
    pub md: GradedBimodule<F>,
    chains: Cache<F>,
    dual: Cache<F>,
    cochains: Cache<F>,
}

fn cached<F: Field>(cache: &Cache<F>, key: (usize, i64), make: impl FnOnce() -> SliceHomology<F>) -> Arc<SliceHomology<F>> {
    if let Some(h) = cache.lock().unwrap().get(&key) {
        return h.clone();
    }
    let h = Arc::new(make());
    cache.lock().unwrap().entry(key).or_insert(h).clone()
}

impl<'a, F: Field> Duality<'a, F> {
    pub fn new(alg: &'a Algebra<F>, m: &'a GradedBimodule<F>) -> Self {
        Duality {
            alg,
            m,
            md: GradedBimodule::dual(m, false),
            chains: Mutex::new(HashMap::new()),
            dual: Mutex::new(HashMap::new()),
            cochains: Mutex::new(HashMap::new()),
        }
    }

    fn field(&self) -> &F {
        self.alg.field()
    }

    /// `b_K*: C^q_t -> C^{q+1}_t`, `phi ↦ -(-1)^q phi ∘ b_K`.
    pub fn dual_differential(&self, q: usize, t: i64) -> Matrix<F> {
        let b = chain_differential(self.alg, self.m, q + 1, t);
        b.transpose().scale(&sign(self.field(), q + 1))
    }

    /// `eta_q` on the slice `(q, t)`: `C^q_t -> Hom(W_nu(q), M*)` at shift
    /// `-t`. In the dual basis it is the identity.
    pub fn eta(&self, q: usize, t: i64) -> Matrix<F> {
        Matrix::identity(self.field(), chain_dim(self.alg, self.m, q, t))
    }

    pub fn chain_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.chains, (q, t), || chain_homology(self.alg, self.m, q, t))
    }

    /// `H^q(C)` at total weight t.
    pub fn dual_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.dual, (q, t), || {
            let dim = chain_dim(self.alg, self.m, q, t);
            let inc = (q >= 1).then(|| self.dual_differential(q - 1, t));
            let out = self.dual_differential(q, t);
            SliceHomology::new(self.field(), dim, inc.as_ref(), Some(&out))
        })
    }

    /// `HK^q(A, M*)` at shift `-t`.
    pub fn cochain_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.cochains, (q, t), || cochain_homology(self.alg, &self.md, q, -t))
    }

    /// Whether `(q, t)` and the corresponding `M*` slice are exact.
    pub fn slice_exact(&self, q: usize, t: i64) -> bool {
        chain_slice_exact(self.alg, self.m, q, t)
    }

    fn slice_known(&self, q: usize, t: i64) -> bool {
        chain_known(self.alg, self.m, q, t) && cochain_known(self.alg, &self.md, q, -t)
    }

    /// Diagram 4.1: `b_K ∘ eta_q = eta_{q+1} ∘ b_K*` on `(q, t)`.
    pub fn check_eta(&self, q: usize, t: i64) -> DiagramReport {
        let top = self.eta(q + 1, t).mul(&self.dual_differential(q, t));
        let bottom = cochain_differential(self.alg, &self.md, q, -t).mul(&self.eta(q, t));
        compare("4.1", (0, q, t), &top, &bottom)
    }

    /// `xi_q`: entry `(a, b)` is the value of the `b`-th basis cocycle of
    /// `C` on the `a`-th basis cycle of `HK_q(A, M)`.
    pub fn xi(&self, q: usize, t: i64) -> Matrix<F> {
        let hk = self.chain_homology(q, t);
        let hc = self.dual_homology(q, t);
        let f = self.field();
        let rows: Vec<_> = hk
            .representatives()
            .iter()
            .map(|z| {
                let dense: Vec<F::Elem> = hc.representatives().iter().map(|phi| sparse::dot(f, phi, z)).collect();
                sparse::from_dense(f, &dense)
            })
            .collect();
        Matrix::from_rows(f, hc.dim(), rows)
    }

    /// `zeta_q = H(eta) ∘ xi^{-1}`, from `HK_q(A, M)*` (dual coordinates of
    /// the homology basis) to `HK^q(A, M*)` coordinates.
    pub fn zeta(&self, q: usize, t: i64) -> Result<Matrix<F>> {
        let x = self.xi(q, t);
        let xinv = x
            .inverse()
            .ok_or_else(|| Error::NotInvertible(format!("xi at q={q} t={t} (truncated slice?)")))?;
        let hc = self.dual_homology(q, t);
        let target = self.cochain_homology(q, t);
        let eta = self.eta(q, t);
        let cols: Vec<_> = hc
            .representatives()
            .iter()
            .map(|phi| sparse::from_dense(self.field(), &target.class_coords(&eta.apply(phi))))
            .collect();
        let e = Matrix::from_columns(self.field(), target.dim(), &cols);
        Ok(e.mul(&xinv))
    }

    /// Matrix of a chain map between homology slices of `M ⊗ W` in the
    /// chosen bases.
    fn on_chain_classes(&self, op: &Matrix<F>, from: (usize, i64), to: (usize, i64)) -> Matrix<F> {
        let src = self.chain_homology(from.0, from.1);
        let dst = self.chain_homology(to.0, to.1);
        let cols: Vec<_> = src
            .representatives()
            .iter()
            .map(|z| sparse::from_dense(self.field(), &dst.class_coords(&op.apply(z))))
            .collect();
        Matrix::from_columns(self.field(), dst.dim(), &cols)
    }

    fn on_cochain_classes(&self, op: &Matrix<F>, from: (usize, i64), to: (usize, i64)) -> Matrix<F> {
        let src = self.cochain_homology(from.0, from.1);
        let dst = self.cochain_homology(to.0, to.1);
        let cols: Vec<_> = src
            .representatives()
            .iter()
            .map(|g| sparse::from_dense(self.field(), &dst.class_coords(&op.apply(g))))
            .collect();
        Matrix::from_columns(self.field(), dst.dim(), &cols)
    }

    /// Diagrams 4.2 to 4.7 for a cochain `f` of degree p with coefficients
    /// in `a` (the regular bimodule) on the slice `(q, t)`. The class level
    /// squares need `f` to be a cocycle and are skipped on inexact slices.
    pub fn check_diagrams(
        &self,
        a: &GradedBimodule<F>,
        f: &Cochain<F::Elem>,
        q: usize,
        t: i64,
    ) -> Result<Vec<DiagramReport>> {
        let fld = self.field();
        let p = f.p;
        assert!(q >= p, "need q >= p");
        let key = (p, q, t);
        let (qp, tp) = (q - p, t + f.s);
        let ids = ["4.2", "4.3", "4.4", "4.5", "4.6", "4.7"];
        if !self.slice_known(q, t) || !self.slice_known(qp, tp) {
            return Ok(ids.iter().map(|d| skipped(d, key)).collect());
        }
        // Graded transpose sign and the two bracket signs.
        let gt = sign(fld, (q - p) * p);
        let spq = sign(fld, p * q);
        let sp_qp = sign(fld, p * (q - p));
        let cap_l = cap_matrix(self.alg, (a, f), self.m, (q, t), Side::Left)?;
        let cap_r = cap_matrix(self.alg, (a, f), self.m, (q, t), Side::Right)?;
        // g ↦ g ⌣ f and g ↦ f ⌣ g on Hom(W_nu(q-p), M*) at shift -tp.
        let cup_r = cup_matrix(self.alg, (a, f), &self.md, (qp, -tp), false)?;
        let cup_l = cup_matrix(self.alg, (a, f), &self.md, (qp, -tp), true)?;

        let mut out = Vec::with_capacity(6);
        let eta_q = self.eta(q, t);
        let eta_qp = self.eta(qp, tp);
        // 4.2: eta_q ∘ (f ⌢ -)* = ±(- ⌣ f) ∘ eta_{q-p}
        let top = eta_q.mul(&cap_l.transpose().scale(&gt));
        let bottom = cup_r.scale(&gt).mul(&eta_qp);
        out.push(compare("4.2", key, &top, &bottom));
        // 4.3: eta_q ∘ ±(- ⌢ f)* = (f ⌣ -) ∘ eta_{q-p}
        let top = eta_q.mul(&cap_r.transpose().scale(&fld.mul(&spq, &gt)));
        let bottom = cup_l.mul(&eta_qp);
        out.push(compare("4.3", key, &top, &bottom));
        // 4.4: eta_q ∘ [f, -]⌢* = -[f, -]⌣ ∘ eta_{q-p}
        let cap_br = cap_l.axpy(&fld.neg(&spq), &cap_r);
        let cup_br = cup_l.axpy(&fld.neg(&sp_qp), &cup_r);
        let top = eta_q.mul(&cap_br.transpose().scale(&gt));
        let bottom = cup_br.neg().mul(&eta_qp);
        out.push(compare("4.4", key, &top, &bottom));

        let exact = self.slice_exact(q, t) && self.slice_exact(qp, tp);
        if !exact {
            out.extend(["4.5", "4.6", "4.7"].iter().map(|d| skipped(d, key)));
            return Ok(out);
        }
        let zq = self.zeta(q, t)?;
        let zqp = self.zeta(qp, tp)?;
        let hl = self.on_chain_classes(&cap_l, (q, t), (qp, tp));
        let hr = self.on_chain_classes(&cap_r, (q, t), (qp, tp));
        let kr = self.on_cochain_classes(&cup_r, (qp, tp), (q, t));
        let kl = self.on_cochain_classes(&cup_l, (qp, tp), (q, t));
        // 4.5: zeta_q ∘ (alpha ⌢ -)* = ±(- ⌣ alpha) ∘ zeta_{q-p}
        let top = zq.mul(&hl.transpose().scale(&gt));
        let bottom = kr.scale(&gt).mul(&zqp);
        out.push(compare("4.5", key, &top, &bottom));
        // 4.6: zeta_q ∘ ±(- ⌢ alpha)* = (alpha ⌣ -) ∘ zeta_{q-p}
        let top = zq.mul(&hr.transpose().scale(&fld.mul(&spq, &gt)));
        let bottom = kl.mul(&zqp);
        out.push(compare("4.6", key, &top, &bottom));
        // 4.7: zeta_q ∘ [alpha, -]⌢* = -[alpha, -]⌣ ∘ zeta_{q-p}
        let hbr = hl.axpy(&fld.neg(&spq), &hr);
        let kbr = kl.axpy(&fld.neg(&sp_qp), &kr);
        let top = zq.mul(&hbr.transpose().scale(&gt));
        let bottom = kbr.neg().mul(&zqp);
        out.push(compare("4.7", key, &top, &bottom));
        Ok(out)
    }

    /// Total weights t with a nonzero degree-q chain space, clipped to the
    /// window of `M`.
    pub fn weights(&self, q: usize) -> std::ops::RangeInclusive<i64> {
        let (lo, hi) = self.m.window();
        let nq = nu(self.alg.n(), q) as i64;
        (lo + nq)..=(hi + nq)
    }
}

/// Invertibility of `xi` and `zeta` and the `eta` chain map check on one
/// slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDuality {
    pub q: usize,
    pub t: i64,
    pub exact: bool,
    /// `dim HK_q(A, M)_t`.
    pub homology: usize,
    /// `dim H^q(C)_t`.
    pub dual_cohomology: usize,
    /// `dim HK^q(A, M*)` at shift `-t`.
    pub cohomology: usize,
    pub eta_chain_map: bool,
    pub xi_invertible: bool,
    pub zeta_invertible: bool,
}

impl SliceDuality {
    /// `eta` must always be a chain map; `xi` and `zeta` must be invertible
    /// on exact slices.
    pub fn passed(&self) -> bool {
        self.eta_chain_map && (!self.exact || (self.xi_invertible && self.zeta_invertible))
    }
}

impl fmt::Display for SliceDuality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} t={} exact={} dim_hk={} dim_hc={} dim_hk_dual={} eta={} xi={} zeta={}",
            self.q,
            self.t,
            self.exact,
            self.homology,
            self.dual_cohomology,
            self.cohomology,
            self.eta_chain_map,
            self.xi_invertible,
            self.zeta_invertible
        )
    }
}

impl<F: Field> Duality<'_, F> {
    pub fn check_slice(&self, q: usize, t: i64) -> SliceDuality {
        let eta_ok = self.check_eta(q, t).status == DiagramStatus::Pass;
        let x = self.xi(q, t);
        let xi_ok = x.nrows() == x.ncols() && x.rank() == x.nrows();
        let zeta_ok = match self.zeta(q, t) {
            Ok(z) => z.nrows() == z.ncols() && z.rank() == z.nrows(),
            Err(_) => false,
        };
        SliceDuality {
            q,
            t,
            exact: self.slice_exact(q, t),
            homology: self.chain_homology(q, t).dim(),
            dual_cohomology: self.dual_homology(q, t).dim(),
            cohomology: self.cochain_homology(q, t).dim(),
            eta_chain_map: eta_ok,
            xi_invertible: xi_ok,
            zeta_invertible: zeta_ok,
        }
    }

    /// [`Self::check_slice`] on every slice with `q <= q_max` inside the
    /// window, in parallel.
    pub fn check_slices(&self, q_max: usize) -> Vec<SliceDuality> {
        let keys: Vec<(usize, i64)> = (0..=q_max).flat_map(|q| self.weights(q).map(move |t| (q, t))).collect();
        keys.par_iter().map(|&(q, t)| self.check_slice(q, t)).collect()
    }

    /// Diagrams 4.2 to 4.7 for `alpha` and every `q` in `alpha.degree..=q_max`
    /// and every weight inside the window.
    pub fn verify_cupcap_diagrams(
        &self,
        a: &GradedBimodule<F>,
        alpha: &KClass<F>,
        q_max: usize,
    ) -> Result<Vec<DiagramReport>> {
        if !alpha.cohomology {
            return Err(Error::Invalid("alpha must be a cohomology class".into()));
        }
        let f = alpha.cochain();
        if !alpha.slice.is_cycle(&f.v) {
            return Err(Error::NotClosed("alpha is not a cocycle".into()));
        }
        let keys: Vec<(usize, i64)> = (f.p..=q_max).flat_map(|q| self.weights(q).map(move |t| (q, t))).collect();
        let parts: Vec<Result<Vec<DiagramReport>>> =
            keys.par_iter().map(|&(q, t)| self.check_diagrams(a, &f, q, t)).collect();
        let mut out = Vec::new();
        for part in parts {
            out.extend(part?);
        }
        Ok(out)
    }

    /// Naturality of `zeta` under `u: M -> M`, `m ↦ c m` for a central `c`
    /// (a 0-cocycle with coefficients in `A`):
    /// `zeta_q(t) ∘ H(u)* = H(u*) ∘ zeta_q(t + |c|)`.
    pub fn check_naturality(&self, c: &Cochain<F::Elem>, q: usize, t: i64) -> Result<DiagramReport> {
        let key = (0, q, t);
        let d = c.s;
        if c.p != 0 || d < 0 {
            return Err(Error::Invalid("naturality needs a central element of weight >= 0".into()));
        }
        if !(self.slice_exact(q, t) && self.slice_exact(q, t + d)) {
            return Ok(skipped("nat", key));
        }
        let fld = self.field();
        let n = self.alg.n();
        let dw = self.alg.w_dim(nu(n, q));
        let r = t - nu(n, q) as i64;
        // u on chains: m ⊗ w ↦ c m ⊗ w
        let src = chain_dim(self.alg, self.m, q, t);
        let dst = chain_dim(self.alg, self.m, q, t + d);
        let cols: Vec<_> = (0..src)
            .map(|idx| {
                let (i, k) = (idx / dw, idx % dw);
                let cm = self.m.act_elem(self.alg, Side::Left, &c.v, d as usize, r, &vec![(i, fld.one())]);
                let mut acc = Accumulator::new(fld);
                for (j, x) in cm {
                    acc.add(j * dw + k, x);
                }
                acc.finish()
            })
            .collect();
        let u = Matrix::from_columns(fld, dst, &cols);
        // u* on Hom(W, M*): phi ↦ phi · c, from shift -t-d to shift -t
        let src2 = crate::koszul::cochain_dim(self.alg, &self.md, q, -t - d);
        let dst2 = crate::koszul::cochain_dim(self.alg, &self.md, q, -t);
        let rw = nu(n, q) as i64 - t - d;
        let cols: Vec<_> = (0..src2)
            .map(|idx| {
                let (i, k) = (idx / dw, idx % dw);
                let pc = self.md.act_elem(self.alg, Side::Right, &c.v, d as usize, rw, &vec![(i, fld.one())]);
                let mut acc = Accumulator::new(fld);
                for (j, x) in pc {
                    acc.add(j * dw + k, x);
                }
                acc.finish()
            })
            .collect();
        let ustar = Matrix::from_columns(fld, dst2, &cols);
        let hu = self.on_chain_classes(&u, (q, t), (q, t + d));
        let hus = self.on_cochain_classes(&ustar, (q, t + d), (q, t));
        let top = self.zeta(q, t)?.mul(&hu.transpose());
        let bottom = hus.mul(&self.zeta(q, t + d)?);
        Ok(compare("nat", key, &top, &bottom))
    }
}

/// Empirical status of the two commutativity assertions on one coefficient
/// bimodule: (i) `[alpha, beta]⌣ = 0` for cohomology classes, (ii)
/// `[alpha, gamma]⌢ = 0` for homology classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsequenceReport {
    pub label: String,
    pub cup_pairs: usize,
    pub cup_violations: usize,
    pub cap_pairs: usize,
    pub cap_violations: usize,
    /// Products landing in an inexact slice, not counted above.
    pub skipped: usize,
}

impl ConsequenceReport {
    pub fn cup_commutes(&self) -> bool {
        self.cup_violations == 0
    }
    pub fn cap_symmetric(&self) -> bool {
        self.cap_violations == 0
    }
}

impl fmt::Display for ConsequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coefficients={} cup_pairs={} cup_violations={} cap_pairs={} cap_violations={} skipped={}",
            self.label, self.cup_pairs, self.cup_violations, self.cap_pairs, self.cap_violations, self.skipped
        )
    }
}

/// Tests (i) and (ii) on all basis classes with degree `<= max_degree` for
/// `M = A` and `M = A*`, both on the window `[0, max_weight]` (mirrored for
/// `A*`). By the duality, (i) for `M*` forces (ii) for `M`; the returned
/// flag says whether that implication was observed to hold.
pub fn check_commutativity_consequence<F: Field>(
    alg: &Algebra<F>,
    max_degree: usize,
    max_weight: i64,
) -> Result<(Vec<ConsequenceReport>, bool)> {
    let a = GradedBimodule::regular(alg, 0, max_weight);
    let ad = GradedBimodule::dual(&a, false);
    let alphas = basis_cocycle_classes(alg, &a, max_degree)?;
    let mut reports = Vec::new();
    for m in [&a, &ad] {
        let dual = Duality::new(alg, m);
        let mut rep = ConsequenceReport {
            label: m.label().to_string(),
            ..Default::default()
        };
        let betas = basis_cocycle_classes(alg, m, max_degree)?;
        for alpha in &alphas {
            let f = alpha.cochain();
            for beta in &betas {
                let g = beta.cochain();
                let br = crate::products::cup_bracket(alg, (&a, &f), (m, &g))?;
                if !crate::koszul::cochain_slice_exact(alg, m, br.p, br.s) {
                    rep.skipped += 1;
                    continue;
                }
                rep.cup_pairs += 1;
                if !cochain_homology(alg, m, br.p, br.s).is_boundary(&br.v) {
                    rep.cup_violations += 1;
                }
            }
            for q in f.p..=max_degree {
                for t in dual.weights(q) {
                    if !dual.slice_exact(q, t) {
                        continue;
                    }
                    let h = dual.chain_homology(q, t);
                    for z in h.representatives() {
                        let z = crate::products::Chain::new(q, t, z.clone());
                        let br = crate::products::cap_bracket(alg, (&a, &f), (m, &z))?;
                        if !dual.slice_exact(br.q, br.t) {
                            rep.skipped += 1;
                            continue;
                        }
                        rep.cap_pairs += 1;
                        if !dual.chain_homology(br.q, br.t).is_boundary(&br.v) {
                            rep.cap_violations += 1;
                        }
                    }
                }
            }
        }
        reports.push(rep);
    }
    // (i) for A* = (A)* forces (ii) for A, and (i) for A** = A forces (ii) for A*.
    let implication = (!reports[1].cup_commutes() || reports[0].cap_symmetric())
        && (!reports[0].cup_commutes() || reports[1].cap_symmetric());
    Ok((reports, implication))
}

/// Basis classes of `HK^p(A, M)` for `p <= max_degree` on exact slices
/// inside the window of `m`.
pub fn basis_cocycle_classes<F: Field>(
    alg: &Algebra<F>,
    m: &GradedBimodule<F>,
    max_degree: usize,
) -> Result<Vec<KClass<F>>> {
    let (lo, hi) = m.window();
    let n = alg.n();
    let mut out = Vec::new();
    for p in 0..=max_degree {
        let np = nu(n, p) as i64;
        for s in (lo - np)..=(hi - np) {
            if !crate::koszul::cochain_slice_exact(alg, m, p, s) {
                continue;
            }
            let h = cochain_homology(alg, m, p, s);
            for v in h.representatives() {
                out.push(KClass::of_cochain(alg, m, &Cochain::new(p, s, v.clone()))?);
            }
        }
    }
    Ok(out)
}
