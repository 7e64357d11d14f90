//! Hochschild (co)homology from the weight-graded reduced bar complex,
//! Hochschild cup and cap products, the duality between `HH_•(A, M)` and
//! `HH^•(A, M*)`, and comparison with Koszul (co)homology.
//!
//! Chains of degree q at total weight t span `M_r ⊗ A_{w_1} ⊗ ... ⊗ A_{w_q}`
//! with `r + w_1 + ... + w_q = t` and every `w_i >= 1`. Cochains of degree p
//! and shift s are graded maps `Ā^{⊗p} -> M` sending inputs of weight w to
//! `M_{w+s}`. When `A` is infinite dimensional a cochain slice is infinite,
//! so it is computed up to an input-weight cutoff `L`. Restricting to
//! inputs of weight `<= L` is a quotient complex, and a class counts only
//! if it is the restriction of a cocycle at cutoff `L + 2` (the stable
//! image).
//!
//! A block of a slice is one composition `(w_1, ..., w_q)`. Inside a block
//! the basis element `e_i ⊗ a_{j_1} ⊗ ... ⊗ a_{j_q}` has index
//! `((i * d_1 + j_1) * d_2 + j_2) ...`. Blocks are ordered by input weight,
//! so the slice at a smaller cutoff is a prefix of the slice at a larger
//! one, and chains of `M` at `(q, t)` share their index set with cochains of
//! `M*` at `(q, -t)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::bimodule::{BimoduleKind, GradedBimodule};
use crate::duality::{compare, skipped, DiagramReport};
use crate::error::{Error, Result};
use crate::homology::{Direction, Exactness, HomologyReport, SliceHomology, SliceResult};
use crate::koszul::{chain_differential as koszul_b, chain_dim as koszul_chain_dim, chain_homology as koszul_chain_homology};
use crate::koszul::{chain_slice_exact, cochain_homology as koszul_cochain_homology, cochain_slice_exact};
use crate::linalg::sparse::{self, Accumulator, SparseVec};
use crate::linalg::{Field, Matrix, Subspace};
use crate::presentation::parse::Side;
use crate::presentation::{nu, word, Algebra, Word};

fn sign<F: Field>(f: &F, e: usize) -> F::Elem {
    f.sign(e % 2 == 1)
}

fn unit<F: Field>(f: &F, i: usize) -> SparseVec<F::Elem> {
    vec![(i, f.one())]
}

/// Compositions of `total` into `parts` parts, each at least `lo`, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize, lo: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < lo * parts {
            return;
        }
        for first in lo..=total - lo * (parts - 1) {
            cur.push(first);
            go(total - first, parts - 1, lo, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, lo, &mut Vec::new(), &mut out);
    out
}

/// All tuples with `t[k] < dims[k]`, last index fastest.
fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = dims.iter().product();
    let mut out = Vec::with_capacity(n);
    let mut cur = vec![0; dims.len()];
    for _ in 0..n {
        out.push(cur.clone());
        for k in (0..dims.len()).rev() {
            cur[k] += 1;
            if cur[k] < dims[k] {
                break;
            }
            cur[k] = 0;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub ws: Vec<usize>,
    /// Weight of the coefficient component.
    pub r: i64,
    pub offset: usize,
    /// `[dim M_r, dim A_{w_1}, ..., dim A_{w_q}]`.
    pub dims: Vec<usize>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn input_weight(&self) -> usize {
        self.ws.iter().sum()
    }

    /// Local index to `(i, [j_1, ..., j_q])`.
    pub fn decode(&self, mut local: usize) -> (usize, Vec<usize>) {
        let mut digits = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            digits[k] = local % self.dims[k];
            local /= self.dims[k];
        }
        let js = digits.split_off(1);
        (digits[0], js)
    }

    /// Global index of `e_i ⊗ a_{j_1} ⊗ ...`.
    pub fn encode(&self, i: usize, js: &[usize]) -> usize {
        let mut x = i;
        for (k, j) in js.iter().enumerate() {
            x = x * self.dims[k + 1] + j;
        }
        self.offset + x
    }
}

/// One degree of the bar complex at one weight.
#[derive(Clone, Debug)]
pub struct BarSlice {
    pub degree: usize,
    /// Total weight for chains, shift for cochains.
    pub weight: i64,
    pub blocks: Vec<Block>,
    pub dim: usize,
    /// Every coefficient component the slice touches lies in the window.
    pub known: bool,
    /// For cochains: no input beyond the cutoff can contribute.
    pub complete: bool,
    index: HashMap<Vec<usize>, usize>,
}

impl BarSlice {
    fn new(degree: usize, weight: i64, blocks: Vec<Block>, known: bool, complete: bool) -> Self {
        let dim = blocks.last().map(|b| b.offset + b.size()).unwrap_or(0);
        let index = blocks.iter().enumerate().map(|(k, b)| (b.ws.clone(), k)).collect();
        BarSlice {
            degree,
            weight,
            blocks,
            dim,
            known,
            complete,
            index,
        }
    }

    pub fn block(&self, ws: &[usize]) -> Option<&Block> {
        self.index.get(ws).map(|&k| &self.blocks[k])
    }

    /// Block containing a global index, with the decoded basis element.
    pub fn locate(&self, idx: usize) -> (&Block, usize, Vec<usize>) {
        let k = self.blocks.partition_point(|b| b.offset + b.size() <= idx);
        let b = &self.blocks[k];
        let (i, js) = b.decode(idx - b.offset);
        (b, i, js)
    }

    /// Dimension of the part with input weight at most `cutoff`.
    pub fn prefix_dim(&self, cutoff: usize) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.input_weight() <= cutoff)
            .map(|b| b.offset + b.size())
            .max()
            .unwrap_or(0)
    }
}

/// The bar complex of `A` with coefficients in `M`: reduced by default,
/// or the full (unnormalized) complex with factors in all of `A`.
pub struct Bar<'a, F: Field> {
    pub alg: &'a Algebra<F>,
    pub m: &'a GradedBimodule<F>,
    pub reduced: bool,
}

impl<'a, F: Field> Bar<'a, F> {
    pub fn new(alg: &'a Algebra<F>, m: &'a GradedBimodule<F>) -> Self {
        Bar { alg, m, reduced: true }
    }

    pub fn unnormalized(alg: &'a Algebra<F>, m: &'a GradedBimodule<F>) -> Self {
        Bar { alg, m, reduced: false }
    }

    fn field(&self) -> &F {
        self.alg.field()
    }

    fn lo(&self) -> usize {
        usize::from(self.reduced)
    }

    fn word(&self, w: usize, j: usize) -> Word {
        self.alg.component(w).normal_words()[j].clone()
    }

    /// `a_j a_k` for basis elements of `A_u` and `A_v`.
    fn product(&self, u: usize, j: usize, v: usize, k: usize) -> SparseVec<F::Elem> {
        self.alg.right_word(&unit(self.field(), j), u, &self.word(v, k))
    }

    /// Whether some composition of a total `>= from` into q parts has
    /// nonzero components in `A`.
    fn has_inputs_from(&self, from: i64, q: usize) -> bool {
        if q == 0 {
            return from <= 0;
        }
        let need = from.max(self.lo() as i64 * q as i64).max(0);
        let per = (need + q as i64 - 1) / q as i64;
        self.alg.dim(per) > 0
    }

    fn push_blocks(&self, blocks: &mut Vec<Block>, total: usize, q: usize, r: i64) {
        for ws in compositions(total, q, self.lo()) {
            let mut dims = vec![self.m.dim(r)];
            dims.extend(ws.iter().map(|&w| self.alg.dim(w as i64)));
            if dims.contains(&0) {
                continue;
            }
            let offset = blocks.last().map(|b| b.offset + b.size()).unwrap_or(0);
            blocks.push(Block { ws, r, offset, dims });
        }
    }

    fn outside(&self, r: i64) -> bool {
        let (lo, hi) = self.m.window();
        (r < lo && !self.m.zero_below()) || (r > hi && !self.m.zero_above())
    }

    /// `M ⊗ Ā^{⊗q}` at total weight t.
    pub fn chain_slice(&self, q: usize, t: i64) -> BarSlice {
        let (lo_m, hi_m) = self.m.window();
        let mut known = true;
        let mut blocks = Vec::new();
        let first = (self.lo() * q) as i64;
        // Inputs of total weight > t - lo_m put the coefficient below the window.
        if !self.m.zero_below() && self.has_inputs_from(t - lo_m + 1, q) {
            known = false;
        }
        for total in first..=(t - lo_m) {
            let r = t - total;
            if r > hi_m {
                if self.outside(r) && self.has_inputs_from(total, q) && !compositions(total as usize, q, self.lo()).is_empty() {
                    known = false;
                }
                continue;
            }
            self.push_blocks(&mut blocks, total as usize, q, r);
        }
        BarSlice::new(q, t, blocks, known, true)
    }

    /// Graded maps `Ā^{⊗p} -> M` of shift s, on inputs of weight `<= cutoff`.
    pub fn cochain_slice(&self, p: usize, s: i64, cutoff: usize) -> BarSlice {
        let (lo_m, hi_m) = self.m.window();
        let mut known = true;
        let mut blocks = Vec::new();
        let first = self.lo() * p;
        let last = if p == 0 { 0 } else { cutoff };
        for total in first..=last.max(first) {
            if total > last {
                break;
            }
            let r = total as i64 + s;
            if r < lo_m || r > hi_m {
                if self.outside(r) && !compositions(total, p, self.lo()).is_empty() && self.has_inputs_from(total as i64, p) {
                    known = false;
                }
                continue;
            }
            self.push_blocks(&mut blocks, total, p, r);
        }
        let beyond = cutoff as i64 + 1;
        let complete = p == 0
            || !self.has_inputs_from(beyond, p)
            || (self.m.zero_above() && beyond + s > hi_m);
        BarSlice::new(p, s, blocks, known, complete)
    }

    /// `b: (q, t) -> (q - 1, t)`,
    /// `b(m ⊗ a_1..a_q) = m a_1 ⊗ a_2.. + sum (-1)^i m ⊗ ..a_i a_{i+1}.. + (-1)^q a_q m ⊗ a_1..a_{q-1}`.
    pub fn chain_differential(&self, q: usize, t: i64) -> Matrix<F> {
        let f = self.field();
        let src = self.chain_slice(q, t);
        if q == 0 {
            return Matrix::zeros(f, 0, src.dim);
        }
        let dst = self.chain_slice(q - 1, t);
        let mut trip = Vec::new();
        for b in &src.blocks {
            for local in 0..b.size() {
                let col = b.offset + local;
                let (i, js) = b.decode(local);
                let e = unit(f, i);
                if let Some(tb) = dst.block(&b.ws[1..]) {
                    let a1 = self.word(b.ws[0], js[0]);
                    for (k, c) in self.m.act_word(Side::Right, &a1, b.r, &e) {
                        trip.push((tb.encode(k, &js[1..]), col, c));
                    }
                }
                for pos in 1..q {
                    let mut ws = b.ws.clone();
                    let merged = ws[pos - 1] + ws.remove(pos);
                    ws[pos - 1] = merged;
                    let Some(tb) = dst.block(&ws) else { continue };
                    let sg = sign(f, pos);
                    for (l, c) in self.product(b.ws[pos - 1], js[pos - 1], b.ws[pos], js[pos]) {
                        let mut js2 = js.clone();
                        js2.remove(pos);
                        js2[pos - 1] = l;
                        trip.push((tb.encode(i, &js2), col, f.mul(&sg, &c)));
                    }
                }
                if let Some(tb) = dst.block(&b.ws[..q - 1]) {
                    let aq = self.word(b.ws[q - 1], js[q - 1]);
                    let sg = sign(f, q);
                    for (k, c) in self.m.act_word(Side::Left, &aq, b.r, &e) {
                        trip.push((tb.encode(k, &js[..q - 1]), col, f.mul(&sg, &c)));
                    }
                }
            }
        }
        Matrix::from_triplets(f, dst.dim, src.dim, trip)
    }

    /// `δ: (p, s) -> (p + 1, s)` at a cutoff,
    /// `δf(a_1..a_{p+1}) = a_1 f(a_2..) + sum (-1)^i f(..a_i a_{i+1}..) + (-1)^{p+1} f(a_1..a_p) a_{p+1}`.
    pub fn cochain_differential(&self, p: usize, s: i64, cutoff: usize) -> Matrix<F> {
        let f = self.field();
        let src = self.cochain_slice(p, s, cutoff);
        let dst = self.cochain_slice(p + 1, s, cutoff);
        let mut trip = Vec::new();
        for b in &dst.blocks {
            let dm = b.dims[0];
            for js in tuples(&b.dims[1..]) {
                // a_1 f(a_2 ..)
                if let Some(sb) = src.block(&b.ws[1..]) {
                    let a1 = self.word(b.ws[0], js[0]);
                    let l = self.m.word_action(Side::Left, &a1, sb.r);
                    for (jout, row) in l.rows().iter().enumerate() {
                        for (k, c) in row {
                            trip.push((b.encode(jout, &js), sb.encode(*k, &js[1..]), c.clone()));
                        }
                    }
                }
                for pos in 1..=p {
                    let mut ws = b.ws.clone();
                    let merged = ws[pos - 1] + ws.remove(pos);
                    ws[pos - 1] = merged;
                    let Some(sb) = src.block(&ws) else { continue };
                    let sg = sign(f, pos);
                    for (l, c) in self.product(b.ws[pos - 1], js[pos - 1], b.ws[pos], js[pos]) {
                        let mut js2 = js.clone();
                        js2.remove(pos);
                        js2[pos - 1] = l;
                        let c = f.mul(&sg, &c);
                        for k in 0..dm {
                            trip.push((b.encode(k, &js), sb.encode(k, &js2), c.clone()));
                        }
                    }
                }
                if let Some(sb) = src.block(&b.ws[..p]) {
                    let ap = self.word(b.ws[p], js[p]);
                    let rm = self.m.word_action(Side::Right, &ap, sb.r);
                    let sg = sign(f, p + 1);
                    for (jout, row) in rm.rows().iter().enumerate() {
                        for (k, c) in row {
                            trip.push((b.encode(jout, &js), sb.encode(*k, &js[..p]), f.mul(&sg, c)));
                        }
                    }
                }
            }
        }
        Matrix::from_triplets(f, dst.dim, src.dim, trip)
    }

    pub fn chain_homology(&self, q: usize, t: i64) -> SliceHomology<F> {
        let dim = self.chain_slice(q, t).dim;
        let out = (q >= 1).then(|| self.chain_differential(q, t));
        let inc = self.chain_differential(q + 1, t);
        SliceHomology::new(self.field(), dim, Some(&inc), out.as_ref())
    }

    /// Every chain space the slice homology touches is known.
    pub fn chain_exact(&self, q: usize, t: i64) -> bool {
        (q.saturating_sub(1)..=q + 1).all(|d| self.chain_slice(d, t).known)
    }

    /// Cohomology of the complex truncated at `cutoff`.
    pub fn truncated_cohomology(&self, p: usize, s: i64, cutoff: usize) -> SliceHomology<F> {
        let dim = self.cochain_slice(p, s, cutoff).dim;
        let inc = (p >= 1).then(|| self.cochain_differential(p - 1, s, cutoff));
        let out = self.cochain_differential(p, s, cutoff);
        SliceHomology::new(self.field(), dim, inc.as_ref(), Some(&out))
    }

    /// Whether the cochain slices `p - 1, p, p + 1` are known and complete
    /// at `cutoff`.
    pub fn cochain_exact(&self, p: usize, s: i64, cutoff: usize) -> bool {
        (p.saturating_sub(1)..=p + 1).all(|d| {
            let sl = self.cochain_slice(d, s, cutoff);
            sl.known && sl.complete
        })
    }

    fn cochain_known(&self, p: usize, s: i64, cutoff: usize) -> bool {
        (p.saturating_sub(1)..=p + 1).all(|d| self.cochain_slice(d, s, cutoff).known)
    }

    /// Classes at `cutoff` that are restrictions of cocycles at `lift`.
    pub fn stable_cohomology(&self, p: usize, s: i64, cutoff: usize, lift: usize) -> StableCohomology<F> {
        let truncated = self.truncated_cohomology(p, s, cutoff);
        let complete = self.cochain_exact(p, s, cutoff);
        let dim = self.cochain_slice(p, s, cutoff).dim;
        let stable = if complete {
            Subspace::from_spanning(self.field(), dim, truncated.representatives().to_vec())
        } else {
            let z = self.cochain_differential(p, s, lift).kernel();
            let restricted = z
                .basis()
                .iter()
                .map(|v| {
                    let cut: SparseVec<F::Elem> = v.iter().filter(|(i, _)| *i < dim).cloned().collect();
                    truncated.canonical(&cut)
                })
                .collect();
            Subspace::from_spanning(self.field(), dim, restricted)
        };
        StableCohomology {
            p,
            s,
            cutoff,
            lift,
            complete,
            truncated,
            stable,
        }
    }
}

/// Degree-p cohomology at shift s computed with an input cutoff.
#[derive(Clone, Debug)]
pub struct StableCohomology<F: Field> {
    pub p: usize,
    pub s: i64,
    pub cutoff: usize,
    pub lift: usize,
    /// The slice is complete at the cutoff, so no lift was needed.
    pub complete: bool,
    pub truncated: SliceHomology<F>,
    /// Canonical representatives (modulo coboundaries at the cutoff) of the
    /// classes that lift.
    pub stable: Subspace<F>,
}

impl<F: Field> StableCohomology<F> {
    pub fn dim(&self) -> usize {
        self.stable.dim()
    }
    pub fn representatives(&self) -> &[SparseVec<F::Elem>] {
        self.stable.basis()
    }
}

fn exactness(ok: bool) -> Exactness {
    if ok {
        Exactness::Exact
    } else {
        Exactness::Truncated
    }
}

/// `HH_q(A, M)_t` keyed by degree and total weight.
pub fn hochschild_homology<F: Field>(
    alg: &Algebra<F>,
    m: &GradedBimodule<F>,
    degrees: RangeInclusive<usize>,
    weights: RangeInclusive<i64>,
) -> HomologyReport<F> {
    let keys: Vec<(usize, i64)> = degrees.flat_map(|q| weights.clone().map(move |t| (q, t))).collect();
    let bar = Bar::new(alg, m);
    let results: Vec<_> = keys
        .par_iter()
        .map(|&(q, t)| {
            let h = bar.chain_homology(q, t);
            let res = SliceResult {
                dim: h.dim(),
                exactness: exactness(bar.chain_exact(q, t)),
                representatives: h.representatives().to_vec(),
            };
            ((q, t), res)
        })
        .collect();
    let mut report = HomologyReport::new("HH", Direction::Homology, "t");
    report.entries.extend(results);
    report
}

/// Weight window of `A` needed for cochains of shift up to `max_shift` at
/// cutoff `cutoff`, including the two lifts used by the stability check.
pub fn cochain_window(cutoff: usize, max_shift: i64) -> i64 {
    cutoff as i64 + 4 + max_shift.max(0)
}

/// `HH^p(A, M)_t` keyed by degree and shift t, from the stable image at
/// `cutoff` (lift `cutoff + 2`). Complete slices are exact; otherwise the
/// result is windowed, and with `recheck` it is stable when cutoff `+ 2`
/// (lift `+ 4`) gives the same dimension.
pub fn hochschild_cohomology<F: Field>(
    alg: &Algebra<F>,
    m: &GradedBimodule<F>,
    degrees: RangeInclusive<usize>,
    weights: RangeInclusive<i64>,
    cutoff: usize,
    recheck: bool,
) -> HomologyReport<F> {
    let keys: Vec<(usize, i64)> = degrees.flat_map(|p| weights.clone().map(move |s| (p, s))).collect();
    let bar = Bar::new(alg, m);
    let results: Vec<_> = keys
        .par_iter()
        .map(|&(p, s)| {
            let st = bar.stable_cohomology(p, s, cutoff, cutoff + 2);
            let exactness = if st.complete {
                Exactness::Exact
            } else if !bar.cochain_known(p, s, cutoff + if recheck { 4 } else { 2 }) {
                Exactness::Truncated
            } else {
                let stable = recheck && bar.stable_cohomology(p, s, cutoff + 2, cutoff + 4).dim() == st.dim();
                Exactness::Windowed { stable }
            };
            let res = SliceResult {
                dim: st.dim(),
                exactness,
                representatives: st.representatives().to_vec(),
            };
            ((p, s), res)
        })
        .collect();
    let mut report = HomologyReport::new("HH", Direction::Cohomology, "t");
    report.entries.extend(results);
    report
}

/// A cochain of degree p and shift s, known on inputs of weight `<= cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCochain<E> {
    pub p: usize,
    pub s: i64,
    pub cutoff: usize,
    pub v: SparseVec<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HChain<E> {
    pub q: usize,
    pub t: i64,
    pub v: SparseVec<E>,
}

impl<E> HCochain<E> {
    pub fn new(p: usize, s: i64, cutoff: usize, v: SparseVec<E>) -> Self {
        HCochain { p, s, cutoff, v }
    }
}

impl<E> HChain<E> {
    pub fn new(q: usize, t: i64, v: SparseVec<E>) -> Self {
        HChain { q, t, v }
    }
}

/// The 0-cochain with value `1` in `A_0`.
pub fn unit_hcochain<F: Field>(f: &F, cutoff: usize) -> HCochain<F::Elem> {
    HCochain::new(0, 0, cutoff, vec![(0, f.one())])
}

fn product_target<'a, F: Field>(pm: &'a GradedBimodule<F>, qm: &'a GradedBimodule<F>) -> Result<&'a GradedBimodule<F>> {
    if pm.kind() == BimoduleKind::Regular {
        Ok(qm)
    } else if qm.kind() == BimoduleKind::Regular {
        Ok(pm)
    } else {
        Err(Error::UnsupportedPairing(format!("{} ⊗_A {}", pm.label(), qm.label())))
    }
}

/// `e_i ⊗_A e_j` for `e_i` in `P_{pr}` and `e_j` in `Q_{qr}`; one of the two
/// bimodules is `A`.
fn tensor_a<F: Field>(
    alg: &Algebra<F>,
    (pm, i, pr): (&GradedBimodule<F>, usize, i64),
    (qm, j, qr): (&GradedBimodule<F>, usize, i64),
) -> SparseVec<F::Elem> {
    let f = alg.field();
    if pm.kind() == BimoduleKind::Regular {
        let w = alg.component(pr as usize).normal_words()[i].clone();
        qm.act_word(Side::Left, &w, qr, &unit(f, j))
    } else {
        let w = alg.component(qr as usize).normal_words()[j].clone();
        pm.act_word(Side::Right, &w, pr, &unit(f, i))
    }
}

/// Values of a cochain: `(ws, js) -> [(output index, coefficient)]`, with
/// the output weight of each block.
struct Values<E> {
    map: HashMap<(Vec<usize>, Vec<usize>), Vec<(usize, E)>>,
    s: i64,
}

impl<E: Clone> Values<E> {
    fn new<F: Field<Elem = E>>(slice: &BarSlice, v: &SparseVec<E>) -> Self {
        let mut map: HashMap<_, Vec<_>> = HashMap::new();
        for (idx, c) in v {
            let (b, i, js) = slice.locate(*idx);
            map.entry((b.ws.clone(), js)).or_default().push((i, c.clone()));
        }
        Values { map, s: slice.weight }
    }

    fn get(&self, ws: &[usize], js: &[usize]) -> Option<&Vec<(usize, E)>> {
        self.map.get(&(ws.to_vec(), js.to_vec()))
    }

    fn out_weight(&self, ws: &[usize]) -> i64 {
        ws.iter().sum::<usize>() as i64 + self.s
    }
}

/// Shared state for products of one cochain `f` with chains or cochains.
struct ProductCtx<'a, F: Field> {
    alg: &'a Algebra<F>,
    fm: &'a GradedBimodule<F>,
    fvals: Values<F::Elem>,
    p: usize,
}

impl<'a, F: Field> ProductCtx<'a, F> {
    fn new(alg: &'a Algebra<F>, fm: &'a GradedBimodule<F>, f: &HCochain<F::Elem>) -> Self {
        let slice = Bar::new(alg, fm).cochain_slice(f.p, f.s, f.cutoff);
        ProductCtx {
            alg,
            fm,
            fvals: Values::new::<F>(&slice, &f.v),
            p: f.p,
        }
    }

    /// Left cap `f ⌢ z = (-1)^{(q-p)p} (f(a_{q-p+1}..a_q) ⊗_A m) ⊗ a_1..a_{q-p}`
    /// (`left`), or right cap `z ⌢ f = (-1)^{pq} (m ⊗_A f(a_1..a_p)) ⊗ a_{p+1}..a_q`.
    fn cap(&self, zm: &GradedBimodule<F>, zs: &BarSlice, ts: &BarSlice, z: &SparseVec<F::Elem>, left: bool) -> SparseVec<F::Elem> {
        let fld = self.alg.field();
        let (p, q) = (self.p, zs.degree);
        let sg = if left { sign(fld, (q - p) * p) } else { sign(fld, p * q) };
        let mut acc = Accumulator::new(fld);
        for (idx, c) in z {
            let (b, i, js) = zs.locate(*idx);
            let split = if left { q - p } else { p };
            let (fws, fjs, rws, rjs) = if left {
                (&b.ws[split..], &js[split..], &b.ws[..split], &js[..split])
            } else {
                (&b.ws[..split], &js[..split], &b.ws[split..], &js[split..])
            };
            let Some(vals) = self.fvals.get(fws, fjs) else { continue };
            let fr = self.fvals.out_weight(fws);
            let r2 = b.r + fr;
            let Some(tb) = ts.block(rws) else { continue };
            debug_assert_eq!(tb.r, r2);
            let cc = fld.mul(&sg, c);
            for (k, x) in vals {
                let prod = if left {
                    tensor_a(self.alg, (self.fm, *k, fr), (zm, i, b.r))
                } else {
                    tensor_a(self.alg, (zm, i, b.r), (self.fm, *k, fr))
                };
                let coef = fld.mul(&cc, x);
                for (l, y) in prod {
                    acc.add(tb.encode(l, rjs), fld.mul(&coef, &y));
                }
            }
        }
        acc.finish()
    }

    /// `f ⌣ g` (`f_first`) or `g ⌣ f`; `(-1)^{pq}` times the product of values.
    fn cup(&self, gm: &GradedBimodule<F>, gs: &BarSlice, ts: &BarSlice, g: &SparseVec<F::Elem>, f_first: bool) -> SparseVec<F::Elem> {
        let fld = self.alg.field();
        let sg = sign(fld, self.p * gs.degree);
        let mut acc = Accumulator::new(fld);
        for (idx, c) in g {
            let (gb, j, gjs) = gs.locate(*idx);
            for ((fws, fjs), vals) in &self.fvals.map {
                let (ws, js): (Vec<usize>, Vec<usize>) = if f_first {
                    (fws.iter().chain(&gb.ws).copied().collect(), fjs.iter().chain(&gjs).copied().collect())
                } else {
                    (gb.ws.iter().chain(fws).copied().collect(), gjs.iter().chain(fjs).copied().collect())
                };
                let Some(tb) = ts.block(&ws) else { continue };
                let fr = self.fvals.out_weight(fws);
                let cc = fld.mul(&sg, c);
                for (k, x) in vals {
                    let prod = if f_first {
                        tensor_a(self.alg, (self.fm, *k, fr), (gm, j, gb.r))
                    } else {
                        tensor_a(self.alg, (gm, j, gb.r), (self.fm, *k, fr))
                    };
                    let coef = fld.mul(&cc, x);
                    for (l, y) in prod {
                        acc.add(tb.encode(l, &js), fld.mul(&coef, &y));
                    }
                }
            }
        }
        acc.finish()
    }
}

fn check_cap_inputs<F: Field>(zm: &GradedBimodule<F>, f: &HCochain<F::Elem>, z: &HChain<F::Elem>) -> Result<()> {
    if z.q < f.p {
        return Err(Error::Invalid(format!("cap needs q >= p (p={}, q={})", f.p, z.q)));
    }
    let needed = z.t - zm.window().0;
    if needed > f.cutoff as i64 && z.q > 0 {
        return Err(Error::Truncated(format!(
            "cochain known up to input weight {}, chain needs {needed}",
            f.cutoff
        )));
    }
    Ok(())
}

/// `f ⌣ g = (-1)^{pq} f(a_1..a_p) ⊗_A g(a_{p+1}..a_{p+q})`, known up to the
/// smaller cutoff.
pub fn hochschild_cup<F: Field>(
    alg: &Algebra<F>,
    (fm, f): (&GradedBimodule<F>, &HCochain<F::Elem>),
    (gm, g): (&GradedBimodule<F>, &HCochain<F::Elem>),
) -> Result<HCochain<F::Elem>> {
    let target = product_target(fm, gm)?;
    let cutoff = f.cutoff.min(g.cutoff);
    let ctx = ProductCtx::new(alg, fm, f);
    let gs = Bar::new(alg, gm).cochain_slice(g.p, g.s, g.cutoff);
    let ts = Bar::new(alg, target).cochain_slice(f.p + g.p, f.s + g.s, cutoff);
    let v = ctx.cup(gm, &gs, &ts, &g.v, true);
    Ok(HCochain::new(f.p + g.p, f.s + g.s, cutoff, v))
}

/// `f ⌢ z = (-1)^{(q-p)p} (f(a_{q-p+1}..a_q) ⊗_A m) ⊗ a_1..a_{q-p}`.
pub fn hochschild_cap_left<F: Field>(
    alg: &Algebra<F>,
    (fm, f): (&GradedBimodule<F>, &HCochain<F::Elem>),
    (zm, z): (&GradedBimodule<F>, &HChain<F::Elem>),
) -> Result<HChain<F::Elem>> {
    let target = product_target(fm, zm)?;
    check_cap_inputs(zm, f, z)?;
    let ctx = ProductCtx::new(alg, fm, f);
    let zs = Bar::new(alg, zm).chain_slice(z.q, z.t);
    let ts = Bar::new(alg, target).chain_slice(z.q - f.p, z.t + f.s);
    Ok(HChain::new(z.q - f.p, z.t + f.s, ctx.cap(zm, &zs, &ts, &z.v, true)))
}

/// `z ⌢ f = (-1)^{pq} (m ⊗_A f(a_1..a_p)) ⊗ a_{p+1}..a_q`.
pub fn hochschild_cap_right<F: Field>(
    alg: &Algebra<F>,
    (zm, z): (&GradedBimodule<F>, &HChain<F::Elem>),
    (fm, f): (&GradedBimodule<F>, &HCochain<F::Elem>),
) -> Result<HChain<F::Elem>> {
    let target = product_target(fm, zm)?;
    check_cap_inputs(zm, f, z)?;
    let ctx = ProductCtx::new(alg, fm, f);
    let zs = Bar::new(alg, zm).chain_slice(z.q, z.t);
    let ts = Bar::new(alg, target).chain_slice(z.q - f.p, z.t + f.s);
    Ok(HChain::new(z.q - f.p, z.t + f.s, ctx.cap(zm, &zs, &ts, &z.v, false)))
}

/// `δ` applied to a cochain, at its cutoff.
pub fn hochschild_d<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, f: &HCochain<F::Elem>) -> HCochain<F::Elem> {
    let d = Bar::new(alg, m).cochain_differential(f.p, f.s, f.cutoff);
    HCochain::new(f.p + 1, f.s, f.cutoff, d.apply(&f.v))
}

/// `b` applied to a chain.
pub fn hochschild_b<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, z: &HChain<F::Elem>) -> HChain<F::Elem> {
    let d = Bar::new(alg, m).chain_differential(z.q, z.t);
    HChain::new(z.q.saturating_sub(1), z.t, d.apply(&z.v))
}

/// Graded commutativity of the cup product on `HH^•(A)`: for classes
/// `alpha, beta` of degrees `p, q`, `f ⌣ g - (-1)^{pq} g ⌣ f` must be a
/// coboundary in the complex truncated at the cutoff.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CupCommutativity {
    pub pairs: usize,
    pub violations: usize,
}

impl fmt::Display for CupCommutativity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hh_cup_commutativity pairs={} violations={}", self.pairs, self.violations)
    }
}

/// Stable basis classes of `HH^p(A)` for `p <= max_degree` and shifts in
/// `shifts`, as cochains at `cutoff`.
pub fn basis_classes<F: Field>(
    alg: &Algebra<F>,
    a: &GradedBimodule<F>,
    max_degree: usize,
    shifts: RangeInclusive<i64>,
    cutoff: usize,
) -> Vec<HCochain<F::Elem>> {
    let bar = Bar::new(alg, a);
    let keys: Vec<(usize, i64)> = (0..=max_degree).flat_map(|p| shifts.clone().map(move |s| (p, s))).collect();
    let parts: Vec<Vec<HCochain<F::Elem>>> = keys
        .par_iter()
        .map(|&(p, s)| {
            let st = bar.stable_cohomology(p, s, cutoff, cutoff + 2);
            st.representatives().iter().map(|v| HCochain::new(p, s, cutoff, v.clone())).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Checks graded commutativity on all pairs of `classes` whose product has
/// degree `<= max_degree`.
pub fn check_cup_commutativity<F: Field>(
    alg: &Algebra<F>,
    a: &GradedBimodule<F>,
    classes: &[HCochain<F::Elem>],
    max_degree: usize,
) -> Result<CupCommutativity> {
    let fld = alg.field();
    let bar = Bar::new(alg, a);
    let mut pairs = Vec::new();
    for (x, f) in classes.iter().enumerate() {
        for g in &classes[x..] {
            if f.p + g.p <= max_degree {
                pairs.push((f, g));
            }
        }
    }
    let images: Mutex<HashMap<(usize, i64, usize), Arc<Subspace<F>>>> = Mutex::new(HashMap::new());
    let results: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|(f, g)| {
            let fg = hochschild_cup(alg, (a, f), (a, g))?;
            let gf = hochschild_cup(alg, (a, g), (a, f))?;
            let br = sparse::axpy(fld, &fg.v, &fld.neg(&sign(fld, f.p * g.p)), &gf.v);
            if br.is_empty() {
                return Ok(true);
            }
            let key = (fg.p, fg.s, fg.cutoff);
            let cached = images.lock().unwrap().get(&key).cloned();
            let image = match cached {
                Some(im) => im,
                None => {
                    let im = Arc::new(bar.cochain_differential(fg.p - 1, fg.s, fg.cutoff).image());
                    images.lock().unwrap().insert(key, im.clone());
                    im
                }
            };
            Ok(image.contains(&br))
        })
        .collect();
    let mut rep = CupCommutativity::default();
    for r in results {
        rep.pairs += 1;
        if !r? {
            rep.violations += 1;
        }
    }
    Ok(rep)
}

type Cache<F> = Mutex<HashMap<(usize, i64), Arc<SliceHomology<F>>>>;

fn cached<F: Field>(cache: &Cache<F>, key: (usize, i64), make: impl FnOnce() -> SliceHomology<F>) -> Arc<SliceHomology<F>> {
    if let Some(h) = cache.lock().unwrap().get(&key) {
        return h.clone();
    }
    let h = Arc::new(make());
    cache.lock().unwrap().entry(key).or_insert(h).clone()
}

/// The Hochschild duality for a coefficient bimodule `M` bounded below:
/// the dual complex `(M ⊗ Ā^{⊗•})*`, `eta^H`, `xi^H`, `zeta^H`, and the
/// cup-cap squares.
///
/// With `δ` as in [`Bar::cochain_differential`], `eta^H` intertwines `δ`
/// with the plain transpose `phi ↦ phi ∘ b`, and in the dual basis it is
/// the identity.
pub struct HochschildDuality<'a, F: Field> {
    pub alg: &'a Algebra<F>,
    pub m: &'a GradedBimodule<F>,
    pub md: GradedBimodule<F>,
    chains: Cache<F>,
    dual: Cache<F>,
    cochains: Cache<F>,
}

impl<'a, F: Field> HochschildDuality<'a, F> {
    pub fn new(alg: &'a Algebra<F>, m: &'a GradedBimodule<F>) -> Self {
        HochschildDuality {
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

    fn bar(&self) -> Bar<'_, F> {
        Bar::new(self.alg, self.m)
    }

    fn dual_bar(&self) -> Bar<'_, F> {
        Bar::new(self.alg, &self.md)
    }

    /// Cutoff at which the `M*` cochain slice at shift `-t` is complete.
    pub fn dual_cutoff(&self, t: i64) -> usize {
        (t - self.m.window().0).max(0) as usize
    }

    /// `b*: C^q_t -> C^{q+1}_t`, `phi ↦ phi ∘ b`.
    pub fn dual_differential(&self, q: usize, t: i64) -> Matrix<F> {
        self.bar().chain_differential(q + 1, t).transpose()
    }

    pub fn eta(&self, q: usize, t: i64) -> Matrix<F> {
        Matrix::identity(self.field(), self.bar().chain_slice(q, t).dim)
    }

    pub fn chain_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.chains, (q, t), || self.bar().chain_homology(q, t))
    }

    pub fn dual_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.dual, (q, t), || {
            let dim = self.bar().chain_slice(q, t).dim;
            let inc = (q >= 1).then(|| self.dual_differential(q - 1, t));
            let out = self.dual_differential(q, t);
            SliceHomology::new(self.field(), dim, inc.as_ref(), Some(&out))
        })
    }

    /// `HH^q(A, M*)` at shift `-t`.
    pub fn cochain_homology(&self, q: usize, t: i64) -> Arc<SliceHomology<F>> {
        cached(&self.cochains, (q, t), || {
            self.dual_bar().truncated_cohomology(q, -t, self.dual_cutoff(t))
        })
    }

    pub fn slice_exact(&self, q: usize, t: i64) -> bool {
        self.bar().chain_exact(q, t) && self.dual_bar().cochain_exact(q, -t, self.dual_cutoff(t))
    }

    /// `eta^H` is a chain map on `(q, t)`: `δ ∘ eta = eta ∘ b*`, and the
    /// two index sets agree.
    pub fn check_eta(&self, q: usize, t: i64) -> DiagramReport {
        let cs = self.bar().chain_slice(q, t);
        let ds = self.dual_bar().cochain_slice(q, -t, self.dual_cutoff(t));
        let same = cs.dim == ds.dim
            && cs
                .blocks
                .iter()
                .zip(&ds.blocks)
                .all(|(x, y)| x.ws == y.ws && x.offset == y.offset && x.dims == y.dims);
        if !same {
            return DiagramReport::failed("eta", (0, q, t), "index sets differ");
        }
        let top = self.eta(q + 1, t).mul(&self.dual_differential(q, t));
        let bottom = self
            .dual_bar()
            .cochain_differential(q, -t, self.dual_cutoff(t))
            .mul(&self.eta(q, t));
        compare("eta", (0, q, t), &top, &bottom)
    }

    pub fn xi(&self, q: usize, t: i64) -> Matrix<F> {
        let hh = self.chain_homology(q, t);
        let hc = self.dual_homology(q, t);
        let f = self.field();
        let rows: Vec<_> = hh
            .representatives()
            .iter()
            .map(|z| {
                let dense: Vec<F::Elem> = hc.representatives().iter().map(|phi| sparse::dot(f, phi, z)).collect();
                sparse::from_dense(f, &dense)
            })
            .collect();
        Matrix::from_rows(f, hc.dim(), rows)
    }

    /// `zeta^H = H(eta^H) ∘ (xi^H)^{-1}`.
    pub fn zeta(&self, q: usize, t: i64) -> Result<Matrix<F>> {
        let xinv = self
            .xi(q, t)
            .inverse()
            .ok_or_else(|| Error::NotInvertible(format!("xi^H at q={q} t={t}")))?;
        let hc = self.dual_homology(q, t);
        let target = self.cochain_homology(q, t);
        let cols: Vec<_> = hc
            .representatives()
            .iter()
            .map(|phi| sparse::from_dense(self.field(), &target.class_coords(phi)))
            .collect();
        let e = Matrix::from_columns(self.field(), target.dim(), &cols);
        Ok(e.mul(&xinv))
    }

    fn on_classes(src: &SliceHomology<F>, dst: &SliceHomology<F>, op: &Matrix<F>) -> Matrix<F> {
        let f = op.field();
        let cols: Vec<_> = src
            .representatives()
            .iter()
            .map(|z| sparse::from_dense(f, &dst.class_coords(&op.apply(z))))
            .collect();
        Matrix::from_columns(f, dst.dim(), &cols)
    }

    /// Matrix of `z ↦ f ⌢ z` (`left`) or `z ↦ z ⌢ f` from `(q, t)` to
    /// `(q - p, t + s)`.
    pub fn cap_matrix(&self, a: &GradedBimodule<F>, f: &HCochain<F::Elem>, q: usize, t: i64, left: bool) -> Matrix<F> {
        let ctx = ProductCtx::new(self.alg, a, f);
        let zs = self.bar().chain_slice(q, t);
        let ts = self.bar().chain_slice(q - f.p, t + f.s);
        let fld = self.field();
        let cols: Vec<_> = (0..zs.dim).map(|k| ctx.cap(self.m, &zs, &ts, &unit(fld, k), left)).collect();
        Matrix::from_columns(fld, ts.dim, &cols)
    }

    /// Matrix of `g ↦ f ⌣ g` (`f_first`) or `g ↦ g ⌣ f` on `M*` cochains,
    /// from shift `-t - s` in degree `q - p` to shift `-t` in degree q.
    pub fn cup_matrix(&self, a: &GradedBimodule<F>, f: &HCochain<F::Elem>, q: usize, t: i64, f_first: bool) -> Matrix<F> {
        let ctx = ProductCtx::new(self.alg, a, f);
        let (qp, tp) = (q - f.p, t + f.s);
        let gs = self.dual_bar().cochain_slice(qp, -tp, self.dual_cutoff(tp));
        let ts = self.dual_bar().cochain_slice(q, -t, self.dual_cutoff(t));
        let fld = self.field();
        let cols: Vec<_> = (0..gs.dim).map(|k| ctx.cup(&self.md, &gs, &ts, &unit(fld, k), f_first)).collect();
        Matrix::from_columns(fld, ts.dim, &cols)
    }

    /// Squares 7.4 and 7.5 (cochain level), 7.6 (classes, through `zeta^H`)
    /// and `capsym`: the bracket `[f, -]⌢` vanishes on `HH_q(A, M)_t`.
    pub fn check_diagrams(&self, a: &GradedBimodule<F>, f: &HCochain<F::Elem>, q: usize, t: i64) -> Result<Vec<DiagramReport>> {
        let fld = self.field();
        let p = f.p;
        if q < p {
            return Err(Error::Invalid("need q >= p".into()));
        }
        let key = (p, q, t);
        let (qp, tp) = (q - p, t + f.s);
        let known = self.bar().chain_slice(q, t).known && self.bar().chain_slice(qp, tp).known;
        if !known {
            return Ok(["7.4", "7.5", "7.6", "capsym"].iter().map(|d| skipped(d, key)).collect());
        }
        if (t - self.m.window().0) > f.cutoff as i64 {
            return Err(Error::Truncated(format!("alpha known up to input weight {}, need {t}", f.cutoff)));
        }
        let gt = sign(fld, (q - p) * p);
        let spq = sign(fld, p * q);
        let sp_qp = sign(fld, p * (q - p));
        let cap_l = self.cap_matrix(a, f, q, t, true);
        let cap_r = self.cap_matrix(a, f, q, t, false);
        let cup_r = self.cup_matrix(a, f, q, t, false);
        let cup_l = self.cup_matrix(a, f, q, t, true);
        let eta_q = self.eta(q, t);
        let eta_qp = self.eta(qp, tp);
        let mut out = Vec::with_capacity(4);
        // 7.4: eta_q ∘ (f ⌢ -)* = ±(- ⌣ f) ∘ eta_{q-p}
        let top = eta_q.mul(&cap_l.transpose().scale(&gt));
        let bottom = cup_r.scale(&gt).mul(&eta_qp);
        out.push(compare("7.4", key, &top, &bottom));
        // 7.5: eta_q ∘ ±(- ⌢ f)* = (f ⌣ -) ∘ eta_{q-p}
        let top = eta_q.mul(&cap_r.transpose().scale(&fld.mul(&spq, &gt)));
        let bottom = cup_l.mul(&eta_qp);
        out.push(compare("7.5", key, &top, &bottom));

        if !(self.slice_exact(q, t) && self.slice_exact(qp, tp)) {
            out.extend(["7.6", "capsym"].iter().map(|d| skipped(d, key)));
            return Ok(out);
        }
        let zq = self.zeta(q, t)?;
        let zqp = self.zeta(qp, tp)?;
        let (hq, hqp) = (self.chain_homology(q, t), self.chain_homology(qp, tp));
        let (cq, cqp) = (self.cochain_homology(q, t), self.cochain_homology(qp, tp));
        let hl = Self::on_classes(&hq, &hqp, &cap_l);
        let hr = Self::on_classes(&hq, &hqp, &cap_r);
        let kr = Self::on_classes(&cqp, &cq, &cup_r);
        let kl = Self::on_classes(&cqp, &cq, &cup_l);
        // 7.6: zeta_q ∘ [alpha, -]⌢* = -[alpha, -]⌣ ∘ zeta_{q-p}
        let hbr = hl.axpy(&fld.neg(&spq), &hr);
        let kbr = kl.axpy(&fld.neg(&sp_qp), &kr);
        let top = zq.mul(&hbr.transpose().scale(&gt));
        let bottom = kbr.neg().mul(&zqp);
        out.push(compare("7.6", key, &top, &bottom));
        let zero = Matrix::zeros(fld, hbr.nrows(), hbr.ncols());
        out.push(compare("capsym", key, &hbr, &zero));
        Ok(out)
    }

    /// Invertibility of `xi^H`, `zeta^H` and the `eta^H` check on one slice.
    pub fn check_slice(&self, q: usize, t: i64) -> crate::duality::SliceDuality {
        let eta_ok = self.check_eta(q, t).passed();
        let x = self.xi(q, t);
        let xi_ok = x.nrows() == x.ncols() && x.rank() == x.nrows();
        let zeta_ok = match self.zeta(q, t) {
            Ok(z) => z.nrows() == z.ncols() && z.rank() == z.nrows(),
            Err(_) => false,
        };
        crate::duality::SliceDuality {
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
}

/// Diagrams 7.4 to 7.6 and `capsym` for a cocycle `alpha` with coefficients
/// in `a` (the regular bimodule, window at least `[0, max t]`), over all
/// `q` in `alpha.p..=q_max` and total weights `t` in `weights`.
pub fn verify_hochschild_cupcap_duality<F: Field>(
    alg: &Algebra<F>,
    a: &GradedBimodule<F>,
    m: &GradedBimodule<F>,
    alpha: &HCochain<F::Elem>,
    q_max: usize,
    weights: RangeInclusive<i64>,
) -> Result<Vec<DiagramReport>> {
    let d = hochschild_d(alg, a, alpha);
    if !d.v.is_empty() {
        return Err(Error::NotClosed("alpha is not a Hochschild cocycle".into()));
    }
    let dual = HochschildDuality::new(alg, m);
    let keys: Vec<(usize, i64)> = (alpha.p..=q_max).flat_map(|q| weights.clone().map(move |t| (q, t))).collect();
    let parts: Vec<Result<Vec<DiagramReport>>> =
        keys.par_iter().map(|&(q, t)| dual.check_diagrams(a, alpha, q, t)).collect();
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// One dimension comparison between Koszul and Hochschild (co)homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonLine {
    /// `HK_2(A)_r vs HH_2(A)_{r+N}` and similar.
    pub label: String,
    pub r: i64,
    pub koszul: usize,
    pub hochschild: usize,
    /// `=`, `>=` or `<=`, read as `koszul <relation> hochschild`.
    pub relation: &'static str,
    pub exact: bool,
}

impl ComparisonLine {
    pub fn holds(&self) -> bool {
        match self.relation {
            "=" => self.koszul == self.hochschild,
            ">=" => self.koszul >= self.hochschild,
            _ => self.koszul <= self.hochschild,
        }
    }

    /// Inexact lines are informational.
    pub fn passed(&self) -> bool {
        !self.exact || self.holds()
    }
}

impl fmt::Display for ComparisonLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} r={} hk={} hh={} relation=\"hk {} hh\" exact={} status={}",
            self.label,
            self.r,
            self.koszul,
            self.hochschild,
            self.relation,
            self.exact,
            if !self.exact {
                "skipped"
            } else if self.holds() {
                "pass"
            } else {
                "fail"
            }
        )
    }
}

/// The map `HK_2(A)_r -> HH_2(A)_{r+2}` induced by `K(A) ⊆ B(A)` (N = 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionLine {
    pub r: i64,
    /// `b ∘ iota = iota ∘ b_K` in degrees 1 to 3 at this weight.
    pub chain_map: bool,
    pub rank: usize,
    pub koszul: usize,
    pub hochschild: usize,
}

impl InclusionLine {
    pub fn surjective(&self) -> bool {
        self.rank == self.hochschild
    }
    pub fn injective(&self) -> bool {
        self.rank == self.koszul
    }
}

impl fmt::Display for InclusionLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inclusion r={} chain_map={} rank={} hk={} hh={} surjective={} injective={}",
            self.r,
            self.chain_map,
            self.rank,
            self.koszul,
            self.hochschild,
            self.surjective(),
            self.injective()
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComparisonReport {
    pub lines: Vec<ComparisonLine>,
    /// Present only for N = 2.
    pub inclusion: Vec<InclusionLine>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed())
            && self
                .inclusion
                .iter()
                .all(|l| l.chain_map && l.surjective() && (l.r > 1 || l.injective()))
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        for l in &self.inclusion {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// `iota: M ⊗ W_q -> M ⊗ Ā^{⊗q}` at total weight t (N = 2, so `nu(q) = q`).
pub fn inclusion_matrix<F: Field>(alg: &Algebra<F>, m: &GradedBimodule<F>, q: usize, t: i64) -> Matrix<F> {
    assert_eq!(alg.n(), 2, "the inclusion K(A) ⊆ B(A) needs N = 2");
    let f = alg.field();
    let d = alg.num_gens();
    let w = alg.w_space(q);
    let dw = w.dim();
    let src = koszul_chain_dim(alg, m, q, t);
    let bar = Bar::new(alg, m);
    let dst = bar.chain_slice(q, t);
    let ones = vec![1; q];
    let a1 = alg.component(1);
    let cols: Vec<_> = (0..src)
        .map(|idx| {
            let (i, k) = (idx / dw, idx % dw);
            let mut acc = Accumulator::new(f);
            if let Some(b) = dst.block(&ones) {
                for (c, x) in &w.basis()[k] {
                    let gens = word::decode(d, *c, q);
                    let js: Vec<usize> = gens.iter().map(|&g| a1.index_of(&[g]).expect("generator in A_1")).collect();
                    acc.add(b.encode(i, &js), x.clone());
                }
            }
            acc.finish()
        })
        .collect();
    Matrix::from_columns(f, dst.dim, &cols)
}

/// Dimension comparisons for `r` in `0..=r_max`: `HK_2(A)_r = HH_2(A)_{r+N}`
/// for `r <= 1`, `HK_2(A)_r >= HH_2(A)_{r+N}` and
/// `HH^2(A)_{r-N} <= HK^2(A)_r` on every exact slice; for N = 2 also the
/// inclusion map on classes. `a` must cover weights up to
/// [`cochain_window`]`(cutoff, r_max)` and `r_max + N + 1`.
pub fn compare_koszul_hochschild<F: Field>(
    alg: &Algebra<F>,
    a: &GradedBimodule<F>,
    r_max: i64,
    cutoff: usize,
) -> ComparisonReport {
    let n = alg.n() as i64;
    let bar = Bar::new(alg, a);
    let rs: Vec<i64> = (0..=r_max).collect();
    let lines: Vec<Vec<ComparisonLine>> = rs
        .par_iter()
        .map(|&r| {
            let mut out = Vec::new();
            let t = r + nu(alg.n(), 2) as i64;
            let hk = koszul_chain_homology(alg, a, 2, t).dim();
            let hh = bar.chain_homology(2, t).dim();
            let exact = chain_slice_exact(alg, a, 2, t) && bar.chain_exact(2, t);
            if r <= 1 {
                out.push(ComparisonLine {
                    label: "HK_2(A)_r vs HH_2(A)_{r+N}".into(),
                    r,
                    koszul: hk,
                    hochschild: hh,
                    relation: "=",
                    exact,
                });
            }
            out.push(ComparisonLine {
                label: "HK_2(A)_r vs HH_2(A)_{r+N}".into(),
                r,
                koszul: hk,
                hochschild: hh,
                relation: ">=",
                exact,
            });
            let s = r - n;
            let hk2 = koszul_cochain_homology(alg, a, 2, s).dim();
            let st = bar.stable_cohomology(2, s, cutoff, cutoff + 2);
            let stable = st.complete || bar.stable_cohomology(2, s, cutoff + 2, cutoff + 4).dim() == st.dim();
            out.push(ComparisonLine {
                label: "HK^2(A)_r vs HH^2(A)_{r-N}".into(),
                r,
                koszul: hk2,
                hochschild: st.dim(),
                relation: ">=",
                exact: cochain_slice_exact(alg, a, 2, s) && stable,
            });
            out
        })
        .collect();
    let mut report = ComparisonReport {
        lines: lines.into_iter().flatten().collect(),
        inclusion: Vec::new(),
    };
    if alg.n() == 2 {
        report.inclusion = rs
            .par_iter()
            .map(|&r| {
                let t = r + 2;
                let chain_map = (1..=3).all(|q| {
                    let lhs = bar.chain_differential(q, t).mul(&inclusion_matrix(alg, a, q, t));
                    let rhs = inclusion_matrix(alg, a, q - 1, t).mul(&koszul_b(alg, a, q, t));
                    lhs == rhs
                });
                let hk = koszul_chain_homology(alg, a, 2, t);
                let hh = bar.chain_homology(2, t);
                let iota = inclusion_matrix(alg, a, 2, t);
                let on = HochschildDuality::on_classes(&hk, &hh, &iota);
                InclusionLine {
                    r,
                    chain_map,
                    rank: on.rank(),
                    koszul: hk.dim(),
                    hochschild: hh.dim(),
                }
            })
            .collect();
    }
    report
}
