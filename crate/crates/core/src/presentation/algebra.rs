use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use super::word::{self, Word};
use super::Presentation;
use crate::linalg::echelon::rref;
use crate::linalg::sparse::{Accumulator, SparseVec};
use crate::linalg::{Field, Matrix, Subspace};

/// The weight-m component `A_m`, with basis the normal words of length m
/// (the words that are not leading words of the ideal), in coordinate order.
#[derive(Debug)]
pub struct WeightComponent<F: Field> {
    pub weight: usize,
    normal_words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Right multiplication by each generator, `A_{m-1} -> A_m`.
    right_gen: Vec<Matrix<F>>,
}

impl<F: Field> WeightComponent<F> {
    pub fn dim(&self) -> usize {
        self.normal_words.len()
    }
    pub fn normal_words(&self) -> &[Word] {
        &self.normal_words
    }
    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }
    pub fn right_gen(&self, g: usize) -> &Matrix<F> {
        &self.right_gen[g]
    }
}

/// A segment in a splitting of a tensor word: either free letters or a
/// factor lying in some `W_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Seg {
    Free(usize),
    W(usize),
}

impl Seg {
    pub fn len(&self) -> usize {
        match self {
            Seg::Free(l) | Seg::W(l) => *l,
        }
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One term of a split: for each segment, a word coordinate (free segment)
/// or a basis index of `W_l` (W segment).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerm<E> {
    pub idx: Vec<usize>,
    pub coeff: E,
}

type SplitTable<E> = Vec<Vec<SplitTerm<E>>>;

/// The graded algebra of a presentation, with components and `W` spaces
/// computed on demand and cached.
#[derive(Debug)]
pub struct Algebra<F: Field> {
    pres: Presentation<F>,
    relation_space: Subspace<F>,
    components: RwLock<Vec<Arc<WeightComponent<F>>>>,
    left_cache: RwLock<HashMap<(usize, usize), Arc<Matrix<F>>>>,
    word_cache: RwLock<HashMap<(bool, Word, usize), Arc<Matrix<F>>>>,
    w_cache: RwLock<BTreeMap<usize, Arc<Subspace<F>>>>,
    split_cache: RwLock<HashMap<(usize, Vec<Seg>), Arc<SplitTable<F::Elem>>>>,
}

impl<F: Field> Algebra<F> {
    pub fn new(pres: Presentation<F>) -> Self {
        let f = pres.field().clone();
        let n = pres.n();
        let d = pres.num_gens();
        let rels = (0..pres.relations().len())
            .map(|i| pres.relation_vector(i))
            .collect();
        let relation_space = Subspace::from_spanning(&f, word::pow(d, n), rels);
        let a0 = WeightComponent {
            weight: 0,
            normal_words: vec![Vec::new()],
            index: [(Vec::new(), 0)].into_iter().collect(),
            right_gen: Vec::new(),
        };
        Algebra {
            pres,
            relation_space,
            components: RwLock::new(vec![Arc::new(a0)]),
            left_cache: RwLock::new(HashMap::new()),
            word_cache: RwLock::new(HashMap::new()),
            w_cache: RwLock::new(BTreeMap::new()),
            split_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &Presentation<F> {
        &self.pres
    }
    pub fn field(&self) -> &F {
        self.pres.field()
    }
    pub fn n(&self) -> usize {
        self.pres.n()
    }
    pub fn num_gens(&self) -> usize {
        self.pres.num_gens()
    }
    /// The relation space `R` inside `V^N`.
    pub fn relation_space(&self) -> &Subspace<F> {
        &self.relation_space
    }

    pub fn component(&self, m: usize) -> Arc<WeightComponent<F>> {
        if let Some(c) = self.components.read().unwrap().get(m) {
            return c.clone();
        }
        let mut comps = self.components.write().unwrap();
        while comps.len() <= m {
            let next = self.compute_component(&comps, comps.len());
            comps.push(Arc::new(next));
        }
        comps[m].clone()
    }

    /// `dim A_m`, zero for negative `m`.
    pub fn dim(&self, m: i64) -> usize {
        if m < 0 {
            0
        } else {
            self.component(m as usize).dim()
        }
    }

    pub fn hilbert(&self, up_to: usize) -> Vec<usize> {
        (0..=up_to).map(|m| self.dim(m as i64)).collect()
    }

    fn project_word_in(comps: &[Arc<WeightComponent<F>>], f: &F, w: &[usize]) -> SparseVec<F::Elem> {
        let mut v = vec![(0, f.one())];
        for (k, &g) in w.iter().enumerate() {
            if v.is_empty() {
                break;
            }
            v = comps[k + 1].right_gen[g].apply(&v);
        }
        v
    }

    fn compute_component(&self, comps: &[Arc<WeightComponent<F>>], m: usize) -> WeightComponent<F> {
        let f = self.field();
        let d = self.num_gens();
        let n = self.n();
        let prev = &comps[m - 1];
        // Candidates: normal words of length m-1 followed by one letter.
        let mut cands: Vec<(usize, usize, usize)> = Vec::new();
        for (k, nw) in prev.normal_words.iter().enumerate() {
            let base = word::encode(d, nw);
            for g in 0..d {
                cands.push((base * d + (d - 1 - g), k, g));
            }
        }
        cands.sort_unstable();
        let mut cand_index = vec![0usize; prev.dim() * d];
        for (pos, &(_, k, g)) in cands.iter().enumerate() {
            cand_index[k * d + g] = pos;
        }
        let mut rows = Vec::new();
        if m >= n {
            for s in &comps[m - n].normal_words {
                for rel in self.pres.relations() {
                    let mut acc = Accumulator::new(f);
                    for (w, c) in rel {
                        let mut pre = s.clone();
                        pre.extend_from_slice(&w[..n - 1]);
                        let last = w[n - 1];
                        for (k, x) in Self::project_word_in(comps, f, &pre) {
                            acc.add(cand_index[k * d + last], f.mul(c, &x));
                        }
                    }
                    rows.push(acc.finish());
                }
            }
        }
        let (ech, pivots) = rref(f, cands.len(), rows);
        let mut is_piv = vec![usize::MAX; cands.len()];
        for (r, &p) in pivots.iter().enumerate() {
            is_piv[p] = r;
        }
        let mut new_index = vec![usize::MAX; cands.len()];
        let mut normal_words = Vec::new();
        for (pos, &(_, k, g)) in cands.iter().enumerate() {
            if is_piv[pos] == usize::MAX {
                new_index[pos] = normal_words.len();
                let mut w = prev.normal_words[k].clone();
                w.push(g);
                normal_words.push(w);
            }
        }
        let right_gen = (0..d)
            .map(|g| {
                let cols: Vec<SparseVec<F::Elem>> = (0..prev.dim())
                    .map(|k| {
                        let c = cand_index[k * d + g];
                        if is_piv[c] == usize::MAX {
                            vec![(new_index[c], f.one())]
                        } else {
                            let mut v: SparseVec<F::Elem> = ech[is_piv[c]]
                                .iter()
                                .filter(|(j, _)| *j != c)
                                .map(|(j, x)| (new_index[*j], f.neg(x)))
                                .collect();
                            v.sort_by_key(|(j, _)| *j);
                            v
                        }
                    })
                    .collect();
                Matrix::from_columns(f, normal_words.len(), &cols)
            })
            .collect();
        let index = normal_words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        WeightComponent {
            weight: m,
            normal_words,
            index,
            right_gen,
        }
    }

    /// Class of a word in `A_{|w|}`.
    pub fn project_word(&self, w: &[usize]) -> SparseVec<F::Elem> {
        self.component(w.len());
        let comps = self.components.read().unwrap();
        Self::project_word_in(&comps, self.field(), w)
    }

    /// Class of a vector of `V^m`.
    pub fn project(&self, m: usize, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let d = self.num_gens();
        let mut acc = Accumulator::new(self.field());
        for (c, x) in v {
            acc.add_scaled(x, &self.project_word(&word::decode(d, *c, m)));
        }
        acc.finish()
    }

    pub fn right_gen_matrix(&self, g: usize, m: usize) -> Matrix<F> {
        self.component(m + 1).right_gen[g].clone()
    }

    /// Left multiplication by a generator, `A_m -> A_{m+1}`.
    pub fn left_gen_matrix(&self, g: usize, m: usize) -> Arc<Matrix<F>> {
        if let Some(x) = self.left_cache.read().unwrap().get(&(g, m)) {
            return x.clone();
        }
        let comp = self.component(m);
        let cols: Vec<SparseVec<F::Elem>> = comp
            .normal_words
            .iter()
            .map(|nw| {
                let mut w = vec![g];
                w.extend_from_slice(nw);
                self.project_word(&w)
            })
            .collect();
        let mat = Arc::new(Matrix::from_columns(self.field(), self.dim(m as i64 + 1), &cols));
        self.left_cache.write().unwrap().insert((g, m), mat.clone());
        mat
    }

    /// Right multiplication by a word, `A_m -> A_{m+|w|}`.
    pub fn right_word_matrix(&self, m: usize, w: &[usize]) -> Arc<Matrix<F>> {
        let key = (true, w.to_vec(), m);
        if let Some(x) = self.word_cache.read().unwrap().get(&key) {
            return x.clone();
        }
        let mat = match w.split_last() {
            None => Matrix::identity(self.field(), self.dim(m as i64)),
            Some((&g, rest)) => self
                .right_gen_matrix(g, m + rest.len())
                .mul(&self.right_word_matrix(m, rest)),
        };
        let mat = Arc::new(mat);
        self.word_cache.write().unwrap().insert(key, mat.clone());
        mat
    }

    /// Left multiplication by a word, `A_m -> A_{m+|w|}`.
    pub fn left_word_matrix(&self, w: &[usize], m: usize) -> Arc<Matrix<F>> {
        let key = (false, w.to_vec(), m);
        if let Some(x) = self.word_cache.read().unwrap().get(&key) {
            return x.clone();
        }
        let mat = match w.split_first() {
            None => Matrix::identity(self.field(), self.dim(m as i64)),
            Some((&g, rest)) => self
                .left_gen_matrix(g, m + rest.len())
                .mul(&self.left_word_matrix(rest, m)),
        };
        let mat = Arc::new(mat);
        self.word_cache.write().unwrap().insert(key, mat.clone());
        mat
    }

    /// `v * w` for `v` in `A_m` and a word `w`.
    pub fn right_word(&self, v: &SparseVec<F::Elem>, m: usize, w: &[usize]) -> SparseVec<F::Elem> {
        self.component(m + w.len());
        let comps = self.components.read().unwrap();
        let mut v = v.clone();
        for (k, &g) in w.iter().enumerate() {
            if v.is_empty() {
                break;
            }
            v = comps[m + k + 1].right_gen[g].apply(&v);
        }
        v
    }

    /// `w * v` for a word `w` and `v` in `A_m`.
    pub fn left_word(&self, w: &[usize], v: &SparseVec<F::Elem>, m: usize) -> SparseVec<F::Elem> {
        let mut v = v.clone();
        let mut cur = m;
        for &g in w.iter().rev() {
            if v.is_empty() {
                break;
            }
            v = self.left_gen_matrix(g, cur).apply(&v);
            cur += 1;
        }
        v
    }

    /// Product of `a` in `A_i` and `b` in `A_j`.
    pub fn mul(&self, a: &SparseVec<F::Elem>, i: usize, b: &SparseVec<F::Elem>, j: usize) -> SparseVec<F::Elem> {
        let comp = self.component(j);
        let mut acc = Accumulator::new(self.field());
        for (k, x) in b {
            acc.add_scaled(x, &self.right_word(a, i, &comp.normal_words[*k]));
        }
        acc.finish()
    }

    /// Dense construction of `I_m = sum V^i R V^j` inside `V^m`.
    pub fn ideal_slice(&self, m: usize) -> Subspace<F> {
        let d = self.num_gens();
        let n = self.n();
        let f = self.field();
        let mut vecs = Vec::new();
        if m >= n {
            for i in 0..=m - n {
                let j = m - n - i;
                for a in 0..word::pow(d, i) {
                    for r in self.relation_space.basis() {
                        for b in 0..word::pow(d, j) {
                            let v: SparseVec<F::Elem> = r
                                .iter()
                                .map(|(c, x)| {
                                    let left = word::concat_coord(d, a, *c, n);
                                    (word::concat_coord(d, left, b, j), x.clone())
                                })
                                .collect();
                            vecs.push(v);
                        }
                    }
                }
            }
        }
        Subspace::from_spanning(f, word::pow(d, m), vecs)
    }

    /// Projection `V^m -> A_m`.
    pub fn project_matrix(&self, m: usize) -> Matrix<F> {
        let d = self.num_gens();
        let cols: Vec<SparseVec<F::Elem>> = (0..word::pow(d, m))
            .map(|c| self.project_word(&word::decode(d, c, m)))
            .collect();
        Matrix::from_columns(self.field(), self.dim(m as i64), &cols)
    }

    /// Section `A_m -> V^m` sending a basis element to its normal word.
    pub fn section_matrix(&self, m: usize) -> Matrix<F> {
        let d = self.num_gens();
        let comp = self.component(m);
        let cols: Vec<SparseVec<F::Elem>> = comp
            .normal_words
            .iter()
            .map(|w| vec![(word::encode(d, w), self.field().one())])
            .collect();
        Matrix::from_columns(self.field(), word::pow(d, m), &cols)
    }

    fn factor_space(&self, i: usize, len: usize) -> Subspace<F> {
        let d = self.num_gens();
        let n = self.n();
        let j = len - n - i;
        let mut vecs = Vec::new();
        for a in 0..word::pow(d, i) {
            for r in self.relation_space.basis() {
                for b in 0..word::pow(d, j) {
                    vecs.push(
                        r.iter()
                            .map(|(c, x)| {
                                let left = word::concat_coord(d, a, *c, n);
                                (word::concat_coord(d, left, b, j), x.clone())
                            })
                            .collect(),
                    );
                }
            }
        }
        Subspace::from_spanning(self.field(), word::pow(d, len), vecs)
    }

    /// `W_len` inside `V^len`.
    pub fn w_space(&self, len: usize) -> Arc<Subspace<F>> {
        if let Some(w) = self.w_cache.read().unwrap().get(&len) {
            return w.clone();
        }
        let d = self.num_gens();
        let n = self.n();
        let space = if len < n {
            Subspace::full(self.field(), word::pow(d, len))
        } else {
            let factors: Vec<Subspace<F>> = (0..=len - n).map(|i| self.factor_space(i, len)).collect();
            Subspace::intersect_all(&factors).expect("nonempty family")
        };
        let space = Arc::new(space);
        self.w_cache.write().unwrap().insert(len, space.clone());
        space
    }

    pub fn w_dim(&self, len: usize) -> usize {
        self.w_space(len).dim()
    }

    /// `(V ⊗ W_{len-1}) ∩ (W_{len-1} ⊗ V)` for `len > N`, which contains
    /// `W_len`; the plain definition below that.
    pub fn w_space_incremental(&self, len: usize) -> Subspace<F> {
        let d = self.num_gens();
        if len < self.n() {
            return Subspace::full(self.field(), word::pow(d, len));
        }
        if len == self.n() {
            return self.relation_space.clone();
        }
        let prev = self.w_space(len - 1);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for g in 0..d {
            for b in prev.basis() {
                left.push(b.iter().map(|(c, x)| (word::concat_coord(d, g, *c, len - 1), x.clone())).collect());
                let mut r: SparseVec<F::Elem> =
                    b.iter().map(|(c, x)| (word::concat_coord(d, *c, g, 1), x.clone())).collect();
                r.sort_by_key(|(k, _)| *k);
                right.push(r);
            }
        }
        let f = self.field();
        let total = word::pow(d, len);
        Subspace::from_spanning(f, total, left).intersect(&Subspace::from_spanning(f, total, right))
    }

    /// Expands each basis vector of `W_len` along the given segments, whose
    /// lengths must sum to `len`. W segments are read off at the pivots of
    /// the corresponding `W_l`, which is exact because `W_len` lies in every
    /// such tensor product.
    pub fn split(&self, len: usize, segs: &[Seg]) -> Arc<SplitTable<F::Elem>> {
        let key = (len, segs.to_vec());
        if let Some(t) = self.split_cache.read().unwrap().get(&key) {
            return t.clone();
        }
        assert_eq!(segs.iter().map(Seg::len).sum::<usize>(), len, "segment lengths");
        let d = self.num_gens();
        let lens: Vec<usize> = segs.iter().map(Seg::len).collect();
        let wsegs: Vec<Option<Arc<Subspace<F>>>> = segs
            .iter()
            .map(|s| match s {
                Seg::W(l) => Some(self.w_space(*l)),
                Seg::Free(_) => None,
            })
            .collect();
        let w = self.w_space(len);
        let table: SplitTable<F::Elem> = w
            .basis()
            .iter()
            .map(|b| {
                b.iter()
                    .filter_map(|(c, x)| {
                        let mut parts = word::split_coord(d, *c, &lens);
                        for (k, ws) in wsegs.iter().enumerate() {
                            if let Some(ws) = ws {
                                parts[k] = ws.pivot_row(parts[k])?;
                            }
                        }
                        Some(SplitTerm {
                            idx: parts,
                            coeff: x.clone(),
                        })
                    })
                    .collect()
            })
            .collect();
        let table = Arc::new(table);
        self.split_cache.write().unwrap().insert(key, table.clone());
        table
    }

    /// Re-expands a split table into `V^len` and compares with `W_len`.
    pub fn verify_split(&self, len: usize, segs: &[Seg]) -> bool {
        let d = self.num_gens();
        let f = self.field();
        let table = self.split(len, segs);
        let w = self.w_space(len);
        table.iter().zip(w.basis()).all(|(terms, b)| {
            let mut acc = Accumulator::new(f);
            for t in terms {
                // Expand each W factor into its vector and tensor everything.
                let mut partial: Vec<(usize, F::Elem)> = vec![(0, t.coeff.clone())];
                for (k, s) in segs.iter().enumerate() {
                    let l = s.len();
                    let piece: SparseVec<F::Elem> = match s {
                        Seg::Free(_) => vec![(t.idx[k], f.one())],
                        Seg::W(_) => self.w_space(l).basis()[t.idx[k]].clone(),
                    };
                    let mut next = Vec::new();
                    for (c, x) in &partial {
                        for (c2, y) in &piece {
                            next.push((word::concat_coord(d, *c, *c2, l), f.mul(x, y)));
                        }
                    }
                    partial = next;
                }
                for (c, x) in partial {
                    acc.add(c, x);
                }
            }
            acc.finish() == *b
        })
    }

    /// Display name for basis vector `k` of `W_len`.
    pub fn w_label(&self, len: usize, k: usize) -> String {
        let d = self.num_gens();
        let n = self.n();
        if len < n {
            return word::format_word(self.pres.gens(), &word::decode(d, k, len));
        }
        let ws = self.w_space(len);
        let v = &ws.basis()[k];
        if len == n {
            for i in 0..self.pres.relations().len() {
                if self.pres.relation_vector(i) == *v {
                    return format!("r{}", i + 1);
                }
            }
        }
        format!("[{}]", self.pres.format_tensor(len, v))
    }

    /// Display name for basis element `k` of `A_m`.
    pub fn a_label(&self, m: usize, k: usize) -> String {
        word::format_word(self.pres.gens(), &self.component(m).normal_words[k])
    }
}
