//! Weight-graded bimodules over `A`, truncated to a window of weights.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::linalg::sparse::{Accumulator, SparseVec};
use crate::linalg::{Field, Matrix};
use crate::presentation::parse::{RawBimodule, Side};
use crate::presentation::{Algebra, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BimoduleKind {
    Regular,
    /// Graded dual of another bimodule.
    Dual { signed: bool },
    /// `A ⊗ A` with the outer actions.
    OuterSquare,
    Finite,
}

/// A bimodule known on weights `r_min..=r_max`. Outside the window a
/// component is either known to vanish (per the two flags) or unknown.
pub struct GradedBimodule<F: Field> {
    label: String,
    field: F,
    num_gens: usize,
    r_min: i64,
    r_max: i64,
    dims: Vec<usize>,
    /// `[g][r - r_min]`: action of generator `g` from `M_r` to `M_{r+1}`.
    left: Vec<Vec<Matrix<F>>>,
    right: Vec<Vec<Matrix<F>>>,
    zero_below: bool,
    zero_above: bool,
    kind: BimoduleKind,
    /// For the outer square: weights `(i, j)` of the blocks of each component.
    blocks: Vec<Vec<(usize, usize, usize)>>,
    cache: RwLock<HashMap<(Side, Word, i64), Arc<Matrix<F>>>>,
}

impl<F: Field> std::fmt::Debug for GradedBimodule<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedBimodule")
            .field("label", &self.label)
            .field("window", &(self.r_min, self.r_max))
            .field("dims", &self.dims)
            .field("kind", &self.kind)
            .finish()
    }
}

impl<F: Field> GradedBimodule<F> {
    #[allow(clippy::too_many_arguments)]
    fn build(
        label: String,
        field: F,
        num_gens: usize,
        r_min: i64,
        r_max: i64,
        dims: Vec<usize>,
        left: Vec<Vec<Matrix<F>>>,
        right: Vec<Vec<Matrix<F>>>,
        zero_below: bool,
        zero_above: bool,
        kind: BimoduleKind,
    ) -> Self {
        GradedBimodule {
            label,
            field,
            num_gens,
            r_min,
            r_max,
            dims,
            left,
            right,
            zero_below,
            zero_above,
            kind,
            blocks: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// `A` itself on weights `r_min..=r_max`.
    pub fn regular(alg: &Algebra<F>, r_min: i64, r_max: i64) -> Self {
        let r_min = r_min.max(0);
        let f = alg.field().clone();
        let d = alg.num_gens();
        let dims: Vec<usize> = (r_min..=r_max).map(|r| alg.dim(r)).collect();
        let mut left = vec![Vec::new(); d];
        let mut right = vec![Vec::new(); d];
        for r in r_min..r_max {
            for g in 0..d {
                left[g].push((*alg.left_gen_matrix(g, r as usize)).clone());
                right[g].push(alg.right_gen_matrix(g, r as usize));
            }
        }
        let zero_above = alg.dim(r_max + 1) == 0;
        Self::build(
            "A".into(),
            f,
            d,
            r_min,
            r_max,
            dims,
            left,
            right,
            r_min == 0,
            zero_above,
            BimoduleKind::Regular,
        )
    }

    /// Graded dual: `M*_{-r} = (M_r)*` with `(a u a')(x) = u(a' x a)`.
    /// With `signed`, the left action by a generator carries `(-1)^{|u|}`;
    /// that variant is for experiments only (see the crate docs).
    pub fn dual(m: &GradedBimodule<F>, signed: bool) -> Self {
        let f = m.field.clone();
        let d = m.num_gens;
        let dims: Vec<usize> = m.dims.iter().rev().copied().collect();
        let (r_min, r_max) = (-m.r_max, -m.r_min);
        let mut left = vec![Vec::new(); d];
        let mut right = vec![Vec::new(); d];
        // Dual weight r = -s maps to -s + 1 = -(s - 1).
        for r in r_min..r_max {
            let s = -r;
            for g in 0..d {
                let mut l = m.action_gen(Side::Right, g, s - 1).transpose();
                if signed && s.rem_euclid(2) == 1 {
                    l = l.neg();
                }
                left[g].push(l);
                right[g].push(m.action_gen(Side::Left, g, s - 1).transpose());
            }
        }
        let label = format!("{}*", m.label);
        Self::build(
            label,
            f,
            d,
            r_min,
            r_max,
            dims,
            left,
            right,
            m.zero_above,
            m.zero_below,
            BimoduleKind::Dual { signed },
        )
    }

    /// `A ⊗ A` on weights `0..=r_max`, with `(a ⊗ a')(x ⊗ y) = a x ⊗ y a'`.
    /// The component of weight r is the sum over `i + j = r` of `A_i ⊗ A_j`,
    /// each block indexed by `alpha * dim A_j + beta`.
    pub fn outer_square(alg: &Algebra<F>, r_max: i64) -> Self {
        let f = alg.field().clone();
        let d = alg.num_gens();
        let mut blocks = Vec::new();
        let mut dims = Vec::new();
        for r in 0..=r_max {
            let mut off = 0;
            let mut b = Vec::new();
            for i in 0..=r {
                let j = r - i;
                b.push((i as usize, j as usize, off));
                off += alg.dim(i) * alg.dim(j);
            }
            blocks.push(b);
            dims.push(off);
        }
        let block_of = |r: i64, i: usize| -> usize { blocks[r as usize][i].2 };
        let mut left = vec![Vec::new(); d];
        let mut right = vec![Vec::new(); d];
        for r in 0..r_max {
            for g in 0..d {
                let mut lt = Vec::new();
                let mut rt = Vec::new();
                for &(i, j, off) in &blocks[r as usize] {
                    let dj = alg.dim(j as i64);
                    let lg = alg.left_gen_matrix(g, i);
                    let rg = alg.right_gen_matrix(g, j);
                    let di1 = alg.dim(i as i64);
                    let dj1 = alg.dim(j as i64 + 1);
                    for a in 0..di1 {
                        for b in 0..dj {
                            let src = off + a * dj + b;
                            // g·alpha ⊗ beta lands in block (i+1, j).
                            let tgt = block_of(r + 1, i + 1);
                            for (a2, x) in lg.column(a) {
                                lt.push((tgt + a2 * dj + b, src, x));
                            }
                            // alpha ⊗ beta·g lands in block (i, j+1).
                            let tgt = block_of(r + 1, i);
                            for (b2, x) in rg.column(b) {
                                rt.push((tgt + a * dj1 + b2, src, x));
                            }
                        }
                    }
                }
                let (rows, cols) = (dims[r as usize + 1], dims[r as usize]);
                left[g].push(Matrix::from_triplets(&f, rows, cols, lt));
                right[g].push(Matrix::from_triplets(&f, rows, cols, rt));
            }
        }
        let zero_above = alg.dim(r_max / 2 + 1) == 0;
        let mut m = Self::build(
            "A⊗A".into(),
            f,
            d,
            0,
            r_max,
            dims,
            left,
            right,
            true,
            zero_above,
            BimoduleKind::OuterSquare,
        );
        m.blocks = blocks;
        m
    }

    /// A finite bimodule from an input block, validated.
    pub fn from_raw(alg: &Algebra<F>, raw: &RawBimodule) -> Result<Self> {
        let f = alg.field().clone();
        let d = alg.num_gens();
        if raw.components.is_empty() {
            return Err(Error::InvalidBimodule(format!("`{}` has no components", raw.label)));
        }
        let r_min = raw.components.iter().map(|c| c.0).min().unwrap();
        let r_max = raw.components.iter().map(|c| c.0).max().unwrap();
        let mut dims = vec![0usize; (r_max - r_min + 1) as usize];
        for &(r, k) in &raw.components {
            dims[(r - r_min) as usize] = k;
        }
        let dim = |r: i64| -> usize {
            if r < r_min || r > r_max {
                0
            } else {
                dims[(r - r_min) as usize]
            }
        };
        let mut left: Vec<Vec<Matrix<F>>> = (0..d)
            .map(|_| (r_min..r_max).map(|r| Matrix::zeros(&f, dim(r + 1), dim(r))).collect())
            .collect();
        let mut right = left.clone();
        for act in &raw.actions {
            let (rows, cols) = (dim(act.weight + 1), dim(act.weight));
            if act.weight < r_min || act.weight >= r_max {
                if rows * cols == 0 && act.rows.iter().all(|r| r.is_empty()) {
                    continue;
                }
                return Err(Error::InvalidBimodule(format!(
                    "line {}: action from weight {} leaves the declared components",
                    act.line, act.weight
                )));
            }
            if act.rows.len() != rows || act.rows.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidBimodule(format!(
                    "line {}: expected a {rows}x{cols} matrix",
                    act.line
                )));
            }
            let mut data = Vec::new();
            for row in &act.rows {
                let mut out = Vec::new();
                for x in row {
                    out.push(f.from_ratio(x.numer(), x.denom()).ok_or_else(|| {
                        Error::InvalidBimodule(format!("line {}: entry undefined in {}", act.line, f.name()))
                    })?);
                }
                data.push(out);
            }
            let m = Matrix::from_dense(&f, cols, &data);
            let slot = (act.weight - r_min) as usize;
            match act.side {
                Side::Left => left[act.gen][slot] = m,
                Side::Right => right[act.gen][slot] = m,
            }
        }
        let m = Self::build(
            raw.label.clone(),
            f,
            d,
            r_min,
            r_max,
            dims,
            left,
            right,
            true,
            true,
            BimoduleKind::Finite,
        );
        m.validate(alg)?;
        Ok(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn kind(&self) -> BimoduleKind {
        self.kind
    }
    pub fn window(&self) -> (i64, i64) {
        (self.r_min, self.r_max)
    }
    pub fn zero_below(&self) -> bool {
        self.zero_below
    }
    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    pub fn dim(&self, r: i64) -> usize {
        if r < self.r_min || r > self.r_max {
            0
        } else {
            self.dims[(r - self.r_min) as usize]
        }
    }

    /// Whether `M_r` is known: inside the window or in a known-zero region.
    pub fn is_known(&self, r: i64) -> bool {
        (self.r_min..=self.r_max).contains(&r)
            || (r < self.r_min && self.zero_below)
            || (r > self.r_max && self.zero_above)
    }

    pub fn is_known_range(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|r| self.is_known(r))
    }

    /// Blocks `(i, j, offset)` of the outer square at weight r.
    pub fn outer_blocks(&self, r: i64) -> &[(usize, usize, usize)] {
        if r < 0 || r as usize >= self.blocks.len() {
            &[]
        } else {
            &self.blocks[r as usize]
        }
    }

    /// Action of one generator from `M_r` to `M_{r+1}`; zero where unknown.
    pub fn action_gen(&self, side: Side, g: usize, r: i64) -> Matrix<F> {
        let (rows, cols) = (self.dim(r + 1), self.dim(r));
        if r < self.r_min || r >= self.r_max {
            return Matrix::zeros(&self.field, rows, cols);
        }
        let idx = (r - self.r_min) as usize;
        match side {
            Side::Left => self.left[g][idx].clone(),
            Side::Right => self.right[g][idx].clone(),
        }
    }

    /// Action of a word from `M_r` to `M_{r+|w|}`. On the left, `w = g w'`
    /// acts as `g` after `w'`; on the right, `w = w' g` acts as `g` after `w'`.
    pub fn word_action(&self, side: Side, w: &[usize], r: i64) -> Arc<Matrix<F>> {
        let key = (side, w.to_vec(), r);
        if let Some(m) = self.cache.read().unwrap().get(&key) {
            return m.clone();
        }
        let m = if w.is_empty() {
            Matrix::identity(&self.field, self.dim(r))
        } else {
            match side {
                Side::Left => {
                    let inner = self.word_action(side, &w[1..], r);
                    self.action_gen(side, w[0], r + w.len() as i64 - 1).mul(&inner)
                }
                Side::Right => {
                    let k = w.len() - 1;
                    let inner = self.word_action(side, &w[..k], r);
                    self.action_gen(side, w[k], r + k as i64).mul(&inner)
                }
            }
        };
        let m = Arc::new(m);
        self.cache.write().unwrap().insert(key, m.clone());
        m
    }

    pub fn act_word(&self, side: Side, w: &[usize], r: i64, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        if w.is_empty() {
            return v.clone();
        }
        self.word_action(side, w, r).apply(v)
    }

    /// Action of `a` in `A_s` (coordinates over normal words) on `v` in `M_r`.
    pub fn act_elem(
        &self,
        alg: &Algebra<F>,
        side: Side,
        a: &SparseVec<F::Elem>,
        s: usize,
        r: i64,
        v: &SparseVec<F::Elem>,
    ) -> SparseVec<F::Elem> {
        let comp = alg.component(s);
        let mut acc = Accumulator::new(&self.field);
        for (k, c) in a {
            acc.add_scaled(c, &self.act_word(side, &comp.normal_words()[*k], r, v));
        }
        acc.finish()
    }

    /// The inner right action of `u ⊗ u'` on the outer square:
    /// `(alpha ⊗ beta)(u ⊗ u') = alpha u ⊗ u' beta`.
    pub fn inner_action(&self, alg: &Algebra<F>, u: &[usize], u2: &[usize], r: i64) -> Result<Matrix<F>> {
        if self.kind != BimoduleKind::OuterSquare {
            return Err(Error::Invalid("inner action needs the outer square".into()));
        }
        let r2 = r + (u.len() + u2.len()) as i64;
        let mut trip = Vec::new();
        if r2 <= self.r_max {
            for &(i, j, off) in self.outer_blocks(r) {
                let (i2, j2) = (i + u.len(), j + u2.len());
                let tgt = self
                    .outer_blocks(r2)
                    .iter()
                    .find(|b| b.0 == i2)
                    .map(|b| b.2)
                    .expect("block exists");
                let (dj, dj2) = (alg.dim(j as i64), alg.dim(j2 as i64));
                for a in 0..alg.dim(i as i64) {
                    let au = alg.right_word(&vec![(a, self.field.one())], i, u);
                    for b in 0..dj {
                        let ub = alg.left_word(u2, &vec![(b, self.field.one())], j);
                        for (a2, x) in &au {
                            for (b2, y) in &ub {
                                trip.push((tgt + a2 * dj2 + b2, off + a * dj + b, self.field.mul(x, y)));
                            }
                        }
                    }
                }
            }
        }
        Ok(Matrix::from_triplets(&self.field, self.dim(r2), self.dim(r), trip))
    }

    /// Checks that left and right actions commute and that relations act
    /// as zero on both sides, wherever the window allows.
    pub fn validate(&self, alg: &Algebra<F>) -> Result<()> {
        let d = self.num_gens;
        let n = alg.n() as i64;
        for r in self.r_min..=self.r_max {
            if r + 2 <= self.r_max {
                for g in 0..d {
                    for h in 0..d {
                        let lr = self
                            .action_gen(Side::Left, g, r + 1)
                            .mul(&self.action_gen(Side::Right, h, r));
                        let rl = self
                            .action_gen(Side::Right, h, r + 1)
                            .mul(&self.action_gen(Side::Left, g, r));
                        if lr != rl {
                            return Err(Error::InvalidBimodule(format!(
                                "{}: left and right actions do not commute at weight {r}",
                                self.label
                            )));
                        }
                    }
                }
            }
            if r + n <= self.r_max {
                for (k, rel) in alg.presentation().relations().iter().enumerate() {
                    for side in [Side::Left, Side::Right] {
                        let mut acc = Matrix::zeros(&self.field, self.dim(r + n), self.dim(r));
                        for (w, c) in rel {
                            acc = acc.axpy(c, &self.word_action(side, w, r));
                        }
                        if !acc.is_zero() {
                            return Err(Error::InvalidBimodule(format!(
                                "{}: relation {} does not act as zero on the {} at weight {r}",
                                self.label,
                                k + 1,
                                if side == Side::Left { "left" } else { "right" }
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
