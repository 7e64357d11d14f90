use std::collections::BTreeMap;

use super::field::Field;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

pub fn from_dense<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense<F: Field>(field: &F, v: &SparseVec<F::Elem>, len: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + c * b`
pub fn axpy<F: Field>(
    field: &F,
    a: &SparseVec<F::Elem>,
    c: &F::Elem,
    b: &SparseVec<F::Elem>,
) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, &b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            field.add_mul_assign(&mut v, c, &b[j].1);
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(field: &F, c: &F::Elem, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

pub fn neg<F: Field>(field: &F, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    v.iter().map(|(i, x)| (*i, field.neg(x))).collect()
}

pub fn get<'a, E>(v: &'a SparseVec<E>, idx: usize) -> Option<&'a E> {
    v.binary_search_by_key(&idx, |(i, _)| *i)
        .ok()
        .map(|k| &v[k].1)
}

pub fn dot<F: Field>(field: &F, a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>) -> F::Elem {
    let mut acc = field.zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                field.add_mul_assign(&mut acc, &a[i].1, &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Accumulates `(index, value)` contributions and emits a clean sparse vector.
pub struct Accumulator<'f, F: Field> {
    field: &'f F,
    entries: BTreeMap<usize, F::Elem>,
}

impl<'f, F: Field> Accumulator<'f, F> {
    pub fn new(field: &'f F) -> Self {
        Accumulator {
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, idx: usize, v: F::Elem) {
        if self.field.is_zero(&v) {
            return;
        }
        match self.entries.get_mut(&idx) {
            Some(x) => *x = self.field.add(x, &v),
            None => {
                self.entries.insert(idx, v);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &F::Elem, v: &SparseVec<F::Elem>) {
        if self.field.is_zero(c) {
            return;
        }
        for (i, x) in v {
            self.add(*i, self.field.mul(c, x));
        }
    }

    pub fn finish(self) -> SparseVec<F::Elem> {
        let field = self.field;
        self.entries
            .into_iter()
            .filter(|(_, v)| !field.is_zero(v))
            .collect()
    }
}
