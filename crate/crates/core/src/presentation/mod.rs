//! Presentations `A = T(V)/(R)` with `R` in degree N, their weight
//! components, and the spaces `W_p`.

pub mod algebra;
pub mod monomial;
pub mod parse;
pub mod word;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Field, SparseVec};
pub use algebra::{Algebra, Seg, SplitTerm, WeightComponent};
pub use monomial::{check_single_monomial, MonomialVerdict};
pub use parse::{parse_document, Document, FieldSpec, RawBimodule, RawRelation, Side};
pub use word::Word;

/// `nu(p)`: the tensor degree of `W_p`.
pub fn nu(n: usize, p: usize) -> usize {
    (p / 2) * n + (p % 2)
}

/// A finite presentation with homogeneous relations of degree `n`.
/// Relation terms are sorted by word coordinate, largest word first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<F: Field> {
    field: F,
    gens: Vec<String>,
    n: usize,
    relations: Vec<Vec<(Word, F::Elem)>>,
}

impl<F: Field> Presentation<F> {
    pub fn new(
        field: &F,
        gens: Vec<String>,
        n: usize,
        relations: Vec<Vec<(Word, F::Elem)>>,
    ) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        if n < 2 {
            return Err(Error::InvalidPresentation("N must be at least 2".into()));
        }
        let d = gens.len();
        let mut norm = Vec::new();
        for (i, rel) in relations.into_iter().enumerate() {
            let mut merged: BTreeMap<usize, F::Elem> = BTreeMap::new();
            for (w, c) in rel {
                if w.len() != n {
                    return Err(Error::RelationDegree {
                        line: i + 1,
                        found: w.len(),
                        n,
                    });
                }
                if w.iter().any(|&g| g >= d) {
                    return Err(Error::InvalidPresentation("generator index out of range".into()));
                }
                let k = word::encode(d, &w);
                let e = merged.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &c);
            }
            let terms: Vec<(Word, F::Elem)> = merged
                .into_iter()
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(k, c)| (word::decode(d, k, n), c))
                .collect();
            if terms.is_empty() {
                return Err(Error::InvalidPresentation(format!("relation {} is zero", i + 1)));
            }
            norm.push(terms);
        }
        Ok(Presentation {
            field: field.clone(),
            gens,
            n,
            relations: norm,
        })
    }

    /// Converts a parsed document, reporting degree problems with line numbers.
    pub fn from_document(field: &F, doc: &Document) -> Result<Self> {
        let n = doc
            .n
            .ok_or_else(|| Error::InvalidPresentation("missing `N` line".into()))?;
        if doc.gens.is_empty() {
            return Err(Error::InvalidPresentation("missing `gens` line".into()));
        }
        let mut rels = Vec::new();
        for r in &doc.relations {
            let degrees: Vec<usize> = r.terms.iter().map(|(_, w)| w.len()).collect();
            if degrees.iter().any(|&k| k != degrees[0]) {
                return Err(Error::InhomogeneousRelation {
                    line: r.line,
                    degrees,
                });
            }
            if degrees[0] != n {
                return Err(Error::RelationDegree {
                    line: r.line,
                    found: degrees[0],
                    n,
                });
            }
            let mut terms = Vec::new();
            for (c, w) in &r.terms {
                let x = field.from_ratio(c.numer(), c.denom()).ok_or_else(|| Error::Parse {
                    line: r.line,
                    column: 1,
                    message: format!("coefficient {c} is undefined in {}", field.name()),
                })?;
                terms.push((w.clone(), x));
            }
            rels.push(terms);
        }
        Presentation::new(field, doc.gens.clone(), n, rels).map_err(|e| match e {
            Error::InvalidPresentation(m) if m.starts_with("relation") => {
                let idx: usize = m
                    .split_whitespace()
                    .nth(1)
                    .and_then(|s| s.parse().ok())
                    .unwrap_or(1);
                Error::Parse {
                    line: doc.relations[idx - 1].line,
                    column: 1,
                    message: "relation is zero".into(),
                }
            }
            other => other,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn gens(&self) -> &[String] {
        &self.gens
    }
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn relations(&self) -> &[Vec<(Word, F::Elem)>] {
        &self.relations
    }

    /// Relation `i` as a vector of `V^N`.
    pub fn relation_vector(&self, i: usize) -> SparseVec<F::Elem> {
        let d = self.num_gens();
        let mut v: SparseVec<F::Elem> = self.relations[i]
            .iter()
            .map(|(w, c)| (word::encode(d, w), c.clone()))
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub fn format_poly(&self, terms: &[(Word, F::Elem)]) -> String {
        let mut out = String::new();
        for (k, (w, c)) in terms.iter().enumerate() {
            let neg = self.field.format(c).starts_with('-');
            let abs = if neg { self.field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !self.field.is_one(&abs) {
                out.push_str(&self.field.format(&abs));
                if !w.is_empty() {
                    out.push('*');
                }
            }
            if !w.is_empty() || self.field.is_one(&abs) {
                if w.is_empty() {
                    out.push('1');
                } else {
                    out.push_str(&word::format_word(&self.gens, w));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Formats a vector of `V^m` as a polynomial.
    pub fn format_tensor(&self, m: usize, v: &SparseVec<F::Elem>) -> String {
        let d = self.num_gens();
        let terms: Vec<(Word, F::Elem)> =
            v.iter().map(|(k, c)| (word::decode(d, *k, m), c.clone())).collect();
        self.format_poly(&terms)
    }

    /// Canonical text form; parsing it back yields an equal presentation.
    pub fn to_text(&self, field_spec: FieldSpec) -> String {
        let mut s = format!("field {field_spec}\ngens {}\nN {}\n", self.gens.join(" "), self.n);
        for r in &self.relations {
            s.push_str(&format!("rel {}\n", self.format_poly(r)));
        }
        s
    }
}
