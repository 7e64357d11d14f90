//! Printing (co)chains of the Koszul complexes with coefficients in `A`.

use koszul_core::linalg::sparse::SparseVec;
use koszul_core::linalg::Field;
use koszul_core::presentation::{nu, Algebra};

/// Joins `(coefficient, label)` terms as `a - 2*b + c`.
fn join_terms<F: Field>(f: &F, terms: Vec<(F::Elem, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, label)) in terms.into_iter().enumerate() {
        let text = f.format(&c);
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs != "1" {
            out.push_str(&abs);
            out.push('*');
        }
        out.push_str(&label);
    }
    out
}

/// A cochain of `Hom(W_nu(p), A)` at shift s, as a sum of `w*⊗a`.
pub fn cochain<F: Field>(alg: &Algebra<F>, p: usize, s: i64, v: &SparseVec<F::Elem>) -> String {
    let len = nu(alg.n(), p);
    let dw = alg.w_dim(len);
    let r = (len as i64 + s) as usize;
    let terms = v
        .iter()
        .map(|(idx, c)| {
            let (i, k) = (idx / dw, idx % dw);
            let a = alg.a_label(r, i);
            let label = if p == 0 { a } else { format!("{}*⊗{a}", alg.w_label(len, k)) };
            (c.clone(), label)
        })
        .collect();
    join_terms(alg.field(), terms)
}

/// A chain of `A ⊗ W_nu(q)` at total weight t, as a sum of `a⊗w`.
pub fn chain<F: Field>(alg: &Algebra<F>, q: usize, t: i64, v: &SparseVec<F::Elem>) -> String {
    let len = nu(alg.n(), q);
    let dw = alg.w_dim(len);
    let r = (t - len as i64) as usize;
    let terms = v
        .iter()
        .map(|(idx, c)| {
            let (i, k) = (idx / dw, idx % dw);
            let a = alg.a_label(r, i);
            let label = if q == 0 { a } else { format!("{a}⊗{}", alg.w_label(len, k)) };
            (c.clone(), label)
        })
        .collect();
    join_terms(alg.field(), terms)
}

/// `a..b` as typed on the command line.
pub fn range<T: std::fmt::Display>(r: &std::ops::RangeInclusive<T>) -> String {
    format!("{}..{}", r.start(), r.end())
}
