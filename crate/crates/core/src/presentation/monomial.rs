use super::Presentation;
use crate::linalg::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialVerdict {
    Koszul,
    NotKoszul,
    NotApplicable,
}

impl MonomialVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            MonomialVerdict::Koszul => "koszul",
            MonomialVerdict::NotKoszul => "not_koszul",
            MonomialVerdict::NotApplicable => "not_applicable",
        }
    }
}

/// Decides N-Koszulity when `R` is spanned by one monomial `f`: the algebra
/// fails to be N-Koszul exactly when, for some `2 <= m <= N-1`, `f` is the
/// periodic word `u^q u'` built from its length-m prefix `u` (with `N = mq + r`
/// and `u'` the length-r prefix of `u`) and `u` is not a power of one letter.
pub fn check_single_monomial<F: Field>(pres: &Presentation<F>) -> MonomialVerdict {
    let rels = pres.relations();
    if rels.len() != 1 || rels[0].len() != 1 {
        return MonomialVerdict::NotApplicable;
    }
    let f = &rels[0][0].0;
    let n = f.len();
    for m in 2..n {
        let u = &f[..m];
        let periodic = (0..n).all(|i| f[i] == u[i % m]);
        let constant = u.iter().all(|&g| g == u[0]);
        if periodic && !constant {
            return MonomialVerdict::NotKoszul;
        }
    }
    MonomialVerdict::Koszul
}
