//! Words in the generators and their coordinates in tensor powers of V.
//!
//! A word of length m over d generators has coordinate
//! `sum (d - 1 - g_i) d^(m - 1 - i)`. Coordinate order is lexicographic with
//! larger words first, so reduced echelon pivots land on the largest words and
//! the non-pivot (normal) words are the smallest ones. Concatenation of words
//! corresponds to `c(u) d^|v| + c(v)`.

pub type Word = Vec<usize>;

pub fn pow(d: usize, m: usize) -> usize {
    d.checked_pow(m as u32).expect("tensor power too large")
}

pub fn encode(d: usize, w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &g| acc * d + (d - 1 - g))
}

pub fn decode(d: usize, mut c: usize, len: usize) -> Word {
    let mut w = vec![0; len];
    for i in (0..len).rev() {
        w[i] = d - 1 - c % d;
        c /= d;
    }
    w
}

pub fn concat_coord(d: usize, cu: usize, cv: usize, len_v: usize) -> usize {
    cu * pow(d, len_v) + cv
}

/// Splits a coordinate into consecutive segment coordinates.
pub fn split_coord(d: usize, mut c: usize, lens: &[usize]) -> Vec<usize> {
    let mut out = vec![0; lens.len()];
    for (k, &l) in lens.iter().enumerate().rev() {
        let p = pow(d, l);
        out[k] = c % p;
        c /= p;
    }
    out
}

pub fn format_word(gens: &[String], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(&gens[w[i]]);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn largest_word_first() {
        // Generators x = 0, y = 1.
        assert_eq!(encode(2, &[1, 1]), 0);
        assert_eq!(encode(2, &[1, 0]), 1);
        assert_eq!(encode(2, &[0, 1]), 2);
        assert_eq!(encode(2, &[0, 0]), 3);
    }

    proptest! {
        #[test]
        fn concat_is_multiplicative(
            d in 1usize..4,
            u in proptest::collection::vec(0usize..4, 0..5),
            v in proptest::collection::vec(0usize..4, 0..5),
        ) {
            let u: Word = u.into_iter().map(|g| g % d).collect();
            let v: Word = v.into_iter().map(|g| g % d).collect();
            let mut uv = u.clone();
            uv.extend(&v);
            prop_assert_eq!(encode(d, &uv), concat_coord(d, encode(d, &u), encode(d, &v), v.len()));
            prop_assert_eq!(decode(d, encode(d, &uv), uv.len()), uv.clone());
            prop_assert_eq!(
                split_coord(d, encode(d, &uv), &[u.len(), v.len()]),
                vec![encode(d, &u), encode(d, &v)]
            );
        }
    }
}
