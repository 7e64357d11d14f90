use koszul_core::linalg::{Field, PrimeField, Rationals};
use koszul_core::presentation::word::{self, Word};
use koszul_core::presentation::{check_single_monomial, MonomialVerdict, Seg};
use koszul_core::presets::preset_algebra;
use proptest::prelude::*;

const PRESETS: &[&str] = &["bergsol-ex5", "monomial-xyx", "monomial-x3", "sym2", "ext2"];

fn words(d: usize, m: usize) -> Vec<Word> {
    (0..word::pow(d, m)).map(|c| word::decode(d, c, m)).collect()
}

/// Number of words avoiding `f` as a factor, by enumeration.
fn avoiding_count(d: usize, m: usize, f: &[usize]) -> usize {
    words(d, m)
        .iter()
        .filter(|w| !w.windows(f.len()).any(|s| s == f))
        .count()
}

#[test]
fn bergsol_components() {
    let a = preset_algebra("bergsol-ex5", &Rationals).unwrap();
    assert_eq!(a.hilbert(7), vec![1, 2, 2, 1, 1, 1, 1, 1]);
    let c2 = a.component(2);
    assert_eq!(c2.normal_words(), &[vec![0, 1], vec![0, 0]]);
    for m in 3..8 {
        assert_eq!(a.component(m).normal_words(), &[vec![0; m]]);
    }
    // yy = xy, yx = 0, xxy = 0 in A.
    assert_eq!(a.project_word(&[1, 1]), a.project_word(&[0, 1]));
    assert!(a.project_word(&[1, 0]).is_empty());
    assert!(a.project_word(&[0, 0, 1]).is_empty());
}

#[test]
fn components_match_dense_quotient() {
    for name in PRESETS {
        let a = preset_algebra(name, &Rationals).unwrap();
        let d = a.num_gens();
        for m in 0..=7 {
            let ideal = a.ideal_slice(m);
            let free = ideal.free_columns();
            let normal: Vec<usize> = a
                .component(m)
                .normal_words()
                .iter()
                .map(|w| word::encode(d, w))
                .collect();
            assert_eq!(free, normal, "{name} m={m}");
            // The projection kills exactly the ideal.
            let p = a.project_matrix(m);
            assert_eq!(p.kernel(), ideal, "{name} m={m}");
            let s = a.section_matrix(m);
            assert_eq!(
                p.mul(&s),
                koszul_core::linalg::Matrix::identity(&Rationals, normal.len())
            );
        }
    }
}

#[test]
fn textbook_hilbert_series() {
    let sym = preset_algebra("sym2", &Rationals).unwrap();
    assert_eq!(sym.hilbert(8), (1..=9).collect::<Vec<_>>());
    let ext = preset_algebra("ext2", &Rationals).unwrap();
    assert_eq!(ext.hilbert(5), vec![1, 2, 1, 0, 0, 0]);
    for (name, f) in [("monomial-xyx", vec![0, 1, 0]), ("monomial-x3", vec![0, 0, 0])] {
        let a = preset_algebra(name, &Rationals).unwrap();
        let d = a.num_gens();
        for m in 0..=9 {
            assert_eq!(a.dim(m as i64), avoiding_count(d, m, &f), "{name} m={m}");
        }
    }
}

#[test]
fn w_space_dimensions() {
    let dims = |name: &str, up: usize| {
        let a = preset_algebra(name, &Rationals).unwrap();
        (0..=up).map(|p| a.w_dim(p)).collect::<Vec<_>>()
    };
    assert_eq!(dims("bergsol-ex5", 6), vec![1, 2, 2, 1, 0, 0, 0]);
    assert_eq!(dims("sym2", 5), vec![1, 2, 1, 0, 0, 0]);
    assert_eq!(dims("ext2", 6), vec![1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(dims("monomial-x3", 8), vec![1; 9]);
    let xyx = dims("monomial-xyx", 10);
    assert_eq!(&xyx[..4], &[1, 2, 4, 1]);
    assert!(xyx[4..].iter().all(|&k| k == 0));
}

#[test]
fn bergsol_w3_is_spanned_by_known_element() {
    let a = preset_algebra("bergsol-ex5", &Rationals).unwrap();
    let q = Rationals;
    let w3 = a.w_space(3);
    // y y x - x y x
    let mut v = vec![
        (word::encode(2, &[1, 1, 0]), q.one()),
        (word::encode(2, &[0, 1, 0]), q.from_i64(-1)),
    ];
    v.sort_by_key(|(k, _)| *k);
    assert_eq!(w3.basis(), &[v]);
    assert_eq!(a.w_label(2, 0), "r2");
    assert_eq!(a.w_label(2, 1), "r1");
}

#[test]
fn incremental_w_agrees_with_definition() {
    for name in PRESETS {
        let a = preset_algebra(name, &Rationals).unwrap();
        for p in 0..=7 {
            assert_eq!(a.w_space_incremental(p), *a.w_space(p), "{name} p={p}");
        }
    }
}

#[test]
fn prime_field_matches_rationals_on_presets() {
    let f = PrimeField::new(101).unwrap();
    for name in PRESETS {
        let a = preset_algebra(name, &Rationals).unwrap();
        let b = preset_algebra(name, &f).unwrap();
        assert_eq!(a.hilbert(7), b.hilbert(7), "{name}");
        assert_eq!(
            (0..7).map(|p| a.w_dim(p)).collect::<Vec<_>>(),
            (0..7).map(|p| b.w_dim(p)).collect::<Vec<_>>()
        );
    }
}

#[test]
fn monomial_verdicts() {
    let q = Rationals;
    let verdict = |text: &str| {
        let doc = koszul_core::presentation::parse_document(text).unwrap();
        let p = koszul_core::presentation::Presentation::from_document(&q, &doc).unwrap();
        check_single_monomial(&p)
    };
    assert_eq!(verdict("gens x y\nN 3\nrel x*y*x"), MonomialVerdict::NotKoszul);
    assert_eq!(verdict("gens x\nN 3\nrel x^3"), MonomialVerdict::Koszul);
    assert_eq!(verdict("gens x y\nN 3\nrel x*x*y"), MonomialVerdict::Koszul);
    assert_eq!(verdict("gens x y\nN 5\nrel x*y*x*y*x"), MonomialVerdict::NotKoszul);
    assert_eq!(verdict("gens x y\nN 2\nrel x*y - y*x"), MonomialVerdict::NotApplicable);
    assert_eq!(verdict("gens x y\nN 2\nrel x*y\nrel y*x"), MonomialVerdict::NotApplicable);
}

fn arb_segments() -> impl Strategy<Value = (usize, Vec<Seg>)> {
    (0usize..8).prop_flat_map(|total| {
        proptest::collection::vec((0usize..4, any::<bool>()), 1..4).prop_map(move |parts| {
            let mut segs = Vec::new();
            let mut left = total;
            for (l, is_w) in parts {
                let l = l.min(left);
                left -= l;
                segs.push(if is_w { Seg::W(l) } else { Seg::Free(l) });
            }
            segs.push(Seg::W(left));
            (total, segs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn splits_reassemble(idx in 0usize..PRESETS.len(), (len, segs) in arb_segments()) {
        let a = preset_algebra(PRESETS[idx], &Rationals).unwrap();
        prop_assert!(a.verify_split(len, &segs));
    }
}
