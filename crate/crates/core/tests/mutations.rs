use proptest::prelude::*;

use dpmirror::intmat;
use dpmirror::pseudolattice::{
    del_pezzo_gram, extended_classes, from_boundaries, mutate, norm_guided_search, serre, sign_normalize, LatticeError,
    Mutation, MutationWord, Pseudolattice, Side,
};
use dpmirror::vancycles::{expected_classes, HomologyClass};

fn primitive_class() -> impl Strategy<Value = HomologyClass> {
    (-2i64..=2, -2i64..=2).prop_map(|(m, n)| HomologyClass::new(m, n)).prop_filter("primitive", |c| c.is_primitive())
}

fn basis_and_word() -> impl Strategy<Value = (Vec<HomologyClass>, MutationWord)> {
    prop::collection::vec(primitive_class(), 2..=6).prop_flat_map(|classes| {
        let n = classes.len();
        let letter =
            (any::<bool>(), 0..n - 1).prop_map(|(l, slot)| Mutation { side: if l { Side::L } else { Side::R }, slot });
        (Just(classes), prop::collection::vec(letter, 0..10).prop_map(MutationWord))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutations_preserve_exceptionality_and_invert((classes, word) in basis_and_word()) {
        let (p, b, _) = from_boundaries(&classes).unwrap();
        let out = match mutate(&p, &b, &word) {
            Err(LatticeError::Overflow) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(out.is_exceptional(&p));
        prop_assert_eq!(intmat::det(&out.gram(&p)), intmat::det(&p.gram));
        prop_assert_eq!(mutate(&p, &out, &word.inverse()).unwrap(), b.clone());
        prop_assert!(word.inverse().then_after(&word).reduced().is_empty());
    }

    #[test]
    fn left_then_right_is_identity((classes, word) in basis_and_word()) {
        let (p, b, _) = from_boundaries(&classes).unwrap();
        for m in &word.0 {
            let pair = MutationWord(vec![m.inverse(), *m]);
            prop_assert_eq!(mutate(&p, &b, &pair).unwrap(), b.clone());
        }
    }

    #[test]
    fn serre_identity_on_random_pseudolattices((classes, word) in basis_and_word()) {
        let (p, b, _) = from_boundaries(&classes).unwrap();
        let Ok(out) = mutate(&p, &b, &word) else { return Ok(()) };
        let q = Pseudolattice::new(out.gram(&p)).unwrap();
        let s = serre(&q).unwrap();
        let n = q.rank();
        for i in 0..n {
            let su: Vec<i64> = (0..n).map(|r| s[r][i]).collect();
            for j in 0..n {
                let (ei, ej): (Vec<i64>, Vec<i64>) = ((0..n).map(|k| i64::from(k == i)).collect(), (0..n).map(|k| i64::from(k == j)).collect());
                prop_assert_eq!(q.pair(&ei, &ej), q.pair(&ej, &su));
            }
        }
    }

    #[test]
    fn word_round_trips_through_display((_, word) in basis_and_word()) {
        let parsed: MutationWord = word.to_string().parse().unwrap();
        prop_assert_eq!(parsed, word);
    }
}

#[test]
fn reference_words_avoid_slot_zero() {
    for d in 1..=3u8 {
        let w = dpmirror::pseudolattice::beta_word(d).unwrap();
        assert!(!w.touches_slot_zero(), "β{d}");
        let (p, b, _) = from_boundaries(&extended_classes(d, &expected_classes(d).unwrap())).unwrap();
        assert!(mutate(&p, &b, &w).unwrap().is_exceptional(&p));
    }
}

#[test]
fn search_finds_a_word_for_the_cubic() {
    let (p, b, _) = from_boundaries(&expected_classes(3).unwrap()).unwrap();
    let target = del_pezzo_gram(6);
    let found = norm_guided_search(&p, &b, &target, 20_000).expect("word within budget");
    let out = mutate(&p, &b, &found.word).unwrap();
    assert!(sign_normalize(&out.gram(&p), &target).is_some());
    assert!(!found.word.touches_slot_zero());
}

#[test]
fn search_edge_cases() {
    let (p, b, _) = from_boundaries(&expected_classes(3).unwrap()).unwrap();
    let own = b.gram(&p);
    let hit = norm_guided_search(&p, &b, &own, 0).unwrap();
    assert!(hit.word.is_empty());
    assert!(norm_guided_search(&p, &b, &del_pezzo_gram(6), 0).is_none());
}
