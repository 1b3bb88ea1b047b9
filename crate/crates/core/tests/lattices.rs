use nalgebra::DMatrix;
use proptest::prelude::*;

use dpmirror::exactpoly::{q, LaurentPoly};
use dpmirror::intmat::{self, IMat};
use dpmirror::periods::{classical_period, przyjalkowski_g};
use dpmirror::pseudolattice::{from_boundaries, is_odd_unimodular_hyperbolic, neron_severi};
use dpmirror::rootlattice::{cartan_matrix, root_system_identify, short_vectors, IntLattice};
use dpmirror::vancycles::{expected_classes, seifert_gram, sign_diagonal_to};

/// Products of elementary moves and sign flips, so `det = ±1`.
fn unimodular(n: usize) -> impl Strategy<Value = IMat> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = intmat::identity(n);
        for (i, j, k, flip) in ops {
            if i != j {
                for row in u.iter_mut() {
                    row[j] += k * row[i];
                }
            } else if flip {
                for row in u.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
        u
    })
}

fn congruent(g: &IMat, u: &IMat) -> IMat {
    intmat::mul(&intmat::mul(&intmat::transpose(u), g), u)
}

fn positive_gram() -> impl Strategy<Value = IMat> {
    (1usize..=4)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2i64..=2, n), n))
        .prop_filter("nonsingular", |b| intmat::det(b) != 0.into())
        .prop_map(|b| intmat::mul(&intmat::transpose(&b), &b))
}

fn box_oracle(g: &IMat, bound: i64) -> Vec<Vec<i64>> {
    let n = g.len();
    let gf = DMatrix::from_fn(n, n, |i, j| g[i][j] as f64);
    let inv = gf.try_inverse().unwrap();
    let radius: Vec<i64> = (0..n).map(|i| (bound as f64 * inv[(i, i)]).sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let norm = intmat::bilinear(g, &x, &x);
        if x.iter().any(|&c| c != 0) && norm <= bound {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            if x[i] < radius[i] {
                x[i] += 1;
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn short_vectors_match_box_enumeration(g in positive_gram(), bound in 1i64..=6) {
        let l = IntLattice::new(g.clone()).unwrap();
        prop_assert_eq!(short_vectors(&l, bound).unwrap(), box_oracle(&g, bound));
    }

    #[test]
    fn root_system_is_basis_independent(name in prop::sample::select(vec!["A2", "A3", "D4", "E6", "A4"]), u in unimodular(6)) {
        let g = cartan_matrix(name).unwrap();
        let n = g.len();
        let u: IMat = u.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect();
        prop_assume!(intmat::abs_det_is_one(&u));
        let a = root_system_identify(&IntLattice::new(g.clone()).unwrap()).unwrap();
        let b = root_system_identify(&IntLattice::new(congruent(&g, &u)).unwrap()).unwrap();
        prop_assert_eq!(a.dynkin, b.dynkin);
        prop_assert_eq!(a.root_count, b.root_count);
        prop_assert_eq!(a.abs_det, b.abs_det);
    }

    #[test]
    fn classical_period_is_invariant_under_monomial_changes(d in 1u8..=3, u in unimodular(2), c in -3i64..=3) {
        prop_assume!(intmat::abs_det_is_one(&u));
        let f = &przyjalkowski_g(d).unwrap() + &LaurentPoly::constant(2, q(c));
        let m: Vec<Vec<i32>> = u.iter().map(|r| r.iter().map(|&x| x as i32).collect()).collect();
        prop_assert_eq!(classical_period(&f, 7), classical_period(&f.monomial_substitution(&m), 7));
    }
}

#[test]
fn cubic_gram_sign_normalizes_to_the_displayed_matrix() {
    let displayed = vec![
        vec![1, -1, 1, -1, 1, -1, 1, -1, 1],
        vec![0, 1, 1, 0, 1, 0, 1, 0, 1],
        vec![0, 0, 1, -1, 0, -1, 0, -1, 0],
        vec![0, 0, 0, 1, 1, 0, 1, 0, 1],
        vec![0, 0, 0, 0, 1, -1, 0, -1, 0],
        vec![0, 0, 0, 0, 0, 1, 1, 0, 1],
        vec![0, 0, 0, 0, 0, 0, 1, -1, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let g = seifert_gram(&expected_classes(3).unwrap());
    let s = sign_diagonal_to(&g, &displayed).expect("sign diagonal");
    assert_eq!(s.len(), 9);
}

#[test]
fn neron_severi_is_odd_unimodular_of_signature_ell_one() {
    for d in 1..=3u8 {
        let (p, _, _) = from_boundaries(&expected_classes(d).unwrap()).unwrap();
        let ns = neron_severi(&p).unwrap();
        let ell = 9 - d as usize;
        assert_eq!(ns.gram.len(), ell + 1);
        assert!(is_odd_unimodular_hyperbolic(&ns.gram), "d = {d}");
        assert_eq!(intmat::signature(&ns.gram), (ell, 1, 0), "d = {d}");
    }
}
