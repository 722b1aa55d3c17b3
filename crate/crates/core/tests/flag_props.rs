use std::sync::Arc;

use gbord_core::exact::poly::{Monomial, Poly, Ring};
use gbord_core::exact::scalar;
use gbord_core::flag::{char_hom_schubert, demazure_word, divided_difference, reflect_poly, sym_ring, torsion_index};
use gbord_core::weyl::{Matrix, RootDatum, WeylGroup};
use num_bigint::BigInt;
use proptest::prelude::*;

const RANK_TWO: [&str; 5] = ["SL3", "GL2", "Sp4", "G2", "Torus(2)"];

fn sym_poly(ring: &Arc<Ring>, terms: &[((i32, i32), i64)]) -> Poly {
    Poly::from_terms(ring, terms.iter().map(|((a, b), c)| (Monomial::new(vec![*a, *b]), scalar::int(*c))))
}

fn arb_terms() -> impl Strategy<Value = Vec<((i32, i32), i64)>> {
    prop::collection::vec(((0i32..=3, 0i32..=2), -3i64..=3), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nil_square_and_leibniz(which in 0usize..4, f in arb_terms(), g in arb_terms()) {
        let rd = RootDatum::preset(RANK_TWO[which]).unwrap();
        let ring = sym_ring(2);
        let (f, g) = (sym_poly(&ring, &f), sym_poly(&ring, &g));
        for i in 0..rd.num_simple() {
            let df = divided_difference(&rd, i, &f).unwrap();
            prop_assert!(divided_difference(&rd, i, &df).unwrap().is_zero());
            let lhs = divided_difference(&rd, i, &(&f * &g)).unwrap();
            let rhs = &(&df * &g) + &(&reflect_poly(&rd, i, &f).unwrap() * &divided_difference(&rd, i, &g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

/// All reduced words of each element, by brute force over words of the
/// right length.
fn reduced_words(w: &WeylGroup) -> Vec<Vec<Vec<usize>>> {
    let rd = w.datum();
    let s = rd.num_simple();
    let mut out = vec![Vec::new(); w.order()];
    for (idx, e) in w.elements().iter().enumerate() {
        let len = e.length();
        let total = s.pow(len as u32);
        for code in 0..total {
            let mut word = Vec::with_capacity(len);
            let mut c = code;
            for _ in 0..len {
                word.push(c % s);
                c /= s;
            }
            let mut m = Matrix::identity(rd.rank());
            for &i in &word {
                m = m.mul(&rd.reflection_matrix(i).unwrap());
            }
            if m == e.matrix {
                out[idx].push(word);
            }
        }
    }
    out
}

#[test]
fn demazure_operators_depend_only_on_the_element() {
    let ring = sym_ring(2);
    let tests: Vec<Poly> = (0..=6)
        .flat_map(|d| (0..=d).map(move |a| ((a, d - a), 1)))
        .map(|t| sym_poly(&ring, &[t]))
        .collect();
    for name in ["SL3", "Sp4", "G2"] {
        let w = WeylGroup::enumerate(&RootDatum::preset(name).unwrap()).unwrap();
        let words = reduced_words(&w);
        for (idx, ws) in words.iter().enumerate() {
            assert!(ws.contains(&w.element(idx).word));
            for f in &tests {
                let base = demazure_word(w.datum(), &ws[0], f).unwrap();
                for word in &ws[1..] {
                    assert_eq!(demazure_word(w.datum(), word, f).unwrap(), base, "{name} {word:?} on {f}");
                }
            }
        }
    }
}

#[test]
fn non_reduced_words_vanish() {
    let rd = RootDatum::preset("SL3").unwrap();
    let ring = sym_ring(2);
    let f = sym_poly(&ring, &[((2, 1), 1), ((0, 3), 2)]);
    assert!(demazure_word(&rd, &[0, 1, 1], &f).unwrap().is_zero());
    assert!(demazure_word(&rd, &[1, 0, 1, 0, 1], &f).unwrap().is_zero());
}

#[test]
fn schubert_coefficients_of_one() {
    for name in RANK_TWO {
        let w = WeylGroup::enumerate(&RootDatum::preset(name).unwrap()).unwrap();
        let one = Poly::one(&sym_ring(2));
        assert_eq!(char_hom_schubert(&w, &one).unwrap(), vec![(0, BigInt::from(1))]);
    }
}

#[test]
fn torsion_index_of_special_groups_is_one() {
    for name in ["Torus(1)", "Torus(3)", "SL2", "SL3", "GL1", "GL2", "GL3", "Sp4"] {
        let w = WeylGroup::enumerate(&RootDatum::preset(name).unwrap()).unwrap();
        let rep = torsion_index(&w).unwrap();
        assert_eq!(rep.tau, BigInt::from(1), "{name}");
        assert_eq!(rep.top_degree, BigInt::from(1), "{name}");
    }
}

#[test]
fn torsion_index_non_special() {
    for (name, tau) in [("PGL2", 2), ("G2", 2)] {
        let w = WeylGroup::enumerate(&RootDatum::preset(name).unwrap()).unwrap();
        let rep = torsion_index(&w).unwrap();
        assert_eq!(rep.tau, BigInt::from(tau), "{name}");
        assert_eq!(rep.per_degree.len(), w.longest_length() + 1);
    }
}
