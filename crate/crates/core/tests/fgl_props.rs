use gbord_core::exact::{Poly, Series};
use gbord_core::fgl::{partition_count, CoefficientLattice, FormalGroupLaw, LElement, LazardBasis};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn universal_axioms_to_order_six() {
    let law = FormalGroupLaw::universal(6);
    let (u1, u2) = law.unit_residuals().unwrap();
    assert!(u1.is_zero() && u2.is_zero());
    assert!(law.commutativity_residual().unwrap().is_zero());
    assert!(law.associativity_residual(6).unwrap().is_zero());
}

#[test]
fn law_is_homogeneous_of_degree_minus_one() {
    let law = FormalGroupLaw::universal(5);
    assert_eq!(law.series().poly().degrees(), vec![-1]);
}

#[test]
fn lazard_ranks_are_partition_counts() {
    let basis = LazardBasis::new(8);
    let expect: Vec<usize> = (0..=8).map(partition_count).collect();
    assert_eq!(basis.ranks(), expect);
}

#[test]
fn coefficients_lie_in_the_lattice() {
    let basis = LazardBasis::new(6);
    let law = basis.law();
    for i in 1..=6u32 {
        for j in 1..=6u32 {
            if i + j - 1 > 6 {
                continue;
            }
            let a = law.coefficient(i, j);
            assert!(basis.lattice_coordinates(i + j - 1, &a).is_some(), "a_{i}{j} = {a}");
        }
    }
}

#[test]
fn projective_space_classes_are_integral() {
    let basis = LazardBasis::new(6);
    for n in 0..=6 {
        let p = basis.pn_class(n).unwrap();
        assert!(p.is_integral(&basis), "[P^{n}]");
    }
    // [P^1] = -a_11 has coordinate 1 on the single basis vector 2 m_1.
    let p1 = basis.pn_class(1).unwrap();
    assert_eq!(p1.poly(), &(-&basis.law().coefficient(1, 1)));
    assert_eq!(basis.lattice_coordinates(1, p1.poly()), Some(vec![BigInt::from(1)]));
}

#[test]
fn lattice_is_closed_under_multiplication() {
    let basis = LazardBasis::new(6);
    for a in 0..=6u32 {
        for b in 0..=(6 - a) {
            for x in basis.basis(a as i32) {
                for y in basis.basis(b as i32) {
                    let prod = LElement::new(x.clone()).mul(&LElement::new(y.clone()));
                    assert!(basis.lattice_coordinates(a + b, prod.poly()).is_some(), "{x} * {y}");
                }
            }
        }
    }
}

fn law_by_index(i: usize) -> FormalGroupLaw {
    match i {
        0 => FormalGroupLaw::additive(5),
        1 => FormalGroupLaw::multiplicative(5),
        _ => FormalGroupLaw::universal(5),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn n_series_is_additive(which in 0usize..3, a in -3i64..=3, b in -3i64..=3) {
        let law = law_by_index(which);
        let ring = law.series_ring(&["t"]).unwrap();
        let t = Series::var(&ring, ring.series_vars()[0], 5);
        let lhs = law.sum(&law.n_series(a, &t).unwrap(), &law.n_series(b, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, law.n_series(a + b, &t).unwrap());
    }

    #[test]
    fn inverse_cancels(which in 0usize..3) {
        let law = law_by_index(which);
        let ring = law.series_ring(&["t"]).unwrap();
        let t = Series::var(&ring, ring.series_vars()[0], 5);
        let inv = law.inverse(&t).unwrap();
        prop_assert!(law.sum(&t, &inv).unwrap().is_zero());
        prop_assert_eq!(law.inverse(&inv).unwrap(), t);
    }

    #[test]
    fn coordinates_round_trip(n in 0u32..=6, coeffs in prop::collection::vec(-5i64..=5, 11)) {
        let basis = LazardBasis::new(6);
        let k = basis.ranks()[n as usize];
        let c: Vec<BigInt> = coeffs[..k].iter().map(|&x| BigInt::from(x)).collect();
        let p: Poly = basis.element(n, &c);
        prop_assert_eq!(basis.lattice_coordinates(n, &p), Some(c));
    }
}
