//! Algebraic properties of the q-series rings and structural invariants of
//! the expansion.

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use refined_dt::asym::{theorem1_params, CONSTANTS};
use refined_dt::expand::{expand_m_delta_laurent, second_moment_series};
use refined_dt::partitions::refined_poly_oracle;
use refined_dt::qseries::{jet_mul, laurent_mul, LaurentPoly};

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -20i64..=20), 0..6)
        .prop_map(|t| LaurentPoly::from_i64_terms(&t))
}

proptest! {
    #[test]
    fn jet_map_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), order in 0usize..=6) {
        let lhs = laurent_mul(&a, &b).jet(order);
        let rhs = jet_mul(&a.jet(order), &b.jet(order)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mirror_is_an_involution(a in small_poly()) {
        prop_assert_eq!(a.mirror().mirror(), a);
    }

    #[test]
    fn multiplication_commutes(a in small_poly(), b in small_poly()) {
        prop_assert_eq!(laurent_mul(&a, &b), laurent_mul(&b, &a));
    }

    #[test]
    fn multiplication_associates(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(laurent_mul(&laurent_mul(&a, &b), &c), laurent_mul(&a, &laurent_mul(&b, &c)));
    }

    #[test]
    fn mirror_flips_odd_derivatives(a in small_poly(), k in 0u32..=8) {
        let sign = if k % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        prop_assert_eq!(a.mirror().derivative_at_one(k), sign * a.derivative_at_one(k));
    }
}

#[test]
fn expansion_matches_enumeration_through_twelve() {
    for delta in [0, 1, 3] {
        let series = expand_m_delta_laurent(delta, 12);
        for n in 0..=12 {
            assert_eq!(
                series.coeff(n),
                &refined_poly_oracle(n, delta).unwrap(),
                "n={n} δ={delta}"
            );
        }
    }
}

#[test]
fn untwisted_coefficients_are_mirror_symmetric() {
    let series = expand_m_delta_laurent(0, 40);
    for (n, p) in series.iter() {
        assert_eq!(&p.mirror(), p, "n={n}");
    }
}

#[test]
fn second_moment_series_matches_laurent_derivative() {
    let m2 = second_moment_series(40);
    let laurent = expand_m_delta_laurent(0, 40);
    for n in 0..=40 {
        assert_eq!(m2.coeff(n), &laurent.coeff(n).derivative_at_one(2), "n={n}");
    }
}

#[test]
fn constants_survive_independent_recomputation() {
    assert!((common::zeta2() - CONSTANTS.zeta2).abs() < 1e-12);
    assert!((common::zeta3() - CONSTANTS.zeta3).abs() < 1e-12);
    assert!((common::zeta_prime_minus1() - CONSTANTS.zeta_prime_minus1).abs() < 1e-12);
    let (_, sigma2) = theorem1_params(0.0);
    assert!((sigma2 - common::limit_variance()).abs() < 1e-12);
}
