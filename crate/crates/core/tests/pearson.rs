mod common;

use common::*;
use opoly::functional::{functionals_equal_upto, gram, hankel_det, MomentFunctional};
use opoly::pearson::{
    lift_pearson, moment_solution_space, moment_table, moments_from_pearson, pearson_residual, PearsonPair,
};
use opoly::recurrence::generate_polys;
use opoly::{Error, Scalar};
use proptest::prelude::*;

fn sampled_pair() -> impl Strategy<Value = PearsonPair> {
    any::<u64>().prop_map(|seed| PairSampler::new(seed).regular_pair(shape_for(seed), 12))
}

fn shape_for(seed: u64) -> Shape {
    [Shape::Constant, Shape::Linear, Shape::DoubleZero, Shape::RationalZeros, Shape::Generic][(seed % 5) as usize]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn generated_moments_solve_the_pearson_equation(pair in sampled_pair(), u0 in 1i64..5) {
        let u = moments_from_pearson(&pair, &Scalar::from_int(u0)).unwrap();
        for m in 0..=24 {
            prop_assert!(pearson_residual(&pair, &u, m).is_zero(), "m = {}", m);
        }
    }

    #[test]
    fn moments_span_the_solution_space(pair in sampled_pair()) {
        // Independent route: null space of the full linear system.
        let basis = moment_solution_space(&pair, 14);
        prop_assert_eq!(basis.len(), 1);
        let v = &basis[0];
        prop_assert!(!v[0].is_zero());
        let u = moments_from_pearson(&pair, &v[0]).unwrap();
        for (n, vn) in v.iter().enumerate() {
            prop_assert_eq!(&u.moment(n), vn);
        }
    }

    #[test]
    fn hankel_determinants_are_products_of_norms(pair in sampled_pair()) {
        let u = moments_from_pearson(&pair, &Scalar::one()).unwrap();
        let seq = generate_polys(&pair, 7).unwrap();
        let mut product = Scalar::one();
        for n in 0..=7 {
            product = &product * &gram(&u, &seq.polys, n, n).value;
            prop_assert_eq!(hankel_det(&u, n as isize), product.clone());
        }
    }

    #[test]
    fn lifts_compose(pair in sampled_pair(), j in 0usize..3, k in 0usize..3) {
        let u = moments_from_pearson(&pair, &Scalar::one()).unwrap();
        let (pk, uk) = lift_pearson(&pair, &u, k);
        let (pjk, ujk) = lift_pearson(&pk, &uk, j);
        let (direct, udirect) = lift_pearson(&pair, &u, j + k);
        prop_assert_eq!(&pjk, &direct);
        prop_assert!(functionals_equal_upto(&ujk, &udirect, 10));
        for m in 0..=10 {
            prop_assert!(pearson_residual(&direct, &udirect, m).is_zero());
        }
    }

    #[test]
    fn inadmissible_pairs_stop_at_the_vanishing_step(n0 in 0i64..6, a_num in 1i64..5, b in -3i64..4, q in -3i64..4) {
        let a = Scalar::ratio(a_num, 2);
        let p = -(&Scalar::from_int(n0) * &a);
        prop_assume!(!p.is_zero());
        let pair = PearsonPair::from_coeffs(a, Scalar::from_int(b), Scalar::one(), p, Scalar::from_int(q)).unwrap();
        prop_assert_eq!(pair.first_inadmissible_index(), Some(n0 as usize));
        let lazy = moments_from_pearson(&pair, &Scalar::one());
        prop_assert!(matches!(lazy, Err(Error::NotAdmissible { .. })), "lazy route accepted the pair");
        let err = moment_table(&pair, &Scalar::one(), 20).unwrap_err();
        prop_assert!(matches!(err, Error::NotAdmissible { index } if index == n0 as usize), "{:?}", err);
        let prefix = moment_table(&pair, &Scalar::one(), n0 as usize + 1).unwrap();
        prop_assert_eq!(prefix.len(), n0 as usize + 1);
    }
}

#[test]
fn residual_of_a_wrong_functional() {
    // Hermite pair (1, −2x) with u_2 = 1 in place of 1/2.
    let pair = PearsonPair::from_coeffs(int(0), int(0), int(1), int(-2), int(0)).unwrap();
    let u = MomentFunctional::from_moments(vec![int(1), int(0), int(1), int(0), int(3)]);
    // ⟨D(φu) − ψu, x⟩ = −u_0 + 2u_2.
    assert_eq!(pearson_residual(&pair, &u, 1), int(1));
    // ⟨D(φu) − ψu, x³⟩ = −3u_2 + 2u_4.
    assert_eq!(pearson_residual(&pair, &u, 3), int(3));
}

#[test]
fn hermite_moments() {
    let pair = PearsonPair::from_coeffs(int(0), int(0), int(1), int(-2), int(0)).unwrap();
    let moments = moment_table(&pair, &int(1), 9).unwrap();
    let expected = ["1", "0", "1/2", "0", "3/4", "0", "15/8", "0", "105/16"].map(s);
    assert_eq!(moments, expected);
}

#[test]
fn laguerre_moments_are_pochhammer_symbols() {
    for alpha in ["0", "1/2", "3"] {
        let alpha = s(alpha);
        let pair = PearsonPair::from_coeffs(int(0), int(1), int(0), int(-1), &alpha + &int(1)).unwrap();
        let moments = moment_table(&pair, &int(1), 10).unwrap();
        for (n, m) in moments.iter().enumerate() {
            assert_eq!(m, &opoly::pochhammer(&(&alpha + &int(1)), n));
        }
    }
}

#[test]
fn residual_against_a_foreign_pair() {
    let hermite = PearsonPair::from_coeffs(int(0), int(0), int(1), int(-2), int(0)).unwrap();
    let u = moments_from_pearson(&hermite, &int(1)).unwrap();
    let other = PearsonPair::from_coeffs(int(0), int(0), int(1), int(1), int(0)).unwrap();
    // −1·⟨u, 1⟩ − ⟨u, x²⟩ = −u_0 − u_2.
    assert_eq!(pearson_residual(&other, &u, 1), s("-3/2"));
    let zero = MomentFunctional::zero();
    assert!((0..6).all(|m| pearson_residual(&other, &zero, m).is_zero()));
}
