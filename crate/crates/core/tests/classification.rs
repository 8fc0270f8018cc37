mod common;

use common::*;
use opoly::classification::{
    canonical_pair, classify, classify_by_degree, regularity_certificate, roundtrip_check, transform_pearson,
    CanonicalFamily, FamilyTag, RegularityCondition,
};
use opoly::recurrence::recurrence_coeffs;
use opoly::{Error, Scalar};

fn same_family(x: &CanonicalFamily, y: &CanonicalFamily) -> bool {
    match (x, y) {
        // x ↦ −x swaps the two Jacobi parameters.
        (CanonicalFamily::Jacobi { alpha: a1, beta: b1 }, CanonicalFamily::Jacobi { alpha: a2, beta: b2 }) => {
            (a1 == a2 && b1 == b2) || (a1 == b2 && b1 == a2)
        }
        _ => x == y,
    }
}

#[test]
fn canonical_pairs_classify_to_themselves() {
    for family in table_fixtures() {
        let reduction = classify(&canonical_pair(&family)).unwrap();
        assert_eq!(reduction.family, family);
        assert!(reduction.exact);
        assert_eq!(reduction.scale, Scalar::one(), "{family}");
        assert_eq!(reduction.shift, Scalar::zero(), "{family}");
        assert_eq!(reduction.factor, Scalar::one(), "{family}");
    }
}

#[test]
fn classification_is_invariant_under_affine_changes() {
    let mut sampler = PairSampler::new(SEED ^ 0xAF);
    for family in table_fixtures() {
        for _ in 0..4 {
            let (a, b, k) = (sampler.nonzero_rational(), sampler.small_rational(), sampler.nonzero_rational());
            let moved = transform_pearson(&canonical_pair(&family), &a, &b, &k).unwrap();
            let reduction = classify(&moved).unwrap();
            assert!(same_family(&reduction.family, &family), "{family} -> {}", reduction.family);
            // Undoing the reduction lands back on the canonical pair.
            let back = transform_pearson(&moved, &reduction.scale, &reduction.shift, &reduction.factor).unwrap();
            if reduction.exact {
                assert_eq!(back, canonical_pair(&reduction.family));
            }
        }
    }
}

#[test]
fn degree_tags_agree_with_full_classification() {
    let mut sampler = PairSampler::new(SEED ^ 0xD3);
    for pair in sampler.regular_pairs(200, 4) {
        let reduction = classify(&pair).unwrap();
        assert_eq!(Some(reduction.family.tag()), classify_by_degree(&pair), "{pair}");
    }
}

#[test]
fn jacobi_symmetry() {
    let mut sampler = PairSampler::new(SEED ^ 0x1AC);
    for _ in 0..6 {
        let (alpha, beta) = (sampler.small_rational(), sampler.small_rational());
        let family = CanonicalFamily::Jacobi { alpha: alpha.clone(), beta: beta.clone() };
        if !regularity_certificate(&family).regular_all_n {
            continue;
        }
        let swapped = canonical_pair(&CanonicalFamily::Jacobi { alpha: beta, beta: alpha });
        let pair = canonical_pair(&family);
        for n in 1..=10 {
            let (x, y) = (recurrence_coeffs(&pair, n).unwrap(), recurrence_coeffs(&swapped, n).unwrap());
            assert_eq!(x.beta, -y.beta);
            assert_eq!(x.gamma, y.gamma);
        }
    }
}

#[test]
fn gegenbauer_limit_has_zero_beta() {
    for alpha in ["0", "1/2", "3", "-1/3"] {
        let pair = canonical_pair(&jacobi(alpha, alpha));
        for n in 0..=10 {
            assert!(recurrence_coeffs(&pair, n).unwrap().beta.is_zero());
        }
    }
}

#[test]
fn irrational_reductions_fall_back_to_approximate_mode() {
    // φ = x² − 2 has irrational zeros.
    let pair = opoly::pearson::PearsonPair::from_coeffs(int(1), int(0), int(-2), s("-7/2"), int(1)).unwrap();
    let reduction = classify(&pair).unwrap();
    assert_eq!(reduction.family.tag(), FamilyTag::Jacobi);
    assert!(!reduction.exact);
    let report = roundtrip_check(&pair, 15).unwrap();
    assert!(report.passed, "{:?}", report.failures);
    assert!(report.max_rel_error < 1e-20);
}

#[test]
fn gaussian_rational_pairs_reduce_exactly() {
    // φ = x² + 1 has zeros ±i.
    let pair = opoly::pearson::PearsonPair::from_coeffs(int(1), int(0), int(1), s("-11/2"), int(2)).unwrap();
    let reduction = classify(&pair).unwrap();
    assert!(reduction.exact);
    assert!(roundtrip_check(&pair, 15).unwrap().passed);
}

#[test]
fn certificates_name_the_broken_condition() {
    let cases = [
        (laguerre("-1"), Some(RegularityCondition::MinusAlpha)),
        (laguerre("0"), None),
        (jacobi("-2", "1/2"), Some(RegularityCondition::MinusAlpha)),
        (jacobi("1/2", "-4"), Some(RegularityCondition::MinusBeta)),
        (jacobi("-1/2", "-3/2"), Some(RegularityCondition::MinusAlphaBetaOne)),
        (bessel("-3"), Some(RegularityCondition::MinusAlphaOne)),
        (bessel("-1"), None),
        (hermite(), None),
    ];
    for (family, violated) in cases {
        let cert = regularity_certificate(&family);
        assert_eq!(cert.violated, violated, "{family}");
        assert_eq!(cert.regular_all_n, violated.is_none());
    }
    assert_eq!(RegularityCondition::MinusAlphaBetaOne.to_string(), "−(α+β+1)∈ℕ");
}

#[test]
fn degenerate_pairs_are_refused() {
    // ψ vanishes at the double zero of φ.
    let pair = opoly::pearson::PearsonPair::from_coeffs(int(1), int(0), int(0), int(2), int(0)).unwrap();
    assert!(matches!(classify(&pair), Err(Error::DegeneratePair(_))));
    let inadmissible = opoly::pearson::PearsonPair::from_coeffs(int(1), int(0), int(-1), int(-3), int(0)).unwrap();
    assert!(classify(&inadmissible).is_err());
}

#[test]
fn family_tags_round_trip_through_text() {
    for tag in [FamilyTag::Hermite, FamilyTag::Laguerre, FamilyTag::Jacobi, FamilyTag::Bessel] {
        assert_eq!(tag.to_string().parse::<FamilyTag>().unwrap(), tag);
    }
    assert!("chebyshev".parse::<FamilyTag>().is_err());
}
