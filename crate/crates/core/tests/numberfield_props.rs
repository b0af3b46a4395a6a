use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use salem_core::hp::Real;
use salem_core::numberfield::{FieldElement, NumberField, ReducedForm};
use salem_core::poly::IntPoly;

const PREC: usize = 256;

fn field() -> NumberField {
    NumberField::new(IntPoly::from_i64(&[1, -1, -1, -1, 1]), PREC).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn coeffs() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), 4)
}

fn element(k: &NumberField, c: Vec<BigRational>) -> FieldElement {
    k.element(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms_hold_exactly(a in coeffs(), b in coeffs(), c in coeffs()) {
        let k = field();
        let (x, y, z) = (element(&k, a), element(&k, b), element(&k, c));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.add(&k.add(&x, &y), &z), k.add(&x, &k.add(&y, &z)));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        if !x.is_zero() {
            prop_assert_eq!(k.mul(&x, &k.inv(&x).unwrap()), k.one());
        }
    }

    #[test]
    fn trace_is_rationally_linear(p in rational(), q in rational(), a in coeffs(), b in coeffs()) {
        let k = field();
        let (x, y) = (element(&k, a), element(&k, b));
        let lhs = k.trace(&k.add(&k.scale(&x, &p), &k.scale(&y, &q)));
        prop_assert_eq!(lhs, &p * k.trace(&x) + &q * k.trace(&y));
    }

    #[test]
    fn trace_matches_sum_of_embeddings(a in coeffs()) {
        let k = field();
        let x = element(&k, a);
        let exact = Real::from_ratio(&k.trace(&x), PREC);
        let numeric = (0..k.degree()).fold(Real::zero(PREC), |s, j| &s + &k.embed(&x, j).re);
        let diff = (&exact - &numeric).abs();
        let limit = -(PREC as f64 / 4.0) * std::f64::consts::LOG2_10;
        prop_assert!(diff.is_zero() || diff.log2_abs() < limit);
    }

    /// Full trace vanishing puts η in the dual lattice, so L divides E(α).
    #[test]
    fn full_trace_vanishing_forces_l_to_divide_e(
        nums in prop::collection::vec(-5i64..=5, 4),
        l in 2i64..=40,
    ) {
        let k = field();
        let e = k.e_alpha().unwrap();
        prop_assume!(nums.iter().any(|&x| x != 0));
        let eta = ReducedForm::from_i64(&nums, l).unwrap();
        let residues = k.trace_residues(&eta).unwrap();
        if residues.iter().all(|r| r.is_zero()) {
            prop_assert!((&e % &eta.denominator).is_zero(), "{eta}: L does not divide E(α) = {e}");
        }
    }
}

#[test]
fn dual_basis_pairs_to_identity() {
    let k = field();
    let dual = k.dual_basis().unwrap();
    let alpha = k.alpha();
    for i in 0..k.degree() {
        let ai = k.pow(&alpha, i as i64).unwrap();
        for (j, w) in dual.iter().enumerate() {
            let t = k.trace(&k.mul(&ai, w));
            let want = if i == j { 1 } else { 0 };
            assert_eq!(t, BigRational::from_integer(want.into()), "Tr(α^{i} w_{j})");
        }
    }
    let e = k.e_alpha().unwrap();
    assert_eq!(e.to_i64(), Some(39));
    assert!((k.discriminant_resultant() % &e).is_zero());
}

#[test]
fn proper_divisor_of_e_admits_full_vanishing() {
    // E(α) = 39 = 3·13: L = 3 vanishes although L ∉ {1, E(α)}.
    let k = field();
    let eta = ReducedForm::from_i64(&[4, -2, -2, -2], 3).unwrap();
    assert_eq!(eta.denominator, BigInt::from(3));
    assert!(k.trace_residues(&eta).unwrap().iter().all(|r| r.is_zero()));
}
