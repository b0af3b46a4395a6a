use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use salem_core::hp::Real;
use salem_core::numberfield::ReducedForm;
use salem_core::orbit::{
    empirical_frequency, eq1_residual, fractional_orbit, torus_frequency, trace_orbit, Complement, IntegerTraces,
    Interval, SalemNumber,
};
use salem_core::poly::IntPoly;

fn salem(prec: usize) -> &'static SalemNumber {
    static S256: OnceLock<SalemNumber> = OnceLock::new();
    static S512: OnceLock<SalemNumber> = OnceLock::new();
    static S1024: OnceLock<SalemNumber> = OnceLock::new();
    let cell = match prec {
        256 => &S256,
        512 => &S512,
        1024 => &S1024,
        _ => unreachable!(),
    };
    cell.get_or_init(|| SalemNumber::new(IntPoly::from_i64(&[1, -1, -1, -1, 1]), prec).unwrap())
}

fn eta_strategy(coeff: i64, max_l: i64) -> impl Strategy<Value = ReducedForm> {
    (prop::collection::vec(-coeff..=coeff, 4), 1..=max_l)
        .prop_filter("nonzero", |(l, _)| l.iter().any(|&x| x != 0))
        .prop_map(|(l, den)| ReducedForm::from_i64(&l, den).unwrap())
}

fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eq1_residual_is_tiny_and_shrinks_with_precision(eta in eta_strategy(10, 5), n in 0u64..=200) {
        let r256 = eq1_residual(&eta, salem(256), n);
        prop_assert!(r256.is_zero() || r256.to_f64() < 1e-12, "{eta} n={n}: {}", r256.to_f64());
        let r512 = eq1_residual(&eta, salem(512), n);
        prop_assert!(r512.is_zero() || r512 < r256 || r256.is_zero());
    }

    #[test]
    fn residues_are_purely_periodic(eta in eta_strategy(3, 4)) {
        let s = salem(256);
        let orbit = trace_orbit(&s.field, &eta, 4).unwrap();
        prop_assert_eq!(orbit.preperiod, 0);
        let l = eta.denominator.clone();
        let res: Vec<BigInt> = IntegerTraces::new(&s.field, &eta)
            .take(3 * orbit.period + 8)
            .map(|t| ((t % &l) + &l) % &l)
            .collect();
        for n in 0..res.len() - orbit.period {
            prop_assert_eq!(&res[n], &res[n + orbit.period]);
        }
        prop_assert!(orbit.period as u64 <= eta.denominator.to_u64().unwrap().pow(4));
    }

    #[test]
    fn complement_frequencies_sum_to_one(eta in eta_strategy(3, 4), a in 0.0f64..1.0, w in 0.01f64..1.0) {
        let s = salem(256);
        let j = Interval::new(a, (a + w).min(1.0)).unwrap();
        let f = empirical_frequency(&eta, s, &j, 2000).unwrap();
        let g = empirical_frequency(&eta, s, &Complement(j), 2000).unwrap();
        prop_assert_eq!(f + g, BigRational::one());
    }

    #[test]
    fn torus_frequency_is_monotone_and_additive(eta in eta_strategy(3, 4), a in 0.0f64..0.5, w1 in 0.0f64..0.25, w2 in 0.0f64..0.25) {
        let s = salem(256);
        let (m, b) = (a + w1, a + w1 + w2);
        let left = torus_frequency(&eta, s, &Interval::new(a, m).unwrap()).unwrap();
        let right = torus_frequency(&eta, s, &Interval::new(m, b).unwrap()).unwrap();
        let whole = torus_frequency(&eta, s, &Interval::new(a, b).unwrap()).unwrap();
        prop_assert!(left <= whole + 1e-9 && right <= whole + 1e-9);
        prop_assert!((left + right - whole).abs() < 1e-8, "{left} + {right} vs {whole}");
    }

    #[test]
    fn fractional_orbit_matches_direct_power(eta in eta_strategy(5, 5), n in 0u64..=200) {
        let fast = fractional_orbit(&eta, salem(256), n);
        let hp = salem(1024);
        let big_l = Real::from_bigint(&eta.denominator, 1024);
        let direct = (&(&hp.numerator_value(&eta) / &big_l) * &hp.alpha.powi(n)).frac().to_f64();
        prop_assert!(circle_dist(fast, direct) < 1e-10, "{eta} n={n}: {fast} vs {direct}");
    }
}
