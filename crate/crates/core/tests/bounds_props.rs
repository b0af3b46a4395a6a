use std::sync::OnceLock;

use proptest::prelude::*;
use salem_core::bounds::{
    abs_eval, erdos_turan_bound, gamma_exponent, garsia_bound, garsia_chain, select_case_and_delta, star_discrepancy,
    CaseId, CaseParams, GarsiaChain,
};
use salem_core::orbit::SalemNumber;
use salem_core::poly::IntPoly;

const PREC: usize = 256;

fn salem() -> &'static SalemNumber {
    static S: OnceLock<SalemNumber> = OnceLock::new();
    S.get_or_init(|| SalemNumber::new(example_poly(), PREC).unwrap())
}

fn example_poly() -> IntPoly {
    IntPoly::from_i64(&[1, -1, -1, -1, 1])
}

fn chain() -> &'static GarsiaChain {
    static C: OnceLock<GarsiaChain> = OnceLock::new();
    C.get_or_init(|| garsia_chain(salem(), 1, 1.0, 1.0).unwrap())
}

fn case_params() -> impl Strategy<Value = CaseParams> {
    (1u64..=50, 1usize..=3, 0.0f64..3.0, 0.01f64..10.0, 0.01f64..10.0, 0.001f64..=1.0, any::<bool>(), any::<u64>())
        .prop_map(|(l, m, h, abs_eta, abs_sigma0_eta, delta1_beta, zero, pick)| {
            let residues_all_zero = zero || l == 1;
            let some_residue_l = if residues_all_zero { 0 } else { 1 + pick % (l - 1) };
            CaseParams {
                l,
                abs_eta,
                abs_sigma0_eta,
                h,
                m,
                delta1_beta,
                residues_all_zero,
                some_residue_l,
                chain: Some(chain().clone()),
            }
        })
}

fn expected_case(p: &CaseParams) -> CaseId {
    let small_amplitude = 2.0 * p.h / (p.l as f64) < p.delta1_beta / 2.0;
    match (p.residues_all_zero, small_amplitude, 2.0 * p.h < 1.0) {
        (true, true, _) => CaseId::L33,
        (true, false, _) => CaseId::L34,
        (false, _, true) => CaseId::L35,
        (false, _, false) => CaseId::L36,
    }
}

/// `X` in `1/2 < 1 − 2δ − 0.4 − δX`, or `None` for the direct choice `δ = 1/(2L)`.
fn inequality_weight(p: &CaseParams, case: CaseId, m_lower: Option<f64>) -> Option<f64> {
    let (l, m) = (p.l as f64, p.m as f64);
    match case {
        CaseId::L33 => Some(4.0 / m_lower.unwrap()),
        CaseId::L34 => Some(16.0 * m / p.delta1_beta),
        CaseId::L35 => None,
        CaseId::L36 => Some(8.0 * m * l),
    }
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    (1usize..=8)
        .prop_flat_map(|deg| prop::collection::vec(-10i64..=10, deg + 1))
        .prop_map(|c| IntPoly::from_i64(&c))
        .prop_filter("degree at least one", |q| !q.is_zero() && q.degree() >= 1)
}

fn brute_discrepancies(points: &[f64]) -> (f64, f64) {
    let n = points.len() as f64;
    let mut cuts: Vec<f64> = points.to_vec();
    cuts.extend([0.0, 1.0]);
    let count = |pred: &dyn Fn(f64) -> bool| points.iter().filter(|&&u| pred(u)).count() as f64;
    let d_star = cuts
        .iter()
        .map(|&a| {
            let le = count(&|u| u <= a);
            let lt = count(&|u| u < a);
            (le / n - a).max(a - lt / n)
        })
        .fold(0.0, f64::max);
    let mut d = 0.0f64;
    for &a in &cuts {
        for &b in cuts.iter().filter(|&&b| b >= a) {
            let closed = count(&|u| a <= u && u <= b);
            let open = count(&|u| a < u && u < b);
            d = d.max(closed / n - (b - a)).max((b - a) - open / n);
        }
    }
    (d_star, d)
}

fn point_set() -> impl Strategy<Value = Vec<f64>> {
    // A coarse grid produces ties; the continuous branch does not.
    prop_oneof![
        prop::collection::vec(0.0f64..=1.0, 1..=200),
        prop::collection::vec((0u32..=16).prop_map(|k| k as f64 / 16.0), 1..=200),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn garsia_bound_is_positive_and_below_the_value(q in int_poly()) {
        let f = example_poly();
        prop_assume!(!f.divides(&q));
        let bound = garsia_bound(&f, &q, PREC).unwrap();
        let value = abs_eval(&q, &salem().alpha);
        prop_assert!(bound > 0.0);
        prop_assert!(bound <= value, "{q:?}: bound {bound} exceeds |Q(α)| = {value}");
    }

    #[test]
    fn exactly_one_case_fires_with_slack(p in case_params()) {
        let r = select_case_and_delta(&p).unwrap();
        prop_assert_eq!(r.case_id, expected_case(&p));
        prop_assert!(r.delta > 0.0 && r.delta < 0.5, "δ = {}", r.delta);
        prop_assert!(r.slack_fraction >= 0.1, "slack {}", r.slack_fraction);
        match inequality_weight(&p, r.case_id, r.m_lower) {
            Some(x) if x.is_finite() => {
                // Budget 0.1 of `1/2 < 1 − 2δ − 0.4 − δX`; at least 10% must remain.
                let margin = 1.0 - 2.0 * r.delta - 0.4 - r.delta * x - 0.5;
                prop_assert!(margin >= 0.1 * 0.1 - 1e-15, "margin {margin}");
            }
            Some(_) => prop_assert!(r.m_lower.unwrap() > 0.0),
            None => prop_assert_eq!(r.delta, 1.0 / (2.0 * p.l as f64)),
        }
        prop_assert_eq!(select_case_and_delta(&p).unwrap(), r);
    }

    #[test]
    fn star_discrepancy_matches_brute_force(points in point_set()) {
        let (d_star, d) = star_discrepancy(&points).unwrap();
        let (bs, bd) = brute_discrepancies(&points);
        prop_assert_eq!(d_star, bs);
        prop_assert!((d - bd).abs() <= 1e-12, "D = {d}, brute {bd}");
    }

    #[test]
    fn erdos_turan_dominates_discrepancy(points in prop::collection::vec(0.0f64..=1.0, 1..=200), k in 1usize..=32) {
        let (_, d) = star_discrepancy(&points).unwrap();
        prop_assert!(erdos_turan_bound(&points, k).unwrap() >= d);
    }

    #[test]
    fn gamma_is_positive(
        log_delta in -150.0f64..(0.5f64).log10(),
        lambda in 1e-3f64..1.0,
        alpha in 1.0001f64..10.0,
        frequency in 1e-3f64..=1.0,
    ) {
        let delta = 10f64.powf(log_delta).min(0.4999);
        prop_assert!(gamma_exponent(delta, lambda, alpha, frequency).unwrap() > 0.0);
    }
}

#[test]
fn l36_example_params() {
    let p = CaseParams {
        l: 2,
        abs_eta: 0.5,
        abs_sigma0_eta: 0.5,
        h: 1.0,
        m: 1,
        delta1_beta: 0.2,
        residues_all_zero: false,
        some_residue_l: 1,
        chain: None,
    };
    let r = select_case_and_delta(&p).unwrap();
    assert_eq!(r.case_id, CaseId::L36);
    assert!((r.delta - 0.05 / 18.0).abs() < 1e-15);
}
