use proptest::prelude::*;
use salem_core::approx::{bessel_j0, beurling, fejer, sawtooth, vaaler, SelbergPair, SANDWICH_GRID, SANDWICH_TOL};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn families_have_period_one(n in 1usize..=48, z in -3.0f64..3.0) {
        let pair = SelbergPair::new(0.2, 0.65, n).unwrap();
        for p in [fejer(n).unwrap(), vaaler(n).unwrap(), beurling(n).unwrap(), pair.s_plus, pair.s_minus] {
            let v = p.eval(z);
            prop_assert!((p.eval(z + 1.0) - v).abs() < 1e-12);
            prop_assert!((p.eval(z - 1.0) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn selberg_sandwich_and_integrals(a in 0.0f64..0.95, w in 0.01f64..1.0, n in 1usize..=64) {
        let b = (a + w).min(1.0);
        let pair = SelbergPair::new(a, b, n).unwrap();
        let (lo_plus, lo_minus, _) = pair.grid_margins(SANDWICH_GRID);
        prop_assert!(lo_plus >= -SANDWICH_TOL && lo_minus >= -SANDWICH_TOL);
        let excess = 1.0 / (n + 1) as f64;
        prop_assert!((pair.s_plus.integral() - (b - a + excess)).abs() < 1e-6);
        prop_assert!((pair.s_minus.integral() - (b - a - excess)).abs() < 1e-6);
        // Coefficients beyond N + 1 vanish.
        prop_assert!(pair.s_plus.effective_degree() <= n + 1);
        prop_assert!(pair.s_minus.effective_degree() <= n + 1);
    }

    #[test]
    fn beurling_majorizes_sawtooth(k in 2u32..=6, x in 0.0f64..1.0) {
        let n = 1usize << k;
        let b = beurling(n).unwrap();
        prop_assert!(b.eval(x) >= sawtooth(x) - 1e-12, "N={n} x={x}");
    }

    #[test]
    fn bessel_satisfies_its_ode(x in 0.5f64..60.0) {
        prop_assert!(ode_residual(x) < 1e-8, "x = {x}: {}", ode_residual(x));
    }
}

#[test]
fn beurling_grid_for_listed_degrees() {
    for n in [4, 8, 16, 32, 64] {
        let b = beurling(n).unwrap();
        let worst = (0..=10_000)
            .map(|i| i as f64 / 10_000.0)
            .map(|x| b.eval(x) - sawtooth(x))
            .fold(f64::INFINITY, f64::min);
        assert!(worst >= -1e-12, "N={n}: {worst}");
    }
}

/// `|x y'' + y' + x y|` with fourth-order central differences.
fn ode_residual(x: f64) -> f64 {
    let h = 1e-2;
    let f = |k: f64| bessel_j0(x + k * h);
    let d1 = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
    let d2 = (-f(2.0) + 16.0 * f(1.0) - 30.0 * f(0.0) + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * h * h);
    (x * d2 + d1 + x * f(0.0)).abs()
}

#[test]
fn bessel_ode_residual_on_a_grid() {
    let worst = (1..=1200).map(|i| i as f64 * 0.05).map(ode_residual).fold(0.0, f64::max);
    assert!(worst < 1e-8, "worst residual {worst}");
}
