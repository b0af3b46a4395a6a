//! Trace orbits `Tr(Lηαⁿ)` for Salem α and the fractional parts `{ηαⁿ}`.
//!
//! For `Lη = Σ lₖαᵏ` the trace splits as
//! `Tr(Lηαⁿ) = Lηαⁿ + σ₀(Lη)α⁻ⁿ + 2Rₙ` with
//! `Rₙ = Σⱼ Hⱼ cos(2πnθⱼ − φⱼ)`, so `{ηαⁿ}` follows from the exact integer
//! trace and a bounded correction, without ever forming αⁿ.

mod equidist;
mod independence;
mod search;
mod trace;

pub use equidist::{
    cosine_measure, cosine_measure_adaptive, empirical_frequency, empirical_frequency_with, torus_frequency,
    torus_integral, Complement, Interval, Region, TORUS_TOL_M1, TORUS_TOL_M2,
};
pub use independence::{rational_independence_probe, rational_independence_probe_thetas, IndependenceReport};
pub use search::{enumerate_reduced, residue_lower_bound, search_small_eta, SearchResult};
pub use trace::{trace_orbit, IntegerTraces, TraceOrbit};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::hp::{Complex, Real};
use crate::numberfield::{NumberField, ReducedForm};
use crate::poly::IntPoly;
use crate::substitution::{classify_perron, Classification};
use crate::{Error, Result};

/// A Salem number with its field, conjugate angles and length.
#[derive(Clone, Debug)]
pub struct SalemNumber {
    pub field: NumberField,
    pub alpha: Real,
    /// `θⱼ ∈ (0, 1/2)` with conjugates `e^{±2πiθⱼ}`.
    pub thetas: Vec<Real>,
    /// `L(α) = Σ |aᵢ|`.
    pub length: BigInt,
}

impl SalemNumber {
    pub fn new(min_poly: IntPoly, prec: usize) -> Result<Self> {
        let verdict = classify_perron(&min_poly, prec)?;
        if verdict.classification != Classification::Salem {
            return Err(Error::NotSalem(format!("{min_poly} is classified {}", verdict.classification)));
        }
        let field = NumberField::new(min_poly, prec)?;
        Self::from_field(field)
    }

    pub fn from_field(field: NumberField) -> Result<Self> {
        let d = field.degree();
        if !field.is_reciprocal() || d < 4 || d % 2 == 1 {
            return Err(Error::NotSalem(format!("{} is not an even reciprocal polynomial of degree ≥ 4", field.min_poly())));
        }
        let prec = field.prec();
        let two_pi = Real::two_pi(prec);
        let thetas = field.roots()[2..]
            .iter()
            .step_by(2)
            .map(|z| &Real::atan2(&z.im, &z.re) / &two_pi)
            .collect();
        Ok(SalemNumber {
            alpha: field.alpha_value(),
            length: field.min_poly().length(),
            thetas,
            field,
        })
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Number of conjugate pairs on the unit circle.
    pub fn m(&self) -> usize {
        self.thetas.len()
    }

    pub fn prec(&self) -> usize {
        self.field.prec()
    }

    /// `δ₁(α) = 1/L(α)`.
    pub fn delta1(&self) -> BigRational {
        BigRational::new(1.into(), self.length.clone())
    }

    /// `σ₀(Lη) = Σ lₖ α⁻ᵏ`.
    pub fn sigma0_value(&self, eta: &ReducedForm) -> Real {
        let inv = self.alpha.recip();
        horner_real(&eta.numerators, &inv)
    }

    /// `Lη α⁰`, the real embedding of the numerator.
    pub fn numerator_value(&self, eta: &ReducedForm) -> Real {
        horner_real(&eta.numerators, &self.alpha)
    }

    /// Precomputed cos/sin of `2πnθⱼ` and `α⁻ⁿ` for `n ≤ horizon`.
    pub fn orbit_table(&self, horizon: usize) -> OrbitTable {
        let prec = self.prec();
        let alpha_inv = self.alpha.recip().to_f64();
        let m = self.m();
        let mut cos = Vec::with_capacity((horizon + 1) * m);
        let mut sin = Vec::with_capacity((horizon + 1) * m);
        let mut inv_pow = Vec::with_capacity(horizon + 1);
        for n in 0..=horizon {
            let nr = Real::from_u64(n as u64, prec);
            for theta in &self.thetas {
                // Reduce nθ mod 1 before leaving high precision.
                let t = (&nr * theta).frac().to_f64() * std::f64::consts::TAU;
                cos.push(t.cos());
                sin.push(t.sin());
            }
            inv_pow.push(alpha_inv.powi(n.min(i32::MAX as usize) as i32));
        }
        OrbitTable { m, cos, sin, inv_pow }
    }
}

fn horner_real(coeffs: &[BigInt], x: &Real) -> Real {
    let prec = x.prec();
    coeffs
        .iter()
        .rev()
        .fold(Real::zero(prec), |acc, c| &(&acc * x) + &Real::from_bigint(c, prec))
}

/// Per-conjugate amplitudes of `Lη`.
#[derive(Clone, Debug)]
pub struct AmplitudeData {
    pub u: Vec<Real>,
    pub v: Vec<Real>,
    /// `φⱼ = atan2(−Vⱼ, Uⱼ)`, so `Re(σⱼ(Lη)e^{2πinθⱼ}) = Hⱼ cos(2πnθⱼ − φⱼ)`.
    pub phi: Vec<Real>,
    pub h: Vec<Real>,
}

impl AmplitudeData {
    /// `H = Σ Hⱼ`, the maximum of `R(x) = Σ Hⱼ cos 2πxⱼ`.
    pub fn total(&self) -> Real {
        let prec = self.h.first().map(|x| x.prec()).unwrap_or(64);
        self.h.iter().fold(Real::zero(prec), |s, x| &s + x)
    }

    pub fn h_f64(&self) -> Vec<f64> {
        self.h.iter().map(|x| x.to_f64()).collect()
    }
}

/// `U(θⱼ) = Σ lₖ cos 2πkθⱼ`, `V(θⱼ) = Σ lₖ sin 2πkθⱼ` and the derived phase.
pub fn amplitude_data(eta: &ReducedForm, salem: &SalemNumber) -> AmplitudeData {
    let prec = salem.prec();
    let two_pi = Real::two_pi(prec);
    let mut out = AmplitudeData { u: vec![], v: vec![], phi: vec![], h: vec![] };
    for theta in &salem.thetas {
        let mut u = Real::zero(prec);
        let mut v = Real::zero(prec);
        for (k, l) in eta.numerators.iter().enumerate() {
            let angle = &(&Real::from_u64(k as u64, prec) * theta).frac() * &two_pi;
            let l = Real::from_bigint(l, prec);
            u = &u + &(&l * &angle.cos());
            v = &v + &(&l * &angle.sin());
        }
        let h = (&(&u * &u) + &(&v * &v)).sqrt();
        out.phi.push(Real::atan2(&-&v, &u));
        out.u.push(u);
        out.v.push(v);
        out.h.push(h);
    }
    out
}

/// `Rₙ = Σⱼ Hⱼ cos(2πnθⱼ − φⱼ)` at full precision.
pub fn r_n(amp: &AmplitudeData, salem: &SalemNumber, n: u64) -> Real {
    let prec = salem.prec();
    let two_pi = Real::two_pi(prec);
    let nr = Real::from_u64(n, prec);
    let mut r = Real::zero(prec);
    for (j, theta) in salem.thetas.iter().enumerate() {
        let angle = &(&(&nr * theta).frac() * &two_pi) - &amp.phi[j];
        r = &r + &(&amp.h[j] * &angle.cos());
    }
    r
}

/// `|Tr(Lηαⁿ) − (Lηαⁿ + σ₀(Lη)α⁻ⁿ + 2Rₙ)|`, every term at full precision.
pub fn eq1_residual(eta: &ReducedForm, salem: &SalemNumber, n: u64) -> Real {
    let prec = salem.prec();
    let amp = amplitude_data(eta, salem);
    let t_n = Real::from_bigint(&salem.field.integer_trace(&eta.numerators, n as usize), prec);
    let direct = &salem.numerator_value(eta) * &salem.alpha.powi(n);
    let decay = &salem.sigma0_value(eta) * &salem.alpha.recip().powi(n);
    let two = Real::from_i64(2, prec);
    let rhs = &(&direct + &decay) + &(&two * &r_n(&amp, salem, n));
    (&t_n - &rhs).abs()
}

/// `{ηαⁿ}` entirely at the working precision of `salem`.
pub fn fractional_orbit_hp(eta: &ReducedForm, salem: &SalemNumber, n: u64) -> Real {
    let prec = salem.prec();
    let amp = amplitude_data(eta, salem);
    let residue = salem.field.integer_trace(&eta.numerators, n as usize).mod_floor(&eta.denominator);
    let decay = &salem.sigma0_value(eta) * &salem.alpha.recip().powi(n);
    let two = Real::from_i64(2, prec);
    let corr = &decay + &(&two * &r_n(&amp, salem, n));
    let num = &Real::from_bigint(&residue, prec) - &corr;
    (&num / &Real::from_bigint(&eta.denominator, prec)).frac()
}

/// `{ηαⁿ}`: angle reduction at full precision, trigonometry in f64.
pub fn fractional_orbit(eta: &ReducedForm, salem: &SalemNumber, n: u64) -> f64 {
    let evaluator = OrbitEvaluator::new(eta, salem);
    let residue = salem.field.integer_trace(&eta.numerators, n as usize).mod_floor(&eta.denominator);
    let prec = salem.prec();
    let nr = Real::from_u64(n, prec);
    let (cos, sin): (Vec<f64>, Vec<f64>) = salem
        .thetas
        .iter()
        .map(|t| {
            let a = (&nr * t).frac().to_f64() * std::f64::consts::TAU;
            (a.cos(), a.sin())
        })
        .unzip();
    let inv_pow = salem.alpha.recip().powi(n).to_f64();
    evaluator.frac(residue.to_u64().unwrap_or(0), &cos, &sin, inv_pow)
}

/// Shared trigonometric data for bulk orbit evaluation.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    m: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
    inv_pow: Vec<f64>,
}

impl OrbitTable {
    pub fn horizon(&self) -> usize {
        self.inv_pow.len() - 1
    }

    fn row(&self, n: usize) -> (&[f64], &[f64], f64) {
        let r = n * self.m..(n + 1) * self.m;
        (&self.cos[r.clone()], &self.sin[r], self.inv_pow[n])
    }
}

/// Per-η constants for the bulk path.
#[derive(Clone, Debug)]
pub struct OrbitEvaluator {
    u: Vec<f64>,
    v: Vec<f64>,
    sigma0: f64,
    big_l: f64,
}

impl OrbitEvaluator {
    pub fn new(eta: &ReducedForm, salem: &SalemNumber) -> Self {
        let amp = amplitude_data(eta, salem);
        OrbitEvaluator {
            u: amp.u.iter().map(|x| x.to_f64()).collect(),
            v: amp.v.iter().map(|x| x.to_f64()).collect(),
            sigma0: salem.sigma0_value(eta).to_f64(),
            big_l: eta.denominator.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `frac((residue − σ₀α⁻ⁿ − 2Rₙ)/L)` with `Rₙ = Σ Uⱼcos − Vⱼsin`.
    fn frac(&self, residue: u64, cos: &[f64], sin: &[f64], inv_pow: f64) -> f64 {
        let r: f64 = (0..self.u.len()).map(|j| self.u[j] * cos[j] - self.v[j] * sin[j]).sum();
        let x = (residue as f64 - self.sigma0 * inv_pow - 2.0 * r) / self.big_l;
        let f = x - x.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

/// `{ηαⁿ}` for `n = 0..=table.horizon()`.
pub fn fractional_orbit_series(eta: &ReducedForm, salem: &SalemNumber, table: &OrbitTable) -> Result<Vec<f64>> {
    let evaluator = OrbitEvaluator::new(eta, salem);
    let residues = trace::residue_sequence(&salem.field, eta, table.horizon() + 1)?;
    Ok(residues
        .iter()
        .enumerate()
        .map(|(n, &res)| {
            let (c, s, ip) = table.row(n);
            evaluator.frac(res, c, s, ip)
        })
        .collect())
}

/// `max_{n ≤ N} ‖ηαⁿ‖`.
pub fn sup_orbit_distance(eta: &ReducedForm, salem: &SalemNumber, horizon: usize) -> Result<f64> {
    let table = salem.orbit_table(horizon);
    sup_orbit_distance_with(eta, salem, &table)
}

pub fn sup_orbit_distance_with(eta: &ReducedForm, salem: &SalemNumber, table: &OrbitTable) -> Result<f64> {
    Ok(fractional_orbit_series(eta, salem, table)?
        .iter()
        .map(|&f| f.min(1.0 - f))
        .fold(0.0, f64::max))
}

/// `σⱼ(Lη)` for the j-th conjugate pair, straight from the embedding.
pub fn conjugate_value(eta: &ReducedForm, salem: &SalemNumber, j: usize) -> Complex {
    let d = salem.degree();
    let x = salem
        .field
        .element(eta.numerators.iter().map(|l| BigRational::from_integer(l.clone())).collect());
    debug_assert_eq!(x.degree(), d);
    salem.field.embed(&x, 2 + 2 * j)
}

pub(crate) fn big_abs_f64(x: &BigInt) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn example(prec: usize) -> SalemNumber {
        SalemNumber::new(IntPoly::from_i64(&[1, -1, -1, -1, 1]), prec).unwrap()
    }

    fn rf(l: &[i64], big_l: i64) -> ReducedForm {
        ReducedForm::from_i64(l, big_l).unwrap()
    }

    #[test]
    fn salem_data_of_example() {
        let s = example(256);
        assert_eq!(s.m(), 1);
        assert_eq!(s.length, BigInt::from(5));
        let theta = s.thetas[0].to_f64();
        // 2cos 2πθ = 1 − α − 1/α
        let alpha = s.alpha.to_f64();
        assert!(((std::f64::consts::TAU * theta).cos() * 2.0 - (1.0 - alpha - 1.0 / alpha)).abs() < 1e-14);
        assert!(theta > 0.0 && theta < 0.5);
    }

    #[test]
    fn amplitudes_of_simple_elements() {
        let s = example(256);
        let one = amplitude_data(&rf(&[1, 0, 0, 0], 1), &s);
        assert!((one.u[0].to_f64() - 1.0).abs() < 1e-30);
        assert!(one.v[0].abs().to_f64() < 1e-30);
        assert!((one.h[0].to_f64() - 1.0).abs() < 1e-30);
        let a = amplitude_data(&rf(&[0, 1, 0, 0], 1), &s);
        let t = std::f64::consts::TAU * s.thetas[0].to_f64();
        assert!((a.u[0].to_f64() - t.cos()).abs() < 1e-15);
        assert!((a.v[0].to_f64() - t.sin()).abs() < 1e-15);
        assert!((a.h[0].to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_matches_embedding() {
        let s = example(256);
        let eta = rf(&[3, -2, 5, 1], 4);
        let amp = amplitude_data(&eta, &s);
        let sigma = conjugate_value(&eta, &s, 0);
        for n in [0u64, 1, 7, 30] {
            let z = s.field.roots()[2].clone();
            let mut zn = Complex::one(256);
            for _ in 0..n {
                zn = &zn * &z;
            }
            let direct = (&sigma * &zn).re;
            assert!((&direct - &r_n(&amp, &s, n)).abs().log2_abs() < -200.0);
        }
    }

    #[test]
    fn eq1_holds_at_full_precision() {
        let s = example(256);
        let eta = rf(&[7, -3, 2, 9], 5);
        for n in [0u64, 1, 50, 200] {
            assert!(eq1_residual(&eta, &s, n).to_f64() < 1e-12);
        }
    }

    #[test]
    fn bulk_and_full_precision_orbits_agree() {
        let s = example(256);
        let eta = rf(&[1, 2, -1, 3], 3);
        let table = s.orbit_table(200);
        let series = fractional_orbit_series(&eta, &s, &table).unwrap();
        for n in [0usize, 1, 17, 199, 200] {
            let hp = fractional_orbit_hp(&eta, &s, n as u64).to_f64();
            let diff = (series[n] - hp).abs();
            assert!(diff.min(1.0 - diff) < 1e-12, "n = {n}");
            assert!((fractional_orbit(&eta, &s, n as u64) - series[n]).abs() < 1e-14);
        }
    }

    #[test]
    fn orbit_at_zero_is_eta() {
        let s = example(256);
        let eta = rf(&[1, 0, 0, 0], 3);
        assert!((fractional_orbit(&eta, &s, 0) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn not_salem_is_rejected() {
        assert!(matches!(SalemNumber::new(IntPoly::from_i64(&[-1, -1, 1]), 128), Err(Error::NotSalem(_))));
    }
}
