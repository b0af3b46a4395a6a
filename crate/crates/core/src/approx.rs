//! Fejér, Vaaler, Beurling and Selberg trigonometric polynomials, and the
//! Bessel function J₀.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::hp::Real;
use crate::{Error, Result};

/// `P(z) = Σₖ cₖ cos 2πkz + sₖ sin 2πkz`, `k = 0..=N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigPolynomial {
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl TrigPolynomial {
    pub fn zero(degree: usize) -> Self {
        TrigPolynomial { cos_coeffs: vec![0.0; degree + 1], sin_coeffs: vec![0.0; degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.cos_coeffs.len() - 1
    }

    /// Highest index with a nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        (0..=self.degree())
            .rev()
            .find(|&k| self.cos_coeffs[k] != 0.0 || self.sin_coeffs[k] != 0.0)
            .unwrap_or(0)
    }

    pub fn eval(&self, z: f64) -> f64 {
        // Reduce first so that z and z + 1 produce identical rotations.
        let z = z.rem_euclid(1.0);
        let (s1, c1) = (TAU * z).sin_cos();
        let (mut c, mut s) = (1.0f64, 0.0f64);
        let mut total = self.cos_coeffs[0];
        for k in 1..=self.degree() {
            let (nc, ns) = (c * c1 - s * s1, s * c1 + c * s1);
            c = nc;
            s = ns;
            if k % 16 == 0 {
                // Resynchronize the rotation to keep the error flat in k.
                let (sk, ck) = (TAU * (k as f64 * z).rem_euclid(1.0)).sin_cos();
                c = ck;
                s = sk;
            }
            total += self.cos_coeffs[k] * c + self.sin_coeffs[k] * s;
        }
        total
    }

    /// `∫₀¹ P = c₀`.
    pub fn integral(&self) -> f64 {
        self.cos_coeffs[0]
    }

    /// `z ↦ P(z − t)`.
    pub fn shifted(&self, t: f64) -> Self {
        let mut out = self.clone();
        for k in 1..=self.degree() {
            let (sn, cs) = (TAU * (k as f64 * t).rem_euclid(1.0)).sin_cos();
            out.cos_coeffs[k] = self.cos_coeffs[k] * cs - self.sin_coeffs[k] * sn;
            out.sin_coeffs[k] = self.cos_coeffs[k] * sn + self.sin_coeffs[k] * cs;
        }
        out
    }

    /// `z ↦ P(−z)`.
    pub fn reflected(&self) -> Self {
        TrigPolynomial { cos_coeffs: self.cos_coeffs.clone(), sin_coeffs: self.sin_coeffs.iter().map(|s| -s).collect() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        TrigPolynomial {
            cos_coeffs: self.cos_coeffs.iter().map(|x| x * c).collect(),
            sin_coeffs: self.sin_coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn plus(&self, other: &TrigPolynomial) -> Self {
        let n = self.degree().max(other.degree());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        TrigPolynomial {
            cos_coeffs: (0..=n).map(|k| get(&self.cos_coeffs, k) + get(&other.cos_coeffs, k)).collect(),
            sin_coeffs: (0..=n).map(|k| get(&self.sin_coeffs, k) + get(&other.sin_coeffs, k)).collect(),
        }
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.cos_coeffs[0] += c;
        out
    }

    /// Rows `(k, cₖ, sₖ)` for tabular output.
    pub fn coefficient_rows(&self) -> Vec<(usize, f64, f64)> {
        (0..=self.degree()).map(|k| (k, self.cos_coeffs[k], self.sin_coeffs[k])).collect()
    }
}

/// `Δ_N(z) = Σ_{|k|<N} (1 − |k|/N) e^{2πikz}`, of degree N − 1.
pub fn fejer(n: usize) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("Fejér kernel needs N ≥ 1".into()));
    }
    let mut p = TrigPolynomial::zero(n - 1);
    p.cos_coeffs[0] = 1.0;
    for k in 1..n {
        p.cos_coeffs[k] = 2.0 * (1.0 - k as f64 / n as f64);
    }
    Ok(p)
}

/// `(1/N)(sin Nπz / sin πz)²`, with the limit N at integers.
pub fn fejer_closed_form(n: usize, z: f64) -> f64 {
    let x = z.rem_euclid(1.0);
    let d = (PI * x).sin();
    if d.abs() < 1e-12 {
        return n as f64;
    }
    let num = (n as f64 * PI * x).sin();
    num * num / (n as f64 * d * d)
}

/// `f(x) = −(1 − x)cot(πx) − 1/π` on (0, 1).
pub fn vaaler_f(x: f64) -> f64 {
    -(1.0 - x) / (PI * x).tan() - 1.0 / PI
}

/// The piecewise bound on `|f|` for a split point `ξ < 1/2`.
pub fn vaaler_f_bound(x: f64, xi: f64) -> f64 {
    if x <= xi {
        PI * xi / (PI * xi).sin() / (PI * x) + 1.0 / PI
    } else {
        (1.0 - xi) / (PI * (1.0 - xi)).sin() + 1.0 / PI
    }
}

/// `V_N(z) = (1/(N+1)) Σ_{k=1}^N f(k/(N+1)) sin 2πkz`.
pub fn vaaler(n: usize) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("Vaaler polynomial needs N ≥ 1".into()));
    }
    let mut p = TrigPolynomial::zero(n);
    let scale = 1.0 / (n + 1) as f64;
    for k in 1..=n {
        p.sin_coeffs[k] = scale * vaaler_f(k as f64 * scale);
    }
    Ok(p)
}

/// `B_N = V_N + Δ_{N+1}/(2N + 2)`, a majorant of the sawtooth.
pub fn beurling(n: usize) -> Result<TrigPolynomial> {
    let v = vaaler(n)?;
    let d = fejer(n + 1)?.scaled(1.0 / (2 * n + 2) as f64);
    Ok(v.plus(&d))
}

/// `s(x) = {x} − 1/2` off the integers, 0 on them.
pub fn sawtooth(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    if f == 0.0 {
        0.0
    } else {
        f - 0.5
    }
}

/// Periodic extension of the closed interval `[a, b]`.
pub fn indicator(a: f64, b: f64, z: f64) -> f64 {
    let x = z.rem_euclid(1.0);
    let inside = (a <= x && x <= b) || (b >= 1.0 && x == 0.0);
    if inside {
        1.0
    } else {
        0.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelbergPair {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub s_plus: TrigPolynomial,
    pub s_minus: TrigPolynomial,
}

/// Points used by the construction-time sandwich check.
pub const SANDWICH_GRID: usize = 10_000;
pub const SANDWICH_TOL: f64 = 1e-9;

impl SelbergPair {
    /// `S⁺ = b − a + B_N(z − b) + B_N(a − z)`, `S⁻ = b − a − B_N(b − z) − B_N(z − a)`.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidArgument(format!("need 0 ≤ a < b ≤ 1, got [{a}, {b}]")));
        }
        let bn = beurling(n)?;
        let s_plus = bn.shifted(b).plus(&bn.reflected().shifted(a)).plus_constant(b - a);
        let s_minus = bn.reflected().shifted(b).plus(&bn.shifted(a)).scaled(-1.0).plus_constant(b - a);
        let pair = SelbergPair { a, b, n, s_plus, s_minus };
        let (lo_plus, lo_minus, z) = pair.grid_margins(SANDWICH_GRID);
        if lo_plus < -SANDWICH_TOL {
            return Err(Error::SandwichViolation(lo_plus, z.0));
        }
        if lo_minus < -SANDWICH_TOL {
            return Err(Error::SandwichViolation(lo_minus, z.1));
        }
        Ok(pair)
    }

    pub fn chi(&self, z: f64) -> f64 {
        indicator(self.a, self.b, z)
    }

    /// `(min(S⁺ − χ), min(χ − S⁻), (argmin⁺, argmin⁻))` over `i/points` and the endpoints.
    pub fn grid_margins(&self, points: usize) -> (f64, f64, (f64, f64)) {
        let mut lo_plus = (f64::INFINITY, 0.0);
        let mut lo_minus = (f64::INFINITY, 0.0);
        let grid = (0..points).map(|i| i as f64 / points as f64).chain([self.a, self.b]);
        for z in grid {
            let chi = self.chi(z);
            let up = self.s_plus.eval(z) - chi;
            let down = chi - self.s_minus.eval(z);
            if up < lo_plus.0 {
                lo_plus = (up, z);
            }
            if down < lo_minus.0 {
                lo_minus = (down, z);
            }
        }
        (lo_plus.0, lo_minus.0, (lo_plus.1, lo_minus.1))
    }
}

/// Series/asymptotic switch point for [`bessel_j0`].
pub const BESSEL_SERIES_LIMIT: f64 = 25.0;

/// `J₀(x)` for `x ≥ 0`: power series at 160 bits up to the switch point,
/// Hankel asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= BESSEL_SERIES_LIMIT {
        bessel_series(x)
    } else {
        bessel_asymptotic(x)
    }
}

fn bessel_series(x: f64) -> f64 {
    let prec = 160;
    let q = &(&Real::from_f64(x, prec) * &Real::from_f64(x, prec)) / &Real::from_i64(-4, prec);
    let mut term = Real::one(prec);
    let mut sum = Real::one(prec);
    for k in 1..200u64 {
        let kk = Real::from_u64(k * k, prec);
        term = &(&term * &q) / &kk;
        sum = &sum + &term;
        if term.is_zero() || term.log2_abs() < -120.0 {
            break;
        }
    }
    sum.to_f64()
}

fn bessel_asymptotic(x: f64) -> f64 {
    // aₖ = ∏_{i=1}^k (−(2i−1)²) / (k! 8ᵏ); P = Σ (−1)ᵏ a₂ₖ/x²ᵏ, Q = Σ (−1)ᵏ a₂ₖ₊₁/x²ᵏ⁺¹.
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= -(odd * odd) / (k as f64 * 8.0 * x);
        }
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-18 {
            break;
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselIdentity {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// `∫_{Tᵐ} e^{4πik Σ Hⱼ cos 2πxⱼ} dx` by a tensor trapezoid rule against
/// `∏ J₀(4πkHⱼ)`.
pub fn bessel_product_identity(h: &[f64], k: u32) -> Result<BesselIdentity> {
    if k == 0 || h.is_empty() || h.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument("need k ≥ 1 and positive H".into()));
    }
    let amps: Vec<f64> = h.iter().map(|&hj| 4.0 * PI * k as f64 * hj).collect();
    // The trapezoid error for e^{ia cos 2πx} is about 2|J_n(a)|, negligible once n ≳ 1.25a + 40.
    let sizes: Vec<usize> = amps.iter().map(|&a| (((1.25 * a).ceil() as usize + 40) + 1) & !1).collect();
    let cos_tables: Vec<Vec<f64>> = sizes
        .iter()
        .zip(&amps)
        .map(|(&n, &a)| (0..n).map(|i| a * (TAU * i as f64 / n as f64).cos()).collect())
        .collect();
    let total: usize = sizes.iter().product();
    let (mut re, mut im) = (Kahan::default(), Kahan::default());
    for idx in 0..total {
        let mut rest = idx;
        let mut phase = 0.0;
        for (j, &n) in sizes.iter().enumerate() {
            phase += cos_tables[j][rest % n];
            rest /= n;
        }
        let (s, c) = phase.sin_cos();
        re.add(c);
        im.add(s);
    }
    let lhs_re = re.sum / total as f64;
    let lhs_im = im.sum / total as f64;
    let rhs: f64 = amps.iter().map(|&a| bessel_j0(a)).product();
    Ok(BesselIdentity { lhs_re, lhs_im, rhs, diff: (lhs_re - rhs).hypot(lhs_im) })
}

/// Compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    pub sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(1/π) ∫₀^π cos(x sin t) dt` by the trapezoid rule, exact to rounding
    /// for entire periodic integrands once the grid resolves x.
    fn j0_oracle(x: f64) -> f64 {
        let n = (2.0 * x) as usize + 200;
        let mut s = Kahan::default();
        for i in 0..n {
            s.add((x * (PI * i as f64 / n as f64).sin()).cos());
        }
        s.sum / n as f64
    }

    #[test]
    fn fejer_values() {
        for n in [1usize, 2, 5, 17] {
            let p = fejer(n).unwrap();
            assert!((p.eval(0.0) - n as f64).abs() < 1e-12);
            assert_eq!(p.integral(), 1.0);
            for i in 0..200 {
                let z = i as f64 / 200.0 + 0.0013;
                assert!((p.eval(z) - fejer_closed_form(n, z)).abs() < 1e-11);
                assert!(p.eval(z) > -1e-12);
            }
        }
    }

    #[test]
    fn vaaler_is_odd_and_bounded() {
        let v = vaaler(12).unwrap();
        assert_eq!(v.eval(0.0), 0.0);
        for z in [0.1, 0.37, 0.8] {
            assert!((v.eval(-z) + v.eval(z)).abs() < 1e-14);
        }
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            assert!(vaaler_f(x).abs() <= vaaler_f_bound(x, 0.25) + 1e-12, "x = {x}");
        }
    }

    #[test]
    fn beurling_majorizes_sawtooth() {
        for n in [4usize, 8, 16, 32, 64] {
            let b = beurling(n).unwrap();
            assert!((b.integral() - 1.0 / (2 * n + 2) as f64).abs() < 1e-15);
            assert!((b.eval(0.0) - 0.5).abs() < 1e-12);
            for i in 1..10_000 {
                let x = i as f64 / 10_000.0;
                assert!(b.eval(x) >= sawtooth(x) - 1e-12, "N = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn selberg_integrals_and_degree() {
        let p = SelbergPair::new(0.2, 0.55, 10).unwrap();
        assert!((p.s_plus.integral() - (0.35 + 1.0 / 11.0)).abs() < 1e-12);
        assert!((p.s_minus.integral() - (0.35 - 1.0 / 11.0)).abs() < 1e-12);
        assert!(p.s_plus.effective_degree() <= 11);
        let full = SelbergPair::new(0.0, 1.0, 6).unwrap();
        let (up, down, _) = full.grid_margins(1000);
        assert!(up >= -1e-12 && down >= -1e-12);
        assert!(SelbergPair::new(0.5, 0.5, 3).is_err());
    }

    #[test]
    fn periodicity() {
        let p = SelbergPair::new(0.1, 0.3, 20).unwrap();
        for z in [0.05, 0.41, 0.93] {
            assert!((p.s_plus.eval(z) - p.s_plus.eval(z + 1.0)).abs() < 1e-12);
            assert!((p.s_minus.eval(z) - p.s_minus.eval(z - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn bessel_reference_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-15);
        assert!(bessel_j0(10.0).abs() <= (2.0 / (10.0 * PI)).sqrt());
        // First zero.
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bessel_j0(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_773).abs() < 1e-13);
    }

    #[test]
    fn bessel_matches_integral_oracle() {
        for x in [0.5, 3.0, 12.0, 24.9, 25.1, 40.0, 100.0, 333.3, 700.0] {
            let diff = (bessel_j0(x) - j0_oracle(x)).abs();
            assert!(diff < 1e-12, "x = {x}: {diff:e}");
        }
    }

    #[test]
    fn bessel_ode_residual() {
        let h = 1e-3;
        for x in [0.7, 5.0, 20.0, 30.0, 80.0] {
            let (ym, y0, yp) = (bessel_j0(x - h), bessel_j0(x), bessel_j0(x + h));
            let d2 = (yp - 2.0 * y0 + ym) / (h * h);
            let d1 = (yp - ym) / (2.0 * h);
            assert!((x * d2 + d1 + x * y0).abs() < 1e-5 * x.max(1.0), "x = {x}");
        }
    }

    #[test]
    fn product_identity_small_cases() {
        let r = bessel_product_identity(&[1.0], 1).unwrap();
        assert!(r.diff < 1e-10);
        let r = bessel_product_identity(&[1e-9], 1).unwrap();
        assert!((r.lhs_re - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        let r = bessel_product_identity(&[0.3, 2.7], 7).unwrap();
        assert!(r.diff < 1e-8);
    }
}
