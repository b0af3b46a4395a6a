//! Empirical and limiting frequencies of `{ηαⁿ}` in a region of [0, 1].

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{amplitude_data, fractional_orbit_series, trace_orbit, OrbitTable, SalemNumber};
use crate::numberfield::ReducedForm;
use crate::{Error, Result};

/// A measurable subset of [0, 1] with a closed-form length structure.
pub trait Region: Sync {
    fn contains(&self, x: f64) -> bool;
    /// Disjoint closed intervals making up the region.
    fn intervals(&self) -> Vec<(f64, f64)>;
}

/// Closed interval `[a, b] ⊆ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
            return Err(Error::InvalidArgument(format!("[{a}, {b}] is not a subinterval of [0, 1]")));
        }
        Ok(Interval { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

impl Region for Interval {
    fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        vec![(self.a, self.b)]
    }
}

/// `[0, 1] \ J`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complement(pub Interval);

impl Region for Complement {
    fn contains(&self, x: f64) -> bool {
        !self.0.contains(x)
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if self.0.a > 0.0 {
            out.push((0.0, self.0.a));
        }
        if self.0.b < 1.0 {
            out.push((self.0.b, 1.0));
        }
        out
    }
}

/// `#{1 ≤ n ≤ N : {ηαⁿ} ∈ J} / N`.
pub fn empirical_frequency(eta: &ReducedForm, salem: &SalemNumber, region: &dyn Region, n: usize) -> Result<BigRational> {
    let table = salem.orbit_table(n);
    empirical_frequency_with(eta, salem, region, &table)
}

/// As [`empirical_frequency`] with `N = table.horizon()`.
pub fn empirical_frequency_with(
    eta: &ReducedForm,
    salem: &SalemNumber,
    region: &dyn Region,
    table: &OrbitTable,
) -> Result<BigRational> {
    let n = table.horizon();
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let series = fractional_orbit_series(eta, salem, table)?;
    let count = series[1..].iter().filter(|&&x| region.contains(x)).count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(n)))
}

/// Default tolerances for the limiting frequency.
pub const TORUS_TOL_M1: f64 = 1e-9;
pub const TORUS_TOL_M2: f64 = 1e-6;

/// `(1/P) Σⱼ ∫ χ_J({(aⱼ − 2R(x))/L}) dx` over the m-torus.
pub fn torus_frequency(eta: &ReducedForm, salem: &SalemNumber, region: &dyn Region) -> Result<f64> {
    let orbit = trace_orbit(&salem.field, eta, salem.degree())?;
    let h = amplitude_data(eta, salem).h_f64();
    let big_l = super::big_abs_f64(&eta.denominator);
    let tol = if h.len() == 1 { TORUS_TOL_M1 } else { TORUS_TOL_M2 };
    let intervals = region.intervals();
    let mut total = 0.0;
    for &a in &orbit.residues {
        total += torus_integral(a as f64, big_l, &h, &intervals, tol)?;
    }
    Ok(total / orbit.period as f64)
}

/// `∫_{Tᵐ} χ({(a − 2Σ Hⱼ cos 2πxⱼ)/L} ∈ ∪ intervals) dx`.
pub fn torus_integral(a: f64, big_l: f64, h: &[f64], intervals: &[(f64, f64)], tol: f64) -> Result<f64> {
    let active: Vec<f64> = h.iter().copied().filter(|&x| x > 0.0).collect();
    match active.len() {
        0 => {
            let y = (a / big_l).rem_euclid(1.0);
            Ok(if intervals.iter().any(|&(c1, c2)| c1 <= y && y <= c2) { 1.0 } else { 0.0 })
        }
        1 => Ok(cosine_measure(a, big_l, active[0], intervals)),
        _ => tensor_quadrature(a, big_l, &active, intervals, tol),
    }
}

/// Measure of `{x ∈ [0,1) : {(a − 2H cos 2πx)/L} ∈ ∪ intervals}` from arccos
/// interval lengths: `|{x : cos 2πx ∈ [u, v]}| = (arccos u − arccos v)/π`.
pub fn cosine_measure(a: f64, big_l: f64, h: f64, intervals: &[(f64, f64)]) -> f64 {
    if h <= 0.0 {
        let y = (a / big_l).rem_euclid(1.0);
        return if intervals.iter().any(|&(c1, c2)| c1 <= y && y <= c2) { 1.0 } else { 0.0 };
    }
    let lo = (a - 2.0 * h) / big_l;
    let hi = (a + 2.0 * h) / big_l;
    let mut total = 0.0;
    for &(c1, c2) in intervals {
        let k_min = (lo - c2).floor() as i64;
        let k_max = (hi - c1).ceil() as i64;
        for k in k_min..=k_max {
            // y ∈ [k + c1, k + c2]  ⇔  cos 2πx ∈ [(a − L(k + c2))/2H, (a − L(k + c1))/2H]
            let u = ((a - big_l * (k as f64 + c2)) / (2.0 * h)).clamp(-1.0, 1.0);
            let v = ((a - big_l * (k as f64 + c1)) / (2.0 * h)).clamp(-1.0, 1.0);
            if v > u {
                total += (u.acos() - v.acos()) / std::f64::consts::PI;
            }
        }
    }
    total.min(1.0)
}

/// Adaptive cell classification for one cosine, used to cross-check
/// [`cosine_measure`]. Returns `(estimate, error bound)`.
pub fn cosine_measure_adaptive(a: f64, big_l: f64, h: f64, intervals: &[(f64, f64)], tol: f64) -> (f64, f64) {
    let y = |x: f64| (a - 2.0 * h * (std::f64::consts::TAU * x).cos()) / big_l;
    // Classify the image [lo, hi] of a cell: Some(true) inside, Some(false) outside.
    let classify = |lo: f64, hi: f64| -> Option<bool> {
        let mut inside = false;
        for &(c1, c2) in intervals {
            let k_lo = (lo - c2).floor() as i64;
            let k_hi = (hi - c1).ceil() as i64;
            for k in k_lo..=k_hi {
                let (s, e) = (k as f64 + c1, k as f64 + c2);
                if s <= lo && hi <= e {
                    inside = true;
                } else if hi >= s && lo <= e {
                    return None;
                }
            }
        }
        Some(inside)
    };
    let mut estimate = 0.0;
    let mut err = 0.0;
    // y is monotone on [0, 1/2] and on [1/2, 1].
    let mut stack: Vec<(f64, f64)> = vec![(0.0, 0.5), (0.5, 1.0)];
    let min_width = tol / 64.0;
    while let Some((x0, x1)) = stack.pop() {
        let (y0, y1) = (y(x0), y(x1));
        let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        match classify(lo, hi) {
            Some(true) => estimate += x1 - x0,
            Some(false) => {}
            None if x1 - x0 <= min_width => {
                estimate += 0.5 * (x1 - x0);
                err += 0.5 * (x1 - x0);
            }
            None => {
                let mid = 0.5 * (x0 + x1);
                stack.push((x0, mid));
                stack.push((mid, x1));
            }
        }
    }
    (estimate, err)
}

/// Closed form in the last coordinate, midpoint tensor grid in the others
/// with grid doubling and Richardson extrapolation.
fn tensor_quadrature(a: f64, big_l: f64, h: &[f64], intervals: &[(f64, f64)], tol: f64) -> Result<f64> {
    let (outer, last) = h.split_at(h.len() - 1);
    let dims = outer.len();
    let eval = |n: usize| -> f64 {
        // Midpoint grid of n points per outer axis; cos values cached once.
        let cos: Vec<f64> = (0..n).map(|i| ((i as f64 + 0.5) / n as f64 * std::f64::consts::TAU).cos()).collect();
        let total_points = n.pow(dims as u32);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for idx in 0..total_points {
            let mut rest = idx;
            let mut shift = 0.0;
            for &hj in outer {
                shift += hj * cos[rest % n];
                rest /= n;
            }
            let v = cosine_measure(a - 2.0 * shift, big_l, last[0], intervals);
            // Kahan summation keeps the grid sums reproducible to the last bit.
            let y = v - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum / total_points as f64
    };
    let max_points: usize = 1 << 22;
    let mut n = 16usize;
    let mut prev = eval(n);
    let mut prev_diff: Option<f64> = None;
    let mut last_err = f64::INFINITY;
    loop {
        let next_n = n * 2;
        if next_n.pow(dims as u32) > max_points {
            return Err(Error::QuadratureNotConverged(last_err));
        }
        let cur = eval(next_n);
        let diff = cur - prev;
        if diff.abs() < tol {
            // Richardson step with the observed order, kept only when the
            // order estimate is sane.
            let refined = prev_diff
                .filter(|pd| pd.abs() > diff.abs() && diff != 0.0)
                .map(|pd| {
                    let ratio = pd.abs() / diff.abs();
                    if (1.4..=16.0).contains(&ratio) {
                        cur + diff / (ratio - 1.0)
                    } else {
                        cur
                    }
                })
                .unwrap_or(cur);
            return Ok(refined.clamp(0.0, 1.0));
        }
        last_err = diff.abs();
        prev_diff = Some(diff);
        prev = cur;
        n = next_n;
    }
}
