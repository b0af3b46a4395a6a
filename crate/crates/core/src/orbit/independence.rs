//! Probe for integer relations `k₀ + k₁θ₁ + … + k_mθ_m = 0`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::SalemNumber;
use crate::cf;
use crate::hp::Real;
use crate::numberfield::NumberField;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport {
    /// `(k₀, k₁, …, k_m)` of the smallest residual found.
    pub best_relation: Vec<i64>,
    /// `|k₀ + Σ kⱼθⱼ|` for that relation, at the working precision.
    pub min_residual: f64,
    /// The same residual recomputed at twice the precision.
    pub min_residual_doubled: f64,
    /// A relation vanishing to working precision at both precisions.
    pub relation_found: bool,
    /// For m = 1: `min q²|θ − p/q|` over convergents with `q ≤ Q_max`.
    pub min_convergent_ratio: Option<f64>,
    /// For m = 1: some convergent has `|θ − p/q| < 10⁻³/(2q²)` at both precisions.
    pub convergent_flagged: bool,
    pub coeff_bound: i64,
    pub q_max: u64,
}

/// Runs the probe on the conjugate angles of `salem`.
pub fn rational_independence_probe(salem: &SalemNumber, coeff_bound: i64, q_max: u64) -> Result<IndependenceReport> {
    let f = salem.field.min_poly().clone();
    let prec = salem.prec();
    let doubled = SalemNumber::from_field(NumberField::new(f, 2 * prec)?)?;
    let base = salem.thetas.clone();
    let twice = doubled.thetas.clone();
    Ok(rational_independence_probe_thetas(
        |p| if p == prec { base.clone() } else { twice.clone() },
        prec,
        coeff_bound,
        q_max,
    ))
}

/// Probe for arbitrary angles; `thetas(prec)` must return them at `prec` bits
/// and is called with the working precision and with twice that.
pub fn rational_independence_probe_thetas(
    thetas: impl Fn(usize) -> Vec<Real>,
    prec: usize,
    coeff_bound: i64,
    q_max: u64,
) -> IndependenceReport {
    let t1 = thetas(prec);
    let t2 = thetas(2 * prec);
    let m = t1.len();
    let f64_thetas: Vec<f64> = t1.iter().map(|t| t.to_f64()).collect();

    // Coarse scan in f64 over half the coefficient box (k and −k give the
    // same residual), keeping the smallest few for high-precision rechecks.
    let width = (2 * coeff_bound + 1) as usize;
    let total = width.pow(m as u32);
    let keep = 16usize;
    let mut coarse: Vec<(f64, usize)> = (1..total)
        .into_par_iter()
        .filter_map(|idx| {
            let k = decode(idx, width, m, coeff_bound);
            let first = k.iter().find(|&&x| x != 0).copied()?;
            if first < 0 {
                return None;
            }
            let s: f64 = k.iter().zip(&f64_thetas).map(|(&ki, &t)| ki as f64 * t).sum();
            Some(((s - s.round()).abs(), idx))
        })
        .collect();
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    coarse.truncate(keep);

    let residual = |k: &[i64], th: &[Real]| -> (Real, i64) {
        let p = th[0].prec();
        let s = k
            .iter()
            .zip(th)
            .fold(Real::zero(p), |acc, (&ki, t)| &acc + &(&Real::from_i64(ki, p) * t));
        let k0 = -s.round_to_bigint().to_i64().unwrap_or(0);
        (s.dist_to_int(), k0)
    };
    let mut best: Option<(Real, Vec<i64>, Real)> = None;
    for &(_, idx) in &coarse {
        let k = decode(idx, width, m, coeff_bound);
        let (r1, k0) = residual(&k, &t1);
        let (r2, _) = residual(&k, &t2);
        if best.as_ref().is_none_or(|(b, _, _)| r1 < *b) {
            let mut rel = vec![k0];
            rel.extend(&k);
            best = Some((r1, rel, r2));
        }
    }
    let vanishes = |r: &Real, p: usize| r.is_zero() || r.log2_abs() < -(p as f64) / 2.0;
    let (min_residual, best_relation, min_residual_doubled, relation_found) = match best {
        Some((r1, rel, r2)) => {
            let found = vanishes(&r1, prec) && vanishes(&r2, 2 * prec);
            (r1.to_f64(), rel, r2.to_f64(), found)
        }
        None => (f64::NAN, vec![], f64::NAN, false),
    };

    let (min_convergent_ratio, convergent_flagged) = if m == 1 {
        convergent_probe(&t1[0], &t2[0], q_max)
    } else {
        (None, false)
    };

    IndependenceReport {
        best_relation,
        min_residual,
        min_residual_doubled,
        relation_found,
        min_convergent_ratio,
        convergent_flagged,
        coeff_bound,
        q_max,
    }
}

fn decode(mut idx: usize, width: usize, m: usize, bound: i64) -> Vec<i64> {
    (0..m)
        .map(|_| {
            let v = (idx % width) as i64 - bound;
            idx /= width;
            v
        })
        .collect()
}

/// `q²|θ − p/q|` over the convergents, flagged persistence of tiny ratios.
fn convergent_probe(theta: &Real, theta2: &Real, q_max: u64) -> (Option<f64>, bool) {
    let qm = BigInt::from(q_max);
    let e1 = cf::expand(theta, &qm);
    let ratio = |t: &Real, q: &BigInt| -> f64 {
        let qq = Real::from_bigint(q, t.prec());
        (&qq * &cf::dist_qtheta(t, q)).to_f64()
    };
    let threshold = 0.5e-3;
    let mut min_ratio: Option<f64> = None;
    let mut flagged = false;
    for c in &e1.convergents {
        if c.q < BigInt::from(1) {
            continue;
        }
        let r1 = ratio(theta, &c.q);
        min_ratio = Some(min_ratio.map_or(r1, |m: f64| m.min(r1)));
        if r1 < threshold && ratio(theta2, &c.q) < threshold {
            flagged = true;
        }
    }
    (min_ratio, flagged || e1.terminated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::tests::example;

    #[test]
    fn rational_angle_is_detected() {
        let report = rational_independence_probe_thetas(
            |p| vec![&Real::from_i64(3, p) / &Real::from_i64(7, p)],
            256,
            20,
            1_000_000,
        );
        assert!(report.relation_found);
        assert!(report.convergent_flagged);
        let k = &report.best_relation;
        assert_eq!(k[0] * 7 + k[1] * 3, 0);
    }

    #[test]
    fn example_angle_has_no_small_relation() {
        let s = example(256);
        let report = rational_independence_probe(&s, 1000, 1_000_000).unwrap();
        assert!(!report.relation_found);
        assert!(!report.convergent_flagged);
        assert!(report.min_residual > 1e-12);
    }

    #[test]
    fn two_angle_relation_is_detected() {
        let report = rational_independence_probe_thetas(
            |p| {
                let sqrt2 = Real::from_i64(2, p).sqrt();
                let a = &sqrt2 / &Real::from_i64(5, p);
                let b = &(&Real::one(p) - &(&Real::from_i64(2, p) * &a)) / &Real::from_i64(3, p);
                vec![a, b]
            },
            256,
            5,
            1000,
        );
        // 2a + 3b = 1
        assert!(report.relation_found);
        let k = &report.best_relation;
        assert_eq!((k[1], k[2]), (2, 3));
    }
}
