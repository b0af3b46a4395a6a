//! Exhaustive search for η with a uniformly small orbit `‖ηαⁿ‖`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::{amplitude_data, sup_orbit_distance_with, trace_orbit, SalemNumber};
use crate::numberfield::ReducedForm;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: ReducedForm,
    /// `max_{n ≤ N} ‖best·αⁿ‖`.
    pub sup: f64,
    pub meets_epsilon: bool,
    pub candidates: usize,
    /// Candidates discarded by the residue lower bound without an orbit run.
    pub pruned: usize,
}

/// Lower bound on `max_{N−P ≤ n ≤ N} ‖ηαⁿ‖` from the limit residues:
/// `maxⱼ ‖aⱼ/L‖ − 2H/L − |σ₀(Lη)| α^{−(N−P)}/L`.
pub fn residue_lower_bound(eta: &ReducedForm, salem: &SalemNumber, horizon: usize) -> Result<f64> {
    let orbit = trace_orbit(&salem.field, eta, salem.degree().max(1))?;
    if orbit.period > horizon {
        return Ok(0.0);
    }
    let big_l = super::big_abs_f64(&eta.denominator);
    let h = amplitude_data(eta, salem).total().to_f64();
    let sigma = salem.sigma0_value(eta).abs().to_f64();
    let decay = salem.alpha.to_f64().powf(-((horizon - orbit.period) as f64));
    let best_residue = orbit
        .residues
        .iter()
        .map(|&a| {
            let x = a as f64 / big_l;
            x.min(1.0 - x)
        })
        .fold(0.0, f64::max);
    Ok(best_residue - 2.0 * h / big_l - sigma * decay / big_l)
}

/// All nonzero reduced forms with `L ≤ l_bound` and `|lⱼ| ≤ coeff_bound`, in a
/// fixed enumeration order.
pub fn enumerate_reduced(d: usize, coeff_bound: i64, l_bound: i64) -> Vec<ReducedForm> {
    let mut out = Vec::new();
    let width = (2 * coeff_bound + 1) as usize;
    let total = width.pow(d as u32);
    for big_l in 1..=l_bound {
        let l_big = BigInt::from(big_l);
        for idx in 0..total {
            let mut rest = idx;
            let nums: Vec<BigInt> = (0..d)
                .map(|_| {
                    let v = (rest % width) as i64 - coeff_bound;
                    rest /= width;
                    BigInt::from(v)
                })
                .collect();
            if nums.iter().all(|x| x == &BigInt::from(0)) {
                continue;
            }
            let g = nums.iter().fold(l_big.clone(), |g, x| g.gcd(x));
            if g != BigInt::from(1) {
                continue;
            }
            out.push(ReducedForm { numerators: nums, denominator: l_big.clone() });
        }
    }
    out
}

/// Minimizes `max_{n ≤ N} ‖ηαⁿ‖` over the bounded reduced forms. Candidates
/// are visited in order of their residue lower bound and the scan stops once
/// that bound exceeds the best sup found; ties resolve to the earliest
/// candidate in enumeration order, so the result does not depend on the
/// thread schedule.
pub fn search_small_eta(
    salem: &SalemNumber,
    epsilon: f64,
    coeff_bound: i64,
    l_bound: i64,
    horizon: usize,
) -> Result<SearchResult> {
    let candidates = enumerate_reduced(salem.degree(), coeff_bound, l_bound);
    let table = salem.orbit_table(horizon);
    let bounds: Vec<f64> = candidates
        .par_iter()
        .map(|eta| residue_lower_bound(eta, salem, horizon))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| bounds[i].total_cmp(&bounds[j]).then(i.cmp(&j)));

    let mut best: Option<(f64, usize)> = None;
    let mut evaluated = 0usize;
    // Fixed batch size so that the pruning statistics do not depend on the pool.
    let batch = 64;
    let mut pos = 0usize;
    while pos < order.len() {
        if let Some((b, _)) = best {
            if bounds[order[pos]] > b {
                break;
            }
        }
        let end = (pos + batch).min(order.len());
        let sups: Vec<(f64, usize)> = order[pos..end]
            .par_iter()
            .map(|&i| sup_orbit_distance_with(&candidates[i], salem, &table).map(|s| (s, i)))
            .collect::<Result<Vec<_>>>()?;
        for (s, i) in sups {
            if let Some((b, _)) = best {
                // A candidate skipped by the bound test would have lb > b.
                if bounds[i] > b {
                    continue;
                }
            }
            evaluated += 1;
            best = match best {
                Some((b, bi)) if b < s || (b == s && bi < i) => Some((b, bi)),
                _ => Some((s, i)),
            };
        }
        pos = end;
    }
    let (sup, idx) = best.expect("at least one candidate");
    Ok(SearchResult {
        best: candidates[idx].clone(),
        sup,
        meets_epsilon: sup < epsilon,
        candidates: candidates.len(),
        pruned: candidates.len() - evaluated,
    })
}
