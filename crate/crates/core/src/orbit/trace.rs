use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::numberfield::{NumberField, ReducedForm};
use crate::{Error, Result};

/// Residues of `Tr(Lηαⁿ) mod L` and their period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceOrbit {
    pub eta: ReducedForm,
    pub period: usize,
    /// Index where the cycle starts; zero whenever the constant term of f is ±1.
    pub preperiod: usize,
    /// Residues before the cycle starts (`preperiod` values).
    pub prefix: Vec<u64>,
    /// One full cycle `a₀, …, a_{P−1}` starting at `n = preperiod`.
    pub residues: Vec<u64>,
    /// `Tr(Lηαⁿ)` for `n < d`.
    pub initial_traces: Vec<BigInt>,
    pub horizon: usize,
}

impl TraceOrbit {
    /// Residue at any `n`, from the cycle.
    pub fn residue(&self, n: usize) -> u64 {
        if n < self.preperiod {
            self.prefix[n]
        } else {
            self.residues[(n - self.preperiod) % self.period]
        }
    }
}

/// Exact traces `Tr(Lηαⁿ)`, n = 0, 1, …, via `T_{n+d} = −Σ aₖ T_{n+k}`.
#[derive(Clone, Debug)]
pub struct IntegerTraces {
    window: Vec<BigInt>,
    coeffs: Vec<BigInt>,
}

impl IntegerTraces {
    pub fn new(field: &NumberField, eta: &ReducedForm) -> Self {
        let d = field.degree();
        IntegerTraces {
            window: (0..d).map(|n| field.integer_trace(&eta.numerators, n)).collect(),
            coeffs: field.min_poly().coeffs()[..d].to_vec(),
        }
    }
}

impl Iterator for IntegerTraces {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let next: BigInt = -self.coeffs.iter().zip(&self.window).map(|(a, t)| a * t).sum::<BigInt>();
        self.window.push(next);
        Some(self.window.remove(0))
    }
}

fn modulus(eta: &ReducedForm) -> Result<u64> {
    eta.denominator
        .to_u64()
        .filter(|&l| l > 0 && l <= u32::MAX as u64)
        .ok_or_else(|| Error::InvalidArgument(format!("denominator {} out of range", eta.denominator)))
}

/// `Tr(Lηαⁿ) mod L` for `n < count`, by the recurrence reduced mod L.
pub(crate) fn residue_sequence(field: &NumberField, eta: &ReducedForm, count: usize) -> Result<Vec<u64>> {
    let big_l = modulus(eta)?;
    let d = field.degree();
    let coeffs = reduced_coeffs(field, big_l);
    let mut out: Vec<u64> = field
        .trace_residues(eta)?
        .iter()
        .map(|r| r.to_u64().expect("residue below L"))
        .collect();
    while out.len() < count {
        let n = out.len();
        out.push(step(&coeffs, &out[n - d..], big_l));
    }
    out.truncate(count);
    Ok(out)
}

/// `−aₖ mod L`, so that `T_{n+d} ≡ Σ cₖ T_{n+k}`.
fn reduced_coeffs(field: &NumberField, big_l: u64) -> Vec<u64> {
    let l = BigInt::from(big_l);
    field.min_poly().coeffs()[..field.degree()]
        .iter()
        .map(|a| (-a).mod_floor(&l).to_u64().expect("reduced"))
        .collect()
}

fn step(coeffs: &[u64], window: &[u64], big_l: u64) -> u64 {
    let s: u128 = coeffs.iter().zip(window).map(|(&c, &t)| c as u128 * t as u128).sum();
    (s % big_l as u128) as u64
}

/// Period of the residue sequence by hashing the d-tuple state.
pub fn trace_orbit(field: &NumberField, eta: &ReducedForm, horizon: usize) -> Result<TraceOrbit> {
    let d = field.degree();
    if horizon < d {
        return Err(Error::InvalidArgument(format!("horizon {horizon} is below the degree {d}")));
    }
    let big_l = modulus(eta)?;
    let coeffs = reduced_coeffs(field, big_l);
    let max_states = (big_l as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    let mut seq: Vec<u64> = field
        .trace_residues(eta)?
        .iter()
        .map(|r| r.to_u64().expect("residue below L"))
        .collect();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut n = 0usize;
    loop {
        let state = seq[n..n + d].to_vec();
        if let Some(&first) = seen.get(&state) {
            let period = n - first;
            return Ok(TraceOrbit {
                eta: eta.clone(),
                period,
                preperiod: first,
                prefix: seq[..first].to_vec(),
                residues: seq[first..n].to_vec(),
                initial_traces: (0..d).map(|k| field.integer_trace(&eta.numerators, k)).collect(),
                horizon,
            });
        }
        if seen.len() as u128 >= max_states {
            return Err(Error::PeriodNotFound(max_states));
        }
        seen.insert(state, n);
        let next = step(&coeffs, &seq[n..n + d], big_l);
        seq.push(next);
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn field() -> NumberField {
        NumberField::new(IntPoly::from_i64(&[1, -1, -1, -1, 1]), 128).unwrap()
    }

    #[test]
    fn half_has_period_five() {
        let k = field();
        let eta = ReducedForm::from_i64(&[1, 0, 0, 0], 2).unwrap();
        let orbit = trace_orbit(&k, &eta, 10).unwrap();
        assert_eq!(orbit.period, 5);
        assert_eq!(orbit.preperiod, 0);
        assert_eq!(orbit.residues, vec![0, 1, 1, 1, 1]);
        let traces: Vec<i64> = IntegerTraces::new(&k, &eta).take(6).map(|t| t.try_into().unwrap()).collect();
        assert_eq!(traces, vec![4, 1, 3, 7, 7, 16]);
    }

    #[test]
    fn integral_eta_has_period_one() {
        let k = field();
        let eta = ReducedForm::from_i64(&[1, 0, 0, 0], 1).unwrap();
        let orbit = trace_orbit(&k, &eta, 4).unwrap();
        assert_eq!((orbit.period, orbit.residues.clone()), (1, vec![0]));
    }

    #[test]
    fn short_horizon_is_refused() {
        let k = field();
        let eta = ReducedForm::from_i64(&[1, 0, 0, 0], 2).unwrap();
        assert!(trace_orbit(&k, &eta, 3).is_err());
    }

    #[test]
    fn residues_match_exact_traces() {
        let k = field();
        let eta = ReducedForm::from_i64(&[2, -1, 3, 1], 7).unwrap();
        let seq = residue_sequence(&k, &eta, 60).unwrap();
        for (n, t) in IntegerTraces::new(&k, &eta).take(60).enumerate() {
            assert_eq!(BigInt::from(seq[n]), t.mod_floor(&BigInt::from(7)));
        }
        let orbit = trace_orbit(&k, &eta, 4).unwrap();
        for n in 0..60 {
            assert_eq!(orbit.residue(n), seq[n]);
        }
    }
}
