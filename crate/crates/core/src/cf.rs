//! Continued fraction convergents of a high-precision real.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::hp::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub partial_quotient: BigInt,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub convergents: Vec<Convergent>,
    /// The expansion ended on a remainder indistinguishable from zero.
    pub terminated: bool,
}

/// Convergents `p/q` of `theta` with `q ≤ q_max`, stopping early when the
/// working precision can no longer resolve the next partial quotient.
pub fn expand(theta: &Real, q_max: &BigInt) -> Expansion {
    let prec = theta.prec();
    let eps_bits = -(prec as f64) + 16.0;
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut x = theta.clone();
    let mut out = Vec::new();
    loop {
        let a = x.floor();
        let a_int = a.round_to_bigint();
        let p_next = &a_int * &p + &p_prev;
        let q_next = &a_int * &q + &q_prev;
        if &q_next > q_max {
            return Expansion { convergents: out, terminated: false };
        }
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent { p: p.clone(), q: q.clone(), partial_quotient: a_int });
        let rem = &x - &a;
        let q_bits = q.bits() as f64;
        // The remainder carries an error of roughly 2^eps_bits * q^2.
        if rem.is_zero() || rem.log2_abs() < eps_bits + 2.0 * q_bits {
            return Expansion { convergents: out, terminated: true };
        }
        if 2.0 * q_bits > prec as f64 - 24.0 {
            return Expansion { convergents: out, terminated: false };
        }
        x = rem.recip();
    }
}

/// `‖qθ‖` evaluated at the precision of `theta`.
pub fn dist_qtheta(theta: &Real, q: &BigInt) -> Real {
    (&Real::from_bigint(q, theta.prec()) * theta).dist_to_int()
}
