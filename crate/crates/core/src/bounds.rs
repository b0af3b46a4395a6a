//! Explicit constants: Garsia lower bounds, the case analysis for δ, the
//! decay exponent γ, discrepancy estimates and the N₀, r₀ bounds.

use std::f64::consts::{LN_10, TAU};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cf;
use crate::hp::{Complex, Real};
use crate::orbit::{cosine_measure, SalemNumber};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Tolerance for deciding `|ξᵢ| = 1`.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// `∏_{|ξᵢ|≠1} ||ξᵢ| − 1| / ((n+1)^m (∏_{|ξᵢ|>1} |ξᵢ|)^{n+1})`, the part of the
/// Garsia bound that does not depend on the height.
pub fn garsia_constant(conjugates: &[Complex], n: usize) -> f64 {
    let moduli: Vec<f64> = conjugates.iter().map(|z| z.abs().to_f64()).collect();
    let log = garsia_log_constant(&moduli, n);
    log.exp()
}

fn garsia_log_constant(moduli: &[f64], n: usize) -> f64 {
    let mut log = 0.0;
    let mut m = 0usize;
    for &r in moduli {
        if (r - 1.0).abs() <= UNIT_CIRCLE_TOL {
            m += 1;
        } else {
            log += (r - 1.0).abs().ln();
            if r > 1.0 {
                log -= (n + 1) as f64 * r.ln();
            }
        }
    }
    log - m as f64 * ((n + 1) as f64).ln()
}

/// Lower bound for `|Q(ξ)|` when `Q(ξ) ≠ 0`, ξ a root of `xi_min_poly` and
/// `n = deg Q`.
pub fn garsia_bound(xi_min_poly: &IntPoly, q: &IntPoly, prec: usize) -> Result<f64> {
    if q.is_zero() || q.degree() < 1 {
        return Err(Error::InvalidArgument("Q must have degree at least 1".into()));
    }
    let d = xi_min_poly.degree();
    let moduli: Vec<f64> = xi_min_poly.complex_roots(prec).iter().map(|z| z.abs().to_f64()).collect();
    let height = big_ln(&q.height());
    Ok((garsia_log_constant(&moduli, q.degree()) - d as f64 * height).exp())
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("finite").abs().ln()
    } else {
        let shift = bits - 60;
        (x >> shift).to_f64().expect("finite").abs().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Inputs of the Garsia chain bounding `M = (∏|bⱼ|)^{1/m}` from below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GarsiaChain {
    /// P, with `β = α^P`.
    pub period: usize,
    pub beta: f64,
    /// Coefficients of the minimal polynomial of β, constant term first.
    pub beta_min_poly: Vec<i64>,
    /// `L(β)`, so `δ₁(β) = 1/L(β)`.
    pub beta_length: u64,
    /// Height-free Garsia factor for degree `d − 1` at β.
    pub garsia_constant: f64,
    /// `maxⱼ |⟨eⱼ, eⱼ*⟩|` over the unit-circle conjugates.
    pub pairing_max: f64,
    /// `c(β)` in `M ≥ c|η̃|^{−d}β^{−n₂d}`.
    pub c_beta: f64,
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub degree: usize,
}

/// Builds the chain for `β = α^P` and `|η̃|`, `|σ₀(η̃)|`.
///
/// The numerator `⟨K_{n₂}, eⱼ*⟩` is an integer polynomial in βⱼ of degree
/// `< d` and height at most `L(β)·max|Kₙ| ≤ 2L(β)|η̃|β^{n₂+d−1}`, so Garsia gives
/// `|bⱼ| ≥ G / ((2L(β)β^{d−1})^d |⟨eⱼ, eⱼ*⟩|) · |η̃|^{−d}β^{−n₂d}`.
pub fn garsia_chain(salem: &SalemNumber, period: usize, abs_eta_tilde: f64, abs_sigma0_eta_tilde: f64) -> Result<GarsiaChain> {
    if period == 0 || !(abs_eta_tilde > 0.0) || !(abs_sigma0_eta_tilde > 0.0) {
        return Err(Error::InvalidArgument("need P ≥ 1 and positive |η̃|, |σ₀(η̃)|".into()));
    }
    let d = salem.degree();
    let prec = salem.prec();
    let log2_alpha = salem.alpha.to_f64().log2();
    let needed = d as f64 * (period as f64 * log2_alpha + 1.0) + 40.0;
    if needed > prec as f64 - 32.0 {
        return Err(Error::InvalidArgument(format!("period {period} needs more than {prec} bits")));
    }
    let conj: Vec<Complex> = salem.field.roots().iter().map(|z| complex_pow(z, period)).collect();
    // ∏ (x − βᵢ), rounded to integers.
    let mut coeffs = vec![Complex::one(prec)];
    for b in &conj {
        let mut next = vec![Complex::zero(prec); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * b);
        }
        coeffs = next;
    }
    let ints: Vec<i64> = coeffs
        .iter()
        .map(|c| c.re.round_to_bigint().to_i64().ok_or_else(|| Error::InvalidArgument("β coefficients overflow".into())))
        .collect::<Result<_>>()?;
    let beta_poly = IntPoly::from_i64(&ints);
    let beta_length = beta_poly.length().to_u64().expect("fits");
    let beta = conj[0].re.to_f64();
    let moduli: Vec<f64> = conj.iter().map(|z| z.abs().to_f64()).collect();
    let g = garsia_log_constant(&moduli, d - 1).exp();

    // X^d − c_{d−1}X^{d−1} − … − c₀: cₖ = −aₖ.
    let c: Vec<Real> = ints[..d].iter().map(|&a| Real::from_i64(-a, prec)).collect();
    let mut pairing_max: f64 = 0.0;
    for bj in conj[2..].iter().step_by(2) {
        let powers: Vec<Complex> = (0..d).map(|k| complex_pow(bj, k)).collect();
        let mut dot = Complex::zero(prec);
        for i in 0..d {
            let star = if i == d - 1 {
                powers[d - 1].clone()
            } else {
                (0..=i).fold(Complex::zero(prec), |acc, k| &acc + &powers[d - 2 - i + k].scale(&c[k]))
            };
            dot = &dot + &(&powers[i] * &star);
        }
        pairing_max = pairing_max.max(dot.abs().to_f64());
    }
    let log_c = g.ln() - d as f64 * (2.0 * beta_length as f64 * beta.powi(d as i32 - 1)).ln() - pairing_max.ln();

    let delta1 = 1.0 / beta_length as f64;
    let n0 = if abs_eta_tilde >= 1.0 { 0 } else { (-abs_eta_tilde.ln() / beta.ln()).ceil().max(0.0) as u64 };
    // Printed with log base α.
    let n1 = ((2.0 * abs_sigma0_eta_tilde / delta1).ln() / salem.alpha.to_f64().ln()).ceil().max(0.0) as u64;
    Ok(GarsiaChain {
        period,
        beta,
        beta_min_poly: ints,
        beta_length,
        garsia_constant: g,
        pairing_max,
        c_beta: log_c.exp(),
        n0,
        n1,
        n2: n0.max(n1),
        degree: d,
    })
}

fn complex_pow(z: &Complex, n: usize) -> Complex {
    let mut out = Complex::one(z.prec());
    let mut base = z.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            out = &out * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    L33,
    L34,
    L35,
    L36,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseId::L33 => "L33",
            CaseId::L34 => "L34",
            CaseId::L35 => "L35",
            CaseId::L36 => "L36",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseParams {
    pub l: u64,
    /// `|η̃|`.
    pub abs_eta: f64,
    /// `|σ₀(η̃)|`.
    pub abs_sigma0_eta: f64,
    pub h: f64,
    pub m: usize,
    /// `δ₁(β) = 1/L(β)`.
    pub delta1_beta: f64,
    pub residues_all_zero: bool,
    pub some_residue_l: u64,
    /// Required when the all-zero, small-amplitude case fires.
    #[serde(default)]
    pub chain: Option<GarsiaChain>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaResult {
    pub case_id: CaseId,
    pub delta: f64,
    pub log10_delta: f64,
    /// The inequality solved for δ.
    pub provenance: String,
    /// `1 − used/budget` when δ is substituted back.
    pub slack_fraction: f64,
    pub m_lower: Option<f64>,
}

/// Budget `1 − 1/2 − 0.4` of the inequalities `1/2 < 1 − 2δ − 0.4 − δX`.
const BUDGET: f64 = 0.1;

/// Picks the case matching the flags and thresholds and returns half the
/// supremum of its feasible δ.
pub fn select_case_and_delta(p: &CaseParams) -> Result<DeltaResult> {
    if p.l == 0 || p.m == 0 {
        return Err(Error::InvalidCase("need L ≥ 1 and m ≥ 1".into()));
    }
    if !(p.delta1_beta > 0.0 && p.delta1_beta <= 1.0) {
        return Err(Error::InvalidCase(format!("δ₁(β) = {} outside (0, 1]", p.delta1_beta)));
    }
    if !(p.h >= 0.0) || !(p.abs_eta > 0.0) || !(p.abs_sigma0_eta > 0.0) {
        return Err(Error::InvalidCase("need H ≥ 0 and positive |η̃|, |σ₀(η̃)|".into()));
    }
    if p.some_residue_l >= p.l {
        return Err(Error::InvalidCase(format!("residue {} not below L = {}", p.some_residue_l, p.l)));
    }
    if p.residues_all_zero == (p.some_residue_l != 0) {
        return Err(Error::InvalidCase("residue flag contradicts the residue value".into()));
    }
    let l = p.l as f64;
    let m = p.m as f64;
    let half_sup = |x: f64| 0.5 * BUDGET / (2.0 + x);
    let slack = |delta: f64, x: f64| 1.0 - delta * (2.0 + x) / BUDGET;
    let result = if p.residues_all_zero {
        if 2.0 * p.h / l < p.delta1_beta / 2.0 {
            let chain = p
                .chain
                .as_ref()
                .ok_or_else(|| Error::InvalidCase("the all-zero small-amplitude case needs the Garsia chain".into()))?;
            let d = chain.degree as f64;
            let log_m = chain.c_beta.ln() - d * p.abs_eta.ln() - chain.n2 as f64 * d * chain.beta.ln();
            let inv_m4 = 4.0 * (-log_m).exp();
            let (delta, log10_delta) = if inv_m4.is_finite() {
                let dl = half_sup(inv_m4);
                (dl, dl.log10())
            } else {
                // δ ≈ 0.05 M / 4.
                let lg = (0.05f64 / 4.0).ln() + log_m;
                (lg.exp(), lg / LN_10)
            };
            DeltaResult {
                case_id: CaseId::L33,
                delta,
                log10_delta,
                provenance: "1/2 < 1 − 2δ − 0.4 − 4δ/M, M ≥ c(β)|η̃|^{−d}β^{−n₂d}".into(),
                slack_fraction: if inv_m4.is_finite() { slack(delta, inv_m4) } else { 0.5 },
                m_lower: Some(log_m.exp()),
            }
        } else {
            let x = 16.0 * m / p.delta1_beta;
            let delta = half_sup(x);
            DeltaResult {
                case_id: CaseId::L34,
                delta,
                log10_delta: delta.log10(),
                provenance: "1/2 < 1 − 2δ − 0.4 − 16δm/δ₁(β)".into(),
                slack_fraction: slack(delta, x),
                m_lower: None,
            }
        }
    } else if 2.0 * p.h < 1.0 {
        let delta = 1.0 / (2.0 * l);
        DeltaResult {
            case_id: CaseId::L35,
            delta,
            log10_delta: delta.log10(),
            provenance: "J(1/2L)".into(),
            // Against the admissibility limit δ < 1/2.
            slack_fraction: 1.0 - 2.0 * delta,
            m_lower: None,
        }
    } else {
        let x = 8.0 * m * l;
        let delta = half_sup(x);
        DeltaResult {
            case_id: CaseId::L36,
            delta,
            log10_delta: delta.log10(),
            provenance: "1/2 < 1 − 2δ − 0.4 − 8δmL".into(),
            slack_fraction: slack(delta, x),
            m_lower: None,
        }
    };
    Ok(result)
}

/// Builds [`CaseParams`] for `η̃ = η`, with `β = α^P` from the residue period.
pub fn case_params_for(salem: &SalemNumber, eta: &crate::numberfield::ReducedForm) -> Result<CaseParams> {
    let orbit = crate::orbit::trace_orbit(&salem.field, eta, salem.degree())?;
    let l = eta.denominator.to_u64().filter(|&l| l > 0).ok_or_else(|| Error::InvalidArgument("bad denominator".into()))?;
    let residues_all_zero = orbit.residues.iter().all(|&r| r == 0);
    let some_residue_l = orbit.residues.iter().copied().find(|&r| r != 0).unwrap_or(0);
    let h = crate::orbit::amplitude_data(eta, salem).total().to_f64();
    let abs_eta = (&salem.numerator_value(eta) / &Real::from_bigint(&eta.denominator, salem.prec())).abs().to_f64();
    let abs_sigma0_eta = (&salem.sigma0_value(eta) / &Real::from_bigint(&eta.denominator, salem.prec())).abs().to_f64();
    let chain = garsia_chain(salem, orbit.period, abs_eta, abs_sigma0_eta).ok();
    let delta1_beta = chain.as_ref().map(|c| 1.0 / c.beta_length as f64).unwrap_or_else(|| {
        let r = salem.delta1();
        r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
    });
    Ok(CaseParams {
        l,
        abs_eta,
        abs_sigma0_eta,
        h,
        m: salem.m(),
        delta1_beta,
        residues_all_zero,
        some_residue_l,
        chain,
    })
}

/// `γ = −2·frequency·log_α(1 − λδ²)`.
pub fn gamma_exponent(delta: f64, lambda: f64, alpha: f64, frequency: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) || !(lambda > 0.0 && lambda < 1.0) || !(frequency > 0.0 && frequency <= 1.0) || !(alpha > 1.0) {
        return Err(Error::InvalidArgument("need 0 < δ < 1/2, 0 < λ < 1, 0 < frequency ≤ 1, α > 1".into()));
    }
    Ok(-2.0 * frequency * (-lambda * delta * delta).ln_1p() / alpha.ln())
}

/// `(D*_N, D_N)` of points in [0, 1].
pub fn star_discrepancy(points: &[f64]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no points".into()));
    }
    if points.iter().any(|&u| !(0.0..=1.0).contains(&u)) {
        return Err(Error::InvalidArgument("points must lie in [0, 1]".into()));
    }
    let mut u = points.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len();
    let nf = n as f64;
    let mut d_star: f64 = 0.0;
    for (i, &x) in u.iter().enumerate() {
        let i1 = (i + 1) as f64;
        d_star = d_star.max(i1 / nf - x).max(x - i as f64 / nf);
    }
    // Closed intervals [u_i, u_j] (counting excess) and gaps (u_i, u_k) with
    // sentinels u_0 = 0, u_{N+1} = 1 (deficit).
    let mut excess: f64 = 0.0;
    let mut min_start = f64::INFINITY;
    for (i, &x) in u.iter().enumerate() {
        min_start = min_start.min(i as f64 / nf - x);
        excess = excess.max((i + 1) as f64 / nf - x - min_start);
    }
    let mut deficit: f64 = 0.0;
    let mut best_left = 0.0f64; // u_0 − 0/N
    for k in 1..=n + 1 {
        let uk = if k <= n { u[k - 1] } else { 1.0 };
        deficit = deficit.max(uk - (k - 1) as f64 / nf - best_left);
        if k <= n {
            best_left = best_left.min(uk - k as f64 / nf);
        }
    }
    Ok((d_star, excess.max(deficit)))
}

/// Constant of the Erdős–Turán form used by [`erdos_turan_bound`].
pub const ERDOS_TURAN_C: f64 = 3.0;

/// `C(1/K + Σ_{k≤K} |N⁻¹ Σₙ e^{2πiku_n}|/k)`.
pub fn erdos_turan_bound(points: &[f64], k: usize) -> Result<f64> {
    if k == 0 || points.is_empty() {
        return Err(Error::InvalidArgument("need K ≥ 1 and at least one point".into()));
    }
    let n = points.len() as f64;
    let mut sum = 0.0;
    for h in 1..=k {
        let (mut re, mut im) = (0.0, 0.0);
        for &u in points {
            let (s, c) = (TAU * (h as f64 * u).rem_euclid(1.0)).sin_cos();
            re += c;
            im += s;
        }
        sum += (re / n).hypot(im / n) / h as f64;
    }
    Ok(ERDOS_TURAN_C * (1.0 / k as f64 + sum))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeEstimate {
    /// `max(1, max log(1/‖qθ‖)/log q)` over the tail convergents `q² ≥ q_last`.
    pub tau_hat: f64,
    /// `min q^τ̂ ‖qθ‖` over all convergents; bounds every `q ≤ Q_scanned`.
    pub c_hat: f64,
    /// `min q‖qθ‖` over the tail convergents.
    pub lagrange_tail: f64,
    pub q_scanned: u64,
    pub convergents: usize,
}

pub fn type_estimate(theta: &Real, q_max: u64) -> Result<TypeEstimate> {
    let expansion = cf::expand(theta, &BigInt::from(q_max));
    if expansion.terminated {
        return Err(Error::RationalInput);
    }
    let data: Vec<(f64, f64)> = expansion
        .convergents
        .iter()
        .filter(|c| c.q >= BigInt::from(1))
        .map(|c| (c.q.to_f64().expect("finite"), cf::dist_qtheta(theta, &c.q).to_f64()))
        .collect();
    let q_last = data.last().map(|d| d.0).unwrap_or(1.0);
    let tail: Vec<(f64, f64)> = data.iter().copied().filter(|&(q, _)| q * q >= q_last && q > 1.0).collect();
    let tau_hat = tail.iter().map(|&(q, d)| -d.ln() / q.ln()).fold(1.0, f64::max);
    let c_of = |set: &[(f64, f64)], tau: f64| set.iter().map(|&(q, d)| q.powf(tau) * d).fold(f64::INFINITY, f64::min);
    Ok(TypeEstimate {
        tau_hat,
        c_hat: c_of(&data, tau_hat),
        lagrange_tail: c_of(&tail, 1.0),
        q_scanned: q_last as u64,
        convergents: data.len(),
    })
}

/// Test functions on [0, 1] for the Koksma check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FSpec {
    Identity,
    /// Right-continuous step function: `values[i]` on `[breaks[i], breaks[i+1])`,
    /// with `breaks[0] = 0` and the last piece closed at 1.
    Step { breaks: Vec<f64>, values: Vec<f64> },
    /// `x ↦ χ_{[c1,c2]}({(a − 2H cos(2πx − φ))/L})`.
    CosineWindow { a: f64, l: f64, h: f64, phi: f64, c1: f64, c2: f64 },
}

impl FSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FSpec::Identity => x,
            FSpec::Step { breaks, values } => {
                let i = breaks.partition_point(|&b| b <= x).saturating_sub(1);
                values[i.min(values.len() - 1)]
            }
            FSpec::CosineWindow { a, l, h, phi, c1, c2 } => {
                let y = ((a - 2.0 * h * (TAU * x - phi).cos()) / l).rem_euclid(1.0);
                if *c1 <= y && y <= *c2 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn integral(&self) -> f64 {
        match self {
            FSpec::Identity => 0.5,
            FSpec::Step { breaks, values } => (0..values.len())
                .map(|i| values[i] * (breaks.get(i + 1).copied().unwrap_or(1.0) - breaks[i]))
                .sum(),
            // The phase only shifts x on the circle.
            FSpec::CosineWindow { a, l, h, c1, c2, .. } => cosine_measure(*a, *l, *h, &[(*c1, *c2)]),
        }
    }

    /// Total variation on [0, 1]; for the cosine window, the number of jumps.
    pub fn variation(&self) -> f64 {
        match self {
            FSpec::Identity => 1.0,
            FSpec::Step { values, .. } => values.windows(2).map(|w| (w[1] - w[0]).abs()).sum(),
            FSpec::CosineWindow { a, l, h, c1, c2, .. } => {
                if *h <= 0.0 {
                    return 0.0;
                }
                let lo = (a - 2.0 * h) / l;
                let hi = (a + 2.0 * h) / l;
                let mut jumps = 0usize;
                // y = c + k has two preimages per period if it lies strictly inside the range.
                for c in [c1, c2] {
                    for k in (lo - c).floor() as i64..=(hi - c).ceil() as i64 {
                        let v = c + k as f64;
                        if lo < v && v < hi {
                            jumps += 2;
                        }
                    }
                }
                if c1 <= &0.0 && c2 >= &1.0 {
                    0.0
                } else {
                    jumps as f64
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FSpec::Step { breaks, values } => {
                if breaks.is_empty() || breaks.len() != values.len() || breaks[0] != 0.0 || breaks.windows(2).any(|w| w[1] <= w[0]) || *breaks.last().unwrap() >= 1.0 {
                    return Err(Error::InvalidArgument("step breaks must start at 0, increase and stay below 1".into()));
                }
                Ok(())
            }
            FSpec::CosineWindow { l, c1, c2, .. } if !(*l > 0.0 && c1 <= c2) => {
                Err(Error::InvalidArgument("cosine window needs L > 0 and c1 ≤ c2".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KoksmaReport {
    pub average: f64,
    pub integral: f64,
    /// `|N⁻¹ Σ F(uₙ) − ∫F|`.
    pub error: f64,
    pub d_star: f64,
    pub variation_bound: f64,
    /// Variation of F computed directly.
    pub variation_counted: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn koksma_check(f: &FSpec, variation_bound: f64, points: &[f64]) -> Result<KoksmaReport> {
    f.validate()?;
    let (d_star, _) = star_discrepancy(points)?;
    let average = points.iter().map(|&u| f.eval(u)).sum::<f64>() / points.len() as f64;
    let integral = f.integral();
    let error = (average - integral).abs();
    let rhs = variation_bound * d_star;
    Ok(KoksmaReport {
        average,
        integral,
        error,
        d_star,
        variation_bound,
        variation_counted: f.variation(),
        rhs,
        // Small absolute slack for rounding in the average and the integral.
        holds: error <= rhs + 1e-12,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct R0Inputs {
    pub p: u64,
    pub n0: u64,
    pub d: f64,
    pub h: f64,
    pub tau: f64,
    pub delta: f64,
    pub c_alpha: f64,
    pub alpha: f64,
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct R0Bound {
    /// `⌈P·max(45n₀, (360DH)^τ, 45)⌉`, absent when it exceeds u128.
    pub big_n0: Option<u128>,
    pub log10_big_n0: f64,
    /// `c_α / α^{A⁴·max(n₀, H^τ)}`; may underflow to 0, see the log form.
    pub r0_lower: f64,
    pub log10_r0_lower: f64,
    /// Set when only the logarithmic forms are meaningful.
    pub symbolic: bool,
    pub inputs: R0Inputs,
}

/// `N₀` and the lower bound for `r₀` in degree-4 Salem fields.
pub fn n0_big_n0_r0(inputs: R0Inputs) -> Result<R0Bound> {
    let R0Inputs { p, n0, d, h, tau, delta, c_alpha, alpha, a } = inputs.clone();
    if p == 0 || !(d > 0.0) || !(h > 0.0) || !(tau >= 1.0) || !(delta > 0.0) || !(c_alpha > 0.0) || !(alpha > 1.0) || !(a > 0.0) {
        return Err(Error::InvalidArgument("N₀/r₀ inputs must be positive with τ ≥ 1 and α > 1".into()));
    }
    let int_branch = 45u128 * (n0.max(1) as u128);
    let log10_power = tau * (360.0 * d * h).log10();
    let log10_int = (int_branch as f64).log10();
    let log10_max = log10_power.max(log10_int);
    let log10_big_n0 = (p as f64).log10() + log10_max;
    let big_n0 = if log10_power <= log10_int {
        (p as u128).checked_mul(int_branch)
    } else if log10_big_n0 < 38.0 {
        Some(((p as f64) * (360.0 * d * h).powf(tau)).ceil() as u128)
    } else {
        None
    };
    let ln_alpha = alpha.ln();
    // log_α of the denominator: A⁴·max(n₀, H^τ).
    let log_h_tau = tau * h.ln();
    let exponent_ln = 4.0 * a.ln() + (n0 as f64).ln().max(log_h_tau);
    let log10_r0_lower = c_alpha.log10() - exponent_ln.exp() * ln_alpha / LN_10;
    let r0_lower = 10f64.powf(log10_r0_lower);
    let symbolic = big_n0.is_none() || r0_lower == 0.0 || !log10_r0_lower.is_finite();
    Ok(R0Bound { big_n0, log10_big_n0, r0_lower, log10_r0_lower, symbolic, inputs })
}

/// `⌈log_α(|σ₀(η)|/δ)⌉`, clamped at 0.
pub fn n0_for(abs_sigma0_eta: f64, delta: f64, alpha: f64) -> u64 {
    ((abs_sigma0_eta / delta).ln() / alpha.ln()).ceil().max(0.0) as u64
}

/// `{case, delta, gamma, N0, r0_lower, inputs}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub case: DeltaResult,
    pub delta: f64,
    pub gamma: f64,
    #[serde(rename = "N0")]
    pub big_n0: Option<String>,
    pub r0_lower: f64,
    pub log10_r0_lower: f64,
    pub inputs: PipelineInputs,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineInputs {
    pub eta: String,
    pub lambda: f64,
    pub frequency: f64,
    pub frequency_convention: String,
    pub tau: f64,
    pub d_const: f64,
    pub c_alpha: f64,
    pub a: f64,
    pub case_params: CaseParams,
    pub r0: R0Inputs,
}

/// Runs case selection, γ and the N₀/r₀ bounds for one η.
pub struct PipelineConfig {
    pub lambda: f64,
    /// `1/3` for the first theorem, `1/(3A^d)` for the second.
    pub frequency: f64,
    pub frequency_convention: String,
    pub tau: f64,
    pub d_const: f64,
    pub c_alpha: f64,
    pub a: f64,
}

pub fn pipeline(salem: &SalemNumber, eta: &crate::numberfield::ReducedForm, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let params = case_params_for(salem, eta)?;
    let case = select_case_and_delta(&params)?;
    let alpha = salem.alpha.to_f64();
    let gamma = gamma_exponent(case.delta, cfg.lambda, alpha, cfg.frequency)?;
    let period = crate::orbit::trace_orbit(&salem.field, eta, salem.degree())?.period as u64;
    let r0_inputs = R0Inputs {
        p: period,
        n0: n0_for(params.abs_sigma0_eta, case.delta, alpha),
        d: cfg.d_const,
        h: params.h.max(f64::MIN_POSITIVE),
        tau: cfg.tau,
        delta: case.delta,
        c_alpha: cfg.c_alpha,
        alpha,
        a: cfg.a,
    };
    let r0 = n0_big_n0_r0(r0_inputs.clone())?;
    Ok(PipelineReport {
        delta: case.delta,
        gamma,
        big_n0: r0.big_n0.map(|n| n.to_string()),
        r0_lower: r0.r0_lower,
        log10_r0_lower: r0.log10_r0_lower,
        case,
        inputs: PipelineInputs {
            eta: eta.to_string(),
            lambda: cfg.lambda,
            frequency: cfg.frequency,
            frequency_convention: cfg.frequency_convention.clone(),
            tau: cfg.tau,
            d_const: cfg.d_const,
            c_alpha: cfg.c_alpha,
            a: cfg.a,
            case_params: params,
            r0: r0_inputs,
        },
    })
}

/// `|Q(ξ)|` at the precision of ξ.
pub fn abs_eval(q: &IntPoly, xi: &Real) -> f64 {
    q.eval_real(xi).abs().to_f64()
}
