//! Dense univariate polynomials with integer coefficients, plus the numeric
//! root finder shared by the Perron and number field code.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::hp::{Complex, Real};

/// Integer polynomial, coefficients stored low degree first. The zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn x_minus(c: i64) -> Self {
        Self::from_i64(&[-c, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// `a_i = a_{d-i}` for every i.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Sum of absolute values of the coefficients.
    pub fn length(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Naive height: max absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Division by a monic polynomial over Z: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::new(vec![]), IntPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient `self / divisor` over Z, if the division is exact.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = div_rem_rational(&to_rational(self), &to_rational(divisor));
        if !r.is_empty() {
            return None;
        }
        let q: Option<Vec<BigInt>> = q.into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect();
        q.map(IntPoly::new)
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Content-free version with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let sign = if self.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        IntPoly::new(self.coeffs.iter().map(|c| c / &g * &sign).collect())
    }

    /// Greatest common divisor over Q, returned as a primitive integer polynomial.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = to_rational(self);
        let mut b = to_rational(other);
        while !b.is_empty() {
            let (_, r) = div_rem_rational(&a, &b);
            a = b;
            b = r;
        }
        from_rational_primitive(&a)
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive_part();
        }
        self.exact_div(&g)
            .or_else(|| {
                let (q, _) = div_rem_rational(&to_rational(self), &to_rational(&g));
                Some(from_rational_primitive(&q))
            })
            .map(|p| p.primitive_part())
            .expect("squarefree quotient")
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let prec = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(Real::zero(prec), |acc, c| &(&acc * x) + &Real::from_bigint(c, prec))
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec();
        let mut acc = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re = &acc.re + &Real::from_bigint(c, prec);
        }
        acc
    }

    /// Resultant by fraction-free (Bareiss) elimination of the Sylvester matrix.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let m = self.degree();
        let n = other.degree();
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut rows = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        bareiss_determinant(rows)
    }

    /// All complex roots of a squarefree polynomial, refined to `prec` bits.
    pub fn complex_roots(&self, prec: usize) -> Vec<Complex> {
        let approx = aberth_roots(self);
        let deriv = self.derivative();
        approx.into_iter().map(|z| polish_root(self, &deriv, z, prec)).collect()
    }

    /// Mahler measure from the numeric roots (leading coefficient times
    /// the product of root moduli exceeding 1).
    pub fn mahler_measure(&self) -> f64 {
        let lead = self.leading().abs().to_f64().unwrap_or(f64::INFINITY);
        aberth_roots(&self.squarefree_part())
            .iter()
            .map(|z| z.norm().max(1.0))
            .fold(lead, |acc, r| acc * r)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

fn to_rational(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn from_rational_primitive(p: &[BigRational]) -> IntPoly {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    IntPoly::new(p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
        .primitive_part()
}

/// Polynomial long division over Q. Inputs and outputs are trimmed.
pub(crate) fn div_rem_rational(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &c * bc;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

pub(crate) fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Simultaneous Aberth–Ehrlich iteration in double precision.
fn aberth_roots(p: &IntPoly) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return vec![];
    }
    let lead = p.leading().to_f64().unwrap_or(1.0);
    let c: Vec<f64> = p.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / lead).collect();
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    // Fujiwara-type radius for the initial circle.
    let radius = (0..n)
        .map(|i| c[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.1;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let dp = p.derivative();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let pv = p.eval_c64(z[i]);
            let dv = dp.eval_c64(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Newton refinement of a simple root at increasing precision.
fn polish_root(p: &IntPoly, dp: &IntPoly, z0: Complex64, prec: usize) -> Complex {
    let work = prec + 64;
    let mut z = Complex::from_c64(z0, work);
    let real_root = z0.im.abs() < 1e-9 * z0.norm().max(1.0) && {
        // Keep the iteration on the real axis when there is a real root nearby.
        let x = Real::from_f64(z0.re, work);
        let v = p.eval_real(&x).to_f64().abs();
        v < 1e-6 * (1.0 + p.height().to_f64().unwrap_or(1.0)) * (1.0 + z0.norm()).powi(p.degree() as i32)
    };
    if real_root {
        z.im = Real::zero(work);
    }
    let tol_bits = -(prec as f64) - 8.0;
    for _ in 0..200 {
        let pv = p.eval_complex(&z);
        let dv = dp.eval_complex(&z);
        if dv.norm_sqr().is_zero() {
            break;
        }
        let mut step = &pv / &dv;
        if real_root {
            step.im = Real::zero(work);
        }
        z = &z - &step;
        let scale = z.abs().log2_abs().max(0.0);
        if step.abs().log2_abs() < tol_bits + scale || step.norm_sqr().is_zero() {
            break;
        }
    }
    z.with_prec(prec)
}
