//! Arbitrary-precision real and complex numbers.
//!
//! Thin value-semantics wrapper over [`astro_float::BigFloat`]. Every value
//! carries its binary precision; binary operations run at the larger of the
//! two operand precisions. Transcendental functions share a per-thread
//! constants cache, so values may be sent between threads freely.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::Zero;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 256;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real {
    value: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        debug_assert!(!value.is_nan(), "NaN in high precision arithmetic");
        Real { value, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_u64(x: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(x, prec), prec)
    }

    /// Converts an integer, rounding to `prec` bits when it is wider.
    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        if x.is_zero() {
            return Self::zero(prec);
        }
        let (sign, words) = x.to_u64_digits();
        let sign = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        let mut v = BigFloat::from_words(&words, sign, e);
        v.set_precision(prec, RM).expect("precision change");
        Self::wrap(v, prec)
    }

    pub fn from_ratio(x: &BigRational, prec: usize) -> Self {
        Self::from_bigint(x.numer(), prec + 64) / Self::from_bigint(x.denom(), prec + 64)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn two_pi(prec: usize) -> Self {
        let pi = Self::pi(prec);
        &pi + &pi
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Re-rounds to a new precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.value.clone();
        v.set_precision(prec, RM).expect("precision change");
        Self::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.prec, RM), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.atan(self.prec, RM, cc)), self.prec)
    }

    /// Four-quadrant arctangent of `y / x`, in (-pi, pi].
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let prec = y.prec.max(x.prec);
        if x.is_zero() {
            let half_pi = Real::pi(prec) / Real::from_u64(2, prec);
            return match y.value.cmp(&BigFloat::from_word(0, prec)) {
                Some(c) if c > 0 => half_pi,
                Some(c) if c < 0 => -half_pi,
                _ => Real::zero(prec),
            };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Real::pi(prec)
        } else {
            base + Real::pi(prec)
        }
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn powi(&self, n: u64) -> Self {
        let mut result = Real::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.value.floor(), self.prec)
    }

    /// Fractional part `x - floor(x)`, always in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let f = self - &self.floor();
        if f.value >= BigFloat::from_word(1, self.prec) {
            Real::zero(self.prec)
        } else {
            f
        }
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(&self) -> Self {
        let f = self.frac();
        let g = &Real::one(self.prec) - &f;
        if f <= g {
            f
        } else {
            g
        }
    }

    /// Nearest integer (ties away from zero are irrelevant at these precisions).
    pub fn round_to_bigint(&self) -> BigInt {
        let half = Real::from_f64(0.5, self.prec);
        let shifted = (self + &half).floor();
        bigfloat_integer_to_bigint(&shifted.value)
    }

    /// Closest `f64`, saturating to infinities and flushing to zero.
    pub fn to_f64(&self) -> f64 {
        match self.value.as_raw_parts() {
            None => f64::NAN,
            Some((words, _, sign, e, _)) => {
                let top = *words.last().unwrap_or(&0);
                if top == 0 {
                    return 0.0;
                }
                let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
                let mag = (top as f64 + next as f64 / 18446744073709551616.0) * pow2(e as i64 - 64);
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    /// Base-2 logarithm of |x|, approximately (exact to f64 rounding).
    pub fn log2_abs(&self) -> f64 {
        match self.value.as_raw_parts() {
            Some((words, _, _, e, _)) if !self.is_zero() => {
                let top = *words.last().unwrap_or(&1) as f64;
                top.log2() - 64.0 + e as f64
            }
            _ => f64::NEG_INFINITY,
        }
    }

    /// Decimal string with `digits` significant digits, rounded half-up on the
    /// digit string.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).expect("decimal formatting");
        round_decimal_string(&s, digits)
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other {
            self
        } else {
            other
        }
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

fn bigfloat_integer_to_bigint(v: &BigFloat) -> BigInt {
    let Some((words, _, sign, e, _)) = v.as_raw_parts() else {
        return BigInt::zero();
    };
    if v.is_zero() || e <= 0 {
        return BigInt::zero();
    }
    let mut mant = BigInt::zero();
    for w in words.iter().rev() {
        mant = (mant << 64u32) + BigInt::from(*w);
    }
    let bits = 64 * words.len() as i64;
    let shift = e as i64 - bits;
    let mag = if shift >= 0 { mant << (shift as u64) } else { mant >> ((-shift) as u64) };
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

/// Converts astro-float's "d.ddddde+x" output into `digits` significant
/// digits in the same scientific layout.
fn round_decimal_string(s: &str, digits: usize) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let mut ds: Vec<u8> = mant.bytes().filter(|b| b.is_ascii_digit()).map(|b| b - b'0').collect();
    // Leading zeros only appear for exact zero, which is handled by the caller.
    let mut exp = exp;
    while ds.len() > 1 && ds[0] == 0 {
        ds.remove(0);
        exp -= 1;
    }
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() < digits {
        ds.push(0);
    }
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if digits > 1 {
        out.push('.');
        for d in &ds[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(self.prec * 3 / 10))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.prec / 3))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl<'a> $trait<&'a Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real::wrap(self.value.$op(&rhs.value, prec, RM), prec)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.value.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.value.clone().neg(), self.prec)
    }
}

/// A complex number with [`Real`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.prec();
        Complex::new(re, Real::zero(prec))
    }

    pub fn from_c64(z: num_complex::Complex64, prec: usize) -> Self {
        Complex::new(Real::from_f64(z.re, prec), Real::from_f64(z.im, prec))
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(&self.re / &n, -(&self.im / &n))
    }

    /// `e^{i t}`.
    pub fn cis(t: &Real) -> Self {
        Complex::new(t.cos(), t.sin())
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        self * &rhs.recip()
    }
}
