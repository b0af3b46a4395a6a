//! Exact arithmetic in Q(α) = Q[x]/(f) in the power basis 1, α, …, α^{d−1}.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hp::{Complex, Real};
use crate::poly::{div_rem_rational, trim, IntPoly};
use crate::substitution::largest_real_root;
use crate::{Error, Result};

/// Element of Q(α), always stored reduced: exactly `d` rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }
}

/// `(l₀ + l₁α + … + l_{d−1}α^{d−1}) / L` with `gcd(l₀, …, l_{d−1}, L) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedForm {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl ReducedForm {
    /// Builds and normalizes; `denominator` must be nonzero.
    pub fn new(numerators: Vec<BigInt>, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let sign = if denominator.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = numerators.iter().fold(denominator.clone(), |g, l| g.gcd(l));
        Ok(ReducedForm {
            numerators: numerators.iter().map(|l| l / &g * &sign).collect(),
            denominator: denominator.abs() / &g,
        })
    }

    pub fn from_i64(numerators: &[i64], denominator: i64) -> Result<Self> {
        Self::new(numerators.iter().map(|&l| BigInt::from(l)).collect(), BigInt::from(denominator))
    }

    pub fn degree(&self) -> usize {
        self.numerators.len()
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nums: Vec<String> = self.numerators.iter().map(|l| l.to_string()).collect();
        write!(f, "{}/{}", nums.join(","), self.denominator)
    }
}

impl FromStr for ReducedForm {
    type Err = Error;

    /// Parses `"l0,l1,...,l{d-1}/L"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::ParseElement(s.to_string(), why.to_string());
        let (nums, den) = s.trim().split_once('/').ok_or_else(|| bad("missing '/'"))?;
        let denominator: BigInt = den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
        if !denominator.is_positive() {
            return Err(bad("denominator must be positive"));
        }
        let numerators = nums
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| bad("numerator is not an integer")))
            .collect::<Result<Vec<_>>>()?;
        ReducedForm::new(numerators, denominator)
    }
}

/// The field Q(α) together with its complex embeddings.
#[derive(Clone, Debug)]
pub struct NumberField {
    min_poly: IntPoly,
    /// `roots[0] = α`; for reciprocal f, `roots[1] = 1/α` and then conjugate
    /// pairs `z, z̄` with `Im z > 0`.
    roots: Vec<Complex>,
    /// Power sums `Tr(α^n)` for `n < 2d`.
    power_traces: Vec<BigInt>,
    prec: usize,
}

impl NumberField {
    /// `f` must be monic and irreducible with a real root of largest real part.
    pub fn new(min_poly: IntPoly, prec: usize) -> Result<Self> {
        if !min_poly.is_monic() || min_poly.degree() == 0 {
            return Err(Error::InvalidArgument(format!("{min_poly} is not a monic nonconstant polynomial")));
        }
        let d = min_poly.degree();
        let raw = min_poly.complex_roots(prec);
        let alpha_idx =
            largest_real_root(&raw).ok_or_else(|| Error::InvalidArgument(format!("{min_poly} has no real root")))?;
        let roots = order_roots(raw, alpha_idx, min_poly.is_palindromic());
        let mut power_traces = newton_power_sums(&min_poly, 2 * d);
        power_traces.truncate(2 * d);
        Ok(NumberField { min_poly, roots, power_traces, prec })
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn roots(&self) -> &[Complex] {
        &self.roots
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn alpha_value(&self) -> Real {
        self.roots[0].re.clone()
    }

    pub fn is_reciprocal(&self) -> bool {
        self.min_poly.is_palindromic()
    }

    /// `Tr(α^n)` for any `n ≥ 0`, extended by the recurrence of f.
    pub fn power_trace(&self, n: usize) -> BigInt {
        if n < self.power_traces.len() {
            return self.power_traces[n].clone();
        }
        newton_power_sums(&self.min_poly, n + 1)[n].clone()
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> FieldElement {
        self.reduce(coeffs)
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> FieldElement {
        self.reduce(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        self.reduce(vec![q])
    }

    pub fn from_reduced(&self, r: &ReducedForm) -> Result<FieldElement> {
        if r.degree() > self.degree() {
            return Err(Error::DegreeMismatch { got: r.degree(), want: self.degree() });
        }
        Ok(self.reduce(
            r.numerators
                .iter()
                .map(|l| BigRational::new(l.clone(), r.denominator.clone()))
                .collect(),
        ))
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let r: ReducedForm = text.parse()?;
        if r.degree() != self.degree() {
            return Err(Error::DegreeMismatch { got: r.degree(), want: self.degree() });
        }
        self.from_reduced(&r)
    }

    pub fn zero(&self) -> FieldElement {
        self.reduce(vec![])
    }

    pub fn one(&self) -> FieldElement {
        self.from_ints(&[1])
    }

    pub fn alpha(&self) -> FieldElement {
        self.from_ints(&[0, 1])
    }

    /// Reduces an arbitrary-length coefficient vector modulo f.
    fn reduce(&self, coeffs: Vec<BigRational>) -> FieldElement {
        let d = self.degree();
        let mut c = trim(coeffs);
        if c.len() > d {
            let f: Vec<BigRational> = self.min_poly.coeffs().iter().map(|a| BigRational::from_integer(a.clone())).collect();
            c = div_rem_rational(&c, &f).1;
        }
        c.resize(d, BigRational::zero());
        FieldElement { coeffs: c }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement { coeffs: x.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, x: &FieldElement, q: &BigRational) -> FieldElement {
        FieldElement { coeffs: x.coeffs.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        self.reduce(prod)
    }

    /// Inverse via the extended Euclidean algorithm against f.
    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f: Vec<BigRational> = self.min_poly.coeffs().iter().map(|a| BigRational::from_integer(a.clone())).collect();
        // Invariant: s_i * x ≡ r_i (mod f).
        let (mut r0, mut r1) = (f, trim(x.coeffs.clone()));
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (vec![], vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = div_rem_rational(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            if r1.is_empty() {
                // gcd is nonconstant: f was not irreducible.
                return Err(Error::DivisionByZero);
            }
        }
        let c = r1[0].recip();
        Ok(self.reduce(s1.iter().map(|s| s * &c).collect()))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, n: i64) -> Result<FieldElement> {
        let base = if n < 0 { self.inv(x)? } else { x.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// `Tr(x) = Σ cᵢ Tr(αⁱ)`, the trace of the multiplication-by-x matrix.
    pub fn trace(&self, x: &FieldElement) -> BigRational {
        x.coeffs
            .iter()
            .zip(&self.power_traces)
            .map(|(c, p)| c * BigRational::from_integer(p.clone()))
            .sum()
    }

    /// Matrix of multiplication by x: column j holds the coordinates of x·α^j.
    pub fn multiplication_matrix(&self, x: &FieldElement) -> Vec<Vec<BigRational>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = x.clone();
        let alpha = self.alpha();
        for _ in 0..d {
            cols.push(cur.coeffs.clone());
            cur = self.mul(&cur, &alpha);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm as the determinant of the multiplication matrix.
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        rational_determinant(self.multiplication_matrix(x))
    }

    /// `x` evaluated in the `j`-th complex embedding.
    pub fn embed(&self, x: &FieldElement, j: usize) -> Complex {
        let z = &self.roots[j];
        let prec = self.prec;
        let mut acc = Complex::zero(prec);
        for c in x.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re = &acc.re + &Real::from_ratio(c, prec);
        }
        acc
    }

    /// Real value of x under α ↦ α (the identity embedding).
    pub fn real_value(&self, x: &FieldElement) -> Real {
        self.embed(x, 0).re
    }

    /// Automorphism α ↦ α⁻¹, defined when f is palindromic.
    pub fn sigma0(&self, x: &FieldElement) -> Result<FieldElement> {
        if !self.is_reciprocal() {
            return Err(Error::NotReciprocal);
        }
        let alpha_inv = self.inv(&self.alpha())?;
        let mut acc = self.zero();
        for c in x.coeffs.iter().rev() {
            acc = self.mul(&acc, &alpha_inv);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    pub fn reduced_form(&self, x: &FieldElement) -> ReducedForm {
        let l = x.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = x
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        ReducedForm::new(nums, l).expect("lcm is positive")
    }

    /// `w_j = q_j / f′(α)` where `f(X)/(X − α) = Σ q_j X^j`.
    pub fn dual_basis(&self) -> Result<Vec<FieldElement>> {
        let d = self.degree();
        let alpha = self.alpha();
        let fprime = self.element(
            self.min_poly.derivative().coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect(),
        );
        let fprime_inv = self.inv(&fprime)?;
        let mut q = vec![self.zero(); d];
        q[d - 1] = self.one();
        for j in (1..d).rev() {
            let a_j = self.from_rational(BigRational::from_integer(self.min_poly.coeff(j)));
            q[j - 1] = self.add(&a_j, &self.mul(&alpha, &q[j]));
        }
        Ok(q.iter().map(|qj| self.mul(qj, &fprime_inv)).collect())
    }

    /// Least common multiple of the dual-basis denominators.
    pub fn e_alpha(&self) -> Result<BigInt> {
        Ok(self
            .dual_basis()?
            .iter()
            .map(|w| self.reduced_form(w).denominator)
            .fold(BigInt::one(), |l, m| l.lcm(&m)))
    }

    /// `Res(f, f′)`.
    pub fn discriminant_resultant(&self) -> BigInt {
        self.min_poly.resultant(&self.min_poly.derivative())
    }

    /// `Tr(Lη·αⁿ) mod L` for `n < d`.
    pub fn trace_residues(&self, eta: &ReducedForm) -> Result<Vec<BigInt>> {
        let d = self.degree();
        if eta.degree() != d {
            return Err(Error::DegreeMismatch { got: eta.degree(), want: d });
        }
        Ok((0..d)
            .map(|n| integer_trace(&eta.numerators, &self.power_traces, n).mod_floor(&eta.denominator))
            .collect())
    }

    /// `Tr(Lη·αⁿ)` for the algebraic integer `Lη = Σ lᵢαⁱ`.
    pub fn integer_trace(&self, numerators: &[BigInt], n: usize) -> BigInt {
        if n + numerators.len() <= self.power_traces.len() {
            integer_trace(numerators, &self.power_traces, n)
        } else {
            let sums = newton_power_sums(&self.min_poly, n + numerators.len());
            integer_trace(numerators, &sums, n)
        }
    }
}

fn integer_trace(l: &[BigInt], power_traces: &[BigInt], n: usize) -> BigInt {
    l.iter().enumerate().map(|(i, li)| li * &power_traces[i + n]).sum()
}

/// `p_n = Tr(αⁿ)` for `n < count`, from Newton's identities and then the
/// linear recurrence of the monic polynomial f.
fn newton_power_sums(f: &IntPoly, count: usize) -> Vec<BigInt> {
    let d = f.degree();
    let a = f.coeffs();
    let mut p: Vec<BigInt> = Vec::with_capacity(count.max(1));
    p.push(BigInt::from(d));
    for n in 1..count {
        // With f = Σ a_k x^k monic: p_n = -(n a_{d-n} + Σ_{i=1}^{n-1} a_{d-i} p_{n-i}) for n ≤ d,
        // and p_n = -Σ_{i=1}^{d} a_{d-i} p_{n-i} beyond.
        let mut s = BigInt::zero();
        for i in 1..n.min(d + 1) {
            s += &a[d - i] * &p[n - i];
        }
        if n <= d {
            s += &a[d - n] * BigInt::from(n);
        }
        p.push(-s);
    }
    p.truncate(count);
    p
}

fn order_roots(raw: Vec<Complex>, alpha_idx: usize, reciprocal: bool) -> Vec<Complex> {
    let alpha = raw[alpha_idx].clone();
    let mut rest: Vec<Complex> = raw.into_iter().enumerate().filter(|&(i, _)| i != alpha_idx).map(|(_, z)| z).collect();
    let mut out = vec![alpha.clone()];
    if reciprocal && !rest.is_empty() {
        let inv = alpha.re.recip();
        let k = (0..rest.len())
            .min_by(|&a, &b| {
                let da = (&rest[a].re - &inv).abs() + rest[a].im.abs();
                let db = (&rest[b].re - &inv).abs() + rest[b].im.abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty");
        out.push(rest.remove(k));
    }
    let (mut reals, complexes): (Vec<Complex>, Vec<Complex>) = rest.into_iter().partition(|z| z.im.is_zero());
    reals.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal));
    out.extend(reals);
    let mut upper: Vec<Complex> = complexes.into_iter().filter(|z| !z.im.is_negative()).collect();
    upper.sort_by(|a, b| {
        let ta = Real::atan2(&a.im, &a.re);
        let tb = Real::atan2(&b.im, &b.re);
        ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
    });
    for z in upper {
        let c = z.conj();
        out.push(z);
        out.push(c);
    }
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

fn rational_determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &a[k][j] * &factor;
                a[i][j] -= v;
            }
        }
    }
    det
}
