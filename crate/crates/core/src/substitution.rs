//! Substitutions on a finite alphabet, their matrices and Perron data.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::hp::{Complex, Real};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Default cap on iterated word lengths.
pub const DEFAULT_LENGTH_CAP: usize = 1 << 26;

/// Letters are stored zero based; the text form uses '1'..'9' then 'a'...
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    images: Vec<Vec<usize>>,
}

/// The JSON shape `{"alphabet": d, "images": ["12", "14", "2", "3"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionSpec {
    pub alphabet: usize,
    pub images: Vec<String>,
}

pub fn letter_from_char(c: char) -> Option<usize> {
    match c {
        '1'..='9' => Some(c as usize - '1' as usize),
        'a'..='z' => Some(c as usize - 'a' as usize + 9),
        _ => None,
    }
}

pub fn letter_to_char(letter: usize) -> char {
    match letter {
        0..=8 => (b'1' + letter as u8) as char,
        9..=34 => (b'a' + (letter - 9) as u8) as char,
        _ => '?',
    }
}

impl Substitution {
    pub fn new(images: Vec<Vec<usize>>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::InvalidSubstitution("empty alphabet".into()));
        }
        for (b, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::InvalidSubstitution(format!("image of letter {} is empty", b + 1)));
            }
            if let Some(&bad) = img.iter().find(|&&a| a >= d) {
                return Err(Error::InvalidSubstitution(format!(
                    "image of letter {} uses letter index {} outside alphabet of size {d}",
                    b + 1,
                    bad + 1
                )));
            }
        }
        Ok(Substitution { images })
    }

    pub fn from_spec(spec: &SubstitutionSpec) -> Result<Self> {
        if spec.images.len() != spec.alphabet {
            return Err(Error::InvalidSubstitution(format!(
                "alphabet size {} but {} images",
                spec.alphabet,
                spec.images.len()
            )));
        }
        let images = spec
            .images
            .iter()
            .map(|w| {
                w.chars()
                    .map(|c| letter_from_char(c).ok_or_else(|| Error::InvalidSubstitution(format!("bad letter {c:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(images)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SubstitutionSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSubstitution(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> SubstitutionSpec {
        SubstitutionSpec {
            alphabet: self.alphabet_size(),
            images: self.images.iter().map(|w| word_to_string(w)).collect(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: usize) -> &[usize] {
        &self.images[letter]
    }

    /// `M(a, b) = |ζ(b)|_a`.
    pub fn matrix(&self) -> SubstitutionMatrix {
        let d = self.alphabet_size();
        let mut m = vec![vec![0u64; d]; d];
        for (b, img) in self.images.iter().enumerate() {
            for &a in img {
                m[a][b] += 1;
            }
        }
        SubstitutionMatrix(m)
    }

    /// `ζⁿ(letter)`, refusing words longer than `cap`.
    pub fn iterate(&self, letter: usize, n: usize, cap: usize) -> Result<Vec<usize>> {
        let len = self.iterate_len(letter, n);
        if len.is_none_or(|l| l > cap as u128) {
            return Err(Error::LengthCap { len: len.unwrap_or(u128::MAX), cap });
        }
        let mut word = vec![letter];
        for _ in 0..n {
            word = self.apply(&word);
        }
        Ok(word)
    }

    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&a| self.images[a].iter().copied()).collect()
    }

    /// `|ζⁿ(letter)|` from the matrix power, or `None` on overflow.
    pub fn iterate_len(&self, letter: usize, n: usize) -> Option<u128> {
        let m = self.matrix();
        let d = m.dim();
        let mut counts = vec![0u128; d];
        counts[letter] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; d];
            for (a, row) in m.0.iter().enumerate() {
                for (b, &e) in row.iter().enumerate() {
                    next[a] = next[a].checked_add((e as u128).checked_mul(counts[b])?)?;
                }
            }
            counts = next;
        }
        counts.iter().try_fold(0u128, |s, &c| s.checked_add(c))
    }
}

pub fn word_to_string(word: &[usize]) -> String {
    word.iter().map(|&a| letter_to_char(a)).collect()
}

/// Nonnegative integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubstitutionMatrix(pub Vec<Vec<u64>>);

impl SubstitutionMatrix {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entry(&self, a: usize, b: usize) -> u64 {
        self.0[a][b]
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.dim()).map(|b| self.0.iter().map(|row| row[b]).sum()).collect()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.0
    }

    /// Primitive iff `M^k > 0` for `k = (d−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let d = self.dim();
        let base: Vec<Vec<bool>> = self.0.iter().map(|r| r.iter().map(|&e| e > 0).collect()).collect();
        let bool_mul = |x: &Vec<Vec<bool>>, y: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).any(|k| x[i][k] && y[k][j])).collect())
                .collect()
        };
        let exponent = (d - 1) * (d - 1) + 1;
        let mut acc = base.clone();
        for _ in 1..exponent {
            if acc.iter().all(|r| r.iter().all(|&b| b)) {
                return true;
            }
            acc = bool_mul(&acc, &base);
        }
        acc.iter().all(|r| r.iter().all(|&b| b))
    }

    /// `det(xI − M)` by the Faddeev–LeVerrier recursion. The divisions by k
    /// are exact over Z.
    pub fn characteristic_polynomial(&self) -> IntPoly {
        let d = self.dim();
        let a: Vec<Vec<BigInt>> = self.0.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::from(1);
        // N_1 = I; c_{d-k} = -tr(A N_k)/k; N_{k+1} = A N_k + c_{d-k} I
        let mut n_k: Vec<Vec<BigInt>> = identity(d);
        for k in 1..=d {
            let an = mat_mul(&a, &n_k);
            let tr: BigInt = (0..d).map(|i| an[i][i].clone()).sum();
            let c = -tr / BigInt::from(k);
            coeffs[d - k] = c.clone();
            n_k = an;
            for (i, row) in n_k.iter_mut().enumerate() {
                row[i] += &c;
            }
        }
        IntPoly::new(coeffs)
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.0.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect()
    }
}

fn identity(d: usize) -> Vec<Vec<BigInt>> {
    (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

impl fmt::Display for SubstitutionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "({})", cells.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PerronData {
    pub alpha: Real,
    /// Positive left eigenvector normalized to sum 1.
    pub left_eigenvector: Vec<Real>,
    /// Positive right eigenvector normalized to sum 1.
    pub right_eigenvector: Vec<Real>,
    pub char_poly: IntPoly,
    pub min_poly: IntPoly,
}

impl PerronData {
    pub fn prec(&self) -> usize {
        self.alpha.prec()
    }

    /// `max_a |(pᵀM)_a − α p_a|`.
    pub fn eigen_residual(&self, m: &SubstitutionMatrix) -> Real {
        let d = m.dim();
        let prec = self.prec();
        let mut worst = Real::zero(prec);
        for b in 0..d {
            let mut s = Real::zero(prec);
            for a in 0..d {
                s = &s + &(&self.left_eigenvector[a] * &Real::from_u64(m.entry(a, b), prec));
            }
            let r = (&s - &(&self.alpha * &self.left_eigenvector[b])).abs();
            worst = worst.max(r);
        }
        worst
    }
}

/// Perron root, eigenvectors and minimal polynomial at `prec` bits.
pub fn perron_data(m: &SubstitutionMatrix, prec: usize) -> Result<PerronData> {
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let char_poly = m.characteristic_polynomial();
    let work = prec + 64;
    let squarefree = char_poly.squarefree_part();
    let roots = squarefree.complex_roots(work);
    let alpha_idx = largest_real_root(&roots)
        .ok_or_else(|| Error::MinPolyNotFound("no real root".into()))?;
    let alpha = roots[alpha_idx].re.clone();
    let min_poly = minimal_factor(&squarefree, &roots, alpha_idx)?;

    let d = m.dim();
    let mt: Vec<Vec<Real>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let e = Real::from_u64(m.entry(j, i), work);
                    if i == j {
                        &e - &alpha
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let left = normalize_positive(null_vector(mt.clone()));
    let transpose: Vec<Vec<Real>> = (0..d).map(|i| (0..d).map(|j| mt[j][i].clone()).collect()).collect();
    let right = normalize_positive(null_vector(transpose));

    Ok(PerronData {
        alpha: alpha.with_prec(prec),
        left_eigenvector: left.iter().map(|x| x.with_prec(prec)).collect(),
        right_eigenvector: right.iter().map(|x| x.with_prec(prec)).collect(),
        char_poly,
        min_poly,
    })
}

/// Index of the largest root the polisher left on the real axis.
pub(crate) fn largest_real_root(roots: &[Complex]) -> Option<usize> {
    roots
        .iter()
        .enumerate()
        .filter(|(_, z)| z.im.is_zero())
        .max_by(|(_, a), (_, b)| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
}

/// Smallest integer factor of the squarefree polynomial `g` vanishing at
/// `roots[alpha_idx]`. Root sets closed under conjugation are tried in order
/// of size; a candidate is accepted when its rounded coefficients respect the
/// Mignotte bound and divide `g` exactly.
fn minimal_factor(g: &IntPoly, roots: &[Complex], alpha_idx: usize) -> Result<IntPoly> {
    let prec = roots[alpha_idx].prec();
    // Group roots into real singletons and conjugate pairs.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; roots.len()];
    used[alpha_idx] = true;
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im.is_zero() {
            groups.push(vec![i]);
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = (&roots[a] - &target).abs();
                let db = (&roots[b] - &target).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            });
        match partner {
            Some(j) => {
                used[j] = true;
                groups.push(vec![i, j]);
            }
            None => groups.push(vec![i]),
        }
    }
    if groups.len() > 24 {
        return Err(Error::MinPolyNotFound(format!("{} root groups is too many to search", groups.len())));
    }
    let mahler = g.mahler_measure();
    let n_groups = groups.len();
    let mut subsets: Vec<u32> = (0..(1u32 << n_groups)).collect();
    let size = |mask: u32| -> usize {
        (0..n_groups).filter(|&k| mask >> k & 1 == 1).map(|k| groups[k].len()).sum()
    };
    subsets.sort_by_key(|&mask| (size(mask), mask));
    for mask in subsets {
        let mut members = vec![alpha_idx];
        for (k, grp) in groups.iter().enumerate() {
            if mask >> k & 1 == 1 {
                members.extend(grp);
            }
        }
        let n = members.len();
        // Multiply out prod (x - r) at high precision.
        let mut poly = vec![Complex::one(prec)];
        for &r in &members {
            let mut next = vec![Complex::zero(prec); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * &roots[r]);
            }
            poly = next;
        }
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut ok = true;
        for (k, c) in poly.iter().enumerate() {
            let rounded = c.re.round_to_bigint();
            let err = (&c.re - &Real::from_bigint(&rounded, prec)).abs();
            let scale = c.abs().log2_abs().max(0.0);
            if (!err.is_zero() && err.log2_abs() > -(prec as f64) / 2.0 + scale) || c.im.abs().log2_abs() > -(prec as f64) / 2.0 + scale {
                ok = false;
                break;
            }
            let bound = binomial(n, k) * mahler * (1.0 + 1e-9) + 1.0;
            if rounded.abs().to_f64().unwrap_or(f64::INFINITY) > bound {
                ok = false;
                break;
            }
            coeffs.push(rounded);
        }
        if !ok {
            continue;
        }
        let candidate = IntPoly::new(coeffs);
        if candidate.divides(g) {
            return Ok(candidate);
        }
    }
    Err(Error::MinPolyNotFound("no integer factor vanishing at the Perron root".into()))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kernel vector of a rank-deficient square matrix by full-pivot elimination.
pub(crate) fn null_vector(mut a: Vec<Vec<Real>>) -> Vec<Real> {
    let d = a.len();
    let prec = a[0][0].prec();
    let mut col_perm: Vec<usize> = (0..d).collect();
    let mut rank = 0;
    for k in 0..d {
        let mut best = (k, k);
        let mut best_val = Real::zero(prec);
        for i in k..d {
            for j in k..d {
                let v = a[i][j].abs();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val.is_zero() || best_val.log2_abs() < -(prec as f64) * 0.75 {
            break;
        }
        a.swap(k, best.0);
        for row in a.iter_mut() {
            row.swap(k, best.1);
        }
        col_perm.swap(k, best.1);
        for i in k + 1..d {
            let factor = &a[i][k] / &a[k][k];
            for j in k..d {
                let v = &a[i][j] - &(&factor * &a[k][j]);
                a[i][j] = v;
            }
        }
        rank += 1;
    }
    // Free variables beyond the rank: set the first to 1, the rest to 0.
    let mut x = vec![Real::zero(prec); d];
    if rank < d {
        x[rank] = Real::one(prec);
    }
    for k in (0..rank).rev() {
        let mut s = Real::zero(prec);
        for j in k + 1..d {
            s = &s + &(&a[k][j] * &x[j]);
        }
        x[k] = -(&s / &a[k][k]);
    }
    let mut out = vec![Real::zero(prec); d];
    for (k, &c) in col_perm.iter().enumerate() {
        out[c] = x[k].clone();
    }
    out
}

fn normalize_positive(v: Vec<Real>) -> Vec<Real> {
    let prec = v[0].prec();
    let total = v.iter().fold(Real::zero(prec), |s, x| &s + x);
    v.iter().map(|x| x / &total).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Salem,
    Pisot,
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Salem => "Salem",
            Classification::Pisot => "Pisot",
            Classification::Other => "other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SalemVerdict {
    pub classification: Classification,
    /// Roots with modulus within the tolerance of 1.
    pub unit_circle_count: usize,
}

pub const CLASSIFY_TOL: f64 = 1e-9;

/// Salem, Pisot or other, for a monic irreducible polynomial.
pub fn classify_perron(min_poly: &IntPoly, prec: usize) -> Result<SalemVerdict> {
    let roots = min_poly.complex_roots(prec);
    let Some(alpha_idx) = largest_real_root(&roots) else {
        return Ok(SalemVerdict { classification: Classification::Other, unit_circle_count: 0 });
    };
    let moduli: Vec<f64> = roots.iter().map(|z| z.abs().to_f64()).collect();
    let on_circle = moduli.iter().filter(|&&r| (r - 1.0).abs() < CLASSIFY_TOL).count();
    let off_circle = moduli.len() - on_circle;
    let palindromic = min_poly.is_palindromic();
    let d = min_poly.degree();
    let alpha = moduli[alpha_idx];
    if on_circle > 0 && !palindromic {
        return Err(Error::Inconclusive(format!(
            "{on_circle} root(s) within {CLASSIFY_TOL:e} of the unit circle but {min_poly} is not palindromic"
        )));
    }
    // A rational integer has no conjugates; it is reported as other.
    let classification = if alpha <= 1.0 + CLASSIFY_TOL || d < 2 {
        Classification::Other
    } else if palindromic && d >= 4 && d.is_multiple_of(2) && off_circle == 2 {
        Classification::Salem
    } else if moduli
        .iter()
        .enumerate()
        .all(|(i, &r)| i == alpha_idx || r < 1.0 - CLASSIFY_TOL)
    {
        Classification::Pisot
    } else {
        Classification::Other
    };
    Ok(SalemVerdict { classification, unit_circle_count: on_circle })
}
