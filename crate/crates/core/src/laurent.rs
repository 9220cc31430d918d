//! Laurent polynomials in `t` with complex coefficients, Laurent matrices,
//! their determinants, and comparison up to units `±t^k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LaurentError;
use crate::linalg;

/// Coefficients below this fraction of the largest modulus are trimmed.
pub const TRIM_TOL: f64 = 1e-11;
/// Relative tolerance for palindromicity.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// `Σ coeffs[i] t^(lo + i)`. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        Self::new(k, vec![c])
    }

    /// Builds and trims exact zeros at both ends.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        let mut p = LaurentPoly { lo, coeffs };
        p.strip(0.0);
        p
    }

    pub fn from_real(lo: i64, coeffs: &[f64]) -> Self {
        Self::new(lo, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent; equals `lo - 1` for the zero polynomial.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let i = k - self.lo;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Removes leading/trailing coefficients with modulus at most `tol × max|c|`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let mut p = self.clone();
        p.strip(tol);
        p
    }

    pub fn trim(&self) -> Self {
        self.trimmed(TRIM_TOL)
    }

    fn strip(&mut self, tol: f64) {
        let cut = tol * self.max_abs();
        while self.coeffs.last().is_some_and(|c| c.norm() <= cut) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.norm() <= cut).count();
        self.coeffs.drain(..lead);
        self.lo += lead as i64;
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        let horner = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c);
        horner * t.powi(self.lo as i32)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p(t) ↦ p(−t)`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if (self.lo + i as i64).rem_euclid(2) == 1 { -c } else { c })
            .collect();
        LaurentPoly { lo: self.lo, coeffs }
    }

    /// `p(t) ↦ p(t⁻¹)`.
    pub fn invert_variable(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().copied().collect();
        LaurentPoly { lo: -self.hi(), coeffs }
    }

    /// Largest coefficient difference relative to the larger of the two polynomials.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max) / scale
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    /// Long division `self = q·d + r`, returning `(q, r)` where `r` has
    /// exponents in `[self.lo, self.lo + deg d)`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), LaurentError> {
        let d = d.trim();
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let n = d.coeffs.len();
        let qlen = rem.len() - n + 1;
        let mut q = vec![Complex64::new(0.0, 0.0); qlen];
        let lead = d.coeffs[n - 1];
        for i in (0..qlen).rev() {
            let c = rem[i + n - 1] / lead;
            q[i] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
        rem.truncate(n - 1);
        Ok((Self::new(self.lo - d.lo, q), Self::new(self.lo, rem)))
    }

    /// Division that must be exact up to `tol` relative to `self`.
    pub fn exact_div(&self, d: &Self, tol: f64) -> Result<Self, LaurentError> {
        let (q, r) = self.div_rem(d)?;
        let rel = r.max_abs() / self.max_abs().max(f64::MIN_POSITIVE);
        if rel > tol {
            return Err(LaurentError::NotDivisible { remainder: rel });
        }
        Ok(q.trim())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        LaurentPoly::new(lo, (lo..=hi).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.lo + o.lo, out)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(i, c)| {
                let k = self.lo + i as i64;
                let coeff = if c.im == 0.0 { format!("{}", c.re) } else { format!("({c})") };
                match k {
                    0 => coeff,
                    1 => format!("{coeff} t"),
                    _ => format!("{coeff} t^{k}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    lo: i64,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentJson { lo: self.lo, coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = LaurentJson::deserialize(d)?;
        Ok(LaurentPoly::new(j.lo, j.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect()))
    }
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, data: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> LaurentPoly) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        LaurentMatrix { rows, cols, data }
    }

    /// `t^k · M` for a constant complex matrix.
    pub fn from_constant(k: i64, m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| LaurentPoly::monomial(k, m[(i, j)]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn eval(&self, t: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(t))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Writes `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn scale_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        LaurentMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, o: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, o.rows);
        LaurentMatrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(LaurentPoly::zero(), |acc, k| &acc + &(&self[(i, k)] * &o[(k, j)]))
        })
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, o: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        LaurentMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &o[(i, j)])
    }
}

/// Sizes up to this use cofactor expansion; larger ones use interpolation.
pub const EXPANSION_MAX: usize = 4;

/// Determinant of a square Laurent matrix.
pub fn det(m: &LaurentMatrix) -> LaurentPoly {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if m.rows <= EXPANSION_MAX {
        det_expansion(m)
    } else {
        det_interpolation(m)
    }
}

/// Laplace expansion along the first row.
pub fn det_expansion(m: &LaurentMatrix) -> LaurentPoly {
    fn rec(m: &LaurentMatrix, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        match rows.len() {
            0 => LaurentPoly::one(),
            1 => m[(rows[0], cols[0])].clone(),
            _ => {
                let mut acc = LaurentPoly::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = &m[(rows[0], c)];
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry * &rec(m, &rows[1..], &rest);
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }
    let idx: Vec<usize> = (0..m.rows).collect();
    rec(m, &idx, &idx)
}

/// Exponent window `[lo, hi]` that must contain the determinant's support.
fn det_window(m: &LaurentMatrix) -> Option<(i64, i64)> {
    let mut lo = 0i64;
    let mut hi = 0i64;
    for i in 0..m.rows {
        let row = (0..m.cols).map(|j| &m[(i, j)]).filter(|p| !p.is_zero());
        let (mut rlo, mut rhi) = (i64::MAX, i64::MIN);
        for p in row {
            rlo = rlo.min(p.lo());
            rhi = rhi.max(p.hi());
        }
        if rlo == i64::MAX {
            return None;
        }
        lo += rlo;
        hi += rhi;
    }
    Some((lo, hi))
}

/// Evaluates at `N`-th roots of unity and recovers coefficients by an inverse DFT.
pub fn det_interpolation(m: &LaurentMatrix) -> LaurentPoly {
    let Some((lo, hi)) = det_window(m) else {
        return LaurentPoly::zero();
    };
    let n = (hi - lo + 1) as usize;
    let values: Vec<Complex64> = (0..n)
        .map(|k| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            linalg::det(&m.eval(w)) * w.powi(-(lo as i32))
        })
        .collect();
    let coeffs = (0..n)
        .map(|j| {
            values.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, v)| {
                let w = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64);
                acc + v * w
            }) / n as f64
        })
        .collect();
    LaurentPoly::new(lo, coeffs).trim()
}

/// How `symmetrize` treats the overall sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// Never flip; the sign stays as computed.
    Keep,
    /// Flip so that the top coefficient has non-negative real part.
    PositiveLeading,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrized {
    pub poly: LaurentPoly,
    pub shift: i64,
    pub sign: i8,
}

/// Finds `±t^k·p` with `q(t⁻¹) = q(t)`.
pub fn symmetrize(p: &LaurentPoly, rule: SignRule) -> Result<Symmetrized, LaurentError> {
    let p = p.trim();
    if p.is_zero() {
        return Err(LaurentError::NoSymmetricForm { residual: f64::INFINITY });
    }
    let total = p.lo() + p.hi();
    if total.rem_euclid(2) != 0 {
        return Err(LaurentError::NoSymmetricForm { residual: f64::INFINITY });
    }
    let shift = -total / 2;
    let q = p.shift(shift);
    let residual = q.relative_distance(&q.invert_variable());
    if residual > SYMMETRY_TOL {
        return Err(LaurentError::NoSymmetricForm { residual });
    }
    let sign = match rule {
        SignRule::Keep => 1,
        SignRule::PositiveLeading => {
            if q.coeff(q.hi()).re < 0.0 {
                -1
            } else {
                1
            }
        }
    };
    let poly = if sign < 0 { -&q } else { q };
    Ok(Symmetrized { poly, shift, sign })
}

/// If `q = ±t^k·p` within `tol` (relative), returns `(k, ±1)`.
pub fn unit_relation(p: &LaurentPoly, q: &LaurentPoly, tol: f64) -> Option<(i64, i8)> {
    let (p, q) = (p.trim(), q.trim());
    if p.is_zero() || q.is_zero() {
        return (p.is_zero() && q.is_zero()).then_some((0, 1));
    }
    // allow the trimmed supports to differ by noise at the ends
    let k = q.lo() - p.lo();
    let shifted = p.shift(k);
    for sign in [1i8, -1] {
        let cand = shifted.scale(Complex64::new(sign as f64, 0.0));
        if cand.relative_distance(&q) <= tol {
            return Some((k, sign));
        }
    }
    None
}

/// A rational function `num/den` considered up to units `±t^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitClass {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl UnitClass {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        UnitClass { num, den }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        UnitClass { num: p, den: LaurentPoly::one() }
    }

    /// Cross-multiplied comparison up to `±t^k`.
    pub fn equal_up_to_unit(&self, other: &UnitClass, tol: f64) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        unit_relation(&lhs, &rhs, tol).is_some()
    }

    /// Cancels the denominator when it divides the numerator.
    pub fn to_poly(&self, tol: f64) -> Result<LaurentPoly, LaurentError> {
        self.num.exact_div(&self.den, tol)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.num.eval(t) / self.den.eval(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_poly(rng: &mut ChaCha8Rng, lo: i64, len: usize) -> LaurentPoly {
        LaurentPoly::new(lo, (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> LaurentMatrix {
        LaurentMatrix::zeros(n, n).into_random(rng)
    }

    trait IntoRandom {
        fn into_random(self, rng: &mut ChaCha8Rng) -> Self;
    }

    impl IntoRandom for LaurentMatrix {
        fn into_random(mut self, rng: &mut ChaCha8Rng) -> Self {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let lo = rng.gen_range(-1..=0);
                    self[(i, j)] = random_poly(rng, lo, 3);
                }
            }
            self
        }
    }

    /// Independent cofactor-expansion oracle over all permutations.
    fn leibniz(m: &LaurentMatrix) -> LaurentPoly {
        fn perms(n: usize) -> Vec<(Vec<usize>, i8)> {
            if n == 0 {
                return vec![(vec![], 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
                    out.push((q, sign));
                }
            }
            out
        }
        let n = m.nrows();
        perms(n).into_iter().fold(LaurentPoly::zero(), |acc, (p, s)| {
            let term = (0..n).fold(LaurentPoly::one(), |t, i| &t * &m[(i, p[i])]);
            if s > 0 {
                &acc + &term
            } else {
                &acc - &term
            }
        })
    }

    #[test]
    fn det_trivial_cases() {
        let mut m = LaurentMatrix::zeros(1, 1);
        m[(0, 0)] = LaurentPoly::monomial(1, c(1.0));
        assert_eq!(det(&m), LaurentPoly::monomial(1, c(1.0)));
        for n in [1, 3, 6] {
            assert!(det(&LaurentMatrix::identity(n)).relative_distance(&LaurentPoly::one()) < 1e-12);
        }
    }

    #[test]
    fn det_six_by_six_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let m = random_matrix(&mut rng, 6);
            let d = det(&m);
            assert!(d.relative_distance(&leibniz(&m)) < 1e-9);
        }
    }

    #[test]
    fn interpolation_agrees_with_expansion_up_to_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            for _ in 0..10 {
                let m = random_matrix(&mut rng, n);
                assert!(det_interpolation(&m).relative_distance(&det_expansion(&m)) < 1e-10);
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3, 5] {
            let a = random_matrix(&mut rng, n);
            let b = random_matrix(&mut rng, n);
            let lhs = det(&(&a * &b));
            let rhs = &det(&a) * &det(&b);
            assert!(lhs.relative_distance(&rhs) < 1e-8);
        }
    }

    #[test]
    fn product_span_adds() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = random_poly(&mut rng, -2, 4);
        let q = random_poly(&mut rng, 1, 3);
        let pq = &p * &q;
        assert_eq!(pq.hi() - pq.lo(), (p.hi() - p.lo()) + (q.hi() - q.lo()));
    }

    #[test]
    fn symmetrize_alexander_polynomial() {
        let p = LaurentPoly::from_real(0, &[1.0, -3.0, 1.0]);
        let s = symmetrize(&p, SignRule::Keep).unwrap();
        assert_eq!(s.shift, -1);
        assert_eq!(s.poly, LaurentPoly::from_real(-1, &[1.0, -3.0, 1.0]));
    }

    #[test]
    fn symmetrize_already_symmetric() {
        let p = LaurentPoly::from_real(-1, &[1.0, -0.7, 1.0]);
        let s = symmetrize(&p, SignRule::Keep).unwrap();
        assert_eq!((s.shift, s.sign), (0, 1));
        let one = symmetrize(&LaurentPoly::one(), SignRule::Keep).unwrap();
        assert_eq!(one.shift, 0);
    }

    #[test]
    fn symmetrize_rejects_asymmetric() {
        let p = LaurentPoly::from_real(0, &[1.0, 2.0, 3.0]);
        assert!(matches!(symmetrize(&p, SignRule::Keep), Err(LaurentError::NoSymmetricForm { .. })));
        let odd = LaurentPoly::from_real(0, &[1.0, 1.0]);
        assert!(symmetrize(&odd, SignRule::Keep).is_err());
    }

    #[test]
    fn symmetrize_sign_rule() {
        let p = LaurentPoly::from_real(3, &[-1.0, 2.0, -1.0]);
        let s = symmetrize(&p, SignRule::PositiveLeading).unwrap();
        assert_eq!(s.sign, -1);
        assert_eq!(s.poly, LaurentPoly::from_real(-1, &[1.0, -2.0, 1.0]));
    }

    #[test]
    fn exact_division_and_remainder() {
        let a = LaurentPoly::from_real(-1, &[1.0, -3.0, 1.0]);
        let b = LaurentPoly::from_real(0, &[-1.0, 1.0]);
        let prod = &a * &b;
        assert!(prod.exact_div(&b, 1e-12).unwrap().relative_distance(&a) < 1e-14);
        assert!(matches!(a.exact_div(&b, 1e-12), Err(LaurentError::NotDivisible { .. })));
    }

    #[test]
    fn variable_substitutions() {
        let p = LaurentPoly::from_real(-1, &[1.0, 2.0, 3.0]);
        assert_eq!(p.negate_variable(), LaurentPoly::from_real(-1, &[-1.0, 2.0, -3.0]));
        assert_eq!(p.invert_variable(), LaurentPoly::from_real(-1, &[3.0, 2.0, 1.0]));
    }

    #[test]
    fn unit_relation_is_an_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_poly(&mut rng, 0, 4);
        let q = p.shift(3).scale(c(-1.0));
        let r = q.shift(-5);
        assert_eq!(unit_relation(&p, &p, 1e-12), Some((0, 1)));
        assert_eq!(unit_relation(&p, &q, 1e-12), Some((3, -1)));
        assert_eq!(unit_relation(&q, &p, 1e-12), Some((-3, -1)));
        assert_eq!(unit_relation(&p, &r, 1e-12), Some((-2, -1)));
        assert!(unit_relation(&p, &random_poly(&mut rng, 0, 4), 1e-6).is_none());
    }

    #[test]
    fn json_shape() {
        let p = LaurentPoly::from_real(-1, &[1.0, -0.5, 1.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"lo":-1,"coeffs":[[1.0,0.0],[-0.5,0.0],[1.0,0.0]]}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    proptest::proptest! {
        #[test]
        fn json_round_trip(lo in -5i64..5, cs in proptest::collection::vec(-10.0f64..10.0, 1..6)) {
            let p = LaurentPoly::from_real(lo, &cs);
            let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
            proptest::prop_assert_eq!(back, p);
        }
    }
}
