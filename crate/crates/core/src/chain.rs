//! Based chain complexes, sign-refined Reidemeister torsion, and twisted
//! (co)chain complexes built from equivariant cellular data.
//!
//! Degrees run `0..=n` and `boundary(i)` is `∂_i: C_i → C_{i-1}` as a
//! `dim C_{i-1} × dim C_i` matrix acting on column vectors. The torsion is
//!
//! ```text
//! τ = (-1)^{|C|} ∏_i [b_i h_i b_{i-1} / c_i]^{(-1)^{i+1}}
//! |C| = Σ_j (Σ_{i≤j} dim C_i)(Σ_{i≤j} dim H_i)
//! ```
//!
//! with `c_i` the standard basis.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{evaluate, AbelianizationMap, GroupPresentation, GroupRingElement, Letter, Word};
use crate::error::ChainError;
use crate::laurent::{self, LaurentMatrix, LaurentPoly, UnitClass};
use crate::linalg;
use crate::su2::{adjoint, Su2};

/// Relative tolerance for `∂∘∂ = 0`.
pub const COMPLEX_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Below this Hadamard ratio a base-change matrix is treated as singular.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Coefficient fields the numeric torsion works over (`f64`, `Complex64`).
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl<T: ComplexField<RealField = f64> + Copy> Scalar for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct BasedComplex<T: Scalar> {
    dims: Vec<usize>,
    boundaries: Vec<DMatrix<T>>,
    homology: Vec<DMatrix<T>>,
}

fn max_modulus<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.modulus()).fold(0.0, f64::max)
}

impl<T: Scalar> BasedComplex<T> {
    /// `boundaries[i - 1]` is `∂_i`; there must be `dims.len() - 1` of them.
    pub fn new(dims: Vec<usize>, boundaries: Vec<DMatrix<T>>) -> Result<Self, ChainError> {
        if dims.is_empty() || boundaries.len() + 1 != dims.len() {
            return Err(ChainError::DimensionMismatch(format!(
                "{} degrees but {} boundary maps",
                dims.len(),
                boundaries.len()
            )));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.nrows() != dims[k] || d.ncols() != dims[k + 1] {
                return Err(ChainError::DimensionMismatch(format!(
                    "∂_{} is {}×{}, expected {}×{}",
                    k + 1,
                    d.nrows(),
                    d.ncols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            let scale = max_modulus(&boundaries[k - 1]) * max_modulus(&boundaries[k]);
            let residual = max_modulus(&(&boundaries[k - 1] * &boundaries[k]));
            if residual > COMPLEX_TOL * scale.max(1.0) {
                return Err(ChainError::NotAComplex { degree: k + 1, residual });
            }
        }
        let homology = dims.iter().map(|&d| DMatrix::zeros(d, 0)).collect();
        Ok(BasedComplex { dims, boundaries, homology })
    }

    /// Regrades a cochain complex `C^0 → … → C^n` (`coboundaries[i] = δ^i`)
    /// as the chain complex `D_j = C^{n-j}`.
    pub fn from_cochains(dims: Vec<usize>, coboundaries: Vec<DMatrix<T>>) -> Result<Self, ChainError> {
        let n = dims.len() - 1;
        let d_dims: Vec<usize> = (0..=n).map(|j| dims[n - j]).collect();
        // ∂^D_j : D_j = C^{n-j} → D_{j-1} = C^{n-j+1} is δ^{n-j}
        let d_bounds: Vec<DMatrix<T>> = (1..=n).map(|j| coboundaries[n - j].clone()).collect();
        BasedComplex::new(d_dims, d_bounds)
    }

    /// Attaches homology representatives (columns) in one degree.
    pub fn with_homology(mut self, degree: usize, basis: DMatrix<T>) -> Result<Self, ChainError> {
        if basis.nrows() != self.dims[degree] {
            return Err(ChainError::DimensionMismatch(format!(
                "homology vectors in degree {degree} have length {}, expected {}",
                basis.nrows(),
                self.dims[degree]
            )));
        }
        let dim = self.homology_dims()[degree];
        if basis.ncols() != dim {
            return Err(ChainError::HomologyBasis { degree, dim, supplied: basis.ncols() });
        }
        if let Some(d) = self.boundary(degree) {
            let residual = max_modulus(&(d * &basis));
            if residual > RANK_TOL * (max_modulus(d) * max_modulus(&basis)).max(1.0) {
                return Err(ChainError::NotACycle { degree, residual });
            }
        }
        self.homology[degree] = basis;
        Ok(self)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_i`, or `None` for `i = 0` and `i > n`.
    pub fn boundary(&self, i: usize) -> Option<&DMatrix<T>> {
        if i == 0 {
            None
        } else {
            self.boundaries.get(i - 1)
        }
    }

    pub fn homology_basis(&self, degree: usize) -> &DMatrix<T> {
        &self.homology[degree]
    }

    /// `rank ∂_i` for every degree (zero for `i = 0`).
    pub fn boundary_ranks(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|i| self.boundary(i).map_or(0, |d| linalg::rank(d, RANK_TOL))).collect()
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let r = self.boundary_ranks();
        (0..self.dims.len())
            .map(|i| self.dims[i] - r[i] - r.get(i + 1).copied().unwrap_or(0))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_dims().iter().all(|&d| d == 0)
    }

    /// `|C|` modulo 2.
    pub fn sign_exponent(&self) -> usize {
        let h = self.homology_dims();
        let (mut a, mut b, mut total) = (0usize, 0usize, 0usize);
        for i in 0..self.dims.len() {
            a += self.dims[i];
            b += h[i];
            total += a * b;
        }
        total % 2
    }

    /// Standard-basis lifts: in degree `i`, columns of `∂_i` forming a basis of its image.
    pub fn default_lifts(&self) -> Vec<DMatrix<T>> {
        (0..self.dims.len())
            .map(|i| match self.boundary(i) {
                Some(d) => {
                    let cols = linalg::independent_columns(d, RANK_TOL);
                    let mut lift = DMatrix::zeros(self.dims[i], cols.len());
                    for (k, &c) in cols.iter().enumerate() {
                        lift[(c, k)] = T::one();
                    }
                    lift
                }
                None => DMatrix::zeros(self.dims[i], 0),
            })
            .collect()
    }

    pub fn torsion(&self) -> Result<T, ChainError> {
        self.torsion_with_lifts(&self.default_lifts())
    }

    /// Torsion with caller-chosen lifts: `lifts[i]` spans a complement of
    /// `ker ∂_i` and `b_{i-1} = ∂_i(lifts[i])`.
    pub fn torsion_with_lifts(&self, lifts: &[DMatrix<T>]) -> Result<T, ChainError> {
        let n = self.top_degree();
        let mut tau = if self.sign_exponent() == 1 { -T::one() } else { T::one() };
        for i in 0..=n {
            let mut blocks: Vec<DMatrix<T>> = Vec::new();
            if i < n {
                blocks.push(&self.boundaries[i] * &lifts[i + 1]);
            }
            blocks.push(self.homology[i].clone());
            blocks.push(lifts[i].clone());
            let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
            if cols != self.dims[i] {
                let dim = self.homology_dims()[i];
                return Err(ChainError::HomologyBasis { degree: i, dim, supplied: self.homology[i].ncols() });
            }
            if cols == 0 {
                continue;
            }
            let mut m = DMatrix::zeros(cols, cols);
            let mut at = 0;
            for b in &blocks {
                m.view_mut((0, at), (cols, b.ncols())).copy_from(b);
                at += b.ncols();
            }
            let d = linalg::det(&m);
            let hadamard: f64 = m.column_iter().map(|c| c.norm()).product();
            if d.modulus() <= DEGENERATE_TOL * hadamard {
                return Err(ChainError::DegenerateBasis { degree: i });
            }
            tau = if i % 2 == 1 { tau * d } else { tau / d };
        }
        Ok(tau)
    }

    /// Direct sum with bases concatenated degreewise (`C` first).
    pub fn direct_sum(&self, other: &Self) -> Result<Self, ChainError> {
        if self.dims.len() != other.dims.len() {
            return Err(ChainError::DimensionMismatch("direct sum of complexes of different length".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let block = |a: &DMatrix<T>, b: &DMatrix<T>| {
            let mut m = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
            m.view_mut((0, 0), a.shape()).copy_from(a);
            m.view_mut(a.shape(), b.shape()).copy_from(b);
            m
        };
        let bounds = self.boundaries.iter().zip(&other.boundaries).map(|(a, b)| block(a, b)).collect();
        let mut out = BasedComplex::new(dims, bounds)?;
        for i in 0..out.dims.len() {
            out.homology[i] = block(&self.homology[i], &other.homology[i]);
        }
        Ok(out)
    }
}

/// `sgn τ` of a real complex with homology orientation.
pub fn sign_torsion_tau0(c: &BasedComplex<f64>) -> Result<i8, ChainError> {
    Ok(if c.torsion()? > 0.0 { 1 } else { -1 })
}

/// Acyclic complex over `C(t)` with Laurent polynomial differentials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentComplex {
    dims: Vec<usize>,
    boundaries: Vec<LaurentMatrix>,
}

/// Generic evaluation point for rank decisions; off the unit circle.
pub const PROBE_T: Complex64 = Complex64::new(0.781_012_5, 0.654_321);

/// Torsion `num/den` of an acyclic Laurent complex, exact up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentTorsion {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl LaurentTorsion {
    pub fn unit_class(&self) -> UnitClass {
        UnitClass::new(self.num.clone(), self.den.clone())
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.num.eval(t) / self.den.eval(t)
    }
}

impl LaurentComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<LaurentMatrix>) -> Result<Self, ChainError> {
        let c = LaurentComplex { dims, boundaries };
        // shape and ∂∂ = 0 are checked on a numeric specialization
        c.eval(PROBE_T)?;
        Ok(c)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, i: usize) -> Option<&LaurentMatrix> {
        if i == 0 {
            None
        } else {
            self.boundaries.get(i - 1)
        }
    }

    pub fn eval(&self, t: Complex64) -> Result<BasedComplex<Complex64>, ChainError> {
        BasedComplex::new(self.dims.clone(), self.boundaries.iter().map(|b| b.eval(t)).collect())
    }

    /// Column choices are made at [`PROBE_T`]; the block determinants are
    /// then computed exactly in `C[t^±1]`.
    pub fn torsion(&self) -> Result<LaurentTorsion, ChainError> {
        let probe = self.eval(PROBE_T)?;
        let h = probe.homology_dims();
        if let Some(degree) = h.iter().position(|&d| d > 0) {
            return Err(ChainError::NotAcyclic { degree, dim: h[degree] });
        }
        let n = self.dims.len() - 1;
        let chosen: Vec<Vec<usize>> = (0..=n)
            .map(|i| probe.boundary(i).map_or(Vec::new(), |d| linalg::independent_columns(d, RANK_TOL)))
            .collect();
        let (mut num, mut den) = (LaurentPoly::one(), LaurentPoly::one());
        for i in 0..=n {
            if self.dims[i] == 0 {
                continue;
            }
            let mut m = match self.boundary(i + 1) {
                Some(d) => d.select_columns(&chosen[i + 1]),
                None => LaurentMatrix::zeros(self.dims[i], 0),
            };
            let mut lift = LaurentMatrix::zeros(self.dims[i], chosen[i].len());
            for (k, &c) in chosen[i].iter().enumerate() {
                lift[(c, k)] = LaurentPoly::one();
            }
            m = m.hstack(&lift);
            let d = laurent::det(&m).trim();
            if d.is_zero() {
                return Err(ChainError::DegenerateBasis { degree: i });
            }
            if i % 2 == 1 {
                num = &num * &d;
            } else {
                den = &den * &d;
            }
        }
        Ok(LaurentTorsion { num, den })
    }
}

/// Cellular chains of the universal cover as free `Z[π]`-modules.
///
/// `boundaries[i - 1][σ][τ]` is the coefficient of the `(i-1)`-cell `τ` in
/// `∂ẽ_σ` for the `i`-cell `σ`, so boundaries compose as row vectors:
/// `D_i · D_{i-1} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<GroupRingElement>>>,
}

/// Evaluation of group-ring entries blockwise.
fn block_matrix(rows: usize, cols: usize, k: usize, entry: impl Fn(usize, usize) -> DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows * k, cols * k);
    for i in 0..rows {
        for j in 0..cols {
            m.view_mut((i * k, j * k), (k, k)).copy_from(&entry(i, j));
        }
    }
    m
}

impl EquivariantComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<Vec<Vec<GroupRingElement>>>) -> Result<Self, ChainError> {
        if boundaries.len() + 1 != dims.len() {
            return Err(ChainError::DimensionMismatch("boundary count does not match degrees".into()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.len() != dims[k + 1] || d.iter().any(|row| row.len() != dims[k]) {
                return Err(ChainError::DimensionMismatch(format!("boundary of degree {} has wrong shape", k + 1)));
            }
        }
        Ok(EquivariantComplex { dims, boundaries })
    }

    /// The presentation 2-complex: one 0-cell, a 1-cell per generator, a 2-cell per relator.
    pub fn from_presentation(p: &GroupPresentation) -> Self {
        let m = p.generator_count();
        let d1 = (0..m)
            .map(|j| vec![&GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one()])
            .collect();
        EquivariantComplex { dims: vec![1, m, p.relators.len()], boundaries: vec![d1, p.fox_matrix()] }
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// Row-vector boundary matrix `D_i` (`i ≥ 1`).
    pub fn boundary(&self, i: usize) -> &[Vec<GroupRingElement>] {
        &self.boundaries[i - 1]
    }

    /// Entries of `D_i · D_{i-1}` (exact).
    pub fn composite(&self, i: usize) -> Vec<Vec<GroupRingElement>> {
        let (a, b) = (self.boundary(i), self.boundary(i - 1));
        a.iter()
            .map(|row| {
                (0..self.dims[i - 2])
                    .map(|t| {
                        row.iter()
                            .zip(b)
                            .fold(GroupRingElement::zero(), |acc, (x, brow)| &acc + &(x * &brow[t]))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn with_lifts(&self, lifts: &LiftChoice) -> Self {
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, d)| {
                d.iter()
                    .enumerate()
                    .map(|(s, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(t, a)| a.left_mul(&lifts.cells[k + 1][s]).right_mul(&lifts.cells[k][t].inverse()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        EquivariantComplex { dims: self.dims.clone(), boundaries }
    }

    /// Augmented boundaries `ε(D_i)` as integer matrices (rows: `i`-cells).
    pub fn integer_boundaries(&self) -> Vec<Vec<Vec<i64>>> {
        self.boundaries
            .iter()
            .map(|d| d.iter().map(|row| row.iter().map(|a| a.augmentation()).collect()).collect())
            .collect()
    }

    fn integer_matrix(m: &[Vec<i64>], rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |i, j| m[i][j] as f64)
    }

    /// `C_*(X; R)` with `∂_i = ε(D_i)ᵀ`.
    pub fn untwisted_chains(&self) -> BasedComplex<f64> {
        let ints = self.integer_boundaries();
        let bounds = (1..self.dims.len())
            .map(|i| Self::integer_matrix(&ints[i - 1], self.dims[i], self.dims[i - 1]).transpose())
            .collect();
        BasedComplex::new(self.dims.clone(), bounds).expect("augmentation of a complex is a complex")
    }

    /// Coboundaries `δ^{i-1} = ε(D_i)` of `C^*(X; R)`.
    pub fn untwisted_coboundaries(&self) -> Vec<DMatrix<f64>> {
        let ints = self.integer_boundaries();
        (1..self.dims.len()).map(|i| Self::integer_matrix(&ints[i - 1], self.dims[i], self.dims[i - 1])).collect()
    }

    /// `C^{-*}(X; R)` regraded to degrees `0..=n`.
    pub fn untwisted_cochains_regraded(&self) -> BasedComplex<f64> {
        BasedComplex::from_cochains(self.dims.clone(), self.untwisted_coboundaries())
            .expect("augmentation of a complex is a complex")
    }

    /// Coboundaries of `C^*(X; su₂)` twisted by `Ad∘ρ`: `(δf)(ẽ_σ) = Σ_τ Ad(a_στ) f(ẽ_τ)`.
    pub fn ad_coboundaries(&self, images: &[Su2]) -> Vec<DMatrix<f64>> {
        (1..self.dims.len())
            .map(|i| {
                let d = self.boundary(i);
                block_matrix(self.dims[i], self.dims[i - 1], 3, |s, t| {
                    let m = d[s][t].ad_matrix(images);
                    DMatrix::from_fn(3, 3, |a, b| m[(a, b)])
                })
            })
            .collect()
    }

    /// `C^{-*}_{Ad∘ρ}(X; su₂)` regraded to degrees `0..=n`, basis `ẽ_{σ,k}`.
    pub fn ad_cochains_regraded(&self, images: &[Su2]) -> Result<BasedComplex<f64>, ChainError> {
        let dims = self.dims.iter().map(|d| 3 * d).collect();
        BasedComplex::from_cochains(dims, self.ad_coboundaries(images))
    }

    /// Dimensions of `H^q_{Ad∘ρ}` for `q = 0..=n`.
    pub fn ad_cohomology_dims(&self, images: &[Su2]) -> Result<Vec<usize>, ChainError> {
        let c = self.ad_cochains_regraded(images)?;
        let mut h = c.homology_dims();
        h.reverse();
        Ok(h)
    }

    /// `C_*(X; C(t)²)` twisted by `α⊗ρ`, with `∂_i = Φ(D_i)ᵀ`.
    pub fn alpha_rho_chains(&self, images: &[Su2], alpha: &AbelianizationMap) -> Result<LaurentComplex, ChainError> {
        let dims: Vec<usize> = self.dims.iter().map(|d| 2 * d).collect();
        let bounds = (1..self.dims.len())
            .map(|i| {
                let d = self.boundary(i);
                let mut m = LaurentMatrix::zeros(2 * self.dims[i], 2 * self.dims[i - 1]);
                for (s, row) in d.iter().enumerate() {
                    for (t, a) in row.iter().enumerate() {
                        m.set_block(2 * s, 2 * t, &evaluate(a, Some(images), Some(alpha)));
                    }
                }
                m.transpose()
            })
            .collect();
        LaurentComplex::new(dims, bounds)
    }

    /// `C_*(X; Q(t))` twisted by `α` alone.
    pub fn alpha_chains(&self, alpha: &AbelianizationMap) -> Result<LaurentComplex, ChainError> {
        let bounds = (1..self.dims.len())
            .map(|i| {
                let d = self.boundary(i);
                LaurentMatrix::from_fn(self.dims[i], self.dims[i - 1], |s, t| evaluate(&d[s][t], None, Some(alpha))[(0, 0)].clone())
                    .transpose()
            })
            .collect();
        LaurentComplex::new(self.dims.clone(), bounds)
    }

    /// Numeric specialization of [`Self::alpha_rho_chains`] at a complex `t`.
    pub fn alpha_rho_chains_at(
        &self,
        images: &[Su2],
        alpha: &AbelianizationMap,
        t: Complex64,
    ) -> Result<BasedComplex<Complex64>, ChainError> {
        let dims: Vec<usize> = self.dims.iter().map(|d| 2 * d).collect();
        let bounds = (1..self.dims.len())
            .map(|i| {
                let d = self.boundary(i);
                let mut m = DMatrix::zeros(2 * self.dims[i], 2 * self.dims[i - 1]);
                for (s, row) in d.iter().enumerate() {
                    for (c, a) in row.iter().enumerate() {
                        let b = a.alpha_rho_at(images, alpha, t);
                        m.view_mut((2 * s, 2 * c), (2, 2)).copy_from(&b);
                    }
                }
                m.transpose()
            })
            .collect();
        BasedComplex::new(dims, bounds)
    }

    /// Largest entry of `Ad(D_i · D_{i-1})` over all degrees.
    pub fn composite_residual(&self, images: &[Su2]) -> f64 {
        let cob = self.ad_coboundaries(images);
        (1..cob.len()).map(|k| max_modulus(&(&cob[k] * &cob[k - 1]))).fold(0.0, f64::max)
    }
}

/// A lift of each cell to the universal cover, as a covering translation
/// relative to the reference lift.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftChoice {
    pub cells: Vec<Vec<Word>>,
}

impl LiftChoice {
    pub fn reference(dims: &[usize]) -> Self {
        LiftChoice { cells: dims.iter().map(|&d| vec![Word::identity(); d]).collect() }
    }

    pub fn random<R: Rng + ?Sized>(dims: &[usize], generators: usize, max_len: usize, rng: &mut R) -> Self {
        let cells = dims
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|_| {
                        let len = rng.gen_range(0..=max_len);
                        Word::reduce(
                            (0..len).map(|_| Letter::new(rng.gen_range(0..generators), if rng.gen_bool(0.5) { 1 } else { -1 })),
                        )
                    })
                    .collect()
            })
            .collect();
        LiftChoice { cells }
    }
}

/// Applies `Ad(g)` blockwise to a cochain vector.
pub fn ad_blockwise(v: &DMatrix<f64>, g: &Su2) -> DMatrix<f64> {
    let a = adjoint(g);
    let mut out = v.clone();
    for b in 0..v.nrows() / 3 {
        for c in 0..v.ncols() {
            for i in 0..3 {
                out[(3 * b + i, c)] = (0..3).map(|j| a[(i, j)] * v[(3 * b + j, c)]).sum();
            }
        }
    }
    out
}
