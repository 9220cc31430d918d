use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("generator index {index} out of range for {count} generators")]
    InvalidGenerator { index: usize, count: usize },
    #[error("free rank of H_1 is {rank}, expected 1")]
    FreeRankNotOne { rank: usize },
    #[error("meridian maps to t^{exponent} in the free part of H_1, expected t^±1")]
    MeridianNotGenerator { exponent: i64 },
    #[error("presentation has no peripheral data")]
    MissingPeripheral,
    #[error("cannot parse word: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error("element is central (trace {trace})")]
    CentralElement { trace: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("no shift t^k makes the polynomial palindromic (best residual {residual:e})")]
    NoSymmetricForm { residual: f64 },
    #[error("division leaves remainder of relative size {remainder:e}")]
    NotDivisible { remainder: f64 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("base change matrix in degree {degree} is singular")]
    DegenerateBasis { degree: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("homology in degree {degree} has dimension {dim} but {supplied} basis vectors were supplied")]
    HomologyBasis { degree: usize, dim: usize, supplied: usize },
    #[error("complex is not acyclic: H_{degree} has dimension {dim}")]
    NotAcyclic { degree: usize, dim: usize },
    #[error("boundary of boundary is nonzero in degree {degree} (residual {residual:e})")]
    NotAComplex { degree: usize, residual: f64 },
    #[error("homology basis vector in degree {degree} is not a cycle (residual {residual:e})")]
    NotACycle { degree: usize, residual: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("boundary of boundary is nonzero at {cell} (residual {residual:e})")]
    BoundaryViolation { cell: String, residual: f64 },
    #[error("inclusion is not a chain map at torus cell {cell} (residual {residual:e})")]
    ChainMapViolation { cell: String, residual: f64 },
    #[error("unexpected homology of {part} in degree {degree}: expected {expected}, found {found}")]
    HomologyMismatch { part: String, degree: usize, expected: String, found: String },
    #[error("peripheral word mismatch for torus cell {cell}")]
    PeripheralMismatch { cell: String },
    #[error("no identity among relators found for [lambda, mu] within the search bound")]
    IdentityNotFound,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("solution collapsed onto a reducible representation")]
    ReducibleLimit,
    #[error("corrector diverged at arc parameter {at}")]
    PathLost { at: f64 },
    #[error("regularity drops at sample {index} (singular value ratio {ratio:e})")]
    Bifurcation { index: usize, ratio: f64 },
    #[error("point is not regular: dim H^1 = {dim_h1}")]
    NotRegular { dim_h1: usize },
    #[error("presentation needs at least two generators")]
    TooFewGenerators,
    #[error(transparent)]
    Su2(#[from] Su2Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorsionError {
    #[error("det(α⊗ρ(x_{generator}) − I) vanishes")]
    SingularDenominator { generator: usize },
    #[error("every choice of dropped generator has a singular denominator")]
    ExceptionalRepresentation,
    #[error("presentation does not have deficiency one")]
    NotDeficiencyOne,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolformError {
    #[error("point is not regular: H^* dimensions {dims:?}")]
    NotRegular { dims: [usize; 3] },
    #[error("restriction H^2(E) → H^2(∂E) drops rank")]
    DegenerateRestriction,
    #[error("tangent vector is zero in H^1")]
    ZeroClass,
    #[error("sample {index} is not regular")]
    NonRegularSample { index: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Su2(#[from] Su2Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmError {
    #[error("φ*ρ(μ) is central; the point lies outside the domain of φ")]
    CentralMuImage,
    #[error("δ′ disagrees across samples of one component")]
    InconsistentSign,
    #[error("components have different lengths ({left} vs {right})")]
    ComponentMismatch { left: f64, right: f64 },
    #[error("ambient manifold is not an integral homology sphere")]
    AmbientNotZHS,
    #[error("no peripheral certificate found for automorphism '{name}'")]
    Uncertified { name: String },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Volform(#[from] VolformError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
