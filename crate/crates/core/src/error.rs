use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("facet list is empty")]
    NoFacets,
    #[error("facet {0} has a zero normal")]
    ZeroNormal(usize),
    #[error("facet {0} has a non-primitive normal")]
    NonPrimitiveNormal(usize),
    #[error("facet presentation is unbounded")]
    Unbounded,
    #[error("facet presentation does not define a full-dimensional polytope")]
    NotFullDimensional,
    #[error("facet {0} is redundant or not supporting")]
    RedundantFacet(usize),
    #[error("polytope has a non-integral vertex")]
    NonLatticeVertex,
    #[error("invalid lattice-point labels: {0}")]
    InvalidLabels(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("blending denominator vanishes at the given point")]
    ZeroDenominator,
    #[error("coordinate sum is zero")]
    ZeroSum,

    #[error("weights do not give strict linear precision")]
    NotSlp,
    #[error("facet normals do not sum to zero")]
    NormalSumNonzero,
    #[error("point is not in the interior of the polytope")]
    NotInterior,
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("invalid data vector: {0}")]
    InvalidData(String),

    #[error("matrix is not a Horn matrix (nonzero column sums)")]
    NonHorn,
    #[error("constant adjustment is not rational")]
    IrrationalAdjustment,
    #[error("Horn parametrization has a pole at the input (row {0})")]
    PoleAtInput(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
