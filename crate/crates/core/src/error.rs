use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error("conductor {conductor} is not divisible by {needed}")]
    ConductorTooSmall { conductor: u32, needed: u32 },
    #[error("division by zero")]
    DivByZero,
    #[error("element is not a root of unity within the search bound")]
    NotRootOfUnity,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("linear map is singular")]
    SingularMap,
    #[error("map has no finite order up to {0}")]
    NotFinite(u32),
    #[error("presentation error: {0}")]
    PresentationError(String),
    #[error("presentation does not define a Hopf algebra: {0}")]
    InvalidPresentation(String),
    #[error("unknown algebra family {0:?}")]
    UnknownAlgebra(String),
    #[error("element is not grouplike: {0}")]
    NotGrouplike(String),
    #[error("{which} integral space has dimension {dim}, expected 1")]
    IntegralSpaceError { which: &'static str, dim: usize },
    #[error("modular data check failed: {0}")]
    ModularData(String),
    #[error("integrals pair to zero")]
    NormalizationError,
    #[error("order bound exceeded: {0}")]
    OrderBoundExceeded(String),
    #[error("S^2 is not diagonalizable over the ambient field: eigenspaces span {found} of {dim}")]
    NotDiagonalizable { found: usize, dim: usize },
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("inconsistent constraint system at {0}")]
    EmptyBranch(String),
    #[error("branch budget of {0} assignments exceeded")]
    BranchBudgetExceeded(usize),
    #[error("actions do not form a matched pair: {0}")]
    NotAMatchedPair(String),
    #[error("companions are not compatible with the actions: {0}")]
    CompatibilityFailure(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HopfError>;
