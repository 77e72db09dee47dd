use thiserror::Error;

use crate::cyclo::CycloError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("scalar field Q(zeta_{order}) does not contain the period-{period} roots of unity; embed first")]
    ScalarOrder { order: u32, period: u32 },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("map is not multiplicative on basis pair ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("matrix^{0} is not the identity")]
    PeriodViolated(u32),
    #[error("eigenspace dimensions sum to {got}, expected {expected}")]
    NotDiagonalizable { got: usize, expected: usize },
    #[error("grading violates the product rule on components ({0}, {1})")]
    ProductRule(usize, usize),
    #[error("malformed loop element: {0}")]
    MalformedLoopElement(String),
    #[error("residue components do not span A at degree {0}")]
    BaseChange(i64),
    #[error("unknown type label {0:?}")]
    UnknownType(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix is not of finite type: root closure exceeded {0} roots")]
    NotFiniteType(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation does not preserve the Cartan matrix")]
    NotDiagramSymmetry,
    #[error("automorphism propagation is inconsistent at {0}")]
    Propagation(String),
    #[error("toral charge is not invariant under the diagram permutation")]
    ChargeNotInvariant,
    #[error("automorphism was not built in factored form")]
    Unfactored,
    #[error("automorphism is not toral")]
    NonToral,
    #[error("unsupported automorphism shape: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("affine base has {got} roots, expected {expected}")]
    BaseSize { got: usize, expected: usize },
    #[error("real root space of dimension {dim} at weight {weight} degree {degree}")]
    RootMultiplicity { weight: String, degree: i64, dim: usize },
    #[error("degenerate pairing for base root {0}")]
    DegeneratePairing(usize),
    #[error("matrix is not an affine generalized Cartan matrix: {0}")]
    NotAffine(String),
    #[error("no catalog entry matches the matrix")]
    NoMatch,
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
