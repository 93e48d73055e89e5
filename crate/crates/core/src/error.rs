use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("subspace not contained in ambient span")]
    NotContained,
    #[error("non-associative structure constants at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit check failed at basis element {0}")]
    NotUnital(usize),
    #[error("invalid quiver presentation: {0}")]
    InvalidQuiver(String),
    #[error("relation is not admissible: {0}")]
    NotAdmissible(String),
    #[error("quotient is infinite-dimensional: paths of degree {0} survive reduction")]
    InfiniteDimensional(usize),
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("module axiom violated: {0}")]
    InvalidModule(String),
    #[error("not a homomorphism: basis pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("algebra is not local: {0}")]
    NotLocal(String),
    #[error("element is not a unit: {0}")]
    NotUnit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
