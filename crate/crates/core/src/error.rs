use thiserror::Error;

/// Errors raised by the library.
///
/// The display strings are part of the CLI contract, so keep them stable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty complex")]
    EmptyComplex,
    #[error("degenerate simplex: {0:?}")]
    DegenerateSimplex(Vec<usize>),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("pseudomanifold required")]
    PseudomanifoldRequired,
    #[error("not a complex: boundary of boundary is non-zero in degree {0}")]
    NotAComplex(usize),
    #[error("no codimension-2 strata (dimension {0} < 2)")]
    NoCodimensionTwo(usize),
    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),
    #[error("invalid stratification: {0}")]
    InvalidStratification(String),
    #[error("degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("missing weight for face {0}")]
    MissingWeight(String),
    #[error("invalid weight for face {0}: weights must be positive")]
    InvalidWeight(String),
    #[error("oracle too large: {0} candidate chains exceed the cap of {1}")]
    OracleTooLarge(u128, u128),
    #[error("apex collision: vertex {0} already in the complex")]
    ApexCollision(usize),
    #[error("missing vertex {0}")]
    MissingVertex(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
