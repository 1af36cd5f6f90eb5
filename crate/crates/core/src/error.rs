use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31]")]
    NotPrime(u64),
    #[error("matrix entries do not match the declared shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),

    #[error("lattice mismatch: {0} vs {1}")]
    LatticeMismatch(String, String),
    #[error("operation not supported on lattice {0}")]
    UnsupportedLattice(String),
    #[error("class {0} is not effective")]
    NotEffective(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("truncation {truncation} is below the largest section degree {needed}")]
    BadTruncation { truncation: i64, needed: i64 },
    #[error("covector must be nonzero")]
    ZeroCovector,
    #[error("evaluation functional vanishes on the whole subspace")]
    VacuousTransform,
    #[error("functionals are supported at the same point")]
    OverlappingSupport,
    #[error("functionals are supported at distinct points")]
    DistinctSupport,
    #[error("need {needed} distinct rational points but F_{p} has only {available}")]
    NotEnoughPoints { needed: i64, p: u32, available: u64 },
    #[error("determinant degree is below the normalization (M = {0})")]
    NegativeM(i64),

    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(String),
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(String, String),
    #[error("message space is empty")]
    EmptyMessageSpace,
    #[error("code has no nonzero codeword")]
    EmptyCode,
    #[error("minimum distance has not been computed")]
    DistanceUnknown,
    #[error("exhaustive search needs {classes} codeword classes, budget is {budget}")]
    Infeasible { classes: u128, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
