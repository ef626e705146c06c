use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range (must be below 2^31)")]
    PrimeOutOfRange(u64),
    #[error("mixed characteristics: {left} vs {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("inputs do not pairwise commute")]
    NonCommuting,
    #[error("weight {0} is not an even integer >= 2")]
    InvalidWeight(u32),
    #[error("level {0} is not a positive integer")]
    InvalidLevel(u64),
    #[error("level {0} is not prime")]
    CompositeLevel(u64),
    #[error("Hecke operator index must be positive")]
    ZeroIndex,
    #[error("rank {computed} does not match the dimension oracle {expected}")]
    RankMismatch { computed: usize, expected: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("least-squares fit needs a point with nonzero abscissa")]
    DegenerateFit,
    #[error("unknown question id {0:?}")]
    UnknownQuestion(String),
    #[error("missing constant {0} for this question")]
    MissingConstant(&'static str),
    #[error("no cached records for p={p}, k={k}")]
    EmptySlice { p: u64, k: u32 },
    #[error("{0}")]
    Refused(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
