use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("rank {rank} out of range for {family}")]
    RankOutOfRange { family: String, rank: usize },
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("cocharacter {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} exceeds the cost guard ({limit})")]
    CostGuard { what: String, limit: usize },
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("the torus point is singular (Weyl denominator vanishes)")]
    SingularPoint,
    #[error("division by zero")]
    DivisionByZero,
    #[error("permutation {0:?} does not preserve the Cartan matrix")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid Weyl word: {0}")]
    InvalidWord(String),
    #[error("torus `{0}` is not registered")]
    UnregisteredTorus(String),
    #[error("class functions live on different sides")]
    SideMismatch,
    #[error("class point violates the invariant constraint: {0}")]
    InvariantMismatch(String),
    #[error("inconsistent character: {0}")]
    InconsistentCharacter(String),
    #[error("cocharacter must be nonzero")]
    ZeroCocharacter,
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
