use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alternative names must be unique (duplicate `{0}`)")]
    DuplicateName(String),
    #[error("a context needs at least one alternative")]
    EmptyAlternatives,
    #[error("a context needs at least one individual")]
    NoIndividuals,
    #[error("utility row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("composition would create {requested} alternatives (cap {cap})")]
    SizeLimitExceeded { requested: usize, cap: usize },
    #[error("lottery factors do not match the composed context")]
    FactorMismatch,
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("restriction to an empty set of alternatives")]
    EmptySubset,
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),
    #[error("renaming maps two alternatives to `{0}`")]
    NotInjective(String),
    #[error("renaming has no image for `{0}`")]
    MissingName(String),
    #[error("linear program dimensions disagree: {0}")]
    DimensionMismatch(String),
    #[error("float simplex lost precision; retry in exact mode")]
    NumericalBreakdown,
    #[error("{what} exceeds guardrail ({limit})")]
    GuardrailExceeded { what: String, limit: usize },
    #[error("variant is undefined on contexts with frontier dimension 0")]
    DegenerateDimension,
    #[error("battery instance violates an axiom precondition: {0}")]
    PreconditionViolated(String),
    #[error("invalid fixture: {0}")]
    InvalidFixture(String),
    #[error("epsilon must satisfy {0}")]
    InvalidEpsilon(String),
    #[error(
        "preferences must be strict; individual {individual} ties objects {first} and {second}"
    )]
    TiedPreferences {
        individual: usize,
        first: usize,
        second: usize,
    },
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// CLI exit code: 2 for bad input, 3 for runtime guards and preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimitExceeded { .. }
            | Error::NumericalBreakdown
            | Error::GuardrailExceeded { .. }
            | Error::DegenerateDimension
            | Error::PreconditionViolated(_)
            | Error::InvalidEpsilon(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
