use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("relation has a cycle through {0:?}")]
    Cycle(Vec<String>),

    #[error("image not contained in requested codomain: {0}")]
    Image(String),

    #[error("map is not order-preserving: {0}")]
    NotMonotone(String),

    #[error("maps do not share domain/codomain")]
    DomainMismatch,

    #[error("operation requires a nonempty domain")]
    EmptyDomain,

    #[error("{0:?} is not a subspace of the ambient space")]
    Subspace(String),

    #[error("square component invalid: {0}")]
    ComponentInvalid(String),

    #[error("retraction square does not validate: {0}")]
    SquareInvalid(String),

    #[error("missing admissibility witness: {0}")]
    MissingWitness(String),

    #[error("search budget exceeded ({context}); bounds [{lower}, {upper:?}]")]
    SearchBudgetExceeded {
        context: String,
        lower: usize,
        upper: Option<usize>,
    },

    #[error("{0} is not prime")]
    NonPrimeModulus(u64),

    #[error("space has more than {0} points (limit of the bitmask representation)")]
    TooManyPoints(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("integer system has no integral solution: {0}")]
    NoIntegralSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
