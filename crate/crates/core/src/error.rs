use thiserror::Error;

/// Errors raised by evaluation and identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid elliptic context: {0}")]
    InvalidContext(String),

    #[error("{what} is {distance:.3e} from the lattice (margin {margin:.1e})")]
    PoleProximity {
        what: String,
        distance: f64,
        margin: f64,
    },

    #[error("theta series tail {tail:.3e} exceeds tolerance relative to partial sum {scale:.3e}")]
    TailTooLarge { tail: f64, scale: f64 },

    #[error("derivative order {0} is outside the supported jet depth")]
    UnsupportedOrder(String),

    #[error("coefficient rings differ: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("exponential of an element with odd-degree soul is not supported")]
    OddBodyUnsupported,

    #[error("coefficient constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
