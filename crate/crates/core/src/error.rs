use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the algebra, group, action and harness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible shapes: {0}")]
    IncompatibleShapes(String),

    #[error("invalid block shape: {0}")]
    InvalidShape(String),

    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("decomposition unresolved: {0}")]
    DecompositionUnresolved(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("abelian required")]
    AbelianRequired,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not an action: composition law fails at (g, h) = ({g}, {h})")]
    NotAnAction { g: usize, h: usize },

    #[error("not an invariant projection: {0}")]
    NotInvariantProjection(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("hypothesis violated for {check}: {}", violations.join("; "))]
    Hypothesis { check: String, violations: Vec<String> },

    #[error("invalid input at {location}: {message}")]
    InvalidInput { location: String, message: String },
}

impl Error {
    pub(crate) fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            location: location.into(),
            message: message.into(),
        }
    }
}
