use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps onto one of two broad classes used by the command-line
/// front end: input validation failures and enumeration/stabilization limits
/// (see [`Error::is_limit`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("invalid fiber: {0}")]
    InvalidFiber(String),

    #[error("divisor has degree {degree} on the generic fiber, expected 0")]
    DegreeNotZero { degree: BigInt },

    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("point {0} does not lie on the special fiber")]
    PointNotOnFiber(String),

    #[error("center {0} does not lie on the special fiber")]
    CenterNotOnFiber(String),

    #[error("blow-up needs a single equation in two variables, got {equations} equation(s) in {variables} variable(s)")]
    NotHypersurface { equations: usize, variables: usize },

    #[error("local length did not stabilize below degree {cap}")]
    NotStabilized { cap: usize },

    #[error("component equations are not triangular: {0}")]
    NotTriangular(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::InvalidFiber(_) => "InvalidFiber",
            Error::DegreeNotZero { .. } => "DegreeNotZero",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::PointNotOnFiber(_) => "PointNotOnFiber",
            Error::CenterNotOnFiber(_) => "CenterNotOnFiber",
            Error::NotHypersurface { .. } => "NotHypersurface",
            Error::NotStabilized { .. } => "NotStabilized",
            Error::NotTriangular(_) => "NotTriangular",
            Error::UnknownExample(_) => "UnknownExample",
        }
    }

    /// True for errors caused by an enumeration cap or a degree cap rather
    /// than by malformed input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::NotStabilized { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
