use thiserror::Error;

/// Errors surfaced by the library. Each variant maps to a stable code string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("INFEASIBLE_SHAPE: {0}")]
    InfeasibleShape(String),
    #[error("NO_SOLUTION_WITHIN_BOUND: {0}")]
    NoSolutionWithinBound(String),
    #[error("UNSUPPORTED_FOR_PIPELINE: {0}")]
    UnsupportedForPipeline(String),
    #[error("NONINTEGRAL_LAMBDA: {0}")]
    NonIntegralLambda(String),
    #[error("TAIL_NOT_DOMINATED: {0}")]
    TailNotDominated(String),
    #[error("GUARD_VIOLATED: {0}")]
    GuardViolated(String),
    #[error("EMPTY_FEASIBLE_SET: {0}")]
    EmptyFeasibleSet(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::InfeasibleShape(_) => "INFEASIBLE_SHAPE",
            Error::NoSolutionWithinBound(_) => "NO_SOLUTION_WITHIN_BOUND",
            Error::UnsupportedForPipeline(_) => "UNSUPPORTED_FOR_PIPELINE",
            Error::NonIntegralLambda(_) => "NONINTEGRAL_LAMBDA",
            Error::TailNotDominated(_) => "TAIL_NOT_DOMINATED",
            Error::GuardViolated(_) => "GUARD_VIOLATED",
            Error::EmptyFeasibleSet(_) => "EMPTY_FEASIBLE_SET",
            Error::Domain(_) => "DOMAIN",
            Error::Parse(_) => "PARSE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
