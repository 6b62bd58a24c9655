use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into three families that callers (notably the CLI) map to
/// different exit codes: malformed input, violated hypotheses of the theorem
/// being exercised, and resource or search exhaustion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("{0}: the zero polynomial is not allowed here")]
    ZeroPolynomial(&'static str),

    #[error("{0}: a nonconstant polynomial is required")]
    ConstantPolynomial(&'static str),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("expression is not univariate in T: {0}")]
    NotUnivariate(String),

    #[error("desk-scale limit: {0}")]
    DeskScale(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("multiplicatively dependent inputs: relation {relation:?}")]
    Dependent { relation: Vec<i64> },

    #[error("search budget exhausted after {tried} candidates")]
    BudgetExhausted { tried: usize },

    #[error("could not factor the rational unit {0} by trial division")]
    UnfactoredUnit(String),

    #[error("degenerate elimination: {0}")]
    Degenerate(String),
}

impl Error {
    /// True for failures caused by inputs that do not satisfy a theorem's
    /// hypotheses (as opposed to malformed input or internal limits).
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis(_) | Error::Dependent { .. } | Error::ConstantPolynomial(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
