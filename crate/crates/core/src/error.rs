use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid activity name {0:?}")]
    InvalidActivity(String),
    #[error("invalid tree path {0:?}")]
    InvalidPath(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity error at {line}:{column}: {operator} needs at least {expected} child(ren), found {found}")]
    Arity {
        line: usize,
        column: usize,
        operator: String,
        expected: usize,
        found: usize,
    },
}

/// Raised when an enumeration outgrows its configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resource limit exceeded: {what} went past {cap}")]
pub struct ResourceError {
    pub what: &'static str,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("reduction did not terminate within {budget} steps")]
    StepBudgetExceeded { budget: u128 },
    #[error("measure did not decrease at step {step} ({rule}): {before} -> {after}")]
    MeasureNotDecreasing {
        step: usize,
        rule: String,
        before: u128,
        after: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletenessError {
    #[error("tree is not in normal form: rule {rule} applies at {path:?}")]
    NotReduced { rule: String, path: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("transition {0} is not enabled")]
    NotEnabled(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("invalid net: {0}")]
    Invalid(String),
}
