use thiserror::Error;

use crate::algebra::AlgebraError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("state space is empty")]
    EmptyStateSpace,
    #[error("prefix starts at `{found}`, but every run starts at the initial state `{init}`")]
    NotInitial { found: String, init: String },
    #[error("prefix is empty")]
    EmptyPrefix,
    #[error("state set has {found} slots, the state space has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("observation at time {time} is empty")]
    EmptyObservation { time: usize },
    #[error("time {at} is beyond the horizon {horizon}")]
    TimeOutOfRange { at: usize, horizon: usize },
    #[error("prefixes have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("inconsistent evidence{}", match .time { Some(t) => format!(" at time {t}"), None => String::new() })]
    InconsistentEvidence { time: Option<usize> },
    #[error("row `{state}` sums to {sum}, expected top")]
    NotNormalized { state: String, sum: String },
    #[error("prior sums to {0}, expected top")]
    PriorNotNormalized(String),
    #[error("{what} needs {size} items, over the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("arithmetic overflow while summing additive plausibilities")]
    Overflow,

    #[error("constraint `{lhs} < {rhs}` contradicts the derived `{rhs} <= {lhs}`")]
    ConstraintCycle { lhs: String, rhs: String },
    #[error("UNSAFE state={state} dominator={dominator}")]
    UnsafeConstraints { state: String, dominator: String },
    #[error("no kappa model satisfies the constraints: every transition out of `{state}` lies strictly below another variable")]
    NoKappaWitness { state: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{}{message}", match .line { Some(l) => format!("line {l}: "), None => String::new() })]
    Parse { line: Option<usize>, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line: Some(line), message: message.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InconsistentEvidence { .. } => 3,
            _ => 2,
        }
    }
}
