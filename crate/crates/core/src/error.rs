//! The crate-wide error type for operations beyond configuration parsing.

use thiserror::Error;

use crate::grid::{GridError, Position};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("k = {k} exceeds the enumeration budget (cap {cap}; raise it with FSSP_BUDGET_K)")]
    BudgetExceeded { k: usize, cap: usize },
    #[error("k = {0} is outside the supported range")]
    KOutOfRange(usize),
    #[error("position {0} is not reachable inside the enlarged rectangle")]
    Unreachable(Position),
    #[error("{0} lies in no maximal barrier")]
    NotInBarrier(Position),
    #[error("expected {expected} hole(s), found {found}")]
    WrongHoleCount { expected: &'static str, found: usize },
    #[error("configurations have different sizes ({0} and {1})")]
    SizeMismatch(i32, i32),
    #[error("size {0} is below the supported minimum of {1}")]
    SizeTooSmall(i32, i32),
    #[error("the configuration has minimum firing time 2w+1; no witness plan applies")]
    NotUpperBoundCase,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid message plan: {0}")]
    InvalidPlan(String),
    #[error("certificate could not be produced or verified: {0}")]
    CertificateFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
