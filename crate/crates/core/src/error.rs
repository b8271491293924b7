use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("point {0} is not in the space")]
    UnknownPoint(usize),
    #[error("step functions live over different base spaces")]
    SpaceMismatch,
    #[error("invalid breakpoints: {0}")]
    InvalidBreakpoints(String),
    #[error("evaluation point {0} outside [0,1)")]
    OutOfDomain(String),
    #[error("invalid window ({0}, {1}): need 0 <= a < b <= 1")]
    InvalidWindow(String, String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration of {required} step functions exceeds the budget of {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
