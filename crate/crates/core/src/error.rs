use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weight mismatch: expected partitions of {expected}, got one of {found}")]
    WeightMismatch { expected: usize, found: usize },

    #[error("inadmissible query: Riemann-Hurwitz gives t = {t} < 0")]
    InadmissibleQuery { t: i64 },

    #[error("route {route} is not applicable: {reason}")]
    RouteNotApplicable { route: &'static str, reason: String },

    #[error("expected an integer result but got {value} ({context})")]
    NonInteger { value: String, context: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series error: {0}")]
    Series(#[from] crate::series::SeriesError),

    #[error("oracle budget exceeded: estimated work {estimate} > budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("interpolation grid too small: need {needed} independent points, have {available}")]
    GridTooSmall { needed: usize, available: usize },

    #[error("cross-check mismatch: {0}")]
    Mismatch(String),

    #[error("character cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
