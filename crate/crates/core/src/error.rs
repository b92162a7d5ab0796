use thiserror::Error;

/// A problem instance or puzzle that violates its structural rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("alldifferent needs at least 2 variables, got {0}")]
    AlldiffArity(usize),
    #[error("variable #{0} appears twice in one alldifferent")]
    DuplicateAlldiffVariable(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("linear constraint has {coefs} coefficients but {vars} variables")]
    LinearArity { coefs: usize, vars: usize },
    #[error("bound disjunction needs at least one disjunct")]
    EmptyDisjunction,
    #[error("grid cell ({row}, {col}): {message}")]
    Grid { row: usize, col: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Line-level failure while reading a text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("no valid {what} after {attempts} attempts")]
    RetriesExhausted { what: &'static str, attempts: usize },
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Exhaustive enumeration refused because the instance is too large.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
}
