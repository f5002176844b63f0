use thiserror::Error;

/// Errors raised by the algebra, the operator calculi and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A truncated series is not accurate at the exponent a computation needs.
    #[error("insufficient depth: need exact coefficient at exponent {needed}, accuracy floor is {floor} (depth {depth})")]
    InsufficientDepth { needed: i32, floor: i32, depth: usize },

    #[error("no t{flow} derivative declared for symbol `{symbol}`")]
    MissingTableEntry { symbol: String, flow: usize },

    #[error("symbol `{0}` is declared constant and cannot carry x-derivatives")]
    ConstantDerivative(String),

    #[error("inconsistent substitution rules for `{0}`")]
    InconsistentRules(String),

    #[error("rewrite rules are not confluent: {0}")]
    NonConfluent(String),

    #[error("nvars = {nvars} is too small for compositions of total length {needed}")]
    TooFewVariables { nvars: usize, needed: usize },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ambiguous expression at {pos}: mix of `{first}` and `{second}` needs parentheses")]
    Ambiguous { pos: usize, first: char, second: char },

    #[error("mismatch in {what}: {detail}")]
    Mismatch { what: String, detail: String },

    #[error("unresolved flow derivatives: {0}")]
    Unresolved(String),

    #[error("unknown verification case `{0}`")]
    UnknownCase(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub fn mismatch(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Mismatch { what: what.into(), detail: detail.into() }
    }

    /// True for the resource-limit class of failures (as opposed to refutations).
    pub fn is_depth(&self) -> bool {
        matches!(self, Error::InsufficientDepth { .. } | Error::MissingTableEntry { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
