use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {requested}, ceiling is {ceiling}")]
    Capacity {
        what: &'static str,
        requested: u64,
        ceiling: u64,
    },

    #[error("{what} {value} exceeds limit {limit}")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("integer overflow in {context} at n = {at}")]
    Overflow { context: &'static str, at: u64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(
        "prime pool exhausted at {pool_bound} before reaching target {target} \
         within tolerance (achieved {achieved})"
    )]
    InsufficientPool {
        target: f64,
        achieved: f64,
        pool_bound: u64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for usage/argument/parse errors,
    /// 3 for capacity and overflow errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } | Error::Overflow { .. } | Error::InsufficientPool { .. } => 3,
            Error::Range { .. } | Error::Argument(_) | Error::Parse { .. } | Error::Io(_) => 2,
        }
    }
}
