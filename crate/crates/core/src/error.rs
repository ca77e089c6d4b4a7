use crate::routing::InterestRange;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid {0}")]
    Validation(String),

    #[error("routing: {0}")]
    Routing(String),

    #[error("lookup: {0}")]
    Lookup(String),

    #[error("interest ranges {0} and {1} are neither overlapping nor adjacent")]
    Aggregation(InterestRange, InterestRange),

    #[error("{metric} is undefined: {reason}")]
    Undefined {
        metric: &'static str,
        reason: &'static str,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn undefined(metric: &'static str, reason: &'static str) -> Self {
        Error::Undefined { metric, reason }
    }
}
