use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Pairs of names for which no usable data exists.
    #[error("incomplete data: missing fixtures for {}", format_pairs(.0))]
    IncompleteData(Vec<(String, String)>),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("undefined test: {0}")]
    UndefinedTest(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

fn format_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a} v {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}
