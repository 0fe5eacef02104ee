use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown ordering `{name}`; valid names: {valid}")]
    UnknownOrdering { name: String, valid: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("instance too large for brute force: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("missing or mismatched label for instance `{0}`")]
    MissingLabel(String),

    #[error("model: {0}")]
    Model(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
