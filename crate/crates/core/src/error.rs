use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: usize,
        field: String,
        message: String,
    },

    #[error("{field}[{index}]: {message}")]
    BadValue {
        index: usize,
        field: String,
        message: String,
    },

    #[error("duplicate paper id `{0}`")]
    DuplicatePaper(String),

    #[error("unknown paper id `{0}`")]
    UnknownPaper(String),

    #[error("unknown n-gram `{0}`")]
    UnknownNgram(String),

    #[error("unknown topic {0}")]
    UnknownTopic(usize),

    #[error("catchphrase `{0}` is not covered by the mention index")]
    IndexMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("missing artifact `{artifact}`; run `{stage}` first")]
    MissingStage { artifact: String, stage: String },

    #[error("artifact `{artifact}` has version {found}, expected {expected}")]
    Version {
        artifact: String,
        found: u32,
        expected: u32,
    },

    #[error("artifact `{artifact}` is stale: {reason}")]
    Stale { artifact: String, reason: String },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn bad_value(index: usize, field: &str, message: impl Into<String>) -> Self {
        Error::BadValue {
            index,
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}
