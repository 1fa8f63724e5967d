use thiserror::Error;

/// Failure to read a JSON document into a typed record.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("duplicate key \"{key}\" at pointer \"{pointer}\" (line {line}, column {column})")]
    DuplicateKey {
        pointer: String,
        key: String,
        line: usize,
        column: usize,
    },
    #[error("required key \"{key}\" missing at pointer \"{pointer}\"")]
    MissingKey { pointer: String, key: String },
    #[error("expected {expected} at pointer \"{pointer}\", found {found}")]
    WrongKind {
        pointer: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid value \"{value}\" at pointer \"{pointer}\", expected one of: {allowed}")]
    InvalidEnum {
        pointer: String,
        value: String,
        allowed: String,
    },
    #[error("unknown key \"{key}\" at pointer \"{pointer}\"")]
    UnknownKey { pointer: String, key: String },
}

impl JsonError {
    /// Pointer of the value the error refers to. Syntax errors point at the root.
    pub fn pointer(&self) -> String {
        match self {
            JsonError::Syntax { .. } => String::new(),
            JsonError::DuplicateKey { pointer, key, .. }
            | JsonError::MissingKey { pointer, key }
            | JsonError::UnknownKey { pointer, key } => crate::json::join(pointer, key),
            JsonError::WrongKind { pointer, .. } | JsonError::InvalidEnum { pointer, .. } => {
                pointer.clone()
            }
        }
    }

    /// Short stable identifier for the error class.
    pub fn code(&self) -> &'static str {
        match self {
            JsonError::Syntax { .. } => "malformed-json",
            JsonError::DuplicateKey { .. } => "duplicate-key",
            JsonError::MissingKey { .. } => "missing-key",
            JsonError::WrongKind { .. } => "wrong-kind",
            JsonError::InvalidEnum { .. } => "invalid-enum",
            JsonError::UnknownKey { .. } => "unknown-key",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("\"{0}\" is not a valid name: use lowercase letters, digits, '.', '_' or '-', starting and ending with a letter or digit")]
    InvalidSlug(String),
    #[error("resource name \"{0}\" appears more than once")]
    DuplicateResource(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("no data")]
    NoData,
    #[error("no rows")]
    NoRows,
    #[error("file is {size} bytes, larger than the {limit} byte limit")]
    Oversize { size: u64, limit: u64 },
    #[error("undecodable: {0}")]
    Undecodable(String),
    #[error("invalid inference config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("unknown check \"{name}\" at pointer \"{pointer}\"")]
    UnknownCheck { pointer: String, name: String },
    #[error("invalid regular expression at pointer \"{pointer}\": {message}")]
    BadRegex { pointer: String, message: String },
    #[error("malformed path \"{path}\" at pointer \"{pointer}\"")]
    BadPath { pointer: String, path: String },
    #[error("rule id \"{id}\" at pointer \"{pointer}\" is not a valid slug")]
    BadRuleId { pointer: String, id: String },
    #[error("duplicate rule id \"{0}\"")]
    DuplicateRuleId(String),
}
