use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The document does not match the configuration schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A value is well-formed but violates an invariant.
    #[error("invalid value for `{field}` ({value}): {reason}")]
    Validation {
        field: String,
        value: String,
        reason: String,
    },

    #[error(transparent)]
    Engine(#[from] qraman::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(field: impl Into<String>, value: impl ToString, reason: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Validation { .. } => 2,
            CliError::Engine(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

/// Re-labels a core parameter error with the config block it came from.
pub(crate) fn in_block(block: &str) -> impl Fn(qraman::Error) -> CliError + '_ {
    move |e| match e {
        qraman::Error::InvalidParameter { name, value, reason } => CliError::Validation {
            field: format!("{block}.{name}"),
            value: value.to_string(),
            reason: reason.to_string(),
        },
        other => CliError::Engine(other),
    }
}
