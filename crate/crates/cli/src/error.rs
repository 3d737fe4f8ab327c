use serde::Serialize;
use thiserror::Error;

/// Everything the command line can fail with.
#[derive(Debug, Error)]
pub enum CliError {
    /// The document does not match the expected shape.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A value has the right shape but violates a domain invariant.
    #[error("range error at `{path}`: {message}")]
    Range { path: String, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    /// Every requested estimator failed on the input path.
    #[error("estimation failed: {message}")]
    Estimation { kind: String, message: String },

    #[error("{command} failed: {source}")]
    Workflow {
        command: &'static str,
        #[source]
        source: rblab_core::Error,
    },
}

impl CliError {
    pub fn kind(&self) -> &str {
        match self {
            CliError::Estimation { kind, .. } => kind,
            CliError::Schema { .. } => "SchemaError",
            CliError::Range { .. } => "RangeError",
            CliError::Usage(_) => "UsageError",
            CliError::Workflow { source, .. } => source.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Workflow { .. } | CliError::Estimation { .. } => 1,
            _ => 2,
        }
    }

    /// Machine-readable form printed on failure.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            path: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            command: Option<&'a str>,
        }
        #[derive(Serialize)]
        struct Envelope<'a> {
            error: Body<'a>,
        }
        let (path, command, message) = match self {
            CliError::Schema { path, message } | CliError::Range { path, message } => {
                (Some(path.as_str()), None, message.clone())
            }
            CliError::Usage(m) => (None, None, m.clone()),
            CliError::Estimation { message, .. } => (None, Some("estimate"), message.clone()),
            CliError::Workflow { command, source } => (None, Some(*command), source.to_string()),
        };
        let env = Envelope {
            error: Body {
                kind: self.kind(),
                message,
                path,
                command,
            },
        };
        serde_json::to_string(&env)
            .unwrap_or_else(|_| format!("{{\"error\":{{\"kind\":\"{}\"}}}}", self.kind()))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) trait Context<T> {
    fn context(self, command: &'static str) -> CliResult<T>;
}

impl<T> Context<T> for rblab_core::Result<T> {
    fn context(self, command: &'static str) -> CliResult<T> {
        self.map_err(|source| CliError::Workflow { command, source })
    }
}
