use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(#[from] nue_core::Error),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl RunError {
    /// Process exit status: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Engine(nue_core::Error::Config(_)) => 2,
            RunError::Engine(_) | RunError::Io { .. } => 3,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        let kind = match self {
            RunError::Config(_) | RunError::Engine(nue_core::Error::Config(_)) => "config",
            RunError::Engine(_) => "engine",
            RunError::Io { .. } => "io",
        };
        ErrorRecord { kind, message: self.to_string(), exit_code: self.exit_code() }
    }
}

/// Machine-readable failure report written to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

/// Wraps a map-construction failure as a configuration error.
pub fn config_error(e: nue_core::Error) -> RunError {
    match e {
        nue_core::Error::Config(m) => RunError::Config(m),
        other => RunError::Config(other.to_string()),
    }
}
