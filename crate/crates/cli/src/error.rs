use std::path::PathBuf;

use serde_json::json;
use subrule_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    /// Bad flag value, unknown config key, missing required input.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DATA: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const EMPTY: i32 = 4;
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Json { .. } => exit::DATA,
            CliError::Core(e) => match e {
                CoreError::InvalidConfig(_) | CoreError::Range { .. } => exit::USAGE,
                CoreError::InfeasibleConfig(_) | CoreError::TooLarge(_) => exit::INFEASIBLE,
                CoreError::NoFeature | CoreError::EmptyResult => exit::EMPTY,
                _ => exit::DATA,
            },
        }
    }

    /// Short machine-readable name of the error.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Csv { .. } => "csv",
            CliError::Json { .. } => "json",
            CliError::Core(e) => match e {
                CoreError::Schema(_) => "schema",
                CoreError::Parse { .. } => "parse",
                CoreError::Domain(_) => "domain",
                CoreError::Shape { .. } => "shape",
                CoreError::DegenerateLabels => "degenerate_labels",
                CoreError::EmptyMatrix => "empty_matrix",
                CoreError::NoFeature => "no_feature",
                CoreError::EmptyResult => "empty_result",
                CoreError::DegenerateFeature { .. } => "degenerate_feature",
                CoreError::NoTarget => "no_target",
                CoreError::ZeroSupport => "zero_support",
                CoreError::InfeasibleConfig(_) => "infeasible_config",
                CoreError::InvalidConfig(_) => "invalid_config",
                CoreError::Spec(_) => "spec",
                CoreError::TooLarge(_) => "too_large",
                CoreError::Range { .. } => "range",
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}
