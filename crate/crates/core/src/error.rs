use std::path::PathBuf;

/// Errors raised by loaders, fits, and metrics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument falls outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input file. `line` and `column` are 1-based.
    #[error("format error at line {line}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Format {
        line: usize,
        column: Option<usize>,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A fit broke down numerically (singular covariance, non-finite values).
    #[error("numerical failure{}: {message}", component.map(|k| format!(" in component {k}")).unwrap_or_default())]
    Numerical {
        component: Option<usize>,
        message: String,
    },

    /// A metric is undefined for the given partition.
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    /// Bad command or configuration.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit status for this error class: 1 usage, 2 data or
    /// format, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Usage(_) => 1,
            Error::Format { .. } | Error::Io { .. } => 2,
            Error::Numerical { .. } | Error::DegenerateMetric(_) => 3,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(line: usize, column: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            column,
            message: msg.into(),
        }
    }

    pub(crate) fn numerical(component: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Numerical {
            component,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
