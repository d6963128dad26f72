use thiserror::Error;

/// Input problems; every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Input {
        context: String,
        #[source]
        source: liexp::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("size limit: {0}")]
    Limit(String),
}

impl CliError {
    pub fn input(context: impl Into<String>, source: liexp::Error) -> Self {
        CliError::Input {
            context: context.into(),
            source,
        }
    }

    pub const EXIT_CODE: i32 = 2;
}
