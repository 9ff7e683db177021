use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed flags, specs or config; exit status 2.
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical failure, with the threshold it happened at when known.
    #[error("{}{source}", .nu.map(|v| format!("at nu = {v}: ")).unwrap_or_default())]
    Compute {
        nu: Option<f64>,
        #[source]
        source: tailbound::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn at(nu: f64) -> impl FnOnce(tailbound::Error) -> CliError {
        move |source| CliError::Compute {
            nu: Some(nu),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute { .. } | CliError::Io { .. } => 1,
        }
    }
}

impl From<tailbound::Error> for CliError {
    fn from(source: tailbound::Error) -> Self {
        CliError::Compute { nu: None, source }
    }
}
