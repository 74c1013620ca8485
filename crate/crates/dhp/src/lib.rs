//! Certification harness and file formats for `dhp-core`.

pub mod certify;
pub mod io;
pub mod report;

/// Errors surfaced by the command line; all of them exit with status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error(transparent)]
    Core(dhp_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<dhp_core::Error> for CliError {
    fn from(e: dhp_core::Error) -> Self {
        match e {
            dhp_core::Error::ResourceBound { .. } | dhp_core::Error::MaxTermsExceeded { .. } => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Core(other),
        }
    }
}
