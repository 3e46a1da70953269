use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] qdist_core::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("scaling fit: {0}")]
    Fit(String),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    /// Whether the error comes from bad user input rather than a failed run.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            LabError::Config(_)
                | LabError::Toml { .. }
                | LabError::Core(qdist_core::Error::InvalidParameter(_))
                | LabError::Core(qdist_core::Error::InvalidDistribution(_))
                | LabError::Core(qdist_core::Error::AlphabetMismatch { .. })
                | LabError::Core(qdist_core::Error::IdenticalDistributions)
                | LabError::Core(qdist_core::Error::FrequencyConstraint { .. })
        )
    }
}
