use thiserror::Error;

/// Errors raised across the lab.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the function (non-finite vectors, etc.).
    #[error("domain error: {0}")]
    Domain(String),

    /// A call argument is invalid (empty batch, size mismatch, k = 0, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A configuration block failed validation.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The requested operation is not available for this objective.
    #[error("unsupported objective: {0}")]
    UnsupportedObjective(String),

    /// A trajectory left the finite range.
    #[error("numerical blowup at step {step}")]
    Blowup { step: usize },

    #[error("refusing to overwrite {path}: existing manifest has config hash {existing}, new config hash is {new}")]
    OutputConflict {
        path: String,
        existing: String,
        new: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
