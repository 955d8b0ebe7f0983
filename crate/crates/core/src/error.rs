use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// `Config`/`Domain`/`Range`/`Resolution` are configuration errors,
/// `Vacuum`/`Divergence`/`LifeSpan` are solver failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vacuum state: {0}")]
    Vacuum(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("iteration diverged: {0}")]
    Divergence(String),
    #[error("life span exhausted: {0}")]
    LifeSpan(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
