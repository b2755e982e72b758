//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors produced by dataset ingestion, spectral operations, estimation,
/// training, and dataset builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input data (bad record, bad label, bad file structure).
    /// Messages name the offending byte offset or record where applicable.
    #[error("ingestion: {0}")]
    Ingest(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Violated precondition on otherwise well-formed data.
    #[error("invalid data: {0}")]
    Data(String),

    /// Non-finite values, diverged optimizations, degenerate normalizations.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
