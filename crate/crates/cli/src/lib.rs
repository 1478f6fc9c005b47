//! Input parsing and report rendering for the `crn-realize` binary.

pub mod formats;
pub mod ode;
pub mod report;

pub use ode::{emit_ode, parse_ode, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] crn_realize_core::Error),
}
