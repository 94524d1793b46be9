//! Experiment driver: configuration, N-body versus mean-field simulations,
//! N sweeps with rate fitting, and the verification suites.

pub mod config;
mod error;
pub mod format;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use error::{RunError, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_VERIFY};

/// Version string echoed into summaries.
pub const TOOL_VERSION: &str = concat!("qpoc ", env!("CARGO_PKG_VERSION"));
