//! Scenario files, parameter sweeps and CSV reports on top of `skewbound-core`.

pub mod csvout;
pub mod examples;
pub mod expr;
pub mod run;
pub mod scenario;

pub use scenario::{parse_scenario, parse_str, write_scenario, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] skewbound_core::Error),
    #[error("invariant violated{context}: {message}")]
    Invariant { context: String, message: String },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 1 for bad input, 2 for a broken invariant, 3 for a refused search.
    pub fn exit_code(&self) -> i32 {
        use skewbound_core::Error as E;
        match self {
            CliError::Invariant { .. } | CliError::Core(E::Inconsistent(_)) => 2,
            CliError::Core(E::ComplexityRefusal { .. }) => 3,
            _ => 1,
        }
    }
}
