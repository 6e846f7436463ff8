//! Command-line front end for `soilmpt`: scenario loading, sweeps,
//! signature generation, validation, CSV/`.dat` output and SVG plots.

pub mod args;
pub mod commands;
pub mod plot;
pub mod table;

pub use args::{Cli, Command};
pub use commands::run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("no data rows to plot")]
    EmptyInput,
}

impl CliError {
    /// 1 for rejected input, 2 when the numerics failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl From<soilmpt::Error> for CliError {
    fn from(e: soilmpt::Error) -> Self {
        match e {
            soilmpt::Error::NonConvergence { .. } => CliError::Numerical(e.to_string()),
            soilmpt::Error::Io(m) => CliError::Io(m),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub const EXIT_USAGE: i32 = 64;
