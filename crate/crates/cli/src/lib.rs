//! Sweeps, file formats and CSV output for the `trotter` command.

pub mod csv;
pub mod error;
pub mod matrix_file;
pub mod qpe;
pub mod sweep;

pub use error::{CliError, CliResult};
