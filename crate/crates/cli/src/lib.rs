//! Scenario files, report formats and command implementations behind the
//! `lqu` binary. Every command is also callable as a plain function
//! returning a serializable report.

pub mod commands;
pub mod error;
pub mod formats;
pub mod reference;
pub mod spec;

pub use error::{CliError, Result};
