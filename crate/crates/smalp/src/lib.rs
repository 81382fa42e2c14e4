//! File formats, reports and the `smalp` command line on top of
//! [`smalp_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod sweep;

pub use error::{CliError, FormatError};
