//! Command-line workbench around `asr-core`: text formats, the built-in
//! worked example, JSON and CSV reports and the experiment drivers behind
//! the `asr` binary.

pub mod attack;
pub mod error;
pub mod parse;
pub mod scaling;
pub mod selftest;
pub mod sim;
pub mod vectors;

pub use error::{CliError, CliResult};
