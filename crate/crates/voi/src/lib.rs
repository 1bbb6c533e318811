//! Command-line front end for `voi_core`: run the built-in case studies or a
//! tabular problem file and write a JSON or CSV result document.

pub mod args;
mod error;
pub mod load_csv;
pub mod overrides;
pub mod report;
mod run;
pub mod tabular;

pub use args::{Cli, Command, Format, RunArgs};
pub use error::CliError;
pub use run::{execute, run, CaseKind};
