//! Command-line front end: job specification, dispatch and reports.

pub mod args;
pub mod error;
pub mod format;
pub mod job;
pub mod report;
pub mod run;

pub use error::CliError;
pub use job::{ClassRef, Command, JobSpec, OutputFormat, Source};
pub use report::ReportDocument;
pub use run::run;
