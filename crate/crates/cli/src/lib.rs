//! Command-line front end for `learncheck-core`.
//!
//! [`format`] reads and writes model description files, [`report`] holds the
//! report document with its text and JSON renderings, and [`run_cli`] ties
//! them to the subcommands.

pub mod cli;
pub mod format;
pub mod report;

pub use cli::{run_cli, EXIT_EXPECTATION, EXIT_OK, EXIT_USAGE};
pub use format::{parse_model_file, ModelSpecDocument, SpecError};
pub use report::{render_report, Format, ReportDocument};
