//! Catalog algebras, sample files, reports and the `liedolb` command line.

pub mod catalog;
mod cli;
pub mod report;
pub mod samples;

pub use catalog::{catalog, CATALOG_NAMES};
pub use cli::{run_cli, CliOutcome};
pub use report::{Format, Report};
pub use samples::{parse_assignments, parse_complex, parse_samples};
