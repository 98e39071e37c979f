//! Experiment configuration, the benchmark runner and report output.

mod config;
mod report;
mod runner;
mod tables;

pub use config::{DataSource, ExperimentConfig, HolidayChoice, ModelKind, SuiteConfig};
pub use report::{emit_report, BenchmarkReport, ReportFormat, ReportRow, CSV_COLUMNS};
pub use runner::{run_experiment, run_suite, Stage};
pub use tables::{canned_suite, TABLE_BASE_CASE};
