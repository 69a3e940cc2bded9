//! Run configuration, the check table, suite execution and the JSON report.

pub mod checks;
pub mod config;
pub mod emit;
pub mod suite;

pub use checks::{check_specs, expected_checks, Applies, CheckSpec, Comparison, Suite, ANCHORS};
pub use config::{parse_config, parse_with, BaseKind, ConfigError, Overrides, RunConfig};
pub use emit::{render_json, write_report, ReportError};
pub use suite::{k_grid, min_defect, run_suite, CheckResult, Report};
