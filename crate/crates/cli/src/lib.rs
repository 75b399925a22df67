//! File formats, configuration and run orchestration around `gatesynth-core`.

pub mod config;
pub mod matrix_file;
pub mod parallel;
pub mod report;
pub mod run;

pub use config::{parse_config, Command, ConfigError, ReevaluateConfig, RunConfig, TargetSpec};
pub use matrix_file::{load_matrix_file, parse_matrix, render_matrix, MatrixFileError};
pub use parallel::ParallelScorer;
pub use report::RunReport;
pub use run::{execute, reevaluate, Reevaluation, RunError};
