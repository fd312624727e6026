//! Batch runner: TOML experiment lists in, CSV tables, a JSON-lines log and
//! a summary table out.

mod config;
mod execute;
mod record;
mod report;

pub use config::{
    CoefficientSpec, ConfigFile, ExperimentConfig, ExperimentKind, MethodSpec, PieceSpec,
    load_config, parse_config, random_bounded_spec,
};
pub use execute::{DEFAULT_TOLERANCE, RESULTS_LOG, persist, run, run_all};
pub use record::{CSV_HEADER, ResultRecord, ResultRow, append_jsonl, read_jsonl, write_csv};
pub use report::report;
