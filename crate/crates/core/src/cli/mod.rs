//! Config-driven runs: parsing, the solve pipeline, and CSV/report output.

mod config;
mod run;

pub use config::{
    parse_config, ConfigError, DataConfig, DiagnosticsConfig, OutputConfig, PointValue,
    RadiationConfig, RunConfig, DEFAULT_WINDOW,
};
pub use run::{
    embedded_csv, field_csv, row_asymmetry, run, write_bundle, Check, Diagnostics, OutputBundle,
    RunError, BOUNDARY_THRESHOLD, DRIFT_SHELLS, DRIFT_THRESHOLD, EXPONENT_THRESHOLD,
    INTERIOR_THRESHOLD,
};
