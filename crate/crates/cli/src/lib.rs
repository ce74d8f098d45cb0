//! Command-line front end: experiment files, sweeps, selection studies and
//! analytic-versus-simulation validation.

pub mod config;
pub mod error;
pub mod output;
pub mod selection;
pub mod sweep;
pub mod validate;

pub use config::{parse_config, parse_config_str, load_preset, OutputFormat, ResolvedConfig, SweepSpec, SweepVariable};
pub use error::{CliError, CliResult};
pub use selection::run_selection_study;
pub use sweep::{run_outage_sweep, ResultRecord};
pub use validate::{run_validate, ValidationReport};

/// Seed used when neither the command line nor the config gives one.
pub const DEFAULT_SEED: u64 = 20_190_601;
