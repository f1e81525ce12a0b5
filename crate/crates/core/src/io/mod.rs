//! Configuration, output writers and command dispatch.

pub mod config;
pub mod csv;
pub mod dispatch;
pub mod provenance;
pub mod svg;
pub mod units;

pub use config::{
    parse_config, parse_config_str, ConfigError, ConfigErrorKind, DetuningReference, RunConfig, REFERENCE_CONFIG,
};
pub use dispatch::{dispatch, Artifacts, Command, Figure};
