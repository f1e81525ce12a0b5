use std::path::PathBuf;

use thiserror::Error;

use crate::io::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("disc radius {radius:.4e} m does not exceed the vortex core radius {core_radius:.4e} m")]
    NoVortex { radius: f64, core_radius: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("slot {slot} out of range for a signature with {len} subsystems")]
    SlotOutOfRange { slot: usize, len: usize },

    #[error("detuning must be nonzero")]
    ZeroDetuning,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sample interval {interval:.3e} s exceeds the aliasing limit {limit:.3e} s")]
    Aliasing { interval: f64, limit: f64 },

    #[error("record too short: {len} samples, at least {min} required")]
    RecordTooShort { len: usize, min: usize },

    #[error("step size underflow at t = {time:.6e} s (h = {step:.3e} s)")]
    StepUnderflow { time: f64, step: f64 },

    #[error("numerical invariant violated at t = {time:.6e} s: {detail}")]
    Invariant { time: f64, detail: String },

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the command-line front end.
    ///
    /// `1` usage or I/O problems, `2` validation failures, `3` numerical
    /// invariant failures during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::Invariant { .. } | Error::StepUnderflow { .. } => 3,
            _ => 2,
        }
    }
}
