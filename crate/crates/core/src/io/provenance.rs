//! JSON sidecar files recording every input of a run.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::constants::{
    CORE_RADIUS_PREFACTOR, FLEXURAL_FREQUENCY_PREFACTOR, FLEXURAL_MASS_FRACTION, GYROMAGNETIC_RATIO, G_S, HBAR, K_B,
    MU0, MU_B, XI_DISC,
};
use crate::error::{Error, Result};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Physical constants and model prefactors used by the build.
pub fn constants() -> Value {
    json!({
        "hbar": HBAR,
        "mu0": MU0,
        "mu_b": MU_B,
        "k_b": K_B,
        "gyromagnetic_ratio": GYROMAGNETIC_RATIO,
        "xi_disc": XI_DISC,
        "g_s": G_S,
        "core_radius_prefactor": CORE_RADIUS_PREFACTOR,
        "flexural_mass_fraction": FLEXURAL_MASS_FRACTION,
        "flexural_frequency_prefactor": FLEXURAL_FREQUENCY_PREFACTOR,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'a str,
    pub config: &'a RunConfig,
    pub constants: Value,
    /// Resolved inputs of the experiment itself.
    pub inputs: T,
    pub outputs: Vec<String>,
}

impl<'a, T: Serialize> Provenance<'a, T> {
    pub fn new(experiment: &'a str, config: &'a RunConfig, inputs: T, outputs: Vec<String>) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            experiment,
            config,
            constants: constants(),
            inputs,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Precondition(format!("provenance: {e}")))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
