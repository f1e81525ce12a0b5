use crate::constants::{FLEXURAL_FREQUENCY_PREFACTOR, FLEXURAL_MASS_FRACTION, HBAR};
use crate::error::{Error, Result};

use super::CantileverGeometry;
use std::f64::consts::TAU;

fn modal_mass(c: &CantileverGeometry) -> f64 {
    FLEXURAL_MASS_FRACTION * c.density * c.beam_volume()
}

/// Angular frequency of the fundamental flexural mode,
/// ω_c/2π = 0.56 sqrt(E / 12ρ(1+c)) t_c/l_c² with c = m / (0.24 ρ l w t).
pub fn cantilever_frequency(c: &CantileverGeometry) -> f64 {
    let load = c.tip_mass / modal_mass(c);
    TAU * FLEXURAL_FREQUENCY_PREFACTOR * (c.youngs_modulus / (12.0 * c.density * (1.0 + load))).sqrt() * c.thickness
        / (c.length * c.length)
}

/// Tip mass that tunes the fundamental mode to `omega` (rad/s).
///
/// Fails if the bare beam is already below the target.
pub fn tip_mass_for_frequency(c: &CantileverGeometry, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::invalid("target_frequency", "must be positive"));
    }
    let k = omega / (TAU * FLEXURAL_FREQUENCY_PREFACTOR * c.thickness / (c.length * c.length));
    let load = c.youngs_modulus / (12.0 * c.density * k * k) - 1.0;
    if load < 0.0 {
        let bare = CantileverGeometry {
            tip_mass: 0.0,
            ..c.clone()
        };
        return Err(Error::invalid(
            "target_frequency",
            format!(
                "{:.4e} Hz exceeds the unloaded beam frequency {:.4e} Hz",
                omega / TAU,
                cantilever_frequency(&bare) / TAU
            ),
        ));
    }
    Ok(load * modal_mass(c))
}

/// M ≈ 0.24 ρ l w t + m.
pub fn effective_mass(c: &CantileverGeometry) -> f64 {
    modal_mass(c) + c.tip_mass
}

/// a0 = sqrt(ħ / 2Mω).
pub fn zero_point_amplitude(mass: f64, omega: f64) -> f64 {
    (HBAR / (2.0 * mass * omega)).sqrt()
}

pub fn effective_mass_and_zero_point(c: &CantileverGeometry, omega_c: f64) -> (f64, f64) {
    let m = effective_mass(c);
    (m, zero_point_amplitude(m, omega_c))
}
