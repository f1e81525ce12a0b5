//! Physical constants (CODATA 2018) and the fixed model constants.

use std::f64::consts::TAU;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability (N/A²).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Bohr magneton (J/T).
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Cyclic gyromagnetic ratio γ_g/2π (Hz/T).
pub const GYROMAGNETIC_RATIO_CYCLIC: f64 = 28.0e9;
/// Angular gyromagnetic ratio γ_g (rad·s⁻¹·T⁻¹). Every formula in
/// [`crate::params`] that mentions γ_g uses this angular value unless it says
/// otherwise.
pub const GYROMAGNETIC_RATIO: f64 = TAU * GYROMAGNETIC_RATIO_CYCLIC;

/// Geometric factor ξ of the gyrotropic mode in a disc.
pub const XI_DISC: f64 = 2.0 / 3.0;
/// Electron Landé factor.
pub const G_S: f64 = 2.0;

/// Prefactor of the core radius law r_v = 1.58 λ_L (t/λ_L)^(1/3).
pub const CORE_RADIUS_PREFACTOR: f64 = 1.58;

/// Effective-mass fraction of the fundamental flexural mode.
pub const FLEXURAL_MASS_FRACTION: f64 = 0.24;
/// Prefactor of the fundamental flexural frequency.
pub const FLEXURAL_FREQUENCY_PREFACTOR: f64 = 0.56;

/// Converts a cyclic frequency in Hz to rad/s.
#[inline]
pub fn angular(hz: f64) -> f64 {
    TAU * hz
}

/// Converts an angular frequency in rad/s to Hz.
#[inline]
pub fn cyclic(rad_per_s: f64) -> f64 {
    rad_per_s / TAU
}
