//! Coupling strengths, thermal occupations and ultrastrong-coupling metrics.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{DiscGeometry, Material};
use crate::constants::{GYROMAGNETIC_RATIO, GYROMAGNETIC_RATIO_CYCLIC, G_S, HBAR, K_B, MU0, MU_B, XI_DISC};

/// g/ω at which the ultrastrong-coupling regime is taken to begin.
pub const USC_THRESHOLD: f64 = 0.1;

/// Vortex–phonon coupling g_vc = (B_vc/2) sqrt(V X / ħ), X = ξ² M_s γ_g / 2π.
pub fn coupling_vc(mat: &Material, disc: &DiscGeometry, b_vc: f64) -> f64 {
    let x = XI_DISC * XI_DISC * mat.ms * GYROMAGNETIC_RATIO / TAU;
    0.5 * b_vc * (disc.volume() * x / HBAR).sqrt()
}

/// Resonant susceptibility χ = γ_g ξ² M_s / γ of the gyrotropic mode.
pub fn vortex_susceptibility(mat: &Material, gamma: f64) -> f64 {
    GYROMAGNETIC_RATIO * XI_DISC * XI_DISC * mat.ms / gamma
}

/// Intermediate quantities of the susceptibility route to g_vc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityRoute {
    pub susceptibility: f64,
    /// Maximum magnetization response ΔM = χ B_vc.
    pub response: f64,
    /// Normalised magnetization m of the Zeeman term ħ g_vc = V m B_vc.
    pub normalized_magnetization: f64,
    pub coupling: f64,
}

/// Rebuilds g_vc from the Zeeman interaction ħg = V m B and the resonant
/// response ΔM = 8π m g / γ = χ B. Eliminating m gives
/// g² = ΔM γ V B / (8π ħ); the damping cancels.
pub fn coupling_vc_via_susceptibility(
    mat: &Material,
    disc: &DiscGeometry,
    b_vc: f64,
    gamma: f64,
) -> SusceptibilityRoute {
    let chi = vortex_susceptibility(mat, gamma);
    let response = chi * b_vc;
    let v = disc.volume();
    let coupling = (response * gamma * v * b_vc / (8.0 * PI * HBAR)).sqrt();
    let normalized_magnetization = if b_vc == 0.0 { 0.0 } else { HBAR * coupling / (v * b_vc) };
    SusceptibilityRoute {
        susceptibility: chi,
        response,
        normalized_magnetization,
        coupling,
    }
}

/// NV–phonon coupling ħ g_nc = g_s μ_B G_nc a0.
pub fn coupling_nc(gradient: f64, a0: f64) -> f64 {
    G_S * MU_B * gradient * a0 / HBAR
}

/// Direct vortex–NV coupling ħ g_vn = μ m_v V / y³ with μ = μ0 μ_B g_s / 2π.
///
/// The zero-point magnetization m_v = sqrt(ħ γ M_s / 2V) is evaluated with the
/// cyclic gyromagnetic ratio γ_g/2π = 28 GHz/T.
pub fn coupling_vn(mat: &Material, disc: &DiscGeometry, y: f64) -> f64 {
    let v = disc.volume();
    let m_v = (HBAR * GYROMAGNETIC_RATIO_CYCLIC * mat.ms / (2.0 * v)).sqrt();
    let mu = MU0 * MU_B * G_S / TAU;
    mu * m_v * v / (y.powi(3) * HBAR)
}

/// Bose–Einstein occupation n̄ = 1 / (exp(ħω/k_B T) − 1); zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UscMetrics {
    /// g/ω.
    pub ratio: f64,
    /// C = g²/(γκ).
    pub cooperativity: f64,
    /// U = sqrt(C g/ω).
    pub measure: f64,
    pub ultrastrong: bool,
}

pub fn usc_metrics(g: f64, omega: f64, gamma: f64, kappa: f64) -> UscMetrics {
    let ratio = g / omega;
    let cooperativity = g * g / (gamma * kappa);
    UscMetrics {
        ratio,
        cooperativity,
        measure: (cooperativity * ratio).sqrt(),
        ultrastrong: ratio >= USC_THRESHOLD,
    }
}
