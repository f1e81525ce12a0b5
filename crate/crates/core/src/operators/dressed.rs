//! Dressed-state reduction of the driven spin-1 NV ground triplet to an
//! effective two-level system.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{CMatrix, C64};
use crate::constants::{G_S, HBAR, MU_B};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedSpinParams {
    /// Mixing angle with `tan 2θ = 2√2 Ω/Δ`.
    pub theta: f64,
    /// Exact splitting `ω_eg − ω_dg`.
    pub lambda: f64,
    /// Large-detuning splitting `2Ω²/Δ`.
    pub lambda_approx: f64,
    pub g1: f64,
    pub g2: f64,
    pub omega_eg: f64,
    pub omega_dg: f64,
    pub omega_eg_approx: f64,
    pub omega_dg_approx: f64,
    /// `|Λ_approx − Λ| / |Λ|`, zero when both vanish.
    pub approximation_error: f64,
}

/// Dressed-state parameters for detuning `Δ`, Rabi frequency `Ω` and
/// spin–cantilever coupling `g_nc` (all rad/s).
pub fn dressed_transform(delta: f64, omega: f64, g_nc: f64) -> Result<DressedSpinParams> {
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    if !delta.is_finite() || !omega.is_finite() || !g_nc.is_finite() {
        return Err(Error::invalid("delta", "inputs must be finite"));
    }
    let theta = 0.5 * (2.0 * 2f64.sqrt() * omega / delta).atan();
    let root = (delta * delta + 8.0 * omega * omega).sqrt();
    let omega_eg = root;
    let omega_dg = 0.5 * (delta + root);
    let lambda = omega_eg - omega_dg;
    let w2 = omega * omega / delta;
    let lambda_approx = 2.0 * w2;
    let approximation_error = if lambda == 0.0 {
        if lambda_approx == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((lambda_approx - lambda) / lambda).abs()
    };
    Ok(DressedSpinParams {
        theta,
        lambda,
        lambda_approx,
        g1: -g_nc * theta.sin(),
        g2: g_nc * theta.cos(),
        omega_eg,
        omega_dg,
        omega_eg_approx: delta + 4.0 * w2,
        omega_dg_approx: delta + 2.0 * w2,
        approximation_error,
    })
}

/// Rotating-frame detunings `Δ± = D ± μ_B g_s B_z/ħ − ω₀` of the |±1⟩
/// sublevels. `zero_field_splitting` and `drive` are angular frequencies.
pub fn nv_detunings(zero_field_splitting: f64, b_z: f64, drive: f64) -> (f64, f64) {
    let zeeman = MU_B * G_S * b_z / HBAR;
    (
        zero_field_splitting + zeeman - drive,
        zero_field_splitting - zeeman - drive,
    )
}

/// Rabi frequency `Ω = (√2/4) μ_B g_s B₀/ħ` of a transverse drive amplitude.
pub fn rabi_frequency(b0: f64) -> f64 {
    2f64.sqrt() / 4.0 * MU_B * G_S * b0 / HBAR
}

/// Driven triplet Hamiltonian (rad/s) in the basis (|0⟩, |+1⟩, |−1⟩).
pub fn nv_dressing_hamiltonian(delta_plus: f64, delta_minus: f64, omega: f64) -> CMatrix {
    let mut m = DMatrix::from_element(3, 3, C64::new(0.0, 0.0));
    m[(1, 1)] = C64::new(delta_plus, 0.0);
    m[(2, 2)] = C64::new(delta_minus, 0.0);
    for k in 1..3 {
        m[(0, k)] = C64::new(omega, 0.0);
        m[(k, 0)] = C64::new(omega, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::eigenvalues;
    use approx::assert_relative_eq;

    #[test]
    fn undriven_limit() {
        let p = dressed_transform(3.0, 0.0, 1.0).unwrap();
        assert_eq!(p.theta, 0.0);
        assert_eq!(p.lambda, 0.0);
        assert_eq!(p.g1, 0.0);
        assert_eq!(p.g2, 1.0);
        assert_eq!(p.approximation_error, 0.0);
    }

    #[test]
    fn equal_detuning_and_drive_angle() {
        let p = dressed_transform(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(p.theta, 0.615_479_708_670_387_3, epsilon = 1e-12);
        assert_relative_eq!((2.0 * p.theta).tan(), 2.0 * 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn large_detuning_splitting() {
        let p = dressed_transform(10.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(p.lambda, 0.196_152_422_706_632, epsilon = 1e-12);
        assert_relative_eq!(p.lambda_approx, 0.2, epsilon = 1e-15);
        assert!(p.approximation_error < 0.05);
        assert_relative_eq!(p.lambda, p.omega_eg - p.omega_dg, epsilon = 1e-12);
    }

    #[test]
    fn matches_triplet_diagonalization() {
        let (delta, omega) = (7.0, 1.3);
        let p = dressed_transform(delta, omega, 1.0).unwrap();
        let ev = eigenvalues(&nv_dressing_hamiltonian(delta, delta, omega));
        // Ordered levels: G, D, E.
        assert_relative_eq!(ev[1] - ev[0], p.omega_dg, epsilon = 1e-12);
        assert_relative_eq!(ev[2] - ev[0], p.omega_eg, epsilon = 1e-12);
    }

    #[test]
    fn zero_detuning_is_rejected() {
        assert!(matches!(dressed_transform(0.0, 1.0, 1.0), Err(Error::ZeroDetuning)));
    }

    #[test]
    fn detunings_split_symmetrically() {
        let (p, m) = nv_detunings(10.0, 1e-3, 4.0);
        assert_relative_eq!(p + m, 2.0 * (10.0 - 4.0), epsilon = 1e-9);
        assert_relative_eq!(p - m, 2.0 * MU_B * G_S * 1e-3 / HBAR, max_relative = 1e-12);
        assert_relative_eq!(
            rabi_frequency(1e-6),
            2f64.sqrt() / 4.0 * MU_B * 2.0e-6 / HBAR,
            max_relative = 1e-12
        );
    }
}
