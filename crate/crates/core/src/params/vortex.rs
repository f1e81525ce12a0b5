//! Gyrotropic-mode frequency and linewidth of the vortex.

use std::f64::consts::TAU;

use super::{DiscGeometry, Material};
use crate::constants::{CORE_RADIUS_PREFACTOR, GYROMAGNETIC_RATIO, MU0};
use crate::error::{Error, Result};

/// Exchange length λ_L = sqrt(2A / μ0 M_s²).
pub fn exchange_length(mat: &Material) -> f64 {
    (2.0 * mat.exchange / (MU0 * mat.ms * mat.ms)).sqrt()
}

/// Vortex core radius r_v = 1.58 λ_L (t/λ_L)^(1/3).
pub fn vortex_core_radius(mat: &Material, thickness: f64) -> f64 {
    let lambda = exchange_length(mat);
    CORE_RADIUS_PREFACTOR * lambda * (thickness / lambda).cbrt()
}

/// Angular gyrotropic frequency ω_v = (10/9) γ_g μ0 M_s β / 2π with the
/// angular γ_g, so that ω_v/2π evaluates to (10/9)(γ_g/2π) μ0 M_s β / 2π.
///
/// Linear in β; outside the thin-disc regime (β > 0.2) the result is still
/// returned and [`DiscGeometry::warnings`] reports the range violation.
pub fn gyrotropic_frequency(mat: &Material, disc: &DiscGeometry) -> f64 {
    let beta = disc.aspect_ratio();
    if beta > super::THIN_DISC_LIMIT {
        log::debug!("aspect ratio {beta:.3} outside the thin-disc regime");
    }
    10.0 / 9.0 * GYROMAGNETIC_RATIO * MU0 * mat.ms * beta / TAU
}

/// Angular linewidth γ = 2 α_LLG [1 + ln(r/r_v)/2] ω_v.
///
/// Fails when the disc is not larger than the vortex core.
pub fn vortex_linewidth(mat: &Material, disc: &DiscGeometry, omega_v: f64) -> Result<f64> {
    let core_radius = vortex_core_radius(mat, disc.thickness);
    if disc.radius <= core_radius {
        return Err(Error::NoVortex {
            radius: disc.radius,
            core_radius,
        });
    }
    Ok(2.0 * mat.damping * (1.0 + (disc.radius / core_radius).ln() / 2.0) * omega_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::cyclic;
    use approx::assert_relative_eq;

    fn yig_disc(t_nm: f64) -> DiscGeometry {
        DiscGeometry::new(180e-9, t_nm * 1e-9).unwrap()
    }

    #[test]
    fn exchange_length_anchors() {
        // Direct closed-form evaluation with CODATA constants.
        assert_relative_eq!(exchange_length(&Material::yig()), 1.214_015_482e-8, max_relative = 1e-9);
        assert_relative_eq!(
            exchange_length(&Material::cofe()),
            3.368_180_539e-9,
            max_relative = 1e-9
        );
    }

    #[test]
    fn exchange_length_scales_as_sqrt_a() {
        let yig = Material::yig();
        let mut stiff = yig.clone();
        stiff.exchange *= 4.0;
        assert_relative_eq!(
            exchange_length(&stiff),
            2.0 * exchange_length(&yig),
            max_relative = 1e-14
        );
    }

    #[test]
    fn core_radius() {
        let yig = Material::yig();
        assert_relative_eq!(vortex_core_radius(&yig, 20e-9), 2.265_426_114e-8, max_relative = 1e-9);
        let lambda = exchange_length(&yig);
        assert_relative_eq!(vortex_core_radius(&yig, lambda), 1.58 * lambda, max_relative = 1e-14);
        assert_relative_eq!(
            vortex_core_radius(&yig, 160e-9),
            2.0 * vortex_core_radius(&yig, 20e-9),
            max_relative = 1e-14
        );
    }

    #[test]
    fn gyrotropic_frequency_anchors() {
        let yig = Material::yig();
        let f20 = cyclic(gyrotropic_frequency(&yig, &yig_disc(20.0)));
        assert!((99e6..101e6).contains(&f20), "f_v = {f20}");
        assert_relative_eq!(f20, 99_029_742.368, max_relative = 1e-9);
        let f15 = cyclic(gyrotropic_frequency(&yig, &yig_disc(15.0)));
        assert_relative_eq!(f15, 74_272_306.776, max_relative = 1e-9);
    }

    #[test]
    fn gyrotropic_frequency_is_linear_in_beta_and_ms() {
        let yig = Material::yig();
        let a = gyrotropic_frequency(&yig, &DiscGeometry::new(200e-9, 10e-9).unwrap());
        let b = gyrotropic_frequency(&yig, &DiscGeometry::new(200e-9, 20e-9).unwrap());
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-14);
        let mut heavy = yig.clone();
        heavy.ms *= 3.0;
        let c = gyrotropic_frequency(&heavy, &DiscGeometry::new(200e-9, 10e-9).unwrap());
        assert_relative_eq!(c, 3.0 * a, max_relative = 1e-14);
    }

    #[test]
    fn linewidth_anchor() {
        let yig = Material::yig();
        let disc = yig_disc(20.0);
        let w = gyrotropic_frequency(&yig, &disc);
        let g = cyclic(vortex_linewidth(&yig, &disc, w).unwrap());
        assert!((g - 20e3).abs() < 2e3, "γ/2π = {g}");
        assert_relative_eq!(g, 20_165.470_44, max_relative = 1e-8);
    }

    #[test]
    fn linewidth_scalings() {
        let yig = Material::yig();
        let disc = yig_disc(20.0);
        let w = gyrotropic_frequency(&yig, &disc);
        let mut damped = yig.clone();
        damped.damping *= 2.0;
        assert_relative_eq!(
            vortex_linewidth(&damped, &disc, w).unwrap(),
            2.0 * vortex_linewidth(&yig, &disc, w).unwrap(),
            max_relative = 1e-14
        );
        // r = r_v e² makes the bracket exactly 2.
        let rv = vortex_core_radius(&yig, 20e-9);
        let wide = DiscGeometry::new(rv * std::f64::consts::E.powi(2), 20e-9).unwrap();
        assert_relative_eq!(
            vortex_linewidth(&yig, &wide, 1e9).unwrap(),
            4.0 * yig.damping * 1e9,
            max_relative = 1e-13
        );
    }

    #[test]
    fn linewidth_rejects_disc_smaller_than_core() {
        let yig = Material::yig();
        let tiny = DiscGeometry::new(21e-9, 20e-9).unwrap();
        let err = vortex_linewidth(&yig, &tiny, 1e9).unwrap_err();
        assert!(matches!(err, Error::NoVortex { .. }));
    }
}
