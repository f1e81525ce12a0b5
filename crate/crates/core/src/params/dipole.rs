//! Point-dipole model of the tip magnet.

use std::f64::consts::PI;

use serde::Serialize;

use super::DipoleMagnet;
use crate::constants::MU0;
use crate::error::{Error, Result};

/// Field gradient G = 3 μ0 |μ_m| / (4π d⁴) at distance `d` along the moment.
pub fn dipole_gradient(mag: &DipoleMagnet, d: f64) -> f64 {
    3.0 * MU0 * mag.moment / (4.0 * PI * d.powi(4))
}

/// Inverse of [`dipole_gradient`]: the moment producing `gradient` at `d`.
pub fn moment_for_gradient(gradient: f64, d: f64) -> f64 {
    gradient * 4.0 * PI * d.powi(4) / (3.0 * MU0)
}

/// Field of a point dipole at displacement `r` from it:
/// B = μ0/4π · (3 r̂ (μ·r̂) − μ) / |r|³.
pub fn dipole_field(mag: &DipoleMagnet, r: [f64; 3]) -> Result<[f64; 3]> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !(norm > 0.0) {
        return Err(Error::invalid("field point", "coincides with the dipole"));
    }
    let unit = [r[0] / norm, r[1] / norm, r[2] / norm];
    let mu = mag.orientation.map(|c| c * mag.moment);
    let mu_dot = mu[0] * unit[0] + mu[1] * unit[1] + mu[2] * unit[2];
    let prefactor = MU0 / (4.0 * PI * norm.powi(3));
    Ok([0, 1, 2].map(|i| prefactor * (3.0 * unit[i] * mu_dot - mu[i])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub position: [f64; 3],
    pub field: [f64; 3],
}

/// Evaluates the field at every point (positions relative to the dipole).
pub fn dipole_field_map(mag: &DipoleMagnet, points: &[[f64; 3]]) -> Result<Vec<FieldSample>> {
    points
        .iter()
        .map(|&position| {
            Ok(FieldSample {
                position,
                field: dipole_field(mag, position)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn norm(v: [f64; 3]) -> f64 {
        v.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn reference_magnet() -> DipoleMagnet {
        DipoleMagnet::from_gradient_anchor(5e5, 160e-9).unwrap()
    }

    #[test]
    fn anchor_back_solve() {
        let m = reference_magnet();
        assert_relative_eq!(m.moment, 1.092_266_666e-15, max_relative = 1e-8);
        assert_relative_eq!(dipole_gradient(&m, 160e-9), 5e5, max_relative = 1e-13);
        assert_relative_eq!(dipole_gradient(&m, 150e-9), 647_269.135_8, max_relative = 1e-9);
    }

    #[test]
    fn inverse_fourth_power() {
        let m = reference_magnet();
        for d in [50e-9, 150e-9, 400e-9] {
            assert_relative_eq!(
                dipole_gradient(&m, d) / dipole_gradient(&m, 2.0 * d),
                16.0,
                max_relative = 1e-13
            );
        }
        // Steep monotone decay across the 100-300 nm window.
        let g: Vec<f64> = (0..21)
            .map(|i| dipole_gradient(&m, 100e-9 + 10e-9 * i as f64))
            .collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert!(g[0] / g[20] > 50.0);
    }

    #[test]
    fn gradient_matches_finite_difference_of_field() {
        let m = reference_magnet();
        let d = 150e-9;
        let h = 1e-12;
        // Lateral gradient of B_z in the equatorial plane equals G; on the axis it is 2G.
        let up = dipole_field(&m, [d + h, 0.0, 0.0]).unwrap()[2];
        let down = dipole_field(&m, [d - h, 0.0, 0.0]).unwrap()[2];
        assert_relative_eq!(
            ((up - down) / (2.0 * h)).abs(),
            dipole_gradient(&m, d),
            max_relative = 1e-6
        );
        let up = dipole_field(&m, [0.0, 0.0, d + h]).unwrap()[2];
        let down = dipole_field(&m, [0.0, 0.0, d - h]).unwrap()[2];
        assert_relative_eq!(
            ((up - down) / (2.0 * h)).abs(),
            2.0 * dipole_gradient(&m, d),
            max_relative = 1e-6
        );
    }

    #[test]
    fn on_axis_and_equatorial_values() {
        let m = reference_magnet();
        let d = 150e-9;
        let axis = dipole_field(&m, [0.0, 0.0, d]).unwrap();
        assert_relative_eq!(
            norm(axis),
            MU0 * m.moment / (2.0 * PI * d.powi(3)),
            max_relative = 1e-13
        );
        let eq = dipole_field(&m, [d, 0.0, 0.0]).unwrap();
        assert_relative_eq!(norm(eq), MU0 * m.moment / (4.0 * PI * d.powi(3)), max_relative = 1e-13);
        assert!(eq[2] < 0.0, "equatorial field must be antiparallel to the moment");
    }

    #[test]
    fn singular_point_rejected() {
        assert!(dipole_field(&reference_magnet(), [0.0; 3]).is_err());
        assert!(dipole_field_map(&reference_magnet(), &[[1e-7, 0.0, 0.0], [0.0; 3]]).is_err());
    }

    #[test]
    fn map_decay_and_symmetry() {
        let m = reference_magnet();
        let pts = [[30e-9, 0.0, -150e-9], [-30e-9, 0.0, -150e-9], [60e-9, 0.0, -300e-9]];
        let map = dipole_field_map(&m, &pts).unwrap();
        // Reflection through the dipole axis: x → −x flips B_x, keeps B_z.
        assert_relative_eq!(map[0].field[0], -map[1].field[0], max_relative = 1e-13);
        assert_relative_eq!(map[0].field[2], map[1].field[2], max_relative = 1e-13);
        // Same ray, twice the distance: magnitude ÷ 8.
        assert_relative_eq!(norm(map[0].field) / norm(map[2].field), 8.0, max_relative = 1e-12);
    }

    #[test]
    fn central_region_is_nearly_uniform() {
        let m = reference_magnet();
        let center = norm(dipole_field(&m, [0.0, 0.0, -150e-9]).unwrap());
        for i in -6..=6 {
            let x = 5e-9 * i as f64;
            let b = norm(dipole_field(&m, [x, 0.0, -150e-9]).unwrap());
            assert!(((b - center) / center).abs() < 0.2, "x = {x}: {b} vs {center}");
        }
    }
}
