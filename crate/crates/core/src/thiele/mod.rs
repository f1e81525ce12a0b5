//! Linearized Thiele surrogate for the gyrotropic ring-down.
//!
//! The core position `z = X + iY` obeys
//! `ż = (iPω_v − γ_v/2) z + iκ_d b(t)`, where `b = B_x + iB_y` is the in-plane
//! pulse field and `iκ_d b` encodes `κ_d (ẑ × B)`. The equation is linear with
//! piecewise-constant forcing, so each sample is advanced with the exact
//! propagator.

mod spectrum;

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{GYROMAGNETIC_RATIO, XI_DISC};
use crate::error::{Error, Result};
use crate::params::{gyrotropic_frequency, vortex_linewidth, DiscGeometry, Material, Sign};

#[cfg(test)]
use spectrum::prominences;
pub use spectrum::{detect_peaks, power_spectrum, Peak, SpectrumResult, DEFAULT_PROMINENCE, MIN_SAMPLES};

/// Minimum record length in gyration periods.
pub const MIN_RECORD_PERIODS: f64 = 10.0;
/// Samples required per gyration period.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GyrotropicMode {
    /// ω_v (rad/s).
    pub omega: f64,
    /// γ_v (rad/s); the amplitude decays as `e^{−γ_v t/2}`.
    pub gamma: f64,
    pub polarity: Sign,
    /// κ_d (m·s⁻¹·T⁻¹).
    pub drive_gain: f64,
}

impl GyrotropicMode {
    pub fn new(omega: f64, gamma: f64, polarity: Sign, drive_gain: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::invalid("omega_v", "gyrotropic frequency must be positive"));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::invalid("gamma_v", "linewidth must be non-negative"));
        }
        if !(drive_gain >= 0.0 && drive_gain.is_finite()) {
            return Err(Error::invalid("drive_gain", "drive gain must be non-negative"));
        }
        Ok(Self {
            omega,
            gamma,
            polarity,
            drive_gain,
        })
    }

    /// Mode of a disc with frequency, linewidth and drive gain from the
    /// closed-form expressions.
    pub fn from_disc(mat: &Material, disc: &DiscGeometry) -> Result<Self> {
        let omega = gyrotropic_frequency(mat, disc);
        let gamma = vortex_linewidth(mat, disc, omega)?;
        Self::new(omega, gamma, disc.polarity, drive_gain(mat, disc, omega, gamma))
    }

    pub fn frequency_hz(&self) -> f64 {
        self.omega / std::f64::consts::TAU
    }

    /// Eigenvalue `iPω − γ/2` of the free motion.
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(-0.5 * self.gamma, self.polarity.value() * self.omega)
    }

    /// Static displacement under a constant in-plane field `b`.
    pub fn equilibrium(&self, b: Complex64) -> Complex64 {
        -Complex64::i() * self.drive_gain * b / self.eigenvalue()
    }

    /// Advances `z` by `tau_forced` under field `b` followed by `tau_free`
    /// without field.
    fn propagate(&self, z: Complex64, b: Complex64, tau_forced: f64, tau_free: f64) -> Complex64 {
        let lam = self.eigenvalue();
        let mut z = z;
        if tau_forced > 0.0 {
            let eq = self.equilibrium(b);
            z = eq + (z - eq) * (lam * tau_forced).exp();
        }
        if tau_free > 0.0 {
            z *= (lam * tau_free).exp();
        }
        z
    }
}

/// κ_d such that the static displacement `κ_d B/|iPω − γ/2|` equals the core
/// shift `r χ B/(ξ M_s)` implied by the susceptibility `χ = γ_g ξ² M_s/γ`.
pub fn drive_gain(mat: &Material, disc: &DiscGeometry, omega: f64, gamma: f64) -> f64 {
    let chi = GYROMAGNETIC_RATIO * XI_DISC * XI_DISC * mat.ms / gamma;
    let lam = Complex64::new(-0.5 * gamma, omega).norm();
    chi * disc.radius * lam / (XI_DISC * mat.ms)
}

/// Pulse-then-release excitation and sampling schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDownProtocol {
    /// In-plane pulse amplitude (T).
    pub pulse_amplitude: f64,
    /// In-plane pulse direction measured from x (rad).
    #[serde(default)]
    pub pulse_angle: f64,
    /// Time the field stays on (s).
    pub pulse_duration: f64,
    /// Free ring-down recorded after release (s).
    pub record_duration: f64,
    pub sample_interval: f64,
}

impl Default for RingDownProtocol {
    fn default() -> Self {
        Self {
            pulse_amplitude: 10e-3,
            pulse_angle: 0.0,
            pulse_duration: 200e-9,
            record_duration: 50e-6,
            sample_interval: 0.5e-9,
        }
    }
}

impl RingDownProtocol {
    pub fn validate(&self) -> Result<()> {
        if !(self.pulse_amplitude >= 0.0 && self.pulse_amplitude.is_finite()) {
            return Err(Error::invalid("pulse_amplitude", "must be finite and non-negative"));
        }
        for (name, v) in [
            ("pulse_duration", self.pulse_duration),
            ("record_duration", self.record_duration),
            ("sample_interval", self.sample_interval),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Complex64 {
        Complex64::from_polar(self.pulse_amplitude, self.pulse_angle)
    }
}

/// Uniformly sampled core positions covering the pulse and the ring-down.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreTrajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// First sample at or after the field is switched off.
    pub release_index: usize,
}

impl CoreTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sample_interval(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    /// `X² + Y²` per sample.
    pub fn radius_squared(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(x, y)| x * x + y * y).collect()
    }

    /// Post-release part with times measured from the release sample.
    pub fn ring_down(&self) -> CoreTrajectory {
        let r = self.release_index;
        let t0 = self.times.get(r).copied().unwrap_or(0.0);
        CoreTrajectory {
            times: self.times[r..].iter().map(|t| t - t0).collect(),
            x: self.x[r..].to_vec(),
            y: self.y[r..].to_vec(),
            release_index: 0,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W, comments: &[String]) -> std::io::Result<()> {
        crate::io::csv::write_columns(
            w,
            comments,
            &["time".into(), "x".into(), "y".into()],
            &[&self.times, &self.x, &self.y],
        )
    }
}

/// Integrates the pulse-then-release protocol from rest at the origin.
pub fn simulate_ring_down(mode: &GyrotropicMode, protocol: &RingDownProtocol) -> Result<CoreTrajectory> {
    protocol.validate()?;
    let dt = protocol.sample_interval;
    let limit = 1.0 / (MIN_SAMPLES_PER_PERIOD * mode.frequency_hz());
    if dt > limit {
        return Err(Error::Aliasing { interval: dt, limit });
    }
    let period = 1.0 / mode.frequency_hz();
    if protocol.record_duration < MIN_RECORD_PERIODS * period {
        return Err(Error::Precondition(format!(
            "record of {:.3e} s is shorter than {MIN_RECORD_PERIODS} gyration periods ({:.3e} s)",
            protocol.record_duration,
            MIN_RECORD_PERIODS * period
        )));
    }
    let t_p = protocol.pulse_duration;
    let total = t_p + protocol.record_duration;
    let n = (total / dt).floor() as usize + 1;
    let b = protocol.field();

    let mut times = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut z = Complex64::new(0.0, 0.0);
    let mut release_index = None;
    for k in 0..n {
        let t = k as f64 * dt;
        if k > 0 {
            let t_prev = (k - 1) as f64 * dt;
            let forced = (t_p.min(t) - t_prev).clamp(0.0, dt);
            z = mode.propagate(z, b, forced, dt - forced);
        }
        if release_index.is_none() && t >= t_p {
            release_index = Some(k);
        }
        times.push(t);
        x.push(z.re);
        y.push(z.im);
    }
    Ok(CoreTrajectory {
        times,
        x,
        y,
        release_index: release_index.unwrap_or(n),
    })
}
