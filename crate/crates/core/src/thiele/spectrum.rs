//! One-sided FFT power spectrum of the core X coordinate and peak analysis.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::CoreTrajectory;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 64;
/// Peaks below this fraction of the spectrum maximum in prominence are
/// discarded by [`power_spectrum`].
pub const DEFAULT_PROMINENCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Interpolated peak position (Hz).
    pub frequency: f64,
    /// Interpolated peak power.
    pub height: f64,
    pub bin: usize,
    pub prominence: f64,
    /// Full width at half maximum (Hz), if both half-power crossings exist.
    pub fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Bin frequencies (Hz), `k / (N_pad Δt)`.
    pub frequencies: Vec<f64>,
    /// One-sided power; sums to `Σ X²` of the record.
    pub power: Vec<f64>,
    pub bin_width: f64,
    /// Peaks sorted by descending height.
    pub peaks: Vec<Peak>,
}

impl SpectrumResult {
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W, comments: &[String]) -> std::io::Result<()> {
        crate::io::csv::write_columns(
            w,
            comments,
            &["frequency_hz".into(), "power".into()],
            &[&self.frequencies, &self.power],
        )
    }
}

/// Rectangular-window power spectrum of `X(t)` with the record zero-padded to
/// `zero_pad_factor` times its length.
pub fn power_spectrum(traj: &CoreTrajectory, zero_pad_factor: usize) -> Result<SpectrumResult> {
    let n = traj.len();
    if n < MIN_SAMPLES {
        return Err(Error::RecordTooShort {
            len: n,
            min: MIN_SAMPLES,
        });
    }
    if zero_pad_factor == 0 {
        return Err(Error::invalid("zero_pad_factor", "must be at least 1"));
    }
    let dt = traj.sample_interval();
    let n_pad = n * zero_pad_factor;
    let mut buf: Vec<Complex64> = traj.x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n_pad, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_pad).process(&mut buf);

    let half = n_pad / 2;
    let scale = 1.0 / n_pad as f64;
    let power: Vec<f64> = (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() * scale;
            if k == 0 || (n_pad.is_multiple_of(2) && k == half) {
                p
            } else {
                2.0 * p
            }
        })
        .collect();
    let bin_width = 1.0 / (n_pad as f64 * dt);
    let frequencies = (0..power.len()).map(|k| k as f64 * bin_width).collect();
    let mut spec = SpectrumResult {
        frequencies,
        power,
        bin_width,
        peaks: Vec::new(),
    };
    spec.peaks = detect_peaks(&spec, DEFAULT_PROMINENCE);
    Ok(spec)
}

/// Topographic prominence of every sample: height above the higher of the
/// two lowest points separating it from a higher sample (or the boundary).
pub(crate) fn prominences(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut left_min = vec![0.0; n];
    let mut stack: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let mut m = p[i];
        while let Some(&(v, seg_min)) = stack.last() {
            if v <= p[i] {
                m = m.min(seg_min);
                stack.pop();
            } else {
                break;
            }
        }
        left_min[i] = m;
        stack.push((p[i], m));
    }
    stack.clear();
    let mut out = vec![0.0; n];
    for i in (0..n).rev() {
        let mut m = p[i];
        while let Some(&(v, seg_min)) = stack.last() {
            if v < p[i] {
                m = m.min(seg_min);
                stack.pop();
            } else {
                break;
            }
        }
        out[i] = p[i] - left_min[i].max(m);
        stack.push((p[i], m));
    }
    out
}

fn half_width(p: &[f64], i: usize, half: f64, bw: f64) -> Option<f64> {
    let mut l = i;
    while l > 0 && p[l] > half {
        l -= 1;
    }
    let mut r = i;
    while r + 1 < p.len() && p[r] > half {
        r += 1;
    }
    if p[l] > half || p[r] > half {
        return None;
    }
    let cross = |a: usize, b: usize| a as f64 + (half - p[a]) / (p[b] - p[a]) * (b as f64 - a as f64);
    let fl = cross(l, l + 1);
    let fr = cross(r - 1, r);
    Some((fr - fl) * bw)
}

/// Local maxima whose prominence is at least `min_prominence` times the
/// spectrum maximum, refined by a parabola through three bins.
pub fn detect_peaks(spec: &SpectrumResult, min_prominence: f64) -> Vec<Peak> {
    let p = &spec.power;
    let n = p.len();
    let max = p.iter().copied().fold(0.0, f64::max);
    if n < 3 || max <= 0.0 {
        return Vec::new();
    }
    let prom = prominences(p);
    let threshold = min_prominence * max;
    let bw = spec.bin_width;
    let mut peaks: Vec<Peak> = (1..n - 1)
        .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1] && prom[i] > 0.0 && prom[i] >= threshold)
        .map(|i| {
            let (a, b, c) = (p[i - 1], p[i], p[i + 1]);
            let denom = a - 2.0 * b + c;
            let delta = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            Peak {
                frequency: (i as f64 + delta) * bw,
                height: b - 0.25 * (a - c) * delta,
                bin: i,
                prominence: prom[i],
                fwhm: half_width(p, i, 0.5 * b, bw),
            }
        })
        .collect();
    peaks.sort_by(|x, y| y.height.total_cmp(&x.height));
    peaks
}
