//! Time integration of the master equation: fixed-step classic RK4 and an
//! adaptive Dormand–Prince 5(4) mode.

use serde::{Deserialize, Serialize};

use super::{validate_grid, DensityState, Observable, OpenSystemModel, TimeSeries};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::operators::{CMatrix, C64, ZERO};

/// Invariant and error tolerances of an evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Maximum `|tr ρ − 1|`, checked at every accepted step.
    pub trace: f64,
    /// Maximum `‖ρ − ρ†‖/‖ρ‖`, checked at every snapshot.
    pub hermiticity: f64,
    /// Eigenvalue floor: every eigenvalue must exceed `−positivity`.
    pub positivity: f64,
    /// Relative local error target of the adaptive mode.
    pub rtol: f64,
    /// Absolute local error target of the adaptive mode.
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            trace: 1e-9,
            hermiticity: 1e-10,
            positivity: 1e-8,
            rtol: 1e-9,
            atol: 1e-11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Integrator {
    /// Classic RK4 with step [`fixed_step`] `· step_fraction`,
    /// shortened so every output interval holds a whole number of steps.
    FixedRk4 { step_fraction: f64 },
    /// Dormand–Prince 5(4) with error control from [`Tolerances`].
    Adaptive,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::FixedRk4 { step_fraction: 1.0 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvolveOptions {
    pub integrator: Integrator,
    pub tolerances: Tolerances,
    pub observables: Vec<Observable>,
    /// Keep the density matrix at every grid time.
    pub keep_snapshots: bool,
}

impl EvolveOptions {
    pub fn with_observables(observables: Vec<Observable>) -> Self {
        Self {
            observables,
            ..Self::default()
        }
    }
}

/// Integration statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    /// Largest `|tr ρ − 1|` seen at any accepted step.
    pub max_trace_error: f64,
    /// Largest Hermiticity error seen at any snapshot.
    pub max_hermiticity_error: f64,
    /// Smallest and largest step actually taken.
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub series: TimeSeries,
    pub snapshots: Vec<DensityState>,
    pub stats: StepStats,
}

/// Step-size rule of the fixed-step integrator: `min(1/(50 ω_max), 1/(50 Γ_max))`
/// with `ω_max` the Bohr-frequency bound of `H` and `Γ_max` the largest
/// channel rate bound, both in rad/s.
pub fn fixed_step(model: &OpenSystemModel) -> f64 {
    let f = model.max_angular_frequency();
    let g = model.max_rate();
    let mut dt = f64::INFINITY;
    if f > 0.0 {
        dt = dt.min(1.0 / (50.0 * f));
    }
    if g > 0.0 {
        dt = dt.min(1.0 / (50.0 * g));
    }
    dt
}

struct Work {
    scratch: Vec<C64>,
    k: Vec<Vec<C64>>,
    tmp: Vec<C64>,
    next: Vec<C64>,
    rhs_calls: usize,
}

impl Work {
    fn new(d: usize, stages: usize) -> Self {
        let n = d * d;
        let z = ZERO;
        Self {
            scratch: vec![z; n],
            k: vec![vec![z; n]; stages],
            tmp: vec![z; n],
            next: vec![z; n],
            rhs_calls: 0,
        }
    }

    fn eval(&mut self, model: &OpenSystemModel, stage: usize, from_tmp: bool, y: &[C64]) {
        let src = if from_tmp { &self.tmp } else { y };
        model.rhs_into(src, &mut self.k[stage], &mut self.scratch);
        self.rhs_calls += 1;
    }

    /// `tmp = y + h Σ a_j k_j`.
    fn combine(&mut self, y: &[C64], h: f64, coeffs: &[(usize, f64)]) {
        self.tmp.copy_from_slice(y);
        for &(j, a) in coeffs {
            if a == 0.0 {
                continue;
            }
            let c = h * a;
            for (t, k) in self.tmp.iter_mut().zip(&self.k[j]) {
                *t += k * c;
            }
        }
    }
}

fn trace(y: &[C64], d: usize) -> C64 {
    (0..d).map(|i| y[i * d + i]).sum()
}

fn check_trace(y: &[C64], d: usize, t: f64, tol: &Tolerances, stats: &mut StepStats) -> Result<()> {
    let tr = trace(y, d);
    let err = (tr.re - 1.0).abs().max(tr.im.abs());
    stats.max_trace_error = stats.max_trace_error.max(err);
    if !err.is_finite() || err > tol.trace {
        return Err(Error::Invariant {
            time: t,
            detail: format!("trace {tr} deviates from 1 by more than {:.1e}", tol.trace),
        });
    }
    Ok(())
}

fn rk4_step(model: &OpenSystemModel, w: &mut Work, y: &mut [C64], h: f64) {
    w.eval(model, 0, false, y);
    w.combine(y, h, &[(0, 0.5)]);
    w.eval(model, 1, true, y);
    w.combine(y, h, &[(1, 0.5)]);
    w.eval(model, 2, true, y);
    w.combine(y, h, &[(2, 1.0)]);
    w.eval(model, 3, true, y);
    let c = [h / 6.0, h / 3.0, h / 3.0, h / 6.0];
    for i in 0..y.len() {
        y[i] += w.k[0][i] * c[0] + w.k[1][i] * c[1] + w.k[2][i] * c[2] + w.k[3][i] * c[3];
    }
}

const DP_A: [&[(usize, f64)]; 6] = [
    &[(0, 1.0 / 5.0)],
    &[(0, 3.0 / 40.0), (1, 9.0 / 40.0)],
    &[(0, 44.0 / 45.0), (1, -56.0 / 15.0), (2, 32.0 / 9.0)],
    &[
        (0, 19372.0 / 6561.0),
        (1, -25360.0 / 2187.0),
        (2, 64448.0 / 6561.0),
        (3, -212.0 / 729.0),
    ],
    &[
        (0, 9017.0 / 3168.0),
        (1, -355.0 / 33.0),
        (2, 46732.0 / 5247.0),
        (3, 49.0 / 176.0),
        (4, -5103.0 / 18656.0),
    ],
    &[
        (0, 35.0 / 384.0),
        (2, 500.0 / 1113.0),
        (3, 125.0 / 192.0),
        (4, -2187.0 / 6784.0),
        (5, 11.0 / 84.0),
    ],
];

const DP_E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince attempt from `y` (with `k[0] = f(y)` already set).
/// Leaves the candidate in `w.next`, its derivative in `k[6]`, and returns
/// the scaled error norm.
fn dp_attempt(model: &OpenSystemModel, w: &mut Work, y: &[C64], h: f64, tol: &Tolerances) -> f64 {
    for (s, row) in DP_A.iter().enumerate() {
        w.combine(y, h, row);
        w.eval(model, s + 1, true, y);
    }
    std::mem::swap(&mut w.next, &mut w.tmp);
    // `next` holds the 5th-order solution (row 6 of A); `k[6] = f(next)`.
    let mut err = 0.0f64;
    for i in 0..y.len() {
        let mut e = ZERO;
        for (j, c) in DP_E.iter().enumerate() {
            if *c != 0.0 {
                e += w.k[j][i] * *c;
            }
        }
        let scale = tol.atol + tol.rtol * y[i].norm().max(w.next[i].norm());
        err = err.max((e * h).norm() / scale);
    }
    err
}

/// Integrates `rho0` over `t_grid`. The first grid time is the initial time.
pub fn evolve(model: &OpenSystemModel, rho0: &DensityState, t_grid: &[f64], opts: &EvolveOptions) -> Result<Evolution> {
    let d = model.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "initial state dimension {} vs model {d}",
            rho0.dim()
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::invalid("t_grid", "time grid is empty"));
    }
    validate_grid(t_grid)?;
    for o in &opts.observables {
        if o.operator.signature() != model.signature() {
            return Err(Error::DimensionMismatch(format!(
                "observable `{}` is on a different space",
                o.name
            )));
        }
    }
    let tol = &opts.tolerances;
    rho0.check(tol, t_grid[0])?;

    let mut stats = StepStats {
        min_step: f64::INFINITY,
        ..StepStats::default()
    };
    let mut tracks: Vec<Vec<f64>> = vec![Vec::with_capacity(t_grid.len()); opts.observables.len()];
    let mut snapshots = Vec::new();
    let mut y: Vec<C64> = rho0.matrix().as_slice().to_vec();

    let mut record = |y: &[C64], t: f64, stats: &mut StepStats| -> Result<()> {
        let state = DensityState::from_matrix_unchecked(CMatrix::from_column_slice(d, d, y));
        let herm = state.hermiticity_error();
        stats.max_hermiticity_error = stats.max_hermiticity_error.max(herm);
        state.check(tol, t)?;
        for (o, track) in opts.observables.iter().zip(tracks.iter_mut()) {
            track.push(super::expectation(&state, &o.operator)?.re);
        }
        if opts.keep_snapshots {
            snapshots.push(state);
        }
        Ok(())
    };
    record(&y, t_grid[0], &mut stats)?;

    let dt_rule = fixed_step(model);
    match opts.integrator {
        Integrator::FixedRk4 { step_fraction } => {
            if !(step_fraction > 0.0 && step_fraction <= 1.0) {
                return Err(Error::invalid("step_fraction", "must lie in (0, 1]"));
            }
            let mut w = Work::new(d, 4);
            let dt_max = dt_rule * step_fraction;
            for win in t_grid.windows(2) {
                let span = win[1] - win[0];
                let n = if dt_max.is_finite() {
                    (span / dt_max).ceil().max(1.0) as usize
                } else {
                    1
                };
                let h = span / n as f64;
                for s in 0..n {
                    rk4_step(model, &mut w, &mut y, h);
                    stats.accepted += 1;
                    check_trace(&y, d, win[0] + (s + 1) as f64 * h, tol, &mut stats)?;
                }
                stats.min_step = stats.min_step.min(h);
                stats.max_step = stats.max_step.max(h);
                record(&y, win[1], &mut stats)?;
            }
            stats.rhs_evaluations = w.rhs_calls;
        }
        Integrator::Adaptive => {
            let mut w = Work::new(d, 7);
            let total = t_grid[t_grid.len() - 1] - t_grid[0];
            let h_min = total * 1e-14;
            let mut h = if dt_rule.is_finite() { dt_rule } else { total };
            let mut t = t_grid[0];
            w.eval(model, 0, false, &y);
            for &target in &t_grid[1..] {
                while t < target {
                    let remaining = target - t;
                    let last = h >= remaining;
                    let step = if last { remaining } else { h };
                    let err = dp_attempt(model, &mut w, &y, step, tol);
                    let factor = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if err <= 1.0 && err.is_finite() {
                        t = if last { target } else { t + step };
                        std::mem::swap(&mut y, &mut w.next);
                        w.k.swap(0, 6);
                        stats.accepted += 1;
                        stats.min_step = stats.min_step.min(step);
                        stats.max_step = stats.max_step.max(step);
                        check_trace(&y, d, t, tol, &mut stats)?;
                        if !last {
                            h = step * factor;
                        }
                    } else {
                        stats.rejected += 1;
                        h = step * factor.min(1.0);
                        if !h.is_finite() || h < h_min {
                            return Err(Error::StepUnderflow { time: t, step: h });
                        }
                    }
                }
                record(&y, target, &mut stats)?;
            }
            stats.rhs_evaluations = w.rhs_calls;
        }
    }
    if stats.accepted == 0 {
        stats.min_step = 0.0;
    }

    let mut series = TimeSeries::new(t_grid.to_vec())?;
    for (o, track) in opts.observables.iter().zip(tracks) {
        series.push_track(o.name.clone(), track)?;
    }
    Ok(Evolution {
        series,
        snapshots,
        stats,
    })
}

/// Runs independent evolutions on the work pool; results keep input order.
pub fn evolve_batch(
    jobs: &[(OpenSystemModel, DensityState)],
    t_grid: &[f64],
    opts: &EvolveOptions,
    exec: Execution,
) -> Vec<Result<Evolution>> {
    exec.map_slice(jobs, |(m, r)| evolve(m, r, t_grid, opts))
}
