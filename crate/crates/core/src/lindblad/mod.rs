//! Thermal Lindblad master equation
//! `dρ/dt = −i[H, ρ] + Σ_k r_k (L_k ρ L_k† − {L_k†L_k, ρ}/2)`
//! for Hamiltonians given as `H/ħ` in rad/s.

mod integrate;
mod sparse;
mod steady;

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{CMatrix, ModeOperators, QOperator, SpaceSignature, C64, ONE, ZERO};
use sparse::Sparse;

pub use integrate::{evolve, evolve_batch, fixed_step, Evolution, EvolveOptions, Integrator, StepStats, Tolerances};
pub use steady::{liouvillian, steady_state, steady_state_occupation};

/// Relative Frobenius tolerance for accepting a Hamiltonian as Hermitian.
pub const HAMILTONIAN_HERMITICITY_TOL: f64 = 1e-12;

/// Dissipator `rate · D[operator]`.
#[derive(Debug, Clone)]
pub struct CollapseChannel {
    pub operator: QOperator,
    pub rate: f64,
}

impl CollapseChannel {
    pub fn new(operator: QOperator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::invalid(
                "rate",
                format!("collapse rate must be finite and ≥ 0, got {rate}"),
            ));
        }
        Ok(Self { operator, rate })
    }

    /// Upper bound on the decay rate this channel induces: `rate · ‖L†L‖`.
    pub fn rate_bound(&self) -> f64 {
        let ll = self.operator.dagger() * self.operator.clone();
        self.rate * gershgorin(ll.matrix())
    }
}

/// Damping of a bosonic mode at thermal occupation `nbar`:
/// `(n̄+1)γ D[a]` and `n̄γ D[a†]`. Zero-rate channels are omitted.
pub fn thermal_channels(a: &QOperator, rate: f64, nbar: f64) -> Result<Vec<CollapseChannel>> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::invalid(
            "nbar",
            format!("thermal occupation must be finite and ≥ 0, got {nbar}"),
        ));
    }
    let mut out = Vec::new();
    if rate == 0.0 {
        return Ok(out);
    }
    out.push(CollapseChannel::new(a.clone(), (nbar + 1.0) * rate)?);
    if nbar > 0.0 {
        out.push(CollapseChannel::new(a.dagger(), nbar * rate)?);
    }
    Ok(out)
}

/// Hamiltonian plus collapse channels on one signature.
#[derive(Debug, Clone)]
pub struct OpenSystemModel {
    hamiltonian: QOperator,
    channels: Vec<CollapseChannel>,
    effective: Sparse,
    jumps: Vec<Sparse>,
}

impl OpenSystemModel {
    pub fn new(hamiltonian: QOperator, channels: Vec<CollapseChannel>) -> Result<Self> {
        let err = hamiltonian.hermiticity_error();
        if err > HAMILTONIAN_HERMITICITY_TOL {
            return Err(Error::Precondition(format!(
                "Hamiltonian is not Hermitian (relative error {err:.3e})"
            )));
        }
        for c in &channels {
            if c.operator.signature() != hamiltonian.signature() {
                return Err(Error::DimensionMismatch(format!(
                    "collapse operator on {} but Hamiltonian on {}",
                    c.operator.signature(),
                    hamiltonian.signature()
                )));
            }
        }
        let minus_i = C64::new(0.0, -1.0);
        let mut k: CMatrix = hamiltonian.matrix() * minus_i;
        let mut jumps = Vec::with_capacity(channels.len());
        for c in channels.iter().filter(|c| c.rate > 0.0) {
            let l = c.operator.matrix() * C64::new(c.rate.sqrt(), 0.0);
            k -= l.adjoint() * &l * C64::new(0.5, 0.0);
            jumps.push(Sparse::from_dense(&l));
        }
        Ok(Self {
            effective: Sparse::from_dense(&k),
            jumps,
            hamiltonian,
            channels,
        })
    }

    /// Closed-system model.
    pub fn closed(hamiltonian: QOperator) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn signature(&self) -> &SpaceSignature {
        self.hamiltonian.signature()
    }

    pub fn hamiltonian(&self) -> &QOperator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[CollapseChannel] {
        &self.channels
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Gershgorin bound on the largest Bohr frequency `E_max − E_min` of the
    /// Hamiltonian (rad/s), the fastest oscillation in `ρ`.
    pub fn max_angular_frequency(&self) -> f64 {
        let h = self.hamiltonian.matrix();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..h.nrows() {
            let radius: f64 = (0..h.ncols()).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum();
            lo = lo.min(h[(i, i)].re - radius);
            hi = hi.max(h[(i, i)].re + radius);
        }
        (hi - lo).max(0.0)
    }

    /// Largest single-channel decay rate bound (rad/s).
    pub fn max_rate(&self) -> f64 {
        self.channels
            .iter()
            .map(CollapseChannel::rate_bound)
            .fold(0.0, f64::max)
    }

    /// Writes the right-hand side for `rho` into `out`, using `scratch` as
    /// workspace. All slices are column-major `d×d`.
    pub(crate) fn rhs_into(&self, rho: &[C64], out: &mut [C64], scratch: &mut [C64]) {
        out.fill(ZERO);
        self.effective.left_mul_add(rho, out);
        self.effective.right_mul_adjoint_add(rho, out);
        for l in &self.jumps {
            scratch.fill(ZERO);
            l.left_mul_add(rho, scratch);
            l.right_mul_adjoint_add(scratch, out);
        }
    }
}

/// Maximum absolute row sum, an upper bound on the spectral radius.
pub(crate) fn gershgorin(m: &CMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Master-equation time derivative of `rho`.
pub fn rhs(model: &OpenSystemModel, rho: &CMatrix) -> Result<CMatrix> {
    let d = model.dim();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, model needs {d}x{d}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let mut out = CMatrix::zeros(d, d);
    let mut scratch = CMatrix::zeros(d, d);
    model.rhs_into(rho.as_slice(), out.as_mut_slice(), scratch.as_mut_slice());
    Ok(out)
}

/// Density matrix on a composite space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityState {
    #[serde(skip)]
    matrix: CMatrix,
}

impl DensityState {
    /// Validates Hermiticity, unit trace and positivity against `tol`.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(
                "density matrix must be square and nonempty".into(),
            ));
        }
        let s = Self { matrix };
        s.check(tol, 0.0)?;
        Ok(s)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("state vector norm² is {norm}, expected 1")));
        }
        let n = psi.len();
        Ok(Self {
            matrix: CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()),
        })
    }

    /// Product basis state with the given per-subsystem levels.
    pub fn basis(sig: &SpaceSignature, levels: &[usize]) -> Result<Self> {
        if levels.len() != sig.len() {
            return Err(Error::DimensionMismatch(format!("{} levels for {sig}", levels.len())));
        }
        for (l, s) in levels.iter().zip(sig.subsystems()) {
            if *l >= s.dim {
                return Err(Error::invalid(
                    "levels",
                    format!("level {l} exceeds `{}` of dimension {}", s.name, s.dim),
                ));
            }
        }
        let d = sig.dim();
        let mut m = CMatrix::zeros(d, d);
        let i = sig.index(levels);
        m[(i, i)] = ONE;
        Ok(Self { matrix: m })
    }

    /// Truncated thermal state of a single mode, renormalized to unit trace.
    pub fn thermal_mode(n_max: usize, nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::invalid("nbar", "thermal occupation must be ≥ 0"));
        }
        let d = n_max + 1;
        let mut p: Vec<f64> = if nbar == 0.0 {
            (0..d).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect()
        } else {
            let q = nbar / (nbar + 1.0);
            (0..d).map(|n| q.powi(n as i32)).collect()
        };
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= z);
        Ok(Self {
            matrix: CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(p[i], 0.0) } else { ZERO }),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `‖ρ − ρ†‖_F / ‖ρ‖_F`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.norm();
        if n == 0.0 {
            return 0.0;
        }
        (&self.matrix - self.matrix.adjoint()).norm() / n
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        crate::operators::eigenvalues(&h)[0]
    }

    /// True when `ρ + floor·I` admits a Cholesky factorization, i.e. every
    /// eigenvalue exceeds `−floor`.
    pub fn is_positive_within(&self, floor: f64) -> bool {
        let d = self.dim();
        let mut h = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        for i in 0..d {
            h[(i, i)] += C64::new(floor, 0.0);
        }
        is_positive_definite(&h)
    }

    pub(crate) fn check(&self, tol: &Tolerances, time: f64) -> Result<()> {
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::Invariant {
                time,
                detail: format!("trace {tr} deviates from 1 by more than {:.1e}", tol.trace),
            });
        }
        let h = self.hermiticity_error();
        if h > tol.hermiticity {
            return Err(Error::Invariant {
                time,
                detail: format!("Hermiticity error {h:.3e} exceeds {:.1e}", tol.hermiticity),
            });
        }
        if !self.is_positive_within(tol.positivity) {
            return Err(Error::Invariant {
                time,
                detail: format!(
                    "eigenvalue below −{:.1e} (min {:.3e})",
                    tol.positivity,
                    self.min_eigenvalue()
                ),
            });
        }
        Ok(())
    }
}

/// Cholesky test on a Hermitian matrix using only its lower triangle.
fn is_positive_definite(h: &CMatrix) -> bool {
    let n = h.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut s = h[(j, j)].re;
        for k in 0..j {
            s -= l[(j, k)].norm_sqr();
        }
        if !(s > 0.0) {
            return false;
        }
        let ljj = s.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut v = h[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / ljj;
        }
    }
    true
}

/// `tr(ρ·op)`.
pub fn expectation(rho: &DensityState, op: &QOperator) -> Result<C64> {
    let d = rho.dim();
    if op.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {} vs state dimension {d}",
            op.dim()
        )));
    }
    let (r, o) = (rho.matrix(), op.matrix());
    let mut acc = ZERO;
    for j in 0..d {
        for i in 0..d {
            acc += r[(i, j)] * o[(j, i)];
        }
    }
    Ok(acc)
}

/// Named Hermitian operator sampled along an evolution.
#[derive(Debug, Clone)]
pub struct Observable {
    pub name: String,
    pub operator: QOperator,
}

impl Observable {
    pub fn new(name: impl Into<String>, operator: QOperator) -> Self {
        Self {
            name: name.into(),
            operator,
        }
    }
}

/// Number operators of every subsystem, named after the subsystems.
pub fn occupation_observables(sig: &SpaceSignature) -> Result<Vec<Observable>> {
    let ops = ModeOperators::new(sig);
    sig.subsystems()
        .iter()
        .map(|s| Ok(Observable::new(s.name.clone(), ops.number(&s.name)?)))
        .collect()
}

/// Named tracks sampled on a common strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    tracks: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        validate_grid(&times)?;
        Ok(Self {
            times,
            tracks: Vec::new(),
        })
    }

    pub fn push_track(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::DimensionMismatch(format!(
                "track `{name}` has {} samples for {} times",
                values.len(),
                self.times.len()
            )));
        }
        if self.tracks.iter().any(|(n, _)| *n == name) {
            return Err(Error::invalid("track", format!("duplicate track `{name}`")));
        }
        self.tracks.push((name, values));
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn track(&self, name: &str) -> Option<&[f64]> {
        self.tracks.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn track_names(&self) -> impl Iterator<Item = &str> {
        self.tracks.iter().map(|(n, _)| n.as_str())
    }

    pub fn tracks(&self) -> &[(String, Vec<f64>)] {
        &self.tracks
    }

    /// CSV with a `time` column followed by one column per track.
    pub fn write_csv<W: Write>(&self, w: W, comments: &[String]) -> std::io::Result<()> {
        let mut header = vec!["time".to_string()];
        header.extend(self.tracks.iter().map(|(n, _)| n.clone()));
        let mut columns: Vec<&[f64]> = vec![&self.times];
        columns.extend(self.tracks.iter().map(|(_, v)| v.as_slice()));
        crate::io::csv::write_columns(w, comments, &header, &columns)
    }
}

pub(crate) fn validate_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times", "time grid must be finite"));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "times",
            format!("time grid not strictly increasing at {} → {}", w[0], w[1]),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
