//! Stationary states from the null space of the Liouvillian.

use super::{DensityState, OpenSystemModel};
use crate::error::{Error, Result};
use crate::operators::{CMatrix, SubsystemKind, C64, ONE, ZERO};

/// Superoperator acting on column-stacked `vec(ρ)`:
/// `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn liouvillian(model: &OpenSystemModel) -> CMatrix {
    let d = model.dim();
    let id = CMatrix::identity(d, d);
    let h = model.hamiltonian().matrix();
    let minus_i = C64::new(0.0, -1.0);
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * minus_i;
    for c in model.channels() {
        if c.rate == 0.0 {
            continue;
        }
        let a = c.operator.matrix();
        let ada = a.adjoint() * a;
        let r = C64::new(c.rate, 0.0);
        l += (a.conjugate().kronecker(a) - (id.kronecker(&ada) + ada.transpose().kronecker(&id)) * C64::new(0.5, 0.0))
            * r;
    }
    l
}

/// Unique stationary state, solved from `𝓛 vec(ρ) = 0` with one equation
/// replaced by `tr ρ = 1`.
pub fn steady_state(model: &OpenSystemModel) -> Result<DensityState> {
    let d = model.dim();
    let mut l = liouvillian(model);
    let n = d * d;
    let mut b = nalgebra::DVector::from_element(n, ZERO);
    for j in 0..n {
        l[(0, j)] = ZERO;
    }
    for i in 0..d {
        l[(0, i * d + i)] = ONE;
    }
    b[0] = ONE;
    let x = l
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Precondition("Liouvillian has no unique stationary state".into()))?;
    let m = CMatrix::from_column_slice(d, d, x.as_slice());
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    Ok(DensityState::from_matrix_unchecked(m))
}

/// Stationary `⟨a†a⟩` of a model consisting of a single damped bosonic mode.
pub fn steady_state_occupation(model: &OpenSystemModel) -> Result<f64> {
    let sig = model.signature();
    if sig.len() != 1 || sig.subsystems()[0].kind != SubsystemKind::Boson {
        return Err(Error::Precondition(format!(
            "expected a single bosonic mode, got {sig}"
        )));
    }
    if model.channels().iter().all(|c| c.rate == 0.0) {
        return Err(Error::Precondition("mode is undamped".into()));
    }
    let rho = steady_state(model)?;
    let d = model.dim();
    Ok((0..d).map(|n| n as f64 * rho.matrix()[(n, n)].re).sum())
}
