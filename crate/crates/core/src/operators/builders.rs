//! Hamiltonian builders. Every Hamiltonian is returned as `H/ħ` in rad/s.

use super::{
    boson_annihilator, embed, sigma_minus, QOperator, SpaceSignature, SubsystemKind, CANTILEVER, SPIN, VORTEX,
};
use crate::error::{Error, Result};

/// Whether the counter-rotating terms of a bilinear boson coupling are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rwa {
    /// Keep only the excitation-exchanging terms.
    #[default]
    On,
    /// Keep the full `(a† + a)(b† + b)` product.
    Off,
}

/// Lowering operators of the named subsystems of a signature.
#[derive(Debug, Clone)]
pub struct ModeOperators {
    signature: SpaceSignature,
}

impl ModeOperators {
    pub fn new(signature: &SpaceSignature) -> Self {
        Self {
            signature: signature.clone(),
        }
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    /// `a` for a boson slot, `σ₋` for a two-level slot.
    pub fn lowering(&self, name: &str) -> Result<QOperator> {
        let slot = self
            .signature
            .slot(name)
            .ok_or_else(|| Error::DimensionMismatch(format!("no subsystem `{name}` in {}", self.signature)))?;
        let s = &self.signature.subsystems()[slot];
        let local = match s.kind {
            SubsystemKind::Boson => boson_annihilator(s.dim - 1)?,
            SubsystemKind::TwoLevel => sigma_minus(),
        };
        embed(&local, slot, &self.signature)
    }

    /// `a†a` or `σ₊σ₋`.
    pub fn number(&self, name: &str) -> Result<QOperator> {
        let l = self.lowering(name)?;
        Ok(l.dagger() * l)
    }

    /// Sum of the number operators of every subsystem.
    pub fn total_excitation(&self) -> QOperator {
        let sig = &self.signature;
        QOperator::diagonal(sig, |i| sig.excitations(i) as f64)
    }

    /// `σ_z = |e⟩⟨e| − |g⟩⟨g|` on a two-level slot.
    pub fn sigma_z(&self, name: &str) -> Result<QOperator> {
        let n = self.number(name)?;
        Ok(n.scale(2.0) - QOperator::identity(&self.signature))
    }
}

fn require_cutoff(n_max: usize) -> Result<()> {
    if n_max < 1 {
        return Err(Error::invalid("n_max", "Fock cutoff must be at least 1"));
    }
    Ok(())
}

/// Vortex–phonon model on (cantilever, vortex):
/// `ω_c a_c†a_c + ω_v a_v†a_v + g_vc (a_v† + a_v)(a_c† + a_c)`, or the
/// beam-splitter form `g_vc (a_v†a_c + a_v a_c†)` under the RWA.
pub fn build_h_vc(omega_c: f64, omega_v: f64, g_vc: f64, rwa: Rwa, n_max: usize) -> Result<QOperator> {
    require_cutoff(n_max)?;
    let ops = ModeOperators::new(&SpaceSignature::cantilever_vortex(n_max));
    let ac = ops.lowering(CANTILEVER)?;
    let av = ops.lowering(VORTEX)?;
    let free = (ac.dagger() * ac.clone()).scale(omega_c) + (av.dagger() * av.clone()).scale(omega_v);
    let coupling = match rwa {
        Rwa::On => av.dagger() * ac.clone() + av.clone() * ac.dagger(),
        Rwa::Off => (av.dagger() + av) * (ac.dagger() + ac),
    };
    Ok(free + coupling.scale(g_vc))
}

/// Tripartite Hamiltonian in the frame rotating at the spin frequency:
/// `Δ1 a_c†a_c + Δ2 a_v†a_v + g_vc (a_v†a_c + h.c.) + g_nc (σ₊a_c + h.c.)`.
pub fn build_h_tripartite(delta1: f64, delta2: f64, g_vc: f64, g_nc: f64, n_max: usize) -> Result<QOperator> {
    require_cutoff(n_max)?;
    let ops = ModeOperators::new(&SpaceSignature::tripartite(n_max));
    let ac = ops.lowering(CANTILEVER)?;
    let av = ops.lowering(VORTEX)?;
    let sm = ops.lowering(SPIN)?;
    let h = (ac.dagger() * ac.clone()).scale(delta1)
        + (av.dagger() * av.clone()).scale(delta2)
        + (av.dagger() * ac.clone() + av * ac.dagger()).scale(g_vc)
        + (sm.dagger() * ac.clone() + sm * ac.dagger()).scale(g_nc);
    Ok(h)
}

/// `g_vc g_nc / |Δ1|`.
pub fn effective_coupling(g_vc: f64, g_nc: f64, delta1: f64) -> Result<f64> {
    if delta1 == 0.0 || !delta1.is_finite() {
        return Err(Error::ZeroDetuning);
    }
    Ok(g_vc * g_nc / delta1.abs())
}

/// Effective vortex–spin Hamiltonian after eliminating the cantilever:
/// `(Δ2 − β²Δ1) a_v†a_v − (α²Δ1/2) σ_z + g_eff (a_v σ₊ + a_v† σ₋)`
/// with `α = g_nc/|Δ1|`, `β = g_vc/|Δ1|`, `g_eff = β g_nc`.
pub fn build_h_eff(delta1: f64, delta2: f64, g_vc: f64, g_nc: f64, n_max: usize) -> Result<QOperator> {
    require_cutoff(n_max)?;
    let g_eff = effective_coupling(g_vc, g_nc, delta1)?;
    let alpha = g_nc / delta1.abs();
    let beta = g_vc / delta1.abs();
    let ops = ModeOperators::new(&SpaceSignature::vortex_spin(n_max));
    let av = ops.lowering(VORTEX)?;
    let sm = ops.lowering(SPIN)?;
    let h = (av.dagger() * av.clone()).scale(delta2 - beta * beta * delta1)
        - ops.sigma_z(SPIN)?.scale(alpha * alpha * delta1 / 2.0)
        + (av.clone() * sm.dagger() + av.dagger() * sm).scale(g_eff);
    Ok(h)
}

/// Jaynes–Cummings Hamiltonian on (vortex, spin):
/// `ω a†a + (ω_tl/2) σ_z + g (σ₊a + σ₋a†)`.
pub fn build_h_jc(omega_b: f64, omega_tl: f64, g: f64, n_max: usize) -> Result<QOperator> {
    require_cutoff(n_max)?;
    let ops = ModeOperators::new(&SpaceSignature::vortex_spin(n_max));
    let a = ops.lowering(VORTEX)?;
    let sm = ops.lowering(SPIN)?;
    let h = (a.dagger() * a.clone()).scale(omega_b)
        + ops.sigma_z(SPIN)?.scale(omega_tl / 2.0)
        + (sm.dagger() * a.clone() + sm * a.dagger()).scale(g);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{eigenvalues, excitation_block};
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    const HERMITIAN_TOL: f64 = 1e-12;

    fn commutator_ratio(h: &QOperator, n: &QOperator) -> f64 {
        h.commutator(n).frobenius_norm() / (h.frobenius_norm() * n.frobenius_norm())
    }

    #[test]
    fn h_vc_uncoupled_is_diagonal() {
        let h = build_h_vc(2.0, 3.0, 0.0, Rwa::Off, 3).unwrap();
        let sig = h.signature().clone();
        for i in 0..sig.dim() {
            let l = sig.levels(i);
            assert_relative_eq!(
                h.matrix()[(i, i)].re,
                2.0 * l[0] as f64 + 3.0 * l[1] as f64,
                max_relative = 1e-14
            );
        }
        let off: f64 = h.matrix().iter().map(|z| z.norm()).sum::<f64>()
            - (0..sig.dim()).map(|i| h.matrix()[(i, i)].norm()).sum::<f64>();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn h_vc_normal_mode_splitting() {
        let w = TAU * 100e6;
        let g = TAU * 0.4e6;
        let h = build_h_vc(w, w, g, Rwa::On, 4).unwrap();
        assert!(h.is_hermitian(HERMITIAN_TOL));
        let (block, _) = excitation_block(&h, 1);
        let ev = eigenvalues(&block);
        assert_relative_eq!(ev[0], w - g, max_relative = 1e-12);
        assert_relative_eq!(ev[1], w + g, max_relative = 1e-12);

        let n = ModeOperators::new(h.signature()).total_excitation();
        assert!(commutator_ratio(&h, &n) < 1e-10);
    }

    #[test]
    fn h_vc_without_rwa_has_virtual_pairs_in_ground_state() {
        let w = 1.0;
        let h = build_h_vc(w, w, 0.1 * w, Rwa::Off, 6).unwrap();
        assert!(h.is_hermitian(HERMITIAN_TOL));
        let (vals, vecs) = crate::operators::eigh(h.matrix());
        let _ = vals;
        let ground = vecs.column(0);
        let sig = h.signature();
        let mean_n: f64 = (0..sig.dim())
            .map(|i| ground[i].norm_sqr() * sig.excitations(i) as f64)
            .sum();
        assert!(mean_n > 1e-4, "⟨N⟩ = {mean_n}");
        // Second-order estimate of the pair population: 2 (g/2ω)² = 5e-3.
        assert_relative_eq!(mean_n, 5.0e-3, max_relative = 0.05);
    }

    #[test]
    fn tripartite_chain_spectrum() {
        let g = 1.3;
        let h = build_h_tripartite(0.0, 0.0, g, g, 3).unwrap();
        assert!(h.is_hermitian(HERMITIAN_TOL));
        let (block, _) = excitation_block(&h, 1);
        let ev = eigenvalues(&block);
        let s = 2f64.sqrt() * g;
        assert_relative_eq!(ev[0], -s, epsilon = 1e-12);
        assert_relative_eq!(ev[1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(ev[2], s, epsilon = 1e-12);
    }

    #[test]
    fn tripartite_conserves_excitations() {
        let h = build_h_tripartite(0.7, -0.3, 0.5, 0.2, 3).unwrap();
        let ops = ModeOperators::new(h.signature());
        assert!(commutator_ratio(&h, &ops.total_excitation()) < 1e-10);

        let decoupled = build_h_tripartite(0.7, -0.3, 0.5, 0.0, 3).unwrap();
        let ns = ops.number(SPIN).unwrap();
        assert_eq!(decoupled.commutator(&ns).frobenius_norm(), 0.0);
    }

    #[test]
    fn effective_coupling_conventions() {
        let g_vc = TAU * 1.2e6;
        let g_nc = TAU * 0.45e6;
        let geff = effective_coupling(g_vc, g_nc, 10.0 * g_nc).unwrap();
        assert_relative_eq!(geff / TAU, 120e3, max_relative = 1e-12);
        let geff = effective_coupling(g_vc, g_nc, 10.0 * g_vc).unwrap();
        assert_relative_eq!(geff / TAU, 45e3, max_relative = 1e-12);
        assert!(matches!(effective_coupling(g_vc, g_nc, 0.0), Err(Error::ZeroDetuning)));
        assert!(build_h_eff(0.0, 0.0, 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn h_eff_structure() {
        let h = build_h_eff(5.0, 0.1, 0.0, 0.4, 3).unwrap();
        assert!(h.is_hermitian(HERMITIAN_TOL));
        let sig = h.signature();
        for i in 0..sig.dim() {
            for j in 0..sig.dim() {
                if i != j {
                    assert_eq!(h.matrix()[(i, j)].norm(), 0.0);
                }
            }
        }
        let far = build_h_eff(1e12, 0.1, 0.4, 0.4, 3).unwrap();
        let bare = {
            let ops = ModeOperators::new(sig);
            ops.number(VORTEX).unwrap().scale(0.1)
        };
        assert!((far - bare).frobenius_norm() < 1e-10);
    }

    #[test]
    fn h_eff_matches_perturbative_reduction() {
        let g = 1.0;
        let delta1 = 20.0 * g;
        let delta2 = 0.05;
        let (g_vc, g_nc) = (g, 0.8 * g);
        let full = build_h_tripartite(delta1, delta2, g_vc, g_nc, 2).unwrap();
        let eff = build_h_eff(delta1, delta2, g_vc, g_nc, 2).unwrap();
        let (fb, _) = excitation_block(&full, 1);
        let (eb, _) = excitation_block(&eff, 1);
        let (vac, _) = excitation_block(&eff, 0);
        let offset = vac[(0, 0)].re;
        let fe = eigenvalues(&fb);
        let ee: Vec<f64> = eigenvalues(&eb).iter().map(|e| e - offset).collect();
        // The two low branches are the vortex-spin doublet.
        let tol = 4.0 * g * (g / delta1).powi(3) * 10.0;
        for k in 0..2 {
            assert!((fe[k] - ee[k]).abs() < tol, "{} vs {}", fe[k], ee[k]);
        }
    }

    #[test]
    fn jc_doublet_and_rabi_period() {
        let w = 3.0;
        let g = 0.2;
        let h = build_h_jc(w, w, g, 4).unwrap();
        let ops = ModeOperators::new(h.signature());
        assert!(commutator_ratio(&h, &ops.total_excitation()) < 1e-10);
        let (block, _) = excitation_block(&h, 1);
        let ev = eigenvalues(&block);
        let center = w / 2.0;
        assert_relative_eq!(ev[0], center - g, epsilon = 1e-12);
        assert_relative_eq!(ev[1], center + g, epsilon = 1e-12);
        // Full population exchange |e,0⟩ ↔ |g,1⟩ takes π/g.
        let period = std::f64::consts::PI / (ev[1] - ev[0]) * 2.0;
        assert_relative_eq!(period, std::f64::consts::PI / g, epsilon = 1e-12);

        let free = build_h_jc(w, 1.1 * w, 0.0, 4).unwrap();
        let (_, vecs) = crate::operators::eigh(free.matrix());
        for c in 0..vecs.ncols() {
            let nz = vecs.column(c).iter().filter(|z| z.norm() > 1e-12).count();
            assert_eq!(nz, 1);
        }
    }

    #[test]
    fn builders_reject_zero_cutoff() {
        assert!(build_h_vc(1.0, 1.0, 0.1, Rwa::On, 0).is_err());
        assert!(build_h_tripartite(0.0, 0.0, 1.0, 1.0, 0).is_err());
        assert!(build_h_jc(1.0, 1.0, 1.0, 0).is_err());
    }
}
