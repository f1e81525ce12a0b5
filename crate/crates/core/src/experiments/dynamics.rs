//! Open-system dynamics of the tripartite chain and its effective two-mode
//! reduction.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::sweeps::EffectiveParams;
use crate::error::{Error, Result};
use crate::lindblad::{
    evolve, thermal_channels, CollapseChannel, DensityState, EvolveOptions, Integrator, Observable, OpenSystemModel,
    StepStats, TimeSeries, Tolerances,
};
use crate::operators::{
    build_h_jc, build_h_tripartite, effective_coupling, ModeOperators, SpaceSignature, CANTILEVER, SPIN, VORTEX,
};

/// Minimum `|Δ1| / max(g_vc, g_nc)` accepted by [`run_effective_comparison`].
pub const COMPARISON_RATIO: f64 = 10.0;

pub const TRACK_CANTILEVER: &str = "cantilever";
pub const TRACK_VORTEX: &str = "vortex";
pub const TRACK_NV: &str = "nv";
pub const TRACK_BOSON: &str = "bo";
pub const TRACK_TLS: &str = "tl";

/// How the κ₂ rate acts on the spin.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NvDissipation {
    /// `(κ₂/2) D[σ_z]`, pure dephasing at rate κ₂.
    #[default]
    Dephasing,
    /// `κ₂ D[σ₋]`.
    Decay,
}

/// Tripartite chain parameters. Frequencies and rates are angular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub g_vc: f64,
    pub g_nc: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Vortex damping.
    pub gamma: f64,
    /// Cantilever damping.
    pub kappa1: f64,
    /// Spin dissipation.
    pub kappa2: f64,
    pub nv_dissipation: NvDissipation,
    pub nbar_c: f64,
    pub nbar_v: f64,
    pub n_max: usize,
    pub samples: usize,
    pub duration: f64,
    pub integrator: Integrator,
    pub tolerances: Tolerances,
}

impl Default for DynamicsConfig {
    /// Resonant chain with g/2π = 0.45 MHz, γ/2π = 20 kHz, κ₁/2π = 100 kHz,
    /// κ₂/2π = 1 kHz, zero temperature, 4 μs in 2000 samples.
    fn default() -> Self {
        let g = TAU * 0.45e6;
        Self {
            g_vc: g,
            g_nc: g,
            delta1: 0.0,
            delta2: 0.0,
            gamma: TAU * 20e3,
            kappa1: TAU * 100e3,
            kappa2: TAU * 1e3,
            nv_dissipation: NvDissipation::Dephasing,
            nbar_c: 0.0,
            nbar_v: 0.0,
            n_max: 5,
            samples: 2000,
            duration: 4e-6,
            integrator: Integrator::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl DynamicsConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma", self.gamma),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("nbar_c", self.nbar_c),
            ("nbar_v", self.nbar_v),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be finite and ≥ 0, got {v}")));
            }
        }
        for (name, v) in [
            ("g_vc", self.g_vc),
            ("g_nc", self.g_nc),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::invalid("duration", "must be positive"));
        }
        if self.samples < 2 {
            return Err(Error::invalid("samples", "at least two samples are required"));
        }
        Ok(())
    }

    pub fn time_grid(&self, duration: f64) -> Vec<f64> {
        let n = self.samples;
        (0..n).map(|i| duration * i as f64 / (n - 1) as f64).collect()
    }

    fn options(&self, observables: Vec<Observable>) -> EvolveOptions {
        EvolveOptions {
            integrator: self.integrator,
            tolerances: self.tolerances,
            observables,
            keep_snapshots: false,
        }
    }
}

fn spin_channel(ops: &ModeOperators, kind: NvDissipation, rate: f64) -> Result<Vec<CollapseChannel>> {
    if rate == 0.0 {
        return Ok(Vec::new());
    }
    let ch = match kind {
        NvDissipation::Dephasing => CollapseChannel::new(ops.sigma_z(SPIN)?, rate / 2.0)?,
        NvDissipation::Decay => CollapseChannel::new(ops.lowering(SPIN)?, rate)?,
    };
    Ok(vec![ch])
}

/// Tripartite open-system model; dissipators are dropped when `dissipative`
/// is false.
pub fn tripartite_model(cfg: &DynamicsConfig, dissipative: bool) -> Result<OpenSystemModel> {
    cfg.validate()?;
    let h = build_h_tripartite(cfg.delta1, cfg.delta2, cfg.g_vc, cfg.g_nc, cfg.n_max)?;
    if !dissipative {
        return OpenSystemModel::closed(h);
    }
    let ops = ModeOperators::new(&SpaceSignature::tripartite(cfg.n_max));
    let mut channels = thermal_channels(&ops.lowering(CANTILEVER)?, cfg.kappa1, cfg.nbar_c)?;
    channels.extend(thermal_channels(&ops.lowering(VORTEX)?, cfg.gamma, cfg.nbar_v)?);
    channels.extend(spin_channel(&ops, cfg.nv_dissipation, cfg.kappa2)?);
    OpenSystemModel::new(h, channels)
}

fn tripartite_observables(n_max: usize) -> Result<Vec<Observable>> {
    let ops = ModeOperators::new(&SpaceSignature::tripartite(n_max));
    Ok(vec![
        Observable::new(TRACK_CANTILEVER, ops.number(CANTILEVER)?),
        Observable::new(TRACK_VORTEX, ops.number(VORTEX)?),
        Observable::new(TRACK_NV, ops.number(SPIN)?),
    ])
}

/// Vortex excited, cantilever in vacuum, spin in its ground state.
fn vortex_excited(sig: &SpaceSignature) -> Result<DensityState> {
    let mut levels = vec![0; sig.len()];
    levels[sig.slot(VORTEX).expect("vortex slot")] = 1;
    DensityState::basis(sig, &levels)
}

#[derive(Debug, Clone)]
pub struct DynamicsRun {
    pub series: TimeSeries,
    pub stats: StepStats,
}

/// Occupations of the cantilever, vortex and spin after exciting the vortex,
/// on a resonant chain (Δ1 = Δ2).
pub fn run_transfer_experiment(cfg: &DynamicsConfig, dissipative: bool) -> Result<DynamicsRun> {
    if cfg.delta1 != cfg.delta2 {
        return Err(Error::Precondition(format!(
            "transfer runs need a resonant chain, got Δ1 = {} and Δ2 = {}",
            cfg.delta1, cfg.delta2
        )));
    }
    let model = tripartite_model(cfg, dissipative)?;
    let rho0 = vortex_excited(model.signature())?;
    let evo = evolve(
        &model,
        &rho0,
        &cfg.time_grid(cfg.duration),
        &cfg.options(tripartite_observables(cfg.n_max)?),
    )?;
    Ok(DynamicsRun {
        series: evo.series,
        stats: evo.stats,
    })
}

/// Dissipation of the two-mode reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum JcReference {
    /// Rates as fixed fractions of the effective coupling: `K₁ = k1_over_g · G`
    /// on the boson and `K₂ = k2_over_g · G` on the two-level system.
    Proportional { k1_over_g: f64, k2_over_g: f64 },
    /// `γ_eff` on the boson and `κ_eff` on the two-level system.
    Effective,
}

impl Default for JcReference {
    fn default() -> Self {
        JcReference::Proportional {
            k1_over_g: 0.45,
            k2_over_g: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComparisonConfig {
    pub chain: DynamicsConfig,
    pub reference: JcReference,
    /// Run length in effective Rabi periods `π/g_eff`.
    pub periods: f64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self {
            chain: DynamicsConfig::default(),
            reference: JcReference::default(),
            periods: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub delta1: f64,
    /// Vortex detuning placing the effective vortex and spin on resonance.
    pub delta2: f64,
    pub effective: EffectiveParams,
    pub tripartite: TimeSeries,
    pub reference: TimeSeries,
    /// Largest `max(|vortex − bo|, |nv − tl|)` over the run.
    pub deviation: f64,
    pub max_cantilever: f64,
    pub stats: StepStats,
}

/// Pointwise `max(|vortex − bo|, |nv − tl|)`.
pub fn deviation_series(tripartite: &TimeSeries, reference: &TimeSeries) -> Result<Vec<f64>> {
    if tripartite.times() != reference.times() {
        return Err(Error::DimensionMismatch("series are sampled on different grids".into()));
    }
    let get = |s: &TimeSeries, name: &str| {
        s.track(name)
            .map(<[f64]>::to_vec)
            .ok_or_else(|| Error::DimensionMismatch(format!("missing track `{name}`")))
    };
    let (v, n) = (get(tripartite, TRACK_VORTEX)?, get(tripartite, TRACK_NV)?);
    let (b, t) = (get(reference, TRACK_BOSON)?, get(reference, TRACK_TLS)?);
    Ok((0..v.len())
        .map(|i| (v[i] - b[i]).abs().max((n[i] - t[i]).abs()))
        .collect())
}

fn jc_model(cfg: &ComparisonConfig, eff: &EffectiveParams, dissipative: bool) -> Result<OpenSystemModel> {
    let n_max = cfg.chain.n_max;
    let h = build_h_jc(0.0, 0.0, eff.g_eff, n_max)?;
    if !dissipative {
        return OpenSystemModel::closed(h);
    }
    let (k1, k2) = match cfg.reference {
        JcReference::Proportional { k1_over_g, k2_over_g } => (k1_over_g * eff.g_eff, k2_over_g * eff.g_eff),
        JcReference::Effective => (eff.gamma_eff, eff.kappa_eff),
    };
    let ops = ModeOperators::new(&SpaceSignature::vortex_spin(n_max));
    let mut channels = thermal_channels(&ops.lowering(VORTEX)?, k1, cfg.chain.nbar_v)?;
    channels.extend(spin_channel(&ops, cfg.chain.nv_dissipation, k2)?);
    OpenSystemModel::new(h, channels)
}

/// Runs the detuned chain at `delta1` against the Jaynes–Cummings model with
/// `G = g_vc g_nc / |Δ1|` over `periods · π/G`.
pub fn run_effective_comparison(cfg: &ComparisonConfig, delta1: f64, dissipative: bool) -> Result<Comparison> {
    let c = &cfg.chain;
    let g_max = c.g_vc.abs().max(c.g_nc.abs());
    if !(delta1.abs() >= COMPARISON_RATIO * g_max) {
        return Err(Error::Precondition(format!(
            "|Δ1| = {:.4e} rad/s is below {COMPARISON_RATIO}·max(g) = {:.4e} rad/s",
            delta1.abs(),
            COMPARISON_RATIO * g_max
        )));
    }
    if !(cfg.periods > 0.0 && cfg.periods.is_finite()) {
        return Err(Error::invalid("periods", "must be positive"));
    }
    let g_eff = effective_coupling(c.g_vc, c.g_nc, delta1)?;
    if g_eff == 0.0 {
        return Err(Error::Precondition("effective coupling vanishes".into()));
    }
    let effective = EffectiveParams::new(c.g_vc, c.g_nc, delta1, c.gamma, c.kappa1, c.kappa2)?;
    let delta2 = (c.g_vc * c.g_vc - c.g_nc * c.g_nc) / delta1;
    let chain = DynamicsConfig {
        delta1,
        delta2,
        ..c.clone()
    };
    let grid = chain.time_grid(cfg.periods * PI / g_eff);

    let model = tripartite_model(&chain, dissipative)?;
    let rho0 = vortex_excited(model.signature())?;
    let tri = evolve(&model, &rho0, &grid, &chain.options(tripartite_observables(c.n_max)?))?;

    let jc = jc_model(cfg, &effective, dissipative)?;
    let ops = ModeOperators::new(jc.signature());
    let observables = vec![
        Observable::new(TRACK_BOSON, ops.number(VORTEX)?),
        Observable::new(TRACK_TLS, ops.number(SPIN)?),
    ];
    let reference = evolve(
        &jc,
        &vortex_excited(jc.signature())?,
        &grid,
        &chain.options(observables),
    )?;

    let deviation = deviation_series(&tri.series, &reference.series)?
        .into_iter()
        .fold(0.0, f64::max);
    let max_cantilever = tri
        .series
        .track(TRACK_CANTILEVER)
        .expect("cantilever track")
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(Comparison {
        delta1,
        delta2,
        effective,
        tripartite: tri.series,
        reference: reference.series,
        deviation,
        max_cantilever,
        stats: tri.stats,
    })
}
