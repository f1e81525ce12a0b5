//! Parameter sweeps: radius dependence, ultrastrong-coupling maps and the
//! effective parameters of the dispersive tripartite system.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::grid::{axis, field, mask, AxisSpec, SweepGrid, SweepProvenance};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{
    coupling_vc, gyrotropic_frequency, usc_metrics, vortex_linewidth, DerivedParams, DiscGeometry, Material,
    THIN_DISC_LIMIT, USC_THRESHOLD,
};

/// U above which a point counts as coherent in the ultrastrong map.
pub const COHERENCE_THRESHOLD: f64 = 10.0;
/// Minimum `|Δ1| / max(g_vc, g_nc)` of the dispersive validity region.
pub const DISPERSIVE_RATIO: f64 = 5.0;

/// Parameters of the effective vortex–spin model obtained by eliminating the
/// cantilever. Rates are angular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub alpha: f64,
    pub beta: f64,
    pub g_eff: f64,
    pub gamma_eff: f64,
    pub kappa_eff: f64,
    pub c_eff: f64,
}

impl EffectiveParams {
    /// `α = g_nc/|Δ1|`, `β = g_vc/|Δ1|`, `g_eff = β g_nc`,
    /// `γ_eff = γ + α²κ₁`, `κ_eff = κ₂ + β²κ₁`, `C_eff = g_eff²/(γ_eff κ_eff)`.
    pub fn new(g_vc: f64, g_nc: f64, delta1: f64, gamma: f64, kappa1: f64, kappa2: f64) -> Result<Self> {
        if delta1 == 0.0 || !delta1.is_finite() {
            return Err(Error::ZeroDetuning);
        }
        let alpha = g_nc / delta1.abs();
        let beta = g_vc / delta1.abs();
        let g_eff = g_vc * g_nc / delta1.abs();
        let gamma_eff = gamma + alpha * alpha * kappa1;
        let kappa_eff = kappa2 + beta * beta * kappa1;
        Ok(Self {
            alpha,
            beta,
            g_eff,
            gamma_eff,
            kappa_eff,
            c_eff: g_eff * g_eff / (gamma_eff * kappa_eff),
        })
    }
}

/// Frequency, linewidth and coupling of a disc of fixed thickness versus
/// radius at a fixed gradient and zero-point amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusSweep {
    pub material: Material,
    pub thickness: f64,
    pub gradient: f64,
    pub a0: f64,
    pub radius: AxisSpec,
}

impl RadiusSweep {
    /// YIG, t = 15 nm, G = 5×10⁵ T/m, a0 = 0.5×10⁻¹³ m, r ∈ [100, 600] nm.
    pub fn reference() -> Self {
        Self {
            material: Material::yig(),
            thickness: 15e-9,
            gradient: 5e5,
            a0: 0.5e-13,
            radius: AxisSpec::linear(100e-9, 600e-9, 64),
        }
    }
}

struct DiscPoint {
    omega_v: f64,
    gamma_v: f64,
    g_vc: f64,
    thin: bool,
}

fn disc_point(mat: &Material, r: f64, t: f64, b_vc: f64) -> Option<DiscPoint> {
    let disc = DiscGeometry::new(r, t).ok()?;
    let omega_v = gyrotropic_frequency(mat, &disc);
    let gamma_v = vortex_linewidth(mat, &disc, omega_v).ok()?;
    Some(DiscPoint {
        omega_v,
        gamma_v,
        g_vc: coupling_vc(mat, &disc, b_vc),
        thin: disc.aspect_ratio() <= THIN_DISC_LIMIT,
    })
}

pub fn sweep_radius(s: &RadiusSweep, exec: Execution) -> Result<SweepGrid> {
    s.radius.validate("radius")?;
    if !(s.thickness > 0.0 && s.gradient >= 0.0 && s.a0 > 0.0) {
        return Err(Error::invalid(
            "radius_sweep",
            "thickness and a0 must be positive, gradient non-negative",
        ));
    }
    let radii = s.radius.samples();
    let b_vc = s.gradient * s.a0;
    let points = exec.map_indexed(radii.len(), |i| disc_point(&s.material, radii[i], s.thickness, b_vc));
    let get = |f: fn(&DiscPoint) -> f64| {
        points
            .iter()
            .map(|p| p.as_ref().map_or(f64::NAN, f))
            .collect::<Vec<_>>()
    };
    let grid = SweepGrid {
        axes: vec![axis("radius", "m", radii.clone())],
        fields: vec![
            field("f_v", "Hz", get(|p| p.omega_v / TAU)),
            field("gamma_v", "Hz", get(|p| p.gamma_v / TAU)),
            field("g_vc", "Hz", get(|p| p.g_vc / TAU)),
            field("g_vc_over_gamma", "", get(|p| p.g_vc / p.gamma_v)),
        ],
        masks: vec![mask(
            "thin_disc",
            points.iter().map(|p| p.as_ref().is_some_and(|p| p.thin)).collect(),
        )],
        valid: points.iter().map(Option::is_some).collect(),
        provenance: SweepProvenance::Radius(s.clone()),
    };
    grid.validate()?;
    Ok(grid)
}

/// g_vc/ω_v and the coherence measure U over radius and gradient, with the
/// cantilever assumed resonant (κ = ω_v/Q).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UscSweep {
    pub material: Material,
    pub thickness: f64,
    pub a0: f64,
    pub quality_factor: f64,
    pub radius: AxisSpec,
    pub gradient: AxisSpec,
}

impl UscSweep {
    /// YIG, t = 15 nm, a0 = 0.5×10⁻¹³ m, Q = 1000, r ∈ [60, 690] nm in 10 nm
    /// steps, G ∈ [10⁵, 10⁸] T/m on a log scale.
    pub fn reference() -> Self {
        Self {
            material: Material::yig(),
            thickness: 15e-9,
            a0: 0.5e-13,
            quality_factor: 1000.0,
            radius: AxisSpec::linear(60e-9, 690e-9, 64),
            gradient: AxisSpec::log(1e5, 1e8, 64),
        }
    }
}

pub fn sweep_usc(s: &UscSweep, exec: Execution) -> Result<SweepGrid> {
    s.radius.validate("radius")?;
    s.gradient.validate("gradient")?;
    if !(s.thickness > 0.0 && s.a0 > 0.0 && s.quality_factor > 0.0) {
        return Err(Error::invalid(
            "usc_sweep",
            "thickness, a0 and quality factor must be positive",
        ));
    }
    let radii = s.radius.samples();
    let grads = s.gradient.samples();
    if grads.iter().any(|g| *g < 0.0) {
        return Err(Error::invalid("gradient", "must be non-negative"));
    }
    let ng = grads.len();
    let points = exec.map_indexed(radii.len() * ng, |i| {
        let (r, g) = (radii[i / ng], grads[i % ng]);
        disc_point(&s.material, r, s.thickness, g * s.a0).map(|p| {
            let kappa = p.omega_v / s.quality_factor;
            (p.g_vc, usc_metrics(p.g_vc, p.omega_v, p.gamma_v, kappa))
        })
    });
    let get = |f: &dyn Fn(f64, &crate::params::UscMetrics) -> f64| {
        points
            .iter()
            .map(|p| p.as_ref().map_or(f64::NAN, |(g, m)| f(*g, m)))
            .collect::<Vec<_>>()
    };
    let flag = |f: &dyn Fn(&crate::params::UscMetrics) -> bool| {
        points.iter().map(|p| p.as_ref().is_some_and(|(_, m)| f(m))).collect()
    };
    let grid = SweepGrid {
        axes: vec![
            axis("radius", "m", radii.clone()),
            axis("gradient", "T/m", grads.clone()),
        ],
        fields: vec![
            field("g_vc", "Hz", get(&|g, _| g / TAU)),
            field("g_over_omega", "", get(&|_, m| m.ratio)),
            field("cooperativity", "", get(&|_, m| m.cooperativity)),
            field("u", "", get(&|_, m| m.measure)),
        ],
        masks: vec![
            mask("usc", flag(&|m| m.ratio >= USC_THRESHOLD)),
            mask("coherent", flag(&|m| m.measure >= COHERENCE_THRESHOLD)),
        ],
        valid: points.iter().map(Option::is_some).collect(),
        provenance: SweepProvenance::Usc(s.clone()),
    };
    grid.validate()?;
    Ok(grid)
}

/// Effective parameters over cantilever detuning and magnet–disc distance.
/// The vortex coupling scales with the gradient, `g_vc(d) = g_vc_ref (d_ref/d)⁴`.
/// Rates are angular; the detuning axis is cyclic (Δ1/2π in Hz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningSweep {
    pub g_vc_ref: f64,
    pub d_ref: f64,
    pub g_nc: f64,
    pub gamma: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub delta1: AxisSpec,
    pub d_vc: AxisSpec,
}

impl DetuningSweep {
    /// Rates and couplings from a derived parameter set, with the distance
    /// axis spanning 100–300 nm and Δ1/2π spanning 1–50 MHz.
    pub fn from_params(p: &DerivedParams, d_ref: f64) -> Self {
        Self {
            g_vc_ref: p.g_vc,
            d_ref,
            g_nc: p.g_nc,
            gamma: p.gamma_v,
            kappa1: p.kappa_c,
            kappa2: p.kappa_nv,
            delta1: AxisSpec::linear(1e6, 50e6, 64),
            d_vc: AxisSpec::linear(100e-9, 300e-9, 64),
        }
    }

    pub fn g_vc_at(&self, d: f64) -> f64 {
        self.g_vc_ref * (self.d_ref / d).powi(4)
    }

    /// Distance at which `g_vc(d) = g_nc`, where the validity boundary changes
    /// from a curve to a straight line.
    pub fn crossing_distance(&self) -> f64 {
        self.d_ref * (self.g_vc_ref / self.g_nc).powf(0.25)
    }
}

pub fn sweep_detuning(s: &DetuningSweep, exec: Execution) -> Result<SweepGrid> {
    s.delta1.validate("delta1")?;
    s.d_vc.validate("d_vc")?;
    if !(s.d_ref > 0.0 && s.g_vc_ref >= 0.0 && s.g_nc >= 0.0 && s.gamma >= 0.0 && s.kappa1 >= 0.0 && s.kappa2 >= 0.0) {
        return Err(Error::invalid(
            "detuning_sweep",
            "couplings and rates must be non-negative, d_ref positive",
        ));
    }
    let deltas = s.delta1.samples();
    let dists = s.d_vc.samples();
    if dists.iter().any(|d| *d <= 0.0) {
        return Err(Error::invalid("d_vc", "distances must be positive"));
    }
    let nd = dists.len();
    let points = exec.try_map_indexed(deltas.len() * nd, |i| {
        let delta1 = TAU * deltas[i / nd];
        let g_vc = s.g_vc_at(dists[i % nd]);
        let eff = EffectiveParams::new(g_vc, s.g_nc, delta1, s.gamma, s.kappa1, s.kappa2)?;
        Ok::<_, Error>((eff, delta1.abs() >= DISPERSIVE_RATIO * g_vc.max(s.g_nc)))
    })?;
    let get = |f: fn(&EffectiveParams) -> f64| points.iter().map(|(e, _)| f(e)).collect::<Vec<_>>();
    let grid = SweepGrid {
        axes: vec![axis("delta1", "Hz", deltas.clone()), axis("d_vc", "m", dists.clone())],
        fields: vec![
            field("alpha", "", get(|e| e.alpha)),
            field("beta", "", get(|e| e.beta)),
            field("g_eff", "Hz", get(|e| e.g_eff / TAU)),
            field("gamma_eff", "Hz", get(|e| e.gamma_eff / TAU)),
            field("kappa_eff", "Hz", get(|e| e.kappa_eff / TAU)),
            field("g_eff_over_gamma_eff", "", get(|e| e.g_eff / e.gamma_eff)),
            field("g_eff_over_kappa_eff", "", get(|e| e.g_eff / e.kappa_eff)),
            field("c_eff", "", get(|e| e.c_eff)),
        ],
        masks: vec![mask("dispersive", points.iter().map(|(_, ok)| *ok).collect())],
        valid: points.iter().map(|(_, ok)| *ok).collect(),
        provenance: SweepProvenance::Detuning(s.clone()),
    };
    grid.validate()?;
    Ok(grid)
}
