//! Run configuration: a TOML document whose dimensional values carry
//! explicit unit suffixes (`radius = "180 nm"`).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::units::{
    Angle, Density, Field, Frequency, Gradient, Length, Mass, Moment, Pressure, Quantity, Stiffness, Temperature, Time,
};
use crate::constants::angular;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::experiments::{
    AxisSpec, ComparisonConfig, DetuningSweep, DynamicsConfig, JcReference, NvDissipation, RadiusSweep, UscSweep,
};
use crate::lindblad::{Integrator, Tolerances};
use crate::params::{
    tip_mass_for_frequency, CantileverGeometry, DerivedParams, Device, DeviceOverrides, DipoleMagnet, DiscGeometry,
    Material, Placement, Sign,
};
use crate::thiele::{RingDownProtocol, DEFAULT_PROMINENCE};

/// Sections every configuration must contain.
pub const REQUIRED_SECTIONS: [&str; 5] = ["material", "disc", "cantilever", "magnet", "placement"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigErrorKind {
    Syntax,
    UnknownKey,
    MissingSection,
    UnitMismatch,
    Invalid,
}

/// Configuration problem with its location when one is known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub kind: ConfigErrorKind,
    pub message: String,
    pub source_name: String,
    /// 1-based line and column.
    pub location: Option<(usize, usize)>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((l, c)) => write!(f, "{}:{l}:{c}: {}", self.source_name, self.message),
            None => write!(f, "{}: {}", self.source_name, self.message),
        }
    }
}

impl ConfigError {
    fn new(kind: ConfigErrorKind, source_name: &str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            source_name: source_name.to_string(),
            location: None,
        }
    }

    fn from_toml(err: &toml::de::Error, text: &str, source_name: &str) -> Self {
        let message = err.message().trim().to_string();
        let kind = if message.contains("unknown field") {
            ConfigErrorKind::UnknownKey
        } else if message.contains("unit mismatch") {
            ConfigErrorKind::UnitMismatch
        } else if message.contains("missing field") {
            ConfigErrorKind::MissingSection
        } else {
            ConfigErrorKind::Syntax
        };
        Self {
            kind,
            message,
            source_name: source_name.to_string(),
            location: err.span().map(|s| line_column(text, s.start)),
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub name: String,
    /// μ0·M_s.
    pub saturation_field: Quantity<Field>,
    pub damping: f64,
    pub exchange: Quantity<Stiffness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscSection {
    pub radius: Quantity<Length>,
    pub thickness: Quantity<Length>,
    #[serde(default = "plus")]
    pub polarity: Sign,
    #[serde(default = "plus")]
    pub circulation: Sign,
}

fn plus() -> Sign {
    Sign::Plus
}

/// Either `frequency` (the tip mass is solved for it) or `tip_mass` may be
/// given, not both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantileverSection {
    pub length: Quantity<Length>,
    pub width: Quantity<Length>,
    pub thickness: Quantity<Length>,
    #[serde(default = "silicon_modulus")]
    pub youngs_modulus: Quantity<Pressure>,
    #[serde(default = "silicon_density")]
    pub density: Quantity<Density>,
    pub quality_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<Quantity<Frequency>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tip_mass: Option<Quantity<Mass>>,
}

fn silicon_modulus() -> Quantity<Pressure> {
    Quantity::si(169e9)
}

fn silicon_density() -> Quantity<Density> {
    Quantity::si(2330.0)
}

/// Either `moment`, or `gradient` reached at `anchor_distance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<Quantity<Moment>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<Quantity<Gradient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_distance: Option<Quantity<Length>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSection {
    pub d_vc: Quantity<Length>,
    pub d_nc: Quantity<Length>,
    pub y_vn: Quantity<Length>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    pub temperature: Quantity<Temperature>,
    /// NV dephasing rate κ₂/2π.
    pub kappa_nv: Quantity<Frequency>,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        Self {
            temperature: Quantity::si(10e-3),
            kappa_nv: Quantity::si(1e3),
        }
    }
}

/// Values that replace derived quantities.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OverridesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<Quantity<Length>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_vc: Option<Quantity<Frequency>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_nc: Option<Quantity<Frequency>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_c: Option<Quantity<Frequency>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    pub n_max: usize,
    pub samples: usize,
    pub parallel: bool,
    pub integrator: Integrator,
    pub tolerances: Tolerances,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            n_max: 5,
            samples: 2000,
            parallel: true,
            integrator: Integrator::default(),
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub pulse_amplitude: Quantity<Field>,
    pub pulse_angle: Quantity<Angle>,
    pub pulse_duration: Quantity<Time>,
    pub record_duration: Quantity<Time>,
    pub sample_interval: Quantity<Time>,
    pub zero_pad: usize,
    /// Minimum peak prominence relative to the largest bin.
    pub prominence: f64,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        let p = RingDownProtocol::default();
        Self {
            pulse_amplitude: Quantity::si(p.pulse_amplitude),
            pulse_angle: Quantity::si(p.pulse_angle),
            pulse_duration: Quantity::si(p.pulse_duration),
            record_duration: Quantity::si(p.record_duration),
            sample_interval: Quantity::si(p.sample_interval),
            zero_pad: 1,
            prominence: DEFAULT_PROMINENCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepRadiusSection {
    pub thickness: Quantity<Length>,
    pub gradient: Quantity<Gradient>,
    pub a0: Quantity<Length>,
    pub start: Quantity<Length>,
    pub end: Quantity<Length>,
    pub points: usize,
}

impl Default for SweepRadiusSection {
    fn default() -> Self {
        let s = RadiusSweep::reference();
        Self {
            thickness: Quantity::si(s.thickness),
            gradient: Quantity::si(s.gradient),
            a0: Quantity::si(s.a0),
            start: Quantity::si(s.radius.start),
            end: Quantity::si(s.radius.end),
            points: s.radius.points,
        }
    }
}

/// Radius axis is linear, gradient axis logarithmic. The cantilever quality
/// factor is used unless `quality_factor` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepUscSection {
    pub thickness: Quantity<Length>,
    pub a0: Quantity<Length>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quality_factor: Option<f64>,
    pub radius_start: Quantity<Length>,
    pub radius_end: Quantity<Length>,
    pub radius_points: usize,
    pub gradient_start: Quantity<Gradient>,
    pub gradient_end: Quantity<Gradient>,
    pub gradient_points: usize,
}

impl Default for SweepUscSection {
    fn default() -> Self {
        let s = UscSweep::reference();
        Self {
            thickness: Quantity::si(s.thickness),
            a0: Quantity::si(s.a0),
            quality_factor: None,
            radius_start: Quantity::si(s.radius.start),
            radius_end: Quantity::si(s.radius.end),
            radius_points: s.radius.points,
            gradient_start: Quantity::si(s.gradient.start),
            gradient_end: Quantity::si(s.gradient.end),
            gradient_points: s.gradient.points,
        }
    }
}

/// The reference distance defaults to `placement.d_vc`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepDetuningSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_ref: Option<Quantity<Length>>,
    pub delta1_start: Quantity<Frequency>,
    pub delta1_end: Quantity<Frequency>,
    pub delta1_points: usize,
    pub distance_start: Quantity<Length>,
    pub distance_end: Quantity<Length>,
    pub distance_points: usize,
}

impl Default for SweepDetuningSection {
    fn default() -> Self {
        Self {
            d_ref: None,
            delta1_start: Quantity::si(1e6),
            delta1_end: Quantity::si(50e6),
            delta1_points: 64,
            distance_start: Quantity::si(100e-9),
            distance_end: Quantity::si(300e-9),
            distance_points: 64,
        }
    }
}

/// Coupling that sets the scale of Δ1 in the detuned runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningReference {
    #[default]
    Max,
    GVc,
    GNc,
}

/// Chain couplings default to 0.45 MHz; rates left unset come from the
/// derived device parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsSection {
    pub g_vc: Quantity<Frequency>,
    pub g_nc: Quantity<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Quantity<Frequency>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa1: Option<Quantity<Frequency>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<Quantity<Frequency>>,
    pub nv_dissipation: NvDissipation,
    /// Include thermal occupations of the cantilever and vortex baths.
    pub thermal: bool,
    pub transfer_duration: Quantity<Time>,
    /// Δ1/g of the detuned runs.
    pub detuning_ratio: f64,
    /// Which coupling `detuning_ratio` multiplies.
    pub detuning_reference: DetuningReference,
    /// Length of the detuned runs in effective Rabi periods.
    pub periods: f64,
    /// Fock cutoff of the detuned runs.
    pub comparison_n_max: usize,
    pub reference: JcReference,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            g_vc: Quantity::si(0.45e6),
            g_nc: Quantity::si(0.45e6),
            gamma: None,
            kappa1: None,
            kappa2: None,
            nv_dissipation: NvDissipation::default(),
            thermal: false,
            transfer_duration: Quantity::si(4e-6),
            detuning_ratio: 20.0,
            detuning_reference: DetuningReference::default(),
            periods: 2.0,
            comparison_n_max: 2,
            reference: JcReference::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialSection,
    pub disc: DiscSection,
    pub cantilever: CantileverSection,
    pub magnet: MagnetSection,
    pub placement: PlacementSection,
    #[serde(default)]
    pub environment: EnvironmentSection,
    #[serde(default)]
    pub overrides: OverridesSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub sweep_radius: SweepRadiusSection,
    #[serde(default)]
    pub sweep_usc: SweepUscSection,
    #[serde(default)]
    pub sweep_detuning: SweepDetuningSection,
    #[serde(default)]
    pub dynamics: DynamicsSection,
}

/// The bundled reference device configuration.
pub const REFERENCE_CONFIG: &str = include_str!("../../configs/yig_disc_180x20.cfg");

fn invalid(source_name: &str, e: Error) -> Error {
    match e {
        Error::Config(c) => Error::Config(c),
        other => Error::Config(ConfigError::new(
            ConfigErrorKind::Invalid,
            source_name,
            other.to_string(),
        )),
    }
}

/// Parses `text` and applies `key=value` overrides, where `key` is a dotted
/// path such as `disc.radius` and `value` a TOML value or a bare string.
pub fn parse_config_str(text: &str, source_name: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| ConfigError::from_toml(&e, text, source_name))?;
    let missing: Vec<&str> = REQUIRED_SECTIONS
        .iter()
        .copied()
        .filter(|s| !table.contains_key(*s))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::new(
            ConfigErrorKind::MissingSection,
            source_name,
            format!("missing sections: {}", missing.join(", ")),
        )
        .into());
    }
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::from_toml(&e, text, source_name))?;
    if !overrides.is_empty() {
        for o in overrides {
            apply_override(&mut table, o).map_err(|m| ConfigError::new(ConfigErrorKind::Invalid, "--override", m))?;
        }
        cfg = RunConfig::deserialize(toml::Value::Table(table.clone())).map_err(|e| {
            let kind = ConfigError::from_toml(&e, "", "--override").kind;
            ConfigError::new(kind, "--override", e.message().trim().to_string())
        })?;
    }
    for section in [
        "environment",
        "overrides",
        "numerics",
        "output",
        "spectrum",
        "sweep_radius",
        "sweep_usc",
        "sweep_detuning",
        "dynamics",
    ] {
        if !table.contains_key(section) {
            log::info!("[{section}] not given, using defaults");
        }
    }
    cfg.validate().map_err(|e| invalid(source_name, e))?;
    Ok(cfg)
}

pub fn parse_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, &path.display().to_string(), overrides)
}

fn apply_override(table: &mut toml::Table, spec: &str) -> std::result::Result<(), String> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| format!("`{spec}` is not of the form key=value"))?;
    let (key, raw) = (key.trim(), raw.trim());
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("bad key `{key}`"));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| format!("`{p}` in `{key}` is not a section"))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl RunConfig {
    /// The bundled reference configuration.
    pub fn reference() -> Self {
        parse_config_str(REFERENCE_CONFIG, "yig_disc_180x20.cfg", &[]).expect("bundled config is valid")
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    fn validate(&self) -> Result<()> {
        self.device()?;
        if self.numerics.n_max < 1 {
            return Err(Error::invalid("numerics.n_max", "must be at least 1"));
        }
        if self.dynamics.comparison_n_max < 1 {
            return Err(Error::invalid("dynamics.comparison_n_max", "must be at least 1"));
        }
        if self.numerics.samples < 2 {
            return Err(Error::invalid("numerics.samples", "must be at least 2"));
        }
        if let Integrator::FixedRk4 { step_fraction } = self.numerics.integrator {
            if !(step_fraction > 0.0 && step_fraction <= 1.0) {
                return Err(Error::invalid(
                    "numerics.integrator.step_fraction",
                    "must lie in (0, 1]",
                ));
            }
        }
        self.ring_down_protocol().validate()?;
        Ok(())
    }

    pub fn execution(&self) -> Execution {
        if self.numerics.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    pub fn material(&self) -> Result<Material> {
        let m = &self.material;
        Material::from_saturation_field(
            m.name.clone(),
            m.saturation_field.value(),
            m.damping,
            m.exchange.value(),
        )
    }

    pub fn device(&self) -> Result<Device> {
        let d = &self.disc;
        let mut disc = DiscGeometry::new(d.radius.value(), d.thickness.value())?.with_polarity(d.polarity);
        disc.circulation = d.circulation;

        let c = &self.cantilever;
        let bare = CantileverGeometry::new(
            c.length.value(),
            c.width.value(),
            c.thickness.value(),
            c.youngs_modulus.value(),
            c.density.value(),
            0.0,
            c.quality_factor,
        )?;
        let tip_mass = match (c.frequency, c.tip_mass) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "cantilever",
                    "give either `frequency` or `tip_mass`, not both",
                ));
            }
            (Some(f), None) => tip_mass_for_frequency(&bare, angular(f.value()))?,
            (None, Some(m)) => m.value(),
            (None, None) => 0.0,
        };
        let cantilever = CantileverGeometry::new(
            bare.length,
            bare.width,
            bare.thickness,
            bare.youngs_modulus,
            bare.density,
            tip_mass,
            bare.quality_factor,
        )?;

        let m = &self.magnet;
        let magnet = match (m.moment, m.gradient, m.anchor_distance) {
            (Some(mu), None, None) => DipoleMagnet::new(mu.value())?,
            (None, Some(g), Some(d)) => DipoleMagnet::from_gradient_anchor(g.value(), d.value())?,
            _ => {
                return Err(Error::invalid(
                    "magnet",
                    "give either `moment`, or `gradient` with `anchor_distance`",
                ));
            }
        };
        let p = &self.placement;
        Ok(Device {
            material: self.material()?,
            disc,
            cantilever,
            magnet,
            placement: Placement::new(p.d_vc.value(), p.d_nc.value(), p.y_vn.value())?,
        })
    }

    pub fn device_overrides(&self) -> DeviceOverrides {
        let o = &self.overrides;
        DeviceOverrides {
            a0: o.a0.map(Quantity::value),
            g_vc: o.g_vc.map(|q| angular(q.value())),
            g_nc: o.g_nc.map(|q| angular(q.value())),
            omega_c: o.f_c.map(|q| angular(q.value())),
        }
    }

    pub fn derived(&self) -> Result<DerivedParams> {
        self.device()?.derive(
            self.environment.temperature.value(),
            angular(self.environment.kappa_nv.value()),
            &self.device_overrides(),
        )
    }

    pub fn ring_down_protocol(&self) -> RingDownProtocol {
        let s = &self.spectrum;
        RingDownProtocol {
            pulse_amplitude: s.pulse_amplitude.value(),
            pulse_angle: s.pulse_angle.value(),
            pulse_duration: s.pulse_duration.value(),
            record_duration: s.record_duration.value(),
            sample_interval: s.sample_interval.value(),
        }
    }

    pub fn radius_sweep(&self) -> Result<RadiusSweep> {
        let s = &self.sweep_radius;
        Ok(RadiusSweep {
            material: self.material()?,
            thickness: s.thickness.value(),
            gradient: s.gradient.value(),
            a0: s.a0.value(),
            radius: AxisSpec::linear(s.start.value(), s.end.value(), s.points),
        })
    }

    pub fn usc_sweep(&self) -> Result<UscSweep> {
        let s = &self.sweep_usc;
        Ok(UscSweep {
            material: self.material()?,
            thickness: s.thickness.value(),
            a0: s.a0.value(),
            quality_factor: s.quality_factor.unwrap_or(self.cantilever.quality_factor),
            radius: AxisSpec::linear(s.radius_start.value(), s.radius_end.value(), s.radius_points),
            gradient: AxisSpec::log(s.gradient_start.value(), s.gradient_end.value(), s.gradient_points),
        })
    }

    pub fn detuning_sweep(&self, p: &DerivedParams) -> DetuningSweep {
        let s = &self.sweep_detuning;
        let d_ref = s.d_ref.map_or(self.placement.d_vc.value(), Quantity::value);
        DetuningSweep {
            delta1: AxisSpec::linear(s.delta1_start.value(), s.delta1_end.value(), s.delta1_points),
            d_vc: AxisSpec::linear(s.distance_start.value(), s.distance_end.value(), s.distance_points),
            ..DetuningSweep::from_params(p, d_ref)
        }
    }

    /// Resonant chain (Δ1 = Δ2 = 0) for the transfer runs.
    pub fn dynamics_config(&self, p: &DerivedParams) -> DynamicsConfig {
        let d = &self.dynamics;
        let rate = |q: Option<Quantity<Frequency>>, fallback: f64| q.map_or(fallback, |q| angular(q.value()));
        let (nbar_c, nbar_v) = if d.thermal { (p.nbar_c, p.nbar_v) } else { (0.0, 0.0) };
        DynamicsConfig {
            g_vc: angular(d.g_vc.value()),
            g_nc: angular(d.g_nc.value()),
            delta1: 0.0,
            delta2: 0.0,
            gamma: rate(d.gamma, p.gamma_v),
            kappa1: rate(d.kappa1, p.kappa_c),
            kappa2: rate(d.kappa2, p.kappa_nv),
            nv_dissipation: d.nv_dissipation,
            nbar_c,
            nbar_v,
            n_max: self.numerics.n_max,
            samples: self.numerics.samples,
            duration: d.transfer_duration.value(),
            integrator: self.numerics.integrator,
            tolerances: self.numerics.tolerances,
        }
    }

    pub fn comparison_config(&self, p: &DerivedParams) -> ComparisonConfig {
        ComparisonConfig {
            chain: DynamicsConfig {
                n_max: self.dynamics.comparison_n_max,
                ..self.dynamics_config(p)
            },
            reference: self.dynamics.reference,
            periods: self.dynamics.periods,
        }
    }

    /// Δ1 of the detuned runs: `detuning_ratio` times the reference coupling.
    pub fn comparison_detuning(&self) -> f64 {
        let d = &self.dynamics;
        let (g_vc, g_nc) = (d.g_vc.value().abs(), d.g_nc.value().abs());
        let g = match d.detuning_reference {
            DetuningReference::Max => g_vc.max(g_nc),
            DetuningReference::GVc => g_vc,
            DetuningReference::GNc => g_nc,
        };
        d.detuning_ratio * angular(g)
    }
}
