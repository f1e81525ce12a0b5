//! Device parameters: material and geometry inputs and every derived
//! frequency, rate, amplitude and coupling strength.

mod cantilever;
mod coupling;
mod derive;
mod dipole;
mod vortex;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::MU0;
use crate::error::{Error, Result};

pub use cantilever::{
    cantilever_frequency, effective_mass, effective_mass_and_zero_point, tip_mass_for_frequency, zero_point_amplitude,
};
pub use coupling::{
    coupling_nc, coupling_vc, coupling_vc_via_susceptibility, coupling_vn, thermal_occupation, usc_metrics,
    vortex_susceptibility, SusceptibilityRoute, UscMetrics, USC_THRESHOLD,
};
pub use derive::{DerivedParams, Device, DeviceOverrides, ReportRow};
pub use dipole::{dipole_field, dipole_field_map, dipole_gradient, moment_for_gradient, FieldSample};
pub use vortex::{exchange_length, gyrotropic_frequency, vortex_core_radius, vortex_linewidth};

/// Aspect ratio above which the thin-disc frequency law is no longer trusted.
pub const THIN_DISC_LIMIT: f64 = 0.2;
/// Width/length ratio above which the slender-beam formulas are no longer trusted.
pub const SLENDER_BEAM_LIMIT: f64 = 0.5;

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

/// Ferromagnetic material of the disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Saturation magnetization M_s (A/m).
    pub ms: f64,
    /// Gilbert damping α_LLG.
    pub damping: f64,
    /// Exchange stiffness A (J/m).
    pub exchange: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, ms: f64, damping: f64, exchange: f64) -> Result<Self> {
        require_positive("ms", ms)?;
        require_positive("exchange", exchange)?;
        if !(damping > 0.0 && damping < 1.0) {
            return Err(Error::invalid("damping", format!("must lie in (0, 1), got {damping}")));
        }
        Ok(Self {
            name: name.into(),
            ms,
            damping,
            exchange,
        })
    }

    /// Builds a material from μ0·M_s given in tesla.
    pub fn from_saturation_field(name: impl Into<String>, mu0_ms: f64, damping: f64, exchange: f64) -> Result<Self> {
        Self::new(name, mu0_ms / MU0, damping, exchange)
    }

    /// Yttrium iron garnet: μ0M_s = 0.18 T, α = 5×10⁻⁵, A = 1.9 pJ/m.
    pub fn yig() -> Self {
        Self::from_saturation_field("YIG", 0.18, 5e-5, 1.9e-12).expect("valid constants")
    }

    /// CoFe: μ0M_s = 2.4 T, α = 5×10⁻⁴, A = 26 pJ/m.
    pub fn cofe() -> Self {
        Self::from_saturation_field("CoFe", 2.4, 5e-4, 26e-12).expect("valid constants")
    }

    pub fn saturation_field(&self) -> f64 {
        MU0 * self.ms
    }
}

/// Sign of a vortex core or circulation, restricted to ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("expected +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Nanodisc hosting the vortex. `polarity` is the core direction (+1 up),
/// `circulation` the in-plane sense (+1 clockwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscGeometry {
    pub radius: f64,
    pub thickness: f64,
    pub polarity: Sign,
    pub circulation: Sign,
}

impl DiscGeometry {
    pub fn new(radius: f64, thickness: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        require_positive("thickness", thickness)?;
        if thickness >= radius {
            return Err(Error::invalid(
                "thickness",
                format!("must be smaller than the radius ({thickness} >= {radius})"),
            ));
        }
        Ok(Self {
            radius,
            thickness,
            polarity: Sign::Plus,
            circulation: Sign::Plus,
        })
    }

    pub fn with_polarity(mut self, polarity: Sign) -> Self {
        self.polarity = polarity;
        self
    }

    /// β = t/r.
    pub fn aspect_ratio(&self) -> f64 {
        self.thickness / self.radius
    }

    /// V = π r² t.
    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.thickness
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let beta = self.aspect_ratio();
        if beta > THIN_DISC_LIMIT {
            vec![Warning::ThickDisc { aspect_ratio: beta }]
        } else {
            Vec::new()
        }
    }
}

/// Singly clamped beam with a magnet (and paddle) at its free end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantileverGeometry {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    /// Young's modulus (Pa).
    pub youngs_modulus: f64,
    /// Mass density (kg/m³).
    pub density: f64,
    /// Extra mass carried at the tip (kg).
    pub tip_mass: f64,
    pub quality_factor: f64,
}

impl CantileverGeometry {
    pub fn new(
        length: f64,
        width: f64,
        thickness: f64,
        youngs_modulus: f64,
        density: f64,
        tip_mass: f64,
        quality_factor: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("cantilever.length", length),
            ("cantilever.width", width),
            ("cantilever.thickness", thickness),
            ("youngs_modulus", youngs_modulus),
            ("density", density),
            ("quality_factor", quality_factor),
        ] {
            require_positive(name, v)?;
        }
        if !(tip_mass >= 0.0 && tip_mass.is_finite()) {
            return Err(Error::invalid("tip_mass", format!("must be >= 0, got {tip_mass}")));
        }
        Ok(Self {
            length,
            width,
            thickness,
            youngs_modulus,
            density,
            tip_mass,
            quality_factor,
        })
    }

    /// Silicon beam (E = 169 GPa, ρ = 2330 kg/m³) with the given dimensions.
    pub fn silicon(length: f64, width: f64, thickness: f64, tip_mass: f64, q: f64) -> Result<Self> {
        Self::new(length, width, thickness, 169e9, 2330.0, tip_mass, q)
    }

    pub fn beam_volume(&self) -> f64 {
        self.length * self.width * self.thickness
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        let ratio = self.width / self.length;
        if ratio > SLENDER_BEAM_LIMIT {
            out.push(Warning::WideCantilever { ratio });
        }
        if self.thickness > self.width {
            out.push(Warning::ThickCantilever {
                thickness: self.thickness,
                width: self.width,
            });
        }
        out
    }
}

/// Point-dipole model of the magnet on the cantilever tip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleMagnet {
    /// |μ_m| (A·m²).
    pub moment: f64,
    /// Unit vector along the moment.
    pub orientation: [f64; 3],
}

impl DipoleMagnet {
    /// Moment along +z.
    pub fn new(moment: f64) -> Result<Self> {
        Self::oriented(moment, [0.0, 0.0, 1.0])
    }

    pub fn oriented(moment: f64, orientation: [f64; 3]) -> Result<Self> {
        require_positive("magnet.moment", moment)?;
        let norm = orientation.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "magnet.orientation",
                format!("must be a unit vector, norm is {norm}"),
            ));
        }
        Ok(Self { moment, orientation })
    }

    /// μ_m = M·l·w·t for a uniformly magnetised block.
    pub fn from_dimensions(length: f64, width: f64, thickness: f64, magnetization: f64) -> Result<Self> {
        require_positive("magnet.magnetization", magnetization)?;
        Self::new(magnetization * length * width * thickness)
    }

    /// Back-solves the moment so that the gradient at `distance` equals
    /// `gradient`.
    pub fn from_gradient_anchor(gradient: f64, distance: f64) -> Result<Self> {
        require_positive("anchor_gradient", gradient)?;
        require_positive("anchor_distance", distance)?;
        Self::new(moment_for_gradient(gradient, distance))
    }
}

/// Distances between the magnet, the disc center and the NV center (m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub d_vc: f64,
    pub d_nc: f64,
    pub y_vn: f64,
}

impl Placement {
    pub fn new(d_vc: f64, d_nc: f64, y_vn: f64) -> Result<Self> {
        require_positive("placement.d_vc", d_vc)?;
        require_positive("placement.d_nc", d_nc)?;
        require_positive("placement.y_vn", y_vn)?;
        Ok(Self { d_vc, d_nc, y_vn })
    }
}

/// Validity warnings raised while deriving parameters. These never abort a
/// computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    ThickDisc { aspect_ratio: f64 },
    WideCantilever { ratio: f64 },
    ThickCantilever { thickness: f64, width: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ThickDisc { aspect_ratio } => write!(
                f,
                "disc aspect ratio {aspect_ratio:.3} exceeds {THIN_DISC_LIMIT}; thin-disc frequency law is approximate"
            ),
            Warning::WideCantilever { ratio } => write!(
                f,
                "cantilever width/length {ratio:.3} exceeds {SLENDER_BEAM_LIMIT}; flexural formula is approximate"
            ),
            Warning::ThickCantilever { thickness, width } => {
                write!(f, "cantilever thickness {thickness:.3e} m exceeds width {width:.3e} m")
            }
        }
    }
}
