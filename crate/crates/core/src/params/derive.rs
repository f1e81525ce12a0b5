use serde::{Deserialize, Serialize};

use super::{
    cantilever_frequency, coupling_nc, coupling_vc, coupling_vn, dipole_gradient, effective_mass_and_zero_point,
    exchange_length, gyrotropic_frequency, thermal_occupation, vortex_core_radius, vortex_linewidth,
    CantileverGeometry, DipoleMagnet, DiscGeometry, Material, Placement, Warning,
};
use crate::constants::angular;
use crate::error::{Error, Result};

/// Complete device description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub material: Material,
    pub disc: DiscGeometry,
    pub cantilever: CantileverGeometry,
    pub magnet: DipoleMagnet,
    pub placement: Placement,
}

/// Values that replace the corresponding derived quantity verbatim.
/// Rates are angular.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeviceOverrides {
    pub a0: Option<f64>,
    pub g_vc: Option<f64>,
    pub g_nc: Option<f64>,
    pub omega_c: Option<f64>,
}

/// Every derived quantity of one configuration. Rates and frequencies are
/// angular (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub exchange_length: f64,
    pub core_radius: f64,
    pub omega_v: f64,
    pub gamma_v: f64,
    pub omega_c: f64,
    pub kappa_c: f64,
    pub kappa_nv: f64,
    pub effective_mass: f64,
    pub a0: f64,
    pub magnet_moment: f64,
    pub gradient_v: f64,
    pub gradient_nc: f64,
    pub b_vc: f64,
    pub g_vc: f64,
    pub g_nc: f64,
    pub g_vn: f64,
    pub temperature: f64,
    pub nbar_v: f64,
    pub nbar_c: f64,
    pub warnings: Vec<Warning>,
}

impl Device {
    /// The reference device: YIG disc (r = 180 nm, t = 20 nm), silicon
    /// cantilever (1.2 × 0.2 × 0.15 μm) loaded to resonate at 100 MHz, magnet
    /// moment back-solved from G(160 nm) = 5×10⁵ T/m, d_vc = 150 nm,
    /// d_nc = 40 nm, y = 200 nm.
    pub fn reference() -> Self {
        let bare = CantileverGeometry::silicon(1.2e-6, 0.2e-6, 0.15e-6, 0.0, 1000.0).expect("valid");
        let tip = super::tip_mass_for_frequency(&bare, angular(100e6)).expect("reachable");
        Self {
            material: Material::yig(),
            disc: DiscGeometry::new(180e-9, 20e-9).expect("valid"),
            cantilever: CantileverGeometry { tip_mass: tip, ..bare },
            magnet: DipoleMagnet::from_gradient_anchor(5e5, 160e-9).expect("valid"),
            placement: Placement::new(150e-9, 40e-9, 200e-9).expect("valid"),
        }
    }

    pub fn derive(&self, temperature: f64, kappa_nv: f64, overrides: &DeviceOverrides) -> Result<DerivedParams> {
        if !(temperature >= 0.0) {
            return Err(Error::invalid("temperature", "must be >= 0"));
        }
        if !(kappa_nv >= 0.0) {
            return Err(Error::invalid("kappa_nv", "must be >= 0"));
        }
        let mat = &self.material;
        let omega_v = gyrotropic_frequency(mat, &self.disc);
        let gamma_v = vortex_linewidth(mat, &self.disc, omega_v)?;
        let omega_c = overrides
            .omega_c
            .unwrap_or_else(|| cantilever_frequency(&self.cantilever));
        let (effective_mass, derived_a0) = effective_mass_and_zero_point(&self.cantilever, omega_c);
        let a0 = overrides.a0.unwrap_or(derived_a0);
        let gradient_v = dipole_gradient(&self.magnet, self.placement.d_vc);
        let gradient_nc = dipole_gradient(&self.magnet, self.placement.d_nc);
        let b_vc = gradient_v * a0;

        let mut warnings = self.disc.warnings();
        warnings.extend(self.cantilever.warnings());
        for w in &warnings {
            log::warn!("{w}");
        }

        Ok(DerivedParams {
            exchange_length: exchange_length(mat),
            core_radius: vortex_core_radius(mat, self.disc.thickness),
            omega_v,
            gamma_v,
            omega_c,
            kappa_c: omega_c / self.cantilever.quality_factor,
            kappa_nv,
            effective_mass,
            a0,
            magnet_moment: self.magnet.moment,
            gradient_v,
            gradient_nc,
            b_vc,
            g_vc: overrides.g_vc.unwrap_or_else(|| coupling_vc(mat, &self.disc, b_vc)),
            g_nc: overrides.g_nc.unwrap_or_else(|| coupling_nc(gradient_nc, a0)),
            g_vn: coupling_vn(mat, &self.disc, self.placement.y_vn),
            temperature,
            nbar_v: thermal_occupation(omega_v, temperature),
            nbar_c: thermal_occupation(omega_c, temperature),
            warnings,
        })
    }
}

/// One line of the derived-parameter report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub description: &'static str,
}

impl DerivedParams {
    /// Report rows with angular quantities converted to Hz (value / 2π).
    pub fn report(&self) -> Vec<ReportRow> {
        let hz = |v: f64| v / std::f64::consts::TAU;
        let row = |name, value, unit, description| ReportRow {
            name,
            value,
            unit,
            description,
        };
        vec![
            row("exchange_length", self.exchange_length, "m", "exchange length"),
            row("core_radius", self.core_radius, "m", "vortex core radius"),
            row("f_v", hz(self.omega_v), "Hz", "gyrotropic frequency"),
            row("gamma_v", hz(self.gamma_v), "Hz", "vortex linewidth"),
            row("f_c", hz(self.omega_c), "Hz", "cantilever frequency"),
            row("kappa_c", hz(self.kappa_c), "Hz", "cantilever damping"),
            row("kappa_nv", hz(self.kappa_nv), "Hz", "NV dephasing rate"),
            row("effective_mass", self.effective_mass, "kg", "cantilever effective mass"),
            row("a0", self.a0, "m", "zero-point amplitude"),
            row("magnet_moment", self.magnet_moment, "A*m^2", "tip magnet dipole moment"),
            row("G_v", self.gradient_v, "T/m", "field gradient at the disc"),
            row("G_nc", self.gradient_nc, "T/m", "field gradient at the NV center"),
            row("B_vc", self.b_vc, "T", "zero-point field at the disc"),
            row("g_vc", hz(self.g_vc), "Hz", "vortex-phonon coupling"),
            row("g_nc", hz(self.g_nc), "Hz", "NV-phonon coupling"),
            row("g_vn", hz(self.g_vn), "Hz", "direct vortex-NV coupling"),
            row("temperature", self.temperature, "K", "bath temperature"),
            row("nbar_v", self.nbar_v, "1", "vortex thermal occupation"),
            row("nbar_c", self.nbar_c, "1", "cantilever thermal occupation"),
        ]
    }
}
