use proptest::prelude::*;

use vortex_hybrid::experiments::EffectiveParams;
use vortex_hybrid::io::{parse_config_str, RunConfig};
use vortex_hybrid::params::{coupling_nc, coupling_vc, gyrotropic_frequency, DiscGeometry, Material};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #[test]
    fn effective_identities(
        g_vc in 1e3..1e8f64,
        g_nc in 1e3..1e8f64,
        delta in prop_oneof![1e5..1e10f64, -1e10..-1e5f64],
        gamma in 0.0..1e7f64,
        kappa1 in 1e2..1e7f64,
        kappa2 in 1e1..1e6f64,
    ) {
        let e = EffectiveParams::new(g_vc, g_nc, delta, gamma, kappa1, kappa2).unwrap();
        prop_assert!(rel(e.alpha * delta.abs(), g_nc) < 1e-12);
        prop_assert!(rel(e.beta * delta.abs(), g_vc) < 1e-12);
        prop_assert!(rel(e.g_eff, e.alpha * g_vc) < 1e-12);
        prop_assert!(rel(e.g_eff, e.beta * g_nc) < 1e-12);
        prop_assert!(e.gamma_eff >= gamma && e.kappa_eff >= kappa2);
        prop_assert!(rel(e.c_eff * e.gamma_eff * e.kappa_eff, e.g_eff * e.g_eff) < 1e-12);
        let flipped = EffectiveParams::new(g_vc, g_nc, -delta, gamma, kappa1, kappa2).unwrap();
        prop_assert_eq!(e, flipped);
    }

    #[test]
    fn frequency_depends_on_aspect_ratio_only(r in 50e-9..1e-6f64, beta in 0.01..0.2f64, s in 0.1..10.0f64) {
        let mat = Material::yig();
        let a = DiscGeometry::new(r, beta * r).unwrap();
        let b = DiscGeometry::new(s * r, s * beta * r).unwrap();
        prop_assert!(rel(gyrotropic_frequency(&mat, &a), gyrotropic_frequency(&mat, &b)) < 1e-12);
    }

    #[test]
    fn couplings_scale_with_their_drives(
        r in 50e-9..1e-6f64,
        t in 5e-9..50e-9f64,
        b in 1e-6..1e-2f64,
        k in 0.1..10.0f64,
    ) {
        let mat = Material::yig();
        let disc = DiscGeometry::new(r, t).unwrap();
        prop_assert!(rel(coupling_vc(&mat, &disc, k * b), k * coupling_vc(&mat, &disc, b)) < 1e-12);
        let bigger = DiscGeometry::new(2.0 * r, t).unwrap();
        prop_assert!(rel(coupling_vc(&mat, &bigger, b), 2.0 * coupling_vc(&mat, &disc, b)) < 1e-12);
        prop_assert!(rel(coupling_nc(k * 5e5, 1e-13), k * coupling_nc(5e5, 1e-13)) < 1e-12);
    }

    #[test]
    fn config_round_trips(
        radius_nm in 100u32..700,
        thickness_nm in 5u32..40,
        temperature_mk in 1u32..1000,
        n_max in 1usize..8,
    ) {
        let overrides = vec![
            format!("disc.radius=\"{radius_nm} nm\""),
            format!("disc.thickness=\"{thickness_nm} nm\""),
            format!("environment.temperature=\"{temperature_mk} mK\""),
            format!("numerics.n_max={n_max}"),
        ];
        let cfg = RunConfig::reference();
        let text = cfg.to_toml_string();
        let tuned = parse_config_str(&text, "round-trip", &overrides).unwrap();
        prop_assert_eq!(tuned.disc.radius.value(), radius_nm as f64 / 1e9);
        let again = parse_config_str(&tuned.to_toml_string(), "round-trip", &[]).unwrap();
        prop_assert_eq!(&again, &tuned);
        prop_assert_eq!(again.to_toml_string(), tuned.to_toml_string());
    }
}
