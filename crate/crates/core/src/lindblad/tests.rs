use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::operators::{boson_annihilator, build_h_jc, build_h_tripartite, SPIN, VORTEX};
use crate::params::thermal_occupation;

fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

fn damped_mode(n_max: usize, kappa: f64, nbar: f64) -> OpenSystemModel {
    let a = boson_annihilator(n_max).unwrap();
    let h = (a.dagger() * a.clone()).scale(0.0);
    OpenSystemModel::new(h, thermal_channels(&a, kappa, nbar).unwrap()).unwrap()
}

fn random_state(d: usize, seed: &[f64]) -> CMatrix {
    let a = CMatrix::from_fn(d, d, |i, j| {
        let k = (i * d + j) % seed.len();
        C64::new(seed[k], seed[(k + 1) % seed.len()] - 0.5)
    });
    let m = &a * a.adjoint();
    let tr = m.trace();
    m / tr
}

#[test]
fn thermal_channel_rates() {
    let a = boson_annihilator(3).unwrap();
    let ch = thermal_channels(&a, 2.0, 0.0).unwrap();
    assert_eq!(ch.len(), 1);
    assert_eq!(ch[0].rate, 2.0);

    let gamma = TAU * 20e3;
    let ch = thermal_channels(&a, gamma, 1.62).unwrap();
    assert_eq!(ch.len(), 2);
    assert_relative_eq!(ch[0].rate / TAU, 52.4e3, max_relative = 1e-12);
    assert_relative_eq!(ch[1].rate / TAU, 32.4e3, max_relative = 1e-12);
    assert_eq!(ch[1].operator, a.dagger());

    assert!(thermal_channels(&a, 0.0, 1.0).unwrap().is_empty());
    assert!(thermal_channels(&a, 1.0, -1.0).is_err());
    assert!(CollapseChannel::new(a, -1.0).is_err());
}

#[test]
fn detailed_balance_matches_boltzmann() {
    let omega = TAU * 100e6;
    let t = 0.01;
    let nbar = thermal_occupation(omega, t);
    let ratio = (nbar + 1.0) / nbar;
    let boltzmann = (crate::constants::HBAR * omega / (crate::constants::K_B * t)).exp();
    assert_relative_eq!(ratio, boltzmann, max_relative = 1e-12);
}

#[test]
fn rhs_zero_for_trivial_model() {
    let sig = SpaceSignature::vortex_spin(2);
    let m = OpenSystemModel::closed(QOperator::zeros(&sig)).unwrap();
    let rho = random_state(6, &[0.3, 0.7, 0.1, 0.9]);
    assert_eq!(rhs(&m, &rho).unwrap().norm(), 0.0);
    assert!(rhs(&m, &CMatrix::zeros(4, 4)).is_err());
}

#[test]
fn rhs_decay_law() {
    let gamma = 3.0;
    let m = damped_mode(3, gamma, 0.0);
    let rho = DensityState::basis(m.signature(), &[1]).unwrap();
    let a = boson_annihilator(3).unwrap();
    let n = a.dagger() * a;
    let drho = DensityState::from_matrix_unchecked(rhs(&m, rho.matrix()).unwrap());
    let dn = expectation(&drho, &n).unwrap();
    assert_relative_eq!(dn.re, -gamma, epsilon = 1e-12);
}

#[test]
fn model_rejects_inconsistent_inputs() {
    let sig = SpaceSignature::vortex_spin(1);
    let mut h = QOperator::zeros(&sig).into_matrix();
    h[(0, 1)] = C64::new(1.0, 0.0);
    assert!(OpenSystemModel::closed(QOperator::new(sig.clone(), h).unwrap()).is_err());
    let a = boson_annihilator(2).unwrap();
    let ch = CollapseChannel::new(a, 1.0).unwrap();
    assert!(matches!(
        OpenSystemModel::new(QOperator::zeros(&sig), vec![ch]),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn expectation_values() {
    let a = boson_annihilator(3).unwrap();
    let sig = a.signature().clone();
    let rho = DensityState::basis(&sig, &[2]).unwrap();
    assert_relative_eq!(expectation(&rho, &QOperator::identity(&sig)).unwrap().re, 1.0);
    assert_relative_eq!(
        expectation(&rho, &(a.dagger() * a.clone())).unwrap().re,
        2.0,
        epsilon = 1e-14
    );
    let s = 0.5f64.sqrt();
    let plus = DensityState::pure(&[
        C64::new(s, 0.0),
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ])
    .unwrap();
    let v = expectation(&plus, &a).unwrap();
    assert_relative_eq!(v.re, 0.5, epsilon = 1e-14);
    assert!(expectation(&plus, &sigma_z_op()).is_err());
}

fn sigma_z_op() -> QOperator {
    crate::operators::sigma_z()
}

#[test]
fn density_state_validation() {
    let tol = Tolerances::default();
    let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
    assert!(DensityState::new(m.clone(), &tol).is_ok());
    m[(0, 0)] = C64::new(0.6, 0.0);
    assert!(DensityState::new(m.clone(), &tol).is_err());
    let neg = CMatrix::from_fn(2, 2, |i, j| C64::new(if i == j { [1.2, -0.2][i] } else { 0.0 }, 0.0));
    assert!(DensityState::new(neg, &tol).is_err());
    let th = DensityState::thermal_mode(40, 1.62).unwrap();
    assert_relative_eq!(th.trace(), 1.0, epsilon = 1e-14);
    assert!(DensityState::pure(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
}

#[test]
fn time_series_validation() {
    assert!(TimeSeries::new(vec![0.0, 1.0, 1.0]).is_err());
    let mut ts = TimeSeries::new(vec![0.0, 1.0]).unwrap();
    assert!(ts.push_track("x", vec![1.0]).is_err());
    ts.push_track("x", vec![1.0, 2.0]).unwrap();
    assert!(ts.push_track("x", vec![1.0, 2.0]).is_err());
    let mut buf = Vec::new();
    ts.write_csv(&mut buf, &["# note".into()]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "time,x");
}

#[test]
fn jc_vacuum_rabi_revival() {
    let g = TAU * 0.3e6;
    let h = build_h_jc(0.0, 0.0, g, 3).unwrap();
    let sig = h.signature().clone();
    let model = OpenSystemModel::closed(h).unwrap();
    let rho0 = DensityState::basis(&sig, &[0, 1]).unwrap();
    let t = TAU / (2.0 * g);
    let opts = EvolveOptions::with_observables(occupation_observables(&sig).unwrap());
    let ev = evolve(&model, &rho0, &grid(t, 40), &opts).unwrap();
    let spin = ev.series.track(SPIN).unwrap();
    assert!((spin[40] - 1.0).abs() < 1e-6, "{}", spin[40]);
    assert!(spin[20] < 1e-6);
}

#[test]
fn tripartite_chain_transfer() {
    let g = TAU * 0.45e6;
    let h = build_h_tripartite(0.0, 0.0, g, g, 2).unwrap();
    let sig = h.signature().clone();
    let model = OpenSystemModel::closed(h).unwrap();
    let rho0 = DensityState::basis(&sig, &[0, 1, 0]).unwrap();
    let t = PI / (2f64.sqrt() * g);
    let opts = EvolveOptions::with_observables(occupation_observables(&sig).unwrap());
    let ev = evolve(&model, &rho0, &[0.0, t], &opts).unwrap();
    assert!(ev.series.track(SPIN).unwrap()[1] > 0.999);
    assert!(ev.series.track(VORTEX).unwrap()[1] < 1e-6);
}

#[test]
fn damped_mode_exponential() {
    let kappa = 2.0e5;
    let model = damped_mode(2, kappa, 0.0);
    let rho0 = DensityState::basis(model.signature(), &[1]).unwrap();
    let opts = EvolveOptions::with_observables(occupation_observables(model.signature()).unwrap());
    let times = grid(5.0 / kappa, 50);
    let ev = evolve(&model, &rho0, &times, &opts).unwrap();
    let n = ev.series.track("mode").unwrap();
    for (t, v) in times.iter().zip(n) {
        assert!((v - (-kappa * t).exp()).abs() < 1e-6);
    }
}

#[test]
fn adaptive_agrees_with_fixed() {
    let g = 1.0;
    let h = build_h_tripartite(0.3, -0.2, g, 0.7 * g, 2).unwrap();
    let sig = h.signature().clone();
    let a = crate::operators::ModeOperators::new(&sig);
    let ch = vec![CollapseChannel::new(a.lowering(VORTEX).unwrap(), 0.05).unwrap()];
    let model = OpenSystemModel::new(h, ch).unwrap();
    let rho0 = DensityState::basis(&sig, &[1, 1, 0]).unwrap();
    let obs = occupation_observables(&sig).unwrap();
    let times = grid(10.0, 20);
    let fixed = evolve(&model, &rho0, &times, &EvolveOptions::with_observables(obs.clone())).unwrap();
    let adaptive = evolve(
        &model,
        &rho0,
        &times,
        &EvolveOptions {
            integrator: Integrator::Adaptive,
            ..EvolveOptions::with_observables(obs)
        },
    )
    .unwrap();
    for ((_, x), (_, y)) in fixed.series.tracks().iter().zip(adaptive.series.tracks()) {
        for (p, q) in x.iter().zip(y) {
            assert!((p - q).abs() < 1e-7, "{p} vs {q}");
        }
    }
}

#[test]
fn step_halving_converges() {
    let g = 1.0;
    let h = build_h_tripartite(0.5, 0.0, g, g, 2).unwrap();
    let sig = h.signature().clone();
    let model = OpenSystemModel::closed(h).unwrap();
    let rho0 = DensityState::basis(&sig, &[0, 1, 0]).unwrap();
    let obs = occupation_observables(&sig).unwrap();
    let times = grid(20.0, 40);
    let run = |f: f64| {
        evolve(
            &model,
            &rho0,
            &times,
            &EvolveOptions {
                integrator: Integrator::FixedRk4 { step_fraction: f },
                ..EvolveOptions::with_observables(obs.clone())
            },
        )
        .unwrap()
    };
    let full = run(1.0);
    let half = run(0.5);
    let tol = Tolerances::default();
    for ((_, x), (_, y)) in full.series.tracks().iter().zip(half.series.tracks()) {
        for (p, q) in x.iter().zip(y) {
            assert!((p - q).abs() < 10.0 * tol.trace, "{p} vs {q}");
        }
    }
}

#[test]
fn step_underflow_is_reported() {
    let model = damped_mode(2, 1.0, 0.5);
    let rho0 = DensityState::basis(model.signature(), &[1]).unwrap();
    let opts = EvolveOptions {
        integrator: Integrator::Adaptive,
        tolerances: Tolerances {
            rtol: 1e-300,
            atol: 0.0,
            ..Tolerances::default()
        },
        ..EvolveOptions::default()
    };
    let err = evolve(&model, &rho0, &[0.0, 1.0], &opts).unwrap_err();
    assert!(matches!(err, Error::StepUnderflow { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn invalid_initial_state_is_rejected() {
    let model = damped_mode(1, 1.0, 0.0);
    let bad = DensityState::from_matrix_unchecked(CMatrix::identity(2, 2));
    assert!(matches!(
        evolve(&model, &bad, &[0.0, 1.0], &EvolveOptions::default()),
        Err(Error::Invariant { .. })
    ));
    let ok = DensityState::basis(model.signature(), &[0]).unwrap();
    assert!(evolve(&model, &ok, &[1.0, 0.0], &EvolveOptions::default()).is_err());
}

#[test]
fn steady_state_occupations() {
    assert_relative_eq!(
        steady_state_occupation(&damped_mode(6, 1.0, 0.0)).unwrap(),
        0.0,
        epsilon = 1e-12
    );
    let nbar = thermal_occupation(TAU * 100e6, 0.01);
    let n = steady_state_occupation(&damped_mode(20, 1.0, nbar)).unwrap();
    assert!((n - nbar).abs() / nbar < 0.01, "{n} vs {nbar}");
    let closed = OpenSystemModel::closed(QOperator::zeros(&SpaceSignature::single(
        crate::operators::Subsystem::boson("m", 2),
    )))
    .unwrap();
    assert!(steady_state_occupation(&closed).is_err());
}

#[test]
fn long_evolution_relaxes_to_thermal_occupation() {
    let nbar = thermal_occupation(TAU * 100e6, 0.01);
    let kappa = 1.0;
    let model = damped_mode(20, kappa, nbar);
    let rho0 = DensityState::basis(model.signature(), &[0]).unwrap();
    let opts = EvolveOptions::with_observables(occupation_observables(model.signature()).unwrap());
    let ev = evolve(&model, &rho0, &grid(30.0 / kappa, 30), &opts).unwrap();
    let n = *ev.series.track("mode").unwrap().last().unwrap();
    assert!((n - nbar).abs() / nbar < 0.01, "{n} vs {nbar}");
}

#[test]
fn batch_matches_individual_runs() {
    let jobs: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&k| {
            let m = damped_mode(2, k, 0.1);
            let r = DensityState::basis(m.signature(), &[2]).unwrap();
            (m, r)
        })
        .collect();
    let opts = EvolveOptions::with_observables(occupation_observables(jobs[0].0.signature()).unwrap());
    let times = grid(1.0, 5);
    let par = evolve_batch(&jobs, &times, &opts, crate::Execution::Parallel);
    let seq = evolve_batch(&jobs, &times, &opts, crate::Execution::Sequential);
    for (p, s) in par.iter().zip(&seq) {
        assert_eq!(p.as_ref().unwrap().series, s.as_ref().unwrap().series);
    }
}

proptest! {
    #[test]
    fn rhs_is_trace_free_and_hermiticity_preserving(
        seed in proptest::collection::vec(0.0f64..1.0, 8),
        g in 0.0f64..2.0,
        gamma in 0.0f64..1.0,
        nbar in 0.0f64..2.0,
    ) {
        let h = build_h_jc(0.4, 0.1, g, 2).unwrap();
        let sig = h.signature().clone();
        let a = crate::operators::ModeOperators::new(&sig).lowering(VORTEX).unwrap();
        let model = OpenSystemModel::new(h, thermal_channels(&a, gamma, nbar).unwrap()).unwrap();
        let rho = random_state(sig.dim(), &seed);
        let d = rhs(&model, &rho).unwrap();
        prop_assert!(d.trace().norm() < 1e-12 * (1.0 + d.norm()));
        prop_assert!((&d - d.adjoint()).norm() < 1e-12 * (1.0 + d.norm()));
    }
}
