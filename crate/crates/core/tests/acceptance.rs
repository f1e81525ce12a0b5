//! Acceptance criteria of the simulator. Runs without the libtest harness so
//! that one PASS/FAIL line per criterion is always printed.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vortex_hybrid::experiments::{
    run_effective_comparison, run_transfer_experiment, sweep_detuning, sweep_usc, ComparisonConfig, DetuningSweep,
    DynamicsConfig, UscSweep, TRACK_CANTILEVER, TRACK_NV, TRACK_VORTEX,
};
use vortex_hybrid::lindblad::{
    evolve, evolve_batch, thermal_channels, CollapseChannel, DensityState, EvolveOptions, Integrator, Observable,
    OpenSystemModel,
};
use vortex_hybrid::operators::{
    build_h_tripartite, eigh, CMatrix, ModeOperators, QOperator, SpaceSignature, Subsystem, C64, CANTILEVER, SPIN,
    VORTEX,
};
use vortex_hybrid::params::{
    gyrotropic_frequency, thermal_occupation, vortex_linewidth, Device, DeviceOverrides, DiscGeometry, Material,
};
use vortex_hybrid::thiele::{power_spectrum, simulate_ring_down, GyrotropicMode, RingDownProtocol};
use vortex_hybrid::Execution;

// Tolerances and limits.
const F_V_BAND_HZ: (f64, f64) = (99e6, 101e6);
const F_V_BUDGET: Duration = Duration::from_millis(1);
const SPECTRUM_BUDGET: Duration = Duration::from_secs(5);
const GAMMA_TARGET_HZ: f64 = 20e3;
const GAMMA_REL: f64 = 0.10;
const G_VC_BAND_HZ: (f64, f64) = (0.3e6, 3e6);
const G_NC_BAND_HZ: (f64, f64) = (0.1e6, 1e6);
const REGRESSION_REL: f64 = 1e-6;
const USC_TARGET: f64 = 1e7;
const USC_FACTOR: f64 = 1.5;
const IDENTITY_REL: f64 = 1e-12;
const TRANSFER_FLOOR: f64 = 0.999;
const TRANSFER_WINDOW: f64 = 0.01;
const TRANSFER_BUDGET: Duration = Duration::from_secs(30);
const COMPARISON_DEVIATION: f64 = 0.1;
const COMPARISON_CANTILEVER: f64 = 0.05;
const RANDOM_MODELS: usize = 100;
const RANDOM_MAX_DIM: usize = 32;
const TRACE_TOL: f64 = 1e-9;
const EIGEN_FLOOR: f64 = -1e-8;
const CONSERVATION_TOL: f64 = 1e-8;
const THERMAL_TARGET: f64 = 1.62;
const THERMAL_REL: f64 = 0.01;
const ORACLE_TOL: f64 = 1e-6;

// Frozen reference values, Hz unless noted.
const F_V_REF: f64 = 99_029_742.368;
const GAMMA_REF: f64 = 20_165.47;
const G_VC_REF: f64 = 430_155.247;
const G_NC_REF: f64 = 161_308.872;
const USC_BOUNDARY_REF: f64 = 1.162e7;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn reference_disc() -> (Material, DiscGeometry) {
    (Material::yig(), DiscGeometry::new(180e-9, 20e-9).unwrap())
}

fn gyrotropic_frequency_band() -> Outcome {
    let (mat, disc) = reference_disc();
    let start = Instant::now();
    let f = gyrotropic_frequency(&mat, &disc) / TAU;
    let elapsed = start.elapsed();
    check(
        f > F_V_BAND_HZ.0 && f < F_V_BAND_HZ.1 && rel(f, F_V_REF) < REGRESSION_REL && elapsed < F_V_BUDGET,
        format!("f_v = {:.6} MHz in {:?}", f / 1e6, elapsed),
    )
}

fn ring_down_spectrum_peak() -> Outcome {
    let (mat, disc) = reference_disc();
    let start = Instant::now();
    let mode = GyrotropicMode::from_disc(&mat, &disc).map_err(|e| e.to_string())?;
    let traj = simulate_ring_down(&mode, &RingDownProtocol::default()).map_err(|e| e.to_string())?;
    let spec = power_spectrum(&traj.ring_down(), 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (k, _) = spec
        .power
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, f64::MIN), |best, (k, &p)| if p > best.1 { (k, p) } else { best });
    let peak = spec.frequencies[k];
    let f_v = mode.frequency_hz();
    check(
        (peak - f_v).abs() <= spec.bin_width && elapsed < SPECTRUM_BUDGET,
        format!(
            "peak {:.6} MHz vs {:.6} MHz, bin {:.1} kHz, {:?}",
            peak / 1e6,
            f_v / 1e6,
            spec.bin_width / 1e3,
            elapsed
        ),
    )
}

fn linewidth() -> Outcome {
    let (mat, disc) = reference_disc();
    let omega = gyrotropic_frequency(&mat, &disc);
    let gamma = vortex_linewidth(&mat, &disc, omega).map_err(|e| e.to_string())? / TAU;
    check(
        rel(gamma, GAMMA_TARGET_HZ) <= GAMMA_REL && rel(gamma, GAMMA_REF) < REGRESSION_REL,
        format!("gamma/2pi = {:.3} kHz", gamma / 1e3),
    )
}

fn coupling_strengths() -> Outcome {
    let p = Device::reference()
        .derive(0.01, TAU * 1e3, &DeviceOverrides::default())
        .map_err(|e| e.to_string())?;
    let (g_vc, g_nc) = (p.g_vc / TAU, p.g_nc / TAU);
    check(
        g_vc >= G_VC_BAND_HZ.0
            && g_vc <= G_VC_BAND_HZ.1
            && g_nc >= G_NC_BAND_HZ.0
            && g_nc <= G_NC_BAND_HZ.1
            && rel(g_vc, G_VC_REF) < REGRESSION_REL
            && rel(g_nc, G_NC_REF) < REGRESSION_REL,
        format!("g_vc/2pi = {:.4} kHz, g_nc/2pi = {:.4} kHz", g_vc / 1e3, g_nc / 1e3),
    )
}

fn ultrastrong_boundary() -> Outcome {
    let grid = sweep_usc(&UscSweep::reference(), Execution::default()).map_err(|e| e.to_string())?;
    let radii = &grid.axis("radius").unwrap().samples;
    let grads = &grid.axis("gradient").unwrap().samples;
    let i = (0..radii.len())
        .min_by(|&a, &b| (radii[a] - 180e-9).abs().total_cmp(&(radii[b] - 180e-9).abs()))
        .unwrap();
    let usc = grid.mask("usc").unwrap();
    let j = (0..grads.len())
        .find(|&j| usc[grid.flat_index(&[i, j])])
        .ok_or_else(|| "no ultrastrong point at r = 180 nm".to_string())?;
    let g_on = grads[j];
    let below = if j > 0 { grads[j - 1] } else { 0.0 };
    check(
        g_on / USC_TARGET <= USC_FACTOR
            && USC_TARGET / g_on <= USC_FACTOR
            && below < USC_BOUNDARY_REF
            && g_on >= USC_BOUNDARY_REF,
        format!("r = {:.1} nm, boundary at G = {:.3e} T/m", radii[i] * 1e9, g_on),
    )
}

fn effective_identities() -> Outcome {
    let device = Device::reference();
    let p = device
        .derive(0.01, TAU * 1e3, &DeviceOverrides::default())
        .map_err(|e| e.to_string())?;
    let s = DetuningSweep::from_params(&p, device.placement.d_vc);
    let grid = sweep_detuning(&s, Execution::default()).map_err(|e| e.to_string())?;
    let deltas = &grid.axis("delta1").unwrap().samples;
    let dists = &grid.axis("d_vc").unwrap().samples;
    let f = |name: &str| grid.field(name).unwrap();
    let (alpha, beta, g_eff) = (f("alpha"), f("beta"), f("g_eff"));
    let (gamma_eff, kappa_eff, c_eff) = (f("gamma_eff"), f("kappa_eff"), f("c_eff"));
    let mut worst = 0.0f64;
    for (i, &delta_hz) in deltas.iter().enumerate() {
        for (j, &d) in dists.iter().enumerate() {
            let k = grid.flat_index(&[i, j]);
            let delta = TAU * delta_hz;
            let g_vc = s.g_vc_ref * (s.d_ref / d).powi(4);
            let (a, b) = (alpha[k], beta[k]);
            let (ge, gam, kap) = (TAU * g_eff[k], TAU * gamma_eff[k], TAU * kappa_eff[k]);
            for (lhs, rhs) in [
                (a * delta, s.g_nc),
                (b * delta, g_vc),
                (ge, a * g_vc),
                (ge, b * s.g_nc),
                (gam, s.gamma + s.kappa1 * a * a),
                (kap, s.kappa2 + s.kappa1 * b * b),
                (c_eff[k] * gam * kap, ge * ge),
            ] {
                worst = worst.max(rel(lhs, rhs));
            }
        }
    }
    check(
        worst <= IDENTITY_REL,
        format!("{} points, worst relative error {:.2e}", grid.len(), worst),
    )
}

fn peak_index(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

fn resonant_transfer() -> Outcome {
    let base = DynamicsConfig::default();
    let t_star = PI / (2f64.sqrt() * base.g_vc);
    let cfg = DynamicsConfig {
        n_max: 5,
        samples: 1201,
        duration: 1.2 * t_star,
        ..base
    };
    let start = Instant::now();
    let run = run_transfer_experiment(&cfg, false).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let s = &run.series;
    let (t, nv) = (s.times(), s.track(TRACK_NV).unwrap());
    let best = (0..t.len())
        .filter(|&k| (t[k] - t_star).abs() <= TRANSFER_WINDOW * t_star)
        .map(|k| nv[k])
        .fold(0.0, f64::max);
    let tv = t[peak_index(s.track(TRACK_VORTEX).unwrap())];
    let tc = t[peak_index(s.track(TRACK_CANTILEVER).unwrap())];
    let tn = t[peak_index(nv)];
    check(
        best > TRANSFER_FLOOR && tv < tc && tc < tn && elapsed < TRANSFER_BUDGET,
        format!(
            "NV {:.6} near t* = {:.4} us, peaks at {:.3}/{:.3}/{:.3} us, {:?}",
            best,
            t_star * 1e6,
            tv * 1e6,
            tc * 1e6,
            tn * 1e6,
            elapsed
        ),
    )
}

fn effective_model_agreement() -> Outcome {
    let chain = DynamicsConfig {
        n_max: 2,
        samples: 801,
        ..DynamicsConfig::default()
    };
    let g = chain.g_vc.max(chain.g_nc);
    let cfg = ComparisonConfig {
        chain,
        periods: 1.0,
        ..ComparisonConfig::default()
    };
    let mut devs = Vec::new();
    let mut at_20 = None;
    for ratio in [10.0, 20.0, 40.0] {
        let c = run_effective_comparison(&cfg, ratio * g, false).map_err(|e| e.to_string())?;
        if ratio == 20.0 {
            at_20 = Some((c.deviation, c.max_cantilever));
        }
        devs.push(c.deviation);
    }
    let (dev, cant) = at_20.unwrap();
    check(
        dev < COMPARISON_DEVIATION && cant < COMPARISON_CANTILEVER && devs.windows(2).all(|w| w[1] < w[0]),
        format!(
            "at 20g deviation {:.3e}, cantilever {:.3e}; deviation at 10g/20g/40g {:.2e}/{:.2e}/{:.2e}",
            dev, cant, devs[0], devs[1], devs[2]
        ),
    )
}

struct RandomModel {
    model: OpenSystemModel,
    rho0: DensityState,
    excitation: QOperator,
    closed: bool,
}

fn random_signature(rng: &mut ChaCha8Rng) -> SpaceSignature {
    loop {
        let n = rng.random_range(1..=3);
        let subs: Vec<Subsystem> = (0..n)
            .map(|k| {
                if rng.random_bool(0.3) {
                    Subsystem::two_level(format!("q{k}"))
                } else {
                    Subsystem::boson(format!("b{k}"), rng.random_range(1..=4))
                }
            })
            .collect();
        let sig = SpaceSignature::new(subs).unwrap();
        if sig.dim() <= RANDOM_MAX_DIM && sig.dim() > 1 {
            return sig;
        }
    }
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityState {
    let a = CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityState::new(m / tr, &Default::default()).unwrap()
}

fn random_model(rng: &mut ChaCha8Rng) -> RandomModel {
    let sig = random_signature(rng);
    let ops = ModeOperators::new(&sig);
    let names: Vec<String> = sig.subsystems().iter().map(|s| s.name.clone()).collect();
    let lower: Vec<QOperator> = names.iter().map(|n| ops.lowering(n).unwrap()).collect();
    let mut h = QOperator::zeros(&sig);
    for (k, a) in lower.iter().enumerate() {
        h = h + (a.dagger() * a.clone()).scale(rng.random_range(0.5..2.0));
        for b in &lower[k + 1..] {
            let hop = a.dagger() * b.clone();
            h = h + (&hop + &hop.dagger()).scale(rng.random_range(0.05..0.5));
        }
    }
    let closed = rng.random_bool(0.5);
    let mut channels = Vec::new();
    if !closed {
        for a in &lower {
            channels.extend(thermal_channels(a, rng.random_range(0.01..0.2), rng.random_range(0.0..2.0)).unwrap());
            let n = a.dagger() * a.clone();
            channels.push(CollapseChannel::new(n, rng.random_range(0.0..0.1)).unwrap());
        }
    }
    RandomModel {
        model: OpenSystemModel::new(h, channels).unwrap(),
        rho0: random_density(rng, sig.dim()),
        excitation: ops.total_excitation(),
        closed,
    }
}

fn master_equation_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0042);
    let models: Vec<RandomModel> = (0..RANDOM_MODELS).map(|_| random_model(&mut rng)).collect();
    let jobs: Vec<(OpenSystemModel, DensityState)> = models.iter().map(|m| (m.model.clone(), m.rho0.clone())).collect();
    let grid: Vec<f64> = (0..=10).map(|k| 0.2 * k as f64).collect();
    let opts = EvolveOptions {
        keep_snapshots: true,
        ..EvolveOptions::default()
    };
    let (mut trace_err, mut min_eig, mut drift) = (0.0f64, f64::INFINITY, 0.0f64);
    for (m, res) in models
        .iter()
        .zip(evolve_batch(&jobs, &grid, &opts, Execution::default()))
    {
        let evo = res.map_err(|e| e.to_string())?;
        let n0 = vortex_hybrid::lindblad::expectation(&m.rho0, &m.excitation).unwrap().re;
        for rho in &evo.snapshots {
            trace_err = trace_err.max((rho.trace() - 1.0).abs());
            min_eig = min_eig.min(rho.min_eigenvalue());
            if m.closed {
                let n = vortex_hybrid::lindblad::expectation(rho, &m.excitation).unwrap().re;
                drift = drift.max((n - n0).abs());
            }
        }
    }

    let omega = TAU * 100e6;
    let nbar = thermal_occupation(omega, 0.01);
    let a = vortex_hybrid::operators::boson_annihilator(25).unwrap();
    let sig = a.signature().clone();
    let thermal = OpenSystemModel::new(QOperator::zeros(&sig), thermal_channels(&a, 1.0, nbar).unwrap()).unwrap();
    let vacuum = DensityState::basis(&sig, &[0]).unwrap();
    let obs = vec![Observable::new("n", a.dagger() * a.clone())];
    let evo =
        evolve(&thermal, &vacuum, &[0.0, 15.0], &EvolveOptions::with_observables(obs)).map_err(|e| e.to_string())?;
    let n_final = *evo.series.track("n").unwrap().last().unwrap();

    check(
        trace_err <= TRACE_TOL
            && min_eig > EIGEN_FLOOR
            && drift <= CONSERVATION_TOL
            && rel(n_final, THERMAL_TARGET) <= THERMAL_REL
            && rel(n_final, nbar) <= THERMAL_REL,
        format!(
            "trace {:.1e}, min eig {:.1e}, drift {:.1e}, thermal n = {:.4} (nbar {:.4})",
            trace_err, min_eig, drift, n_final, nbar
        ),
    )
}

fn exact_diagonalization_oracle() -> Outcome {
    let (g_vc, g_nc, d1, d2) = (1.0, 0.7, 0.3, -0.2);
    let n_max = 2;
    let h = build_h_tripartite(d1, d2, g_vc, g_nc, n_max).map_err(|e| e.to_string())?;
    let sig = h.signature().clone();
    let ops = ModeOperators::new(&sig);
    let names = [CANTILEVER, VORTEX, SPIN];
    let numbers: Vec<QOperator> = names.iter().map(|n| ops.number(n).unwrap()).collect();
    let rho0 = DensityState::basis(&sig, &[0, 1, 0]).unwrap();
    let grid: Vec<f64> = (0..=40).map(|k| 0.5 * k as f64).collect();

    let (energies, vecs) = eigh(h.matrix());
    let psi0 = CMatrix::from_fn(sig.dim(), 1, |i, _| {
        if i == sig.index(&[0, 1, 0]) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let c0 = vecs.adjoint() * psi0;

    let model = OpenSystemModel::closed(h).map_err(|e| e.to_string())?;
    let observables = names
        .iter()
        .zip(&numbers)
        .map(|(n, op)| Observable::new(*n, op.clone()))
        .collect();
    let mut worst = 0.0f64;
    for integrator in [Integrator::default(), Integrator::Adaptive] {
        let opts = EvolveOptions {
            integrator,
            observables: Vec::clone(&observables),
            ..EvolveOptions::default()
        };
        let evo = evolve(&model, &rho0, &grid, &opts).map_err(|e| e.to_string())?;
        for (k, &t) in grid.iter().enumerate() {
            let ct = CMatrix::from_fn(sig.dim(), 1, |i, _| c0[(i, 0)] * C64::from_polar(1.0, -energies[i] * t));
            let psi = &vecs * ct;
            for (name, op) in names.iter().zip(&numbers) {
                let exact = (psi.adjoint() * op.matrix() * &psi)[(0, 0)].re;
                let got = evo.series.track(name).unwrap()[k];
                worst = worst.max((got - exact).abs());
            }
        }
    }
    check(
        worst <= ORACLE_TOL,
        format!("max occupation error {:.2e} over RK4 and DP5(4)", worst),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "gyrotropic frequency of the 180/20 nm YIG disc",
            gyrotropic_frequency_band,
        ),
        ("ring-down spectrum peak", ring_down_spectrum_peak),
        ("vortex linewidth", linewidth),
        ("coupling strengths of the reference device", coupling_strengths),
        ("ultrastrong boundary at r = 180 nm", ultrastrong_boundary),
        ("effective-parameter identities", effective_identities),
        ("resonant vortex to spin transfer", resonant_transfer),
        ("effective model agreement", effective_model_agreement),
        ("master equation invariants", master_equation_invariants),
        ("exact diagonalization oracle", exact_diagonalization_oracle),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {tag}: {name}: {detail} [{:.2} s]",
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
