//! Runs one experiment from a configuration and writes its artifacts.

use std::f64::consts::TAU;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::provenance::{Provenance, TOOL, VERSION};
use super::svg::{AxisScale, Heatmap, LinePlot, Series};
use crate::error::{Error, Result};
use crate::experiments::{
    run_effective_comparison, run_transfer_experiment, sweep_detuning, sweep_radius, sweep_usc, SweepGrid,
    COHERENCE_THRESHOLD, TRACK_BOSON, TRACK_CANTILEVER, TRACK_NV, TRACK_TLS, TRACK_VORTEX,
};
use crate::lindblad::TimeSeries;
use crate::params::USC_THRESHOLD;
use crate::thiele::{detect_peaks, power_spectrum, simulate_ring_down, GyrotropicMode};

/// Time-domain runs of the tripartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Resonant transfer without losses.
    TransferLossless,
    /// Resonant transfer with losses.
    TransferDissipative,
    /// Large-detuning run against the two-mode reference, without losses.
    DetunedLossless,
    /// Large-detuning run against the two-mode reference, with losses.
    DetunedDissipative,
}

impl Figure {
    pub fn label(self) -> &'static str {
        match self {
            Figure::TransferLossless => "8a",
            Figure::TransferDissipative => "8b",
            Figure::DetunedLossless => "9a",
            Figure::DetunedDissipative => "9b",
        }
    }

    fn dissipative(self) -> bool {
        matches!(self, Figure::TransferDissipative | Figure::DetunedDissipative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Params,
    Spectrum,
    SweepRadius,
    SweepUsc,
    SweepDetuning,
    Dynamics(Figure),
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Command::Params => "params".into(),
            Command::Spectrum => "spectrum".into(),
            Command::SweepRadius => "sweep_radius".into(),
            Command::SweepUsc => "sweep_usc".into(),
            Command::SweepDetuning => "sweep_detuning".into(),
            Command::Dynamics(f) => format!("dynamics_{}", f.label()),
        }
    }
}

/// Files written by a run and a short human-readable summary.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    cfg: &'a RunConfig,
    experiment: String,
    out: Artifacts,
}

impl Writer<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn comments(&self) -> Vec<String> {
        vec![format!("{TOOL} {VERSION}"), format!("experiment: {}", self.experiment)]
    }

    fn csv(&mut self, name: &str, f: impl FnOnce(BufWriter<fs::File>, &[String]) -> std::io::Result<()>) -> Result<()> {
        let path = self.path(name);
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f(BufWriter::new(file), &self.comments()).map_err(|e| Error::io(&path, e))?;
        self.out.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.out.files.push(path);
        Ok(())
    }

    fn finish<T: Serialize>(mut self, inputs: T) -> Result<Artifacts> {
        let path = self.path(&format!("{}.provenance.json", self.experiment));
        let outputs = self
            .out
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        Provenance::new(&self.experiment, self.cfg, inputs, outputs).write(&path)?;
        self.out.files.push(path);
        Ok(self.out)
    }
}

/// Runs `cmd` and writes CSV, SVG and provenance files into `out_dir`.
pub fn dispatch(cmd: Command, cfg: &RunConfig, out_dir: &Path) -> Result<Artifacts> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut w = Writer {
        dir: out_dir,
        cfg,
        experiment: cmd.name(),
        out: Artifacts::default(),
    };
    match cmd {
        Command::Params => params(w),
        Command::Spectrum => spectrum(w),
        Command::SweepRadius => {
            let grid = sweep_radius(&cfg.radius_sweep()?, cfg.execution())?;
            radius_plot(&mut w, &grid)?;
            sweep_outputs(w, grid)
        }
        Command::SweepUsc => {
            let grid = sweep_usc(&cfg.usc_sweep()?, cfg.execution())?;
            usc_plots(&mut w, &grid)?;
            sweep_outputs(w, grid)
        }
        Command::SweepDetuning => {
            let p = cfg.derived()?;
            let grid = sweep_detuning(&cfg.detuning_sweep(&p), cfg.execution())?;
            detuning_plots(&mut w, &grid)?;
            sweep_outputs(w, grid)
        }
        Command::Dynamics(f) => dynamics(w, f),
    }
}

fn params(mut w: Writer<'_>) -> Result<Artifacts> {
    let p = w.cfg.derived()?;
    let rows: Vec<Vec<String>> = p
        .report()
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                super::csv::number(r.value),
                r.unit.to_string(),
                r.description.to_string(),
            ]
        })
        .collect();
    w.csv("params.csv", |f, c| {
        super::csv::write_records(f, c, &["name", "value", "unit", "description"], &rows)
    })?;
    for r in p.report() {
        w.out.summary.push(format!(
            "{:<16} {:>14} {:<6} {}",
            r.name,
            super::csv::number(r.value),
            r.unit,
            r.description
        ));
    }
    for warning in &p.warnings {
        w.out.summary.push(format!("warning: {warning}"));
    }
    w.finish(json!({ "warnings": p.warnings }))
}

fn spectrum(mut w: Writer<'_>) -> Result<Artifacts> {
    let device = w.cfg.device()?;
    let mode = GyrotropicMode::from_disc(&device.material, &device.disc)?;
    let protocol = w.cfg.ring_down_protocol();
    let traj = simulate_ring_down(&mode, &protocol)?;
    let mut spec = power_spectrum(&traj.ring_down(), w.cfg.spectrum.zero_pad)?;
    spec.peaks = detect_peaks(&spec, w.cfg.spectrum.prominence);

    w.csv("ring_down.csv", |f, c| traj.write_csv(f, c))?;
    w.csv("spectrum.csv", |f, c| spec.write_csv(f, c))?;
    let mhz: Vec<f64> = spec.frequencies.iter().map(|f| f / 1e6).collect();
    let plot = LinePlot {
        title: "Ring-down power spectrum".into(),
        x_label: "frequency (MHz)".into(),
        y_label: "power (m²)".into(),
        y_scale: AxisScale::Log,
        series: vec![Series::new("|X(f)|²", mhz[1..].to_vec(), spec.power[1..].to_vec())],
        ..LinePlot::default()
    };
    w.text("spectrum.svg", &plot.render())?;

    w.out
        .summary
        .push(format!("analytic f_v = {:.6e} Hz", mode.frequency_hz()));
    for p in &spec.peaks {
        let fwhm = p.fwhm.map_or("n/a".to_string(), |v| format!("{v:.4e} Hz"));
        w.out.summary.push(format!(
            "peak at {:.6e} Hz, prominence {:.3e}, FWHM {fwhm}",
            p.frequency, p.prominence
        ));
    }
    w.finish(json!({
        "protocol": protocol,
        "mode": { "omega": mode.omega, "gamma": mode.gamma, "drive_gain": mode.drive_gain },
        "bin_width": spec.bin_width,
        "peaks": spec.peaks,
    }))
}

fn sweep_outputs(mut w: Writer<'_>, grid: SweepGrid) -> Result<Artifacts> {
    let name = format!("{}.csv", w.experiment);
    w.csv(&name, |f, c| grid.write_csv(f, c))?;
    let valid = grid.valid.iter().filter(|v| **v).count();
    w.out.summary.push(format!("{} grid points, {valid} valid", grid.len()));
    for m in &grid.masks {
        let on = m.values.iter().filter(|v| **v).count();
        w.out.summary.push(format!("mask {}: {on} points", m.name));
    }
    w.finish(&grid.provenance)
}

fn scaled(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

fn radius_plot(w: &mut Writer<'_>, grid: &SweepGrid) -> Result<()> {
    let r = scaled(&grid.axes[0].samples, 1e9);
    let plot = LinePlot {
        title: "Vortex-phonon coupling over linewidth".into(),
        x_label: "disc radius (nm)".into(),
        y_label: "g_vc/γ".into(),
        y_scale: AxisScale::Log,
        series: vec![Series::new(
            "g_vc/γ",
            r,
            grid.field("g_vc_over_gamma").expect("field").to_vec(),
        )],
        reference_lines: vec![(1.0, "g_vc = γ".into())],
        ..LinePlot::default()
    };
    for c in grid.crossings("g_vc_over_gamma", 1.0).unwrap_or_default() {
        w.out.summary.push(format!("g_vc/γ = 1 at r = {c:.4e} m"));
    }
    w.text("sweep_radius.svg", &plot.render())
}

fn masked(grid: &SweepGrid, field: &str) -> Vec<f64> {
    grid.field(field)
        .expect("field")
        .iter()
        .zip(&grid.valid)
        .map(|(v, ok)| if *ok { *v } else { f64::NAN })
        .collect()
}

fn usc_plots(w: &mut Writer<'_>, grid: &SweepGrid) -> Result<()> {
    let base = Heatmap {
        x_label: "disc radius (nm)".into(),
        y_label: "field gradient (T/m)".into(),
        x: scaled(&grid.axes[0].samples, 1e9),
        y: grid.axes[1].samples.clone(),
        y_scale: AxisScale::Log,
        color_scale: AxisScale::Log,
        ..Heatmap::default()
    };
    let ratio = Heatmap {
        title: "Normalized coupling g_vc/ω_v".into(),
        color_label: "g/ω".into(),
        values: masked(grid, "g_over_omega"),
        contours: vec![(USC_THRESHOLD, format!("g/ω = {USC_THRESHOLD}"))],
        ..base.clone()
    };
    w.text("sweep_usc_ratio.svg", &ratio.render())?;
    let u = Heatmap {
        title: "Coherence measure U".into(),
        color_label: "U".into(),
        values: masked(grid, "u"),
        contours: vec![(COHERENCE_THRESHOLD, format!("U = {COHERENCE_THRESHOLD}"))],
        ..base
    };
    w.text("sweep_usc_u.svg", &u.render())
}

fn detuning_plots(w: &mut Writer<'_>, grid: &SweepGrid) -> Result<()> {
    let x = scaled(&grid.axes[0].samples, 1e-6);
    let y = scaled(&grid.axes[1].samples, 1e9);
    for (field, title, file) in [
        ("g_eff_over_gamma_eff", "g_eff/γ_eff", "sweep_detuning_g_over_gamma.svg"),
        ("g_eff_over_kappa_eff", "g_eff/κ_eff", "sweep_detuning_g_over_kappa.svg"),
        ("c_eff", "cooperativity C_eff", "sweep_detuning_cooperativity.svg"),
    ] {
        let h = Heatmap {
            title: title.into(),
            x_label: "Δ1/2π (MHz)".into(),
            y_label: "d_vc (nm)".into(),
            color_label: title.into(),
            x: x.clone(),
            y: y.clone(),
            values: masked(grid, field),
            color_scale: AxisScale::Log,
            contours: vec![(1.0, "value 1".into())],
            ..Heatmap::default()
        };
        w.text(file, &h.render())?;
    }
    Ok(())
}

fn occupation_plot(title: &str, series: &[&TimeSeries], tracks: &[&str]) -> LinePlot {
    let mut out = Vec::new();
    for s in series {
        let t = scaled(s.times(), 1e6);
        for name in tracks {
            if let Some(v) = s.track(name) {
                out.push(Series::new(*name, t.clone(), v.to_vec()));
            }
        }
    }
    LinePlot {
        title: title.into(),
        x_label: "time (μs)".into(),
        y_label: "occupation".into(),
        series: out,
        ..LinePlot::default()
    }
}

fn dynamics(mut w: Writer<'_>, figure: Figure) -> Result<Artifacts> {
    let p = w.cfg.derived()?;
    let name = w.experiment.clone();
    match figure {
        Figure::TransferLossless | Figure::TransferDissipative => {
            let cfg = w.cfg.dynamics_config(&p);
            let run = run_transfer_experiment(&cfg, figure.dissipative())?;
            w.csv(&format!("{name}.csv"), |f, c| run.series.write_csv(f, c))?;
            let plot = occupation_plot(
                "Occupations on the resonant chain",
                &[&run.series],
                &[TRACK_CANTILEVER, TRACK_VORTEX, TRACK_NV],
            );
            w.text(&format!("{name}.svg"), &plot.render())?;
            let nv = run.series.track(TRACK_NV).expect("nv track");
            let (k, peak) = nv
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |a, (i, v)| if *v > a.1 { (i, *v) } else { a });
            w.out.summary.push(format!(
                "max NV occupation {peak:.6} at t = {:.4e} s",
                run.series.times()[k]
            ));
            w.out.summary.push(format!("{} accepted steps", run.stats.accepted));
            w.finish(json!({ "chain": cfg, "dissipative": figure.dissipative(), "stats": run.stats }))
        }
        Figure::DetunedLossless | Figure::DetunedDissipative => {
            let cfg = w.cfg.comparison_config(&p);
            let delta1 = w.cfg.comparison_detuning();
            let c = run_effective_comparison(&cfg, delta1, figure.dissipative())?;
            let mut merged = c.tripartite.clone();
            for t in [TRACK_BOSON, TRACK_TLS] {
                merged.push_track(t, c.reference.track(t).expect("reference track").to_vec())?;
            }
            w.csv(&format!("{name}.csv"), |f, cm| merged.write_csv(f, cm))?;
            let plot = occupation_plot(
                "Detuned chain against the two-mode reference",
                &[&merged],
                &[TRACK_CANTILEVER, TRACK_VORTEX, TRACK_NV, TRACK_BOSON, TRACK_TLS],
            );
            w.text(&format!("{name}.svg"), &plot.render())?;
            w.out
                .summary
                .push(format!("g_eff/2π = {:.6e} Hz", c.effective.g_eff / TAU));
            w.out
                .summary
                .push(format!("max occupation deviation {:.4e}", c.deviation));
            w.out
                .summary
                .push(format!("max cantilever occupation {:.4e}", c.max_cantilever));
            w.finish(json!({
                "comparison": cfg,
                "delta1": c.delta1,
                "delta2": c.delta2,
                "effective": c.effective,
                "dissipative": figure.dissipative(),
                "deviation": c.deviation,
                "max_cantilever": c.max_cantilever,
                "stats": c.stats,
            }))
        }
    }
}
