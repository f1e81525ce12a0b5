use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vortex_hybrid::io::{dispatch, parse_config, parse_config_str, Command, Figure, RunConfig, REFERENCE_CONFIG};
use vortex_hybrid::Error;

/// Simulator for a magnetic vortex coupled to a nanomechanical cantilever and
/// an NV center.
#[derive(Debug, Parser)]
#[command(name = "vortex-hybrid", version, about)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Configuration file; the bundled reference device when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,

    /// Output directory, overriding `output.dir`.
    #[arg(short, long)]
    out: Option<PathBuf>,

    /// Replace a configuration value, e.g. `disc.radius="200 nm"`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Run grid points on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    #[value(name = "8a")]
    Transfer,
    #[value(name = "8b")]
    TransferDissipative,
    #[value(name = "9a")]
    Detuned,
    #[value(name = "9b")]
    DetunedDissipative,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Derived-parameter report.
    Params(Common),
    /// Ring-down trajectory and its power spectrum.
    Spectrum(Common),
    /// Frequency, linewidth and coupling against disc radius.
    SweepRadius(Common),
    /// Ultrastrong-coupling map over radius and field gradient.
    SweepUsc(Common),
    /// Effective parameters over detuning and magnet distance.
    SweepDetuning(Common),
    /// Occupation dynamics of the tripartite system.
    Dynamics {
        #[command(flatten)]
        common: Common,
        /// 8a/8b resonant transfer, 9a/9b large detuning; b adds losses.
        #[arg(long, value_enum)]
        figure: FigureArg,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => parse_config(path, &common.overrides)?,
        None => parse_config_str(REFERENCE_CONFIG, "yig_disc_180x20.cfg", &common.overrides)?,
    };
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    if common.sequential {
        cfg.numerics.parallel = false;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    let (command, common) = match &cli.command {
        Cmd::Params(c) => (Command::Params, c),
        Cmd::Spectrum(c) => (Command::Spectrum, c),
        Cmd::SweepRadius(c) => (Command::SweepRadius, c),
        Cmd::SweepUsc(c) => (Command::SweepUsc, c),
        Cmd::SweepDetuning(c) => (Command::SweepDetuning, c),
        Cmd::Dynamics { common, figure } => {
            let f = match figure {
                FigureArg::Transfer => Figure::TransferLossless,
                FigureArg::TransferDissipative => Figure::TransferDissipative,
                FigureArg::Detuned => Figure::DetunedLossless,
                FigureArg::DetunedDissipative => Figure::DetunedDissipative,
            };
            (Command::Dynamics(f), common)
        }
    };
    let cfg = load(common)?;
    let artifacts = dispatch(command, &cfg, &cfg.output.dir)?;
    for line in &artifacts.summary {
        println!("{line}");
    }
    for f in &artifacts.files {
        log::info!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
