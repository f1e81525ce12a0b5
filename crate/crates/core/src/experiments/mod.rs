//! Experiments built from the parameter, operator and dynamics
//! layers: parameter sweeps over regular grids and the tripartite transfer
//! and adiabatic-elimination runs.

mod dynamics;
mod grid;
mod sweeps;

pub use dynamics::{
    deviation_series, run_effective_comparison, run_transfer_experiment, tripartite_model, Comparison,
    ComparisonConfig, DynamicsConfig, DynamicsRun, JcReference, NvDissipation, COMPARISON_RATIO, TRACK_BOSON,
    TRACK_CANTILEVER, TRACK_NV, TRACK_TLS, TRACK_VORTEX,
};
pub use grid::{Axis, AxisSpec, GridField, GridMask, Scale, SweepGrid, SweepProvenance};
pub use sweeps::{
    sweep_detuning, sweep_radius, sweep_usc, DetuningSweep, EffectiveParams, RadiusSweep, UscSweep,
    COHERENCE_THRESHOLD, DISPERSIVE_RATIO,
};
