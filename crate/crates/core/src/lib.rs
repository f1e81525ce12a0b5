//! Simulation toolkit for a hybrid quantum system built from a magnetic
//! vortex in a ferromagnetic nanodisc, a magnetically tipped nanomechanical
//! cantilever and a single NV center.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] turns material, geometry and field inputs into frequencies,
//!   linewidths, zero-point amplitudes and coupling strengths.
//! * [`operators`] builds dense operators over truncated Fock/two-level
//!   spaces and every Hamiltonian of the model.
//! * [`lindblad`] integrates the thermal master equation.
//! * [`thiele`] is the classical ring-down surrogate for the gyrotropic mode
//!   together with its FFT spectrum analysis.
//! * [`experiments`] regenerates the parameter sweeps and time-domain runs.
//! * [`io`] holds configuration parsing, CSV/SVG writers and command dispatch.
//!
//! All quantities are SI internally. Frequencies, rates and couplings are
//! angular (rad/s); Hamiltonians are expressed as `H/ħ`.

pub mod constants;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod lindblad;
pub mod operators;
pub mod params;
pub mod thiele;

pub use error::{Error, Result};
pub use exec::Execution;
