//! Toolkit for engineering laser sideband spectra that drive stimulated
//! Raman transitions of hyperfine qubits.
//!
//! A phase-modulated laser carries no amplitude modulation, so it cannot
//! drive a hyperfine qubit on its own. This crate models the ways a sideband
//! spectrum can be reshaped until it does: interferometric filters,
//! Mach-Zehnder modulators, and quadratic spectral phase from a highly
//! dispersive reflector. On top of the spectrum layer it provides
//!
//! - closed-form and spectrum-level figures of merit (transmission,
//!   amplitude-modulation efficiency, coherence metric) for each conversion
//!   method, with operating-point optimizers ([`conversion`]);
//! - three-level and effective two-level dynamics with an adaptive
//!   integrator, connecting the sideband picture to simulated Rabi
//!   oscillations and scattering budgets ([`raman`]);
//! - vector-light-shift analysis classifying which spin transitions a laser
//!   polarization can drive ([`light_shift`]);
//! - Monte-Carlo pulse-sequence simulation (Rabi, Ramsey, CPMG, XY16) under
//!   per-pulse scattering, quasi-static detuning, amplitude miscalibration
//!   and idle relaxation ([`sequences`]);
//! - tweezer-array ensemble averaging with an elliptical Gaussian beam
//!   ([`ensemble`]);
//! - a config-driven report layer emitting reproducible CSV/JSON datasets
//!   ([`config`], [`report`]).
//!
//! Everything numeric bottoms out in [`bessel`], a self-contained Bessel-J
//! evaluator plus the sideband interference identities used as oracles
//! throughout the test suite.
//!
//! See the `examples/` directory for one runnable program per capability;
//! the `ramanforge` binary exposes the dataset generators as subcommands.

pub mod bessel;
pub mod config;
pub mod conversion;
pub mod ensemble;
pub mod error;
pub mod fitting;
pub mod format;
pub mod light_shift;
pub mod ode;
pub mod raman;
pub mod report;
pub mod sequences;
pub mod spectrum;

pub use error::{Error, Result};
pub use spectrum::{FilterKind, SidebandSpectrum};
