//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the supported window of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested series truncation below the documented minimum.
    #[error("truncation order {got} below required minimum {min}")]
    Truncation { got: usize, min: usize },

    /// A filter or bandwidth window removed all optical power.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// Input puts a closed form into a 0/0 or otherwise undefined state.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Inconsistent parameters (spacing mismatch, invalid counts, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The adaptive integrator could not meet its tolerance contract.
    #[error("integration failure: {0}")]
    Integration(String),

    /// Evaluation at a pole (zero detuning, on-resonance laser).
    #[error("singularity: {0}")]
    Singularity(String),

    /// No modulation depth can reach the requested operating point.
    #[error("unreachable optimum: {0}")]
    UnreachableOptimum(String),

    /// Least-squares fit failed to converge.
    #[error("fit did not converge after {iterations} iterations (residual rms {residual_rms:.3e})")]
    FitDidNotConverge { iterations: usize, residual_rms: f64 },

    /// Configuration file failed validation; message carries the field path.
    #[error("invalid config: {0}")]
    ConfigParse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
