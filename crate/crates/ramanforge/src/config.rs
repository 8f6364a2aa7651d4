//! Experiment configuration: a strict JSON schema with documented defaults.
//!
//! Unknown keys are rejected, every field is optional, and unit-bearing keys
//! carry their unit as a suffix. Linear frequencies use `_hz` keys and are
//! multiplied by `2*pi` internally; quantities the benchmarks quote as
//! angular frequencies keep explicit `_rad_s` keys.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::DetuningDistribution;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Simulations the `run` command dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimulationKind {
    Rabi,
    Ramsey,
    Cpmg,
    Xy16,
    Ensemble,
    Fig1e,
    Lightshift,
}

impl Default for SimulationKind {
    fn default() -> Self {
        Self::Rabi
    }
}

impl SimulationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Rabi => "rabi",
            Self::Ramsey => "ramsey",
            Self::Cpmg => "cpmg",
            Self::Xy16 => "xy16",
            Self::Ensemble => "ensemble",
            Self::Fig1e => "fig1e",
            Self::Lightshift => "lightshift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub simulation: SimulationKind,
    /// Output base name; defaults to the simulation name.
    pub label: Option<String>,
    pub spectrum: SpectrumConfig,
    pub method: MethodConfig,
    pub dynamics: DynamicsConfig,
    pub noise: NoiseConfig,
    pub array: ArrayConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            simulation: SimulationKind::default(),
            label: None,
            spectrum: SpectrumConfig::default(),
            method: MethodConfig::default(),
            dynamics: DynamicsConfig::default(),
            noise: NoiseConfig::default(),
            array: ArrayConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Phase-modulation operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub beta_rad: f64,
    pub alpha_rad: f64,
    pub truncation: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            beta_rad: 1.336,
            alpha_rad: 0.76,
            truncation: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    FilterCarrier,
    FilterMzInterferometer,
    MzModulatorHalf,
    MzModulatorMin,
    Dispersive,
}

impl Default for MethodName {
    fn default() -> Self {
        Self::Dispersive
    }
}

/// Conversion-method context echoed into summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MethodConfig {
    pub name: MethodName,
    pub alpha_rad: f64,
    pub beta_max_rad: f64,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self {
            name: MethodName::Dispersive,
            alpha_rad: 0.76,
            beta_max_rad: PI,
        }
    }
}

/// Atom and drive parameters plus the scan grids of the sequence runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub qubit_frequency_hz: f64,
    pub detuning_hz: f64,
    pub excited_linewidth_hz: f64,
    /// Duration of a pi pulse; the default matches a 1.95 MHz Rabi drive.
    pub pi_time_s: f64,
    pub laser_frequency_hz: f64,
    pub d1_frequency_hz: f64,
    pub d2_frequency_hz: f64,
    pub polarization: PolarizationConfig,
    pub scan_points: usize,
    pub rabi_scan_max_s: f64,
    pub ramsey_gap_max_s: f64,
    pub cpmg_gap_s: f64,
    pub cpmg_max_pulses: usize,
    pub xy16_repeats: usize,
    pub xy16_gap_max_s: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            qubit_frequency_hz: 6.8e9,
            detuning_hz: 93e9,
            excited_linewidth_hz: 5.75e6,
            pi_time_s: 1.0 / (2.0 * 1.95e6),
            laser_frequency_hz: 377.2e12,
            d1_frequency_hz: 377.107e12,
            d2_frequency_hz: 384.230e12,
            polarization: PolarizationConfig::default(),
            scan_points: 40,
            rabi_scan_max_s: 4e-6,
            ramsey_gap_max_s: 5e-3,
            cpmg_gap_s: 1e-5,
            cpmg_max_pulses: 25_000,
            xy16_repeats: 16,
            xy16_gap_max_s: 2e-3,
        }
    }
}

/// Jones vector on the quantization frame, split into real and imaginary
/// parts; the default is circular light propagating along z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolarizationConfig {
    pub jones_re: [f64; 3],
    pub jones_im: [f64; 3],
}

impl Default for PolarizationConfig {
    fn default() -> Self {
        Self {
            jones_re: [std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0],
            jones_im: [0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0],
        }
    }
}

/// Quasi-static detuning distribution, tagged by kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DetuningConfig {
    Delta { value_rad_s: f64 },
    Gaussian { sigma_rad_s: f64 },
    Exponential { mean_rad_s: f64 },
}

impl Default for DetuningConfig {
    fn default() -> Self {
        Self::Delta { value_rad_s: 0.0 }
    }
}

impl From<&DetuningConfig> for DetuningDistribution {
    fn from(config: &DetuningConfig) -> Self {
        match *config {
            DetuningConfig::Delta { value_rad_s } => Self::Delta { value: value_rad_s },
            DetuningConfig::Gaussian { sigma_rad_s } => Self::Gaussian { sigma: sigma_rad_s },
            DetuningConfig::Exponential { mean_rad_s } => Self::Exponential { mean: mean_rad_s },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub per_pulse_scatter_prob: f64,
    pub static_detuning: DetuningConfig,
    pub amplitude_error: f64,
    /// Idle mixing time; omit for no idle decay.
    pub idle_t1_s: Option<f64>,
    pub seed: u64,
    pub shots: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            per_pulse_scatter_prob: 0.0,
            static_detuning: DetuningConfig::default(),
            amplitude_error: 0.0,
            idle_t1_s: None,
            seed: 0,
            shots: 2000,
        }
    }
}

impl NoiseConfig {
    pub fn to_noise_model(&self) -> crate::sequences::NoiseModel {
        crate::sequences::NoiseModel {
            per_pulse_scatter_prob: self.per_pulse_scatter_prob,
            static_detuning: (&self.static_detuning).into(),
            amplitude_error: self.amplitude_error,
            idle_t1: self.idle_t1_s.unwrap_or(f64::INFINITY),
            rng_seed: self.seed,
        }
    }
}

/// Tweezer array and illumination of the ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArrayConfig {
    pub rows: usize,
    pub cols: usize,
    pub pitch_x_m: f64,
    pub pitch_y_m: f64,
    pub waist_minor_m: f64,
    pub waist_major_m: f64,
    pub center_offset_m: [f64; 2],
    pub peak_rabi_hz: f64,
    /// Bernoulli loading probability; omit for a fully loaded array.
    pub fill_probability: Option<f64>,
    pub fill_seed: u64,
    pub duration_s: f64,
    /// Number of center rows to average; omit for the whole array.
    pub middle_rows: Option<usize>,
    /// RMS of the per-shot global power fluctuation; 0 disables.
    pub power_fluctuation_sigma: f64,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            rows: 20,
            cols: 30,
            pitch_x_m: 200e-6 / 29.0,
            pitch_y_m: 100e-6 / 19.0,
            waist_minor_m: 40e-6,
            waist_major_m: 560e-6,
            center_offset_m: [0.0, 0.0],
            peak_rabi_hz: 1.95e6,
            fill_probability: None,
            fill_seed: 0,
            duration_s: 4e-6,
            middle_rows: Some(4),
            power_fluctuation_sigma: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Output directory; overridden by `--out-dir` and the
    /// `RAMANFORGE_OUT_DIR` environment variable fallback.
    pub dir: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Range checks with field-path diagnostics.
    pub fn validate(&self) -> Result<()> {
        let fail = |path: &str, msg: String| Err(Error::ConfigParse(format!("{path}: {msg}")));
        if self.schema_version != SCHEMA_VERSION {
            return fail(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            );
        }
        if !(0.0..=2.0 * PI).contains(&self.spectrum.beta_rad) {
            return fail(
                "spectrum.beta_rad",
                format!("{} outside [0, 2*pi]", self.spectrum.beta_rad),
            );
        }
        if !(self.method.beta_max_rad > 0.0 && self.method.beta_max_rad <= 2.0 * PI) {
            return fail(
                "method.beta_max_rad",
                format!("{} outside (0, 2*pi]", self.method.beta_max_rad),
            );
        }
        if !(0.0..1.0).contains(&self.noise.per_pulse_scatter_prob) {
            return fail(
                "noise.per_pulse_scatter_prob",
                format!("{} outside [0, 1)", self.noise.per_pulse_scatter_prob),
            );
        }
        match self.noise.static_detuning {
            DetuningConfig::Gaussian { sigma_rad_s } if sigma_rad_s < 0.0 => {
                return fail(
                    "noise.static_detuning.sigma_rad_s",
                    format!("{sigma_rad_s} is negative"),
                )
            }
            DetuningConfig::Exponential { mean_rad_s } if mean_rad_s < 0.0 => {
                return fail(
                    "noise.static_detuning.mean_rad_s",
                    format!("{mean_rad_s} is negative"),
                )
            }
            _ => {}
        }
        if let Some(t1) = self.noise.idle_t1_s {
            if !(t1 > 0.0) {
                return fail("noise.idle_t1_s", format!("{t1} must be positive"));
            }
        }
        if self.noise.shots == 0 {
            return fail("noise.shots", "must be at least 1".into());
        }
        if self.dynamics.scan_points < 5 {
            return fail(
                "dynamics.scan_points",
                format!("{} below the fit minimum of 5", self.dynamics.scan_points),
            );
        }
        for (value, path) in [
            (self.dynamics.qubit_frequency_hz, "dynamics.qubit_frequency_hz"),
            (self.dynamics.pi_time_s, "dynamics.pi_time_s"),
            (self.dynamics.rabi_scan_max_s, "dynamics.rabi_scan_max_s"),
            (self.dynamics.ramsey_gap_max_s, "dynamics.ramsey_gap_max_s"),
            (self.array.peak_rabi_hz, "array.peak_rabi_hz"),
            (self.array.duration_s, "array.duration_s"),
            (self.array.waist_minor_m, "array.waist_minor_m"),
            (self.array.waist_major_m, "array.waist_major_m"),
        ] {
            if !(value > 0.0) {
                return fail(path, format!("{value} must be positive"));
            }
        }
        if self.dynamics.cpmg_max_pulses == 0 {
            return fail("dynamics.cpmg_max_pulses", "must be at least 1".into());
        }
        if self.dynamics.xy16_repeats == 0 {
            return fail("dynamics.xy16_repeats", "must be at least 1".into());
        }
        if let Some(p) = self.array.fill_probability {
            if !(0.0..=1.0).contains(&p) {
                return fail("array.fill_probability", format!("{p} outside [0, 1]"));
            }
        }
        if let Some(m) = self.array.middle_rows {
            if m == 0 || m > self.array.rows {
                return fail(
                    "array.middle_rows",
                    format!("{m} outside 1..={}", self.array.rows),
                );
            }
        }
        Ok(())
    }

    pub fn effective_label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.simulation.as_str().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let config = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(config, ExperimentConfig::default());
        assert_eq!(config.simulation, SimulationKind::Rabi);
        assert_eq!(config.effective_label(), "rabi");
    }

    #[test]
    fn unknown_keys_are_rejected_with_the_key_name() {
        let err = ExperimentConfig::from_json(r#"{"nois": {"shots": 10}}"#).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("nois"), "{message}");
        let err =
            ExperimentConfig::from_json(r#"{"noise": {"shotz": 10}}"#).unwrap_err();
        assert!(err.to_string().contains("shotz"));
    }

    #[test]
    fn range_errors_carry_field_paths() {
        let err = ExperimentConfig::from_json(r#"{"noise": {"per_pulse_scatter_prob": 1.5}}"#)
            .unwrap_err();
        assert!(err
            .to_string()
            .contains("noise.per_pulse_scatter_prob"));
        let err = ExperimentConfig::from_json(r#"{"spectrum": {"beta_rad": 9.0}}"#).unwrap_err();
        assert!(err.to_string().contains("spectrum.beta_rad"));
    }

    #[test]
    fn detuning_distribution_is_tagged() {
        let config = ExperimentConfig::from_json(
            r#"{"noise": {"static_detuning": {"kind": "exponential", "mean_rad_s": 2161.0}}}"#,
        )
        .unwrap();
        assert_eq!(
            config.noise.static_detuning,
            DetuningConfig::Exponential { mean_rad_s: 2161.0 }
        );
        let model = config.noise.to_noise_model();
        assert_eq!(
            model.static_detuning,
            crate::sequences::DetuningDistribution::Exponential { mean: 2161.0 }
        );
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut config = ExperimentConfig::default();
        config.simulation = SimulationKind::Cpmg;
        config.noise.seed = 99;
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(config, back);
    }
}
