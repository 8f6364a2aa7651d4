//! Dataset generation: the comparison table, the dispersion-requirement
//! table, the efficiency curve, and the config-driven simulation runs.
//!
//! Output contract: CSV files carry a header row, LF line endings and
//! `%.12g` numbers; JSON summaries contain no wall-clock data, so a rerun
//! with the same config and seed reproduces them byte for byte.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, SimulationKind};
use crate::conversion::{
    fig1e_dataset, method_metrics_numeric, optimize_beta, optimize_dispersive_joint,
    standard_catalogue, ConversionMethod, DispersionRequirement, MethodReport,
};
use crate::ensemble::{
    ensemble_rabi_with, ArrayGeometry, BeamProfile, EnsembleOptions, FillPattern, RowSelection,
};
use crate::error::{Error, Result};
use crate::fitting::{DecayModel, FitResult};
use crate::format::format_g12;
use crate::light_shift::{fictitious_field, transition_class, PolarizationVector};
use crate::sequences::{
    build_sequence, ramsey_contrast, scan_sequences, CloserSign, PulseSequence, SequenceKind,
    SequenceResult,
};

/// Environment variable naming the default output root.
pub const OUT_DIR_ENV: &str = "RAMANFORGE_OUT_DIR";

/// Files produced by a command.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub summary_path: Option<PathBuf>,
}

/// CLI-level overrides of config fields.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// Resolution order: explicit flag, config `output.dir`, `RAMANFORGE_OUT_DIR`,
/// current directory.
pub fn resolve_out_dir(flag: Option<&Path>, config_dir: Option<&str>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = config_dir {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(".")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("summaries serialize");
    text.push('\n');
    write_text(path, &text)
}

/// Comparison table of every conversion method at its optimal depth.
///
/// The filter and modulator methods search the full `(0, 2*pi]` window the
/// table quotes; the dispersive row is constrained to the given curvature
/// and the accessible window, and a `dispersive_joint` row reports the
/// unconstrained `(beta, alpha)` optimum alongside it.
pub fn table_s1_rows(alpha: f64, beta_max: Option<f64>) -> Result<Vec<(String, f64, MethodReport)>> {
    let wide = beta_max.unwrap_or(TAU);
    let narrow = beta_max.unwrap_or(PI).min(wide);
    let mut rows = Vec::new();
    for method in [
        ConversionMethod::FilterCarrier,
        ConversionMethod::FilterMachZehnderInterferometer,
        ConversionMethod::MzModulatorHalfTransmission,
        ConversionMethod::MzModulatorMinTransmission,
    ] {
        let (beta_star, report) = optimize_beta(method, wide)?;
        rows.push((method.slug().to_string(), beta_star, report));
    }
    let (beta_star, report) = optimize_beta(ConversionMethod::Dispersive { alpha }, narrow)?;
    rows.push(("dispersive".to_string(), beta_star, report));
    let joint = optimize_dispersive_joint(narrow)?;
    rows.push(("dispersive_joint".to_string(), joint.beta, joint.report));
    Ok(rows)
}

/// Writes the comparison table as `method,beta_star,T,eta,C`.
pub fn cmd_table_s1(out_path: &Path, alpha: f64, beta_max: Option<f64>) -> Result<RunArtifacts> {
    let mut csv = String::from("method,beta_star,T,eta,C\n");
    for (name, beta_star, report) in table_s1_rows(alpha, beta_max)? {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            name,
            format_g12(beta_star),
            format_g12(report.transmission),
            format_g12(report.am_efficiency),
            format_g12(report.coherence)
        ));
    }
    write_text(out_path, &csv)?;
    Ok(RunArtifacts {
        csv_path: out_path.to_path_buf(),
        summary_path: None,
    })
}

/// Writes the dispersion-requirement table for the standard element
/// catalogue, `label,gdd_fs2,alpha_rad,required_beta_rad,reachable`.
pub fn cmd_fig1e(out_path: &Path, qubit_frequency_hz: f64) -> Result<RunArtifacts> {
    let rows = fig1e_dataset(&standard_catalogue(), TAU * qubit_frequency_hz)?;
    write_text(out_path, &requirement_csv(&rows))?;
    Ok(RunArtifacts {
        csv_path: out_path.to_path_buf(),
        summary_path: None,
    })
}

fn requirement_csv(rows: &[DispersionRequirement]) -> String {
    let mut csv = String::from(DispersionRequirement::CSV_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row.csv_row());
        csv.push('\n');
    }
    csv
}

/// Writes the efficiency-versus-depth curve of a dispersive element,
/// `beta,am_efficiency`, measured on the constructed spectra.
pub fn cmd_fig2b(
    out_path: &Path,
    alpha: f64,
    beta_min: f64,
    beta_max: f64,
    points: usize,
) -> Result<RunArtifacts> {
    if !(beta_min > 0.0 && beta_max <= PI && beta_min < beta_max) {
        return Err(Error::Domain(format!(
            "depth grid [{beta_min}, {beta_max}] outside (0, pi]"
        )));
    }
    if points < 2 {
        return Err(Error::Domain("curve needs at least 2 points".into()));
    }
    let mut csv = String::from("beta,am_efficiency\n");
    for i in 0..points {
        let beta = beta_min + (beta_max - beta_min) * i as f64 / (points - 1) as f64;
        let report = method_metrics_numeric(ConversionMethod::Dispersive { alpha }, beta)?;
        csv.push_str(&format!(
            "{},{}\n",
            format_g12(beta),
            format_g12(report.am_efficiency)
        ));
    }
    write_text(out_path, &csv)?;
    Ok(RunArtifacts {
        csv_path: out_path.to_path_buf(),
        summary_path: None,
    })
}

fn base_summary(config: &ExperimentConfig, label: &str, seed: u64, shots: usize) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(config.schema_version));
    map.insert("label".into(), json!(label));
    map.insert("simulation".into(), json!(config.simulation.as_str()));
    map.insert("seed".into(), json!(seed));
    map.insert("shots".into(), json!(shots));
    map
}

fn insert_fit(map: &mut Map<String, Value>, fit: Option<&FitResult>) {
    match fit {
        Some(fit) => {
            map.insert("fit_model".into(), json!(fit.model.as_str()));
            map.insert("params".into(), json!(fit.params));
            map.insert("uncertainties".into(), json!(fit.uncertainties));
            map.insert(
                "param_names".into(),
                json!(fit.model.param_names().to_vec()),
            );
        }
        None => {
            map.insert("fit_model".into(), Value::Null);
            map.insert("params".into(), Value::Null);
            map.insert("uncertainties".into(), Value::Null);
        }
    }
}

/// Runs the configured simulation, writing `<label>.csv` and
/// `<label>_summary.json` under the resolved output directory.
pub fn cmd_run(config: &ExperimentConfig, overrides: &RunOverrides) -> Result<RunArtifacts> {
    config.validate()?;
    let mut noise = config.noise.to_noise_model();
    if let Some(seed) = overrides.seed {
        noise.rng_seed = seed;
    }
    let shots = overrides.shots.unwrap_or(config.noise.shots);
    let out_dir = resolve_out_dir(overrides.out_dir.as_deref(), config.output.dir.as_deref());
    let label = config.effective_label();
    let csv_path = out_dir.join(format!("{label}.csv"));
    let summary_path = out_dir.join(format!("{label}_summary.json"));

    let mut summary = base_summary(config, &label, noise.rng_seed, shots);
    let csv = match config.simulation {
        SimulationKind::Rabi => run_rabi(config, &noise, shots, &mut summary)?,
        SimulationKind::Ramsey => run_ramsey(config, &noise, shots, &mut summary)?,
        SimulationKind::Cpmg => run_cpmg(config, &noise, shots, &mut summary)?,
        SimulationKind::Xy16 => run_xy16(config, &noise, shots, &mut summary)?,
        SimulationKind::Ensemble => run_ensemble(config, &mut summary)?,
        SimulationKind::Fig1e => run_fig1e(config, &mut summary)?,
        SimulationKind::Lightshift => run_lightshift(config, &mut summary)?,
    };
    write_text(&csv_path, &csv)?;
    write_json(&summary_path, &Value::Object(summary))?;
    Ok(RunArtifacts {
        csv_path,
        summary_path: Some(summary_path),
    })
}

fn scan_result_csv_and_fit(
    result: &mut SequenceResult,
    model: DecayModel,
    summary: &mut Map<String, Value>,
) -> Result<String> {
    let fit = result.fit(model).ok().cloned();
    insert_fit(summary, fit.as_ref());
    Ok(result.to_csv())
}

fn run_rabi(
    config: &ExperimentConfig,
    noise: &crate::sequences::NoiseModel,
    shots: usize,
    summary: &mut Map<String, Value>,
) -> Result<String> {
    let d = &config.dynamics;
    let points = d.scan_points;
    let mut values = Vec::with_capacity(points);
    let mut seqs: Vec<PulseSequence> = Vec::with_capacity(points);
    for i in 1..=points {
        let t = d.rabi_scan_max_s * i as f64 / points as f64;
        values.push(t);
        seqs.push(build_sequence(
            &SequenceKind::Rabi { drive_time: t },
            d.pi_time_s,
        )?);
    }
    let mut result = scan_sequences("rabi", &values, &seqs, noise, shots)?;
    let csv = scan_result_csv_and_fit(&mut result, DecayModel::DampedCosine, summary)?;
    if let Some(fit) = &result.fitted {
        summary.insert("rabi_frequency_hz".into(), json!(fit.params[2]));
    }
    Ok(csv)
}

fn run_ramsey(
    config: &ExperimentConfig,
    noise: &crate::sequences::NoiseModel,
    shots: usize,
    summary: &mut Map<String, Value>,
) -> Result<String> {
    let d = &config.dynamics;
    let gaps: Vec<f64> = (0..d.scan_points)
        .map(|i| d.ramsey_gap_max_s * i as f64 / (d.scan_points - 1) as f64)
        .collect();
    let result = ramsey_contrast(noise, &gaps, shots)?;
    insert_fit(summary, result.fitted.as_ref());
    if let Some(fit) = &result.fitted {
        summary.insert("t2_star_s".into(), json!(fit.decay_time()));
    }
    Ok(result.to_csv())
}

/// Logarithmic pulse-count grid, deduplicated.
fn cpmg_pulse_grid(max_pulses: usize, points: usize) -> Vec<usize> {
    let lo: f64 = (max_pulses as f64 / 100.0).max(1.0);
    let hi = max_pulses as f64;
    let mut counts: Vec<usize> = (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            (lo * (hi / lo).powf(f)).round() as usize
        })
        .collect();
    counts.dedup();
    counts
}

fn run_cpmg(
    config: &ExperimentConfig,
    noise: &crate::sequences::NoiseModel,
    shots: usize,
    summary: &mut Map<String, Value>,
) -> Result<String> {
    let d = &config.dynamics;
    let counts = cpmg_pulse_grid(d.cpmg_max_pulses, d.scan_points);
    let values: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
    let mut result = cpmg_closer_difference(&counts, d.cpmg_gap_s, d.pi_time_s, noise, shots)?;
    let csv = scan_result_csv_and_fit(&mut result, DecayModel::Exponential, summary)?;
    if let Some(fit) = &result.fitted {
        summary.insert("decay_constant_pulses".into(), json!(fit.params[1]));
    }
    summary.insert("observable".into(), json!("closer_difference"));
    debug_assert_eq!(values, result.scan_values);
    Ok(csv)
}

/// Difference of the two closing-pulse signals versus pulse count.
///
/// Both closers reuse the same per-shot noise streams, so the depolarized
/// halves cancel exactly and the difference carries pure survival
/// statistics, the observable whose 1/e pulse count the benchmark quotes.
pub fn cpmg_closer_difference(
    pulse_counts: &[usize],
    gap: f64,
    pi_time: f64,
    noise: &crate::sequences::NoiseModel,
    shots: usize,
) -> Result<SequenceResult> {
    let mut values = Vec::with_capacity(pulse_counts.len());
    let mut signal = Vec::with_capacity(pulse_counts.len());
    let mut stderr = Vec::with_capacity(pulse_counts.len());
    for (i, &n) in pulse_counts.iter().enumerate() {
        let mut signals = [0.0; 2];
        for (slot, closer) in [CloserSign::PlusX, CloserSign::MinusX].iter().enumerate() {
            let seq = build_sequence(
                &SequenceKind::Cpmg {
                    pi_pulses: n,
                    gap,
                    closer: *closer,
                },
                pi_time,
            )?;
            signals[slot] =
                crate::sequences::simulate_sequence_stream(&seq, noise, shots, i as u64)?.signal;
        }
        let diff = (signals[0] - signals[1]).clamp(0.0, 1.0);
        values.push(n as f64);
        signal.push(diff);
        // shared streams make the difference a plain binomial fraction
        stderr.push((diff * (1.0 - diff) / shots.max(1) as f64).sqrt());
    }
    Ok(SequenceResult {
        label: "cpmg".into(),
        scan_values: values,
        signal,
        stderr,
        shots,
        seed: noise.rng_seed,
        fitted: None,
    })
}

fn run_xy16(
    config: &ExperimentConfig,
    noise: &crate::sequences::NoiseModel,
    shots: usize,
    summary: &mut Map<String, Value>,
) -> Result<String> {
    let d = &config.dynamics;
    let mut values = Vec::with_capacity(d.scan_points);
    let mut seqs = Vec::with_capacity(d.scan_points);
    for i in 0..d.scan_points {
        let gap = d.xy16_gap_max_s * i as f64 / (d.scan_points - 1) as f64;
        let seq = build_sequence(
            &SequenceKind::Xy16 {
                repeats: d.xy16_repeats,
                gap,
                closer: CloserSign::PlusX,
            },
            d.pi_time_s,
        )?;
        values.push(seq.total_duration());
        seqs.push(seq);
    }
    let mut result = scan_sequences("xy16", &values, &seqs, noise, shots)?;
    let csv = scan_result_csv_and_fit(&mut result, DecayModel::Exponential, summary)?;
    if let Some(fit) = &result.fitted {
        summary.insert("t2_s".into(), json!(fit.params[1]));
    }
    summary.insert("pi_pulses".into(), json!(16 * d.xy16_repeats));
    Ok(csv)
}

fn run_ensemble(config: &ExperimentConfig, summary: &mut Map<String, Value>) -> Result<String> {
    let a = &config.array;
    let geometry = ArrayGeometry {
        rows: a.rows,
        cols: a.cols,
        pitch_x: a.pitch_x_m,
        pitch_y: a.pitch_y_m,
        fill: match a.fill_probability {
            Some(p) => FillPattern::Probability {
                p,
                seed: a.fill_seed,
            },
            None => FillPattern::Full,
        },
    };
    let beam = BeamProfile {
        waist_minor: a.waist_minor_m,
        waist_major: a.waist_major_m,
        center: a.center_offset_m,
        peak_rabi: TAU * a.peak_rabi_hz,
    };
    let rows = match a.middle_rows {
        Some(count) => RowSelection::MiddleRows(count),
        None => RowSelection::All,
    };
    let options = EnsembleOptions {
        power_fluctuation_sigma: a.power_fluctuation_sigma,
        shots: if a.power_fluctuation_sigma > 0.0 {
            config.noise.shots
        } else {
            1
        },
        seed: config.noise.seed,
        samples: 1024,
    };
    let result = ensemble_rabi_with(&geometry, &beam, a.duration_s, &rows, &options)?;
    insert_fit(summary, result.fitted.as_ref());
    if let Some(fit) = &result.fitted {
        summary.insert("rabi_frequency_hz".into(), json!(fit.params[2]));
    }
    summary.insert("rabi_spread".into(), json!(result.rabi_spread));
    summary.insert("atoms".into(), json!(result.per_atom_rabi.len()));
    Ok(result.to_csv())
}

fn run_fig1e(config: &ExperimentConfig, summary: &mut Map<String, Value>) -> Result<String> {
    let rows = fig1e_dataset(
        &standard_catalogue(),
        TAU * config.dynamics.qubit_frequency_hz,
    )?;
    insert_fit(summary, None);
    let reachable: Vec<&str> = rows
        .iter()
        .filter(|r| r.reachable)
        .map(|r| r.label.as_str())
        .collect();
    summary.insert("reachable".into(), json!(reachable));
    Ok(requirement_csv(&rows))
}

fn run_lightshift(config: &ExperimentConfig, summary: &mut Map<String, Value>) -> Result<String> {
    let d = &config.dynamics;
    let p = &d.polarization;
    let eps = PolarizationVector::new([
        Complex64::new(p.jones_re[0], p.jones_im[0]),
        Complex64::new(p.jones_re[1], p.jones_im[1]),
        Complex64::new(p.jones_re[2], p.jones_im[2]),
    ])?;
    let field = fictitious_field(
        &eps,
        1.0,
        TAU * d.laser_frequency_hz,
        TAU * d.d1_frequency_hz,
        TAU * d.d2_frequency_hz,
    )?;
    let class = transition_class(&field, [0.0, 0.0, 1.0]);
    insert_fit(summary, None);
    summary.insert("direction".into(), json!(field.direction.to_vec()));
    summary.insert("class".into(), json!(class.as_str()));
    summary.insert("magnitude_scale".into(), json!(field.magnitude_scale));
    summary.insert("detuning_factor".into(), json!(field.detuning_factor));
    let mut csv = String::from(
        "direction_x,direction_y,direction_z,class,magnitude_scale,detuning_factor\n",
    );
    csv.push_str(&format!(
        "{},{},{},{},{},{}\n",
        format_g12(field.direction[0]),
        format_g12(field.direction[1]),
        format_g12(field.direction[2]),
        class.as_str(),
        format_g12(field.magnitude_scale),
        format_g12(field.detuning_factor)
    ));
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DetuningConfig;

    fn temp_dir() -> tempfile::TempDir {
        tempfile::tempdir().expect("temp dir")
    }

    #[test]
    fn table_csv_matches_expected_rows() {
        let dir = temp_dir();
        let path = dir.path().join("table_s1.csv");
        cmd_table_s1(&path, 0.76, None).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "method,beta_star,T,eta,C");
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 6);
        let find = |name: &str| rows.iter().find(|r| r[0] == name).unwrap().clone();
        let disp = find("dispersive");
        assert!((disp[1].parse::<f64>().unwrap() - 1.336).abs() < 1e-3);
        assert!((disp[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
        assert!((disp[3].parse::<f64>().unwrap() - 0.582).abs() < 1e-3);
        assert!((disp[4].parse::<f64>().unwrap() - 0.339).abs() < 1e-3);
        let fc = find("filter_carrier");
        assert!((fc[1].parse::<f64>().unwrap() - 3.574).abs() < 1e-3);
        assert!((fc[4].parse::<f64>().unwrap() - 0.144).abs() < 1e-3);
    }

    #[test]
    fn constrained_beta_max_caps_the_table() {
        let dir = temp_dir();
        let free = dir.path().join("free.csv");
        let capped = dir.path().join("capped.csv");
        cmd_table_s1(&free, 0.76, None).unwrap();
        cmd_table_s1(&capped, 0.76, Some(1.0)).unwrap();
        let parse = |path: &Path| -> Vec<(String, f64, f64)> {
            std::fs::read_to_string(path)
                .unwrap()
                .lines()
                .skip(1)
                .map(|l| {
                    let parts: Vec<&str> = l.split(',').collect();
                    (
                        parts[0].to_string(),
                        parts[1].parse().unwrap(),
                        parts[4].parse().unwrap(),
                    )
                })
                .collect()
        };
        for ((name, beta, coherence), (_, _, free_c)) in
            parse(&capped).into_iter().zip(parse(&free))
        {
            assert!(beta <= 1.0 + 1e-9, "{name}: beta {beta}");
            assert!(coherence <= free_c + 1e-12, "{name}: C {coherence} vs {free_c}");
        }
    }

    #[test]
    fn fig2b_peaks_at_the_required_depth() {
        let dir = temp_dir();
        let path = dir.path().join("fig2b.csv");
        cmd_fig2b(&path, 0.73, 0.05, PI, 200).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        let peak = rows
            .iter()
            .cloned()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((peak.0 - 1.38).abs() < 0.03, "peak at {}", peak.0);
        // rises from zero roughly linearly at small depth
        assert!(rows[0].1 < 0.1);
        let grid_spacing = rows[1].0 - rows[0].0;
        assert!(cmd_fig2b(&path, 0.73, -0.5, PI, 50).is_err());
        assert!(grid_spacing > 0.0);
    }

    #[test]
    fn run_is_byte_deterministic() {
        let dir = temp_dir();
        let mut config = ExperimentConfig::default();
        config.simulation = SimulationKind::Cpmg;
        config.noise.shots = 50;
        config.noise.per_pulse_scatter_prob = 1e-3;
        config.dynamics.cpmg_max_pulses = 400;
        config.dynamics.scan_points = 8;
        config.noise.seed = 5;
        let run = |sub: &str| {
            let overrides = RunOverrides {
                out_dir: Some(dir.path().join(sub)),
                ..RunOverrides::default()
            };
            let artifacts = cmd_run(&config, &overrides).unwrap();
            (
                std::fs::read(&artifacts.csv_path).unwrap(),
                std::fs::read(artifacts.summary_path.as_ref().unwrap()).unwrap(),
            )
        };
        let (csv_a, summary_a) = run("a");
        let (csv_b, summary_b) = run("b");
        assert_eq!(csv_a, csv_b);
        assert_eq!(summary_a, summary_b);
    }

    #[test]
    fn lightshift_run_reports_direction_and_class() {
        let dir = temp_dir();
        let config = ExperimentConfig {
            simulation: SimulationKind::Lightshift,
            ..ExperimentConfig::default()
        };
        let overrides = RunOverrides {
            out_dir: Some(dir.path().to_path_buf()),
            ..RunOverrides::default()
        };
        let artifacts = cmd_run(&config, &overrides).unwrap();
        let summary: Value = serde_json::from_str(
            &std::fs::read_to_string(artifacts.summary_path.unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(summary["class"], json!("pi"));
        let direction = summary["direction"].as_array().unwrap();
        assert!((direction[2].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(summary["simulation"], json!("lightshift"));
    }

    #[test]
    fn ramsey_run_reports_t2_star() {
        let dir = temp_dir();
        let mut config = ExperimentConfig::default();
        config.simulation = SimulationKind::Ramsey;
        config.noise.static_detuning = DetuningConfig::Exponential { mean_rad_s: 2161.0 };
        config.noise.shots = 400;
        config.dynamics.scan_points = 25;
        let overrides = RunOverrides {
            out_dir: Some(dir.path().to_path_buf()),
            ..RunOverrides::default()
        };
        let artifacts = cmd_run(&config, &overrides).unwrap();
        let summary: Value = serde_json::from_str(
            &std::fs::read_to_string(artifacts.summary_path.unwrap()).unwrap(),
        )
        .unwrap();
        let t2 = summary["t2_star_s"].as_f64().unwrap();
        assert!((t2 - 1.17e-3).abs() < 0.05 * 1.17e-3, "T2* {t2}");
        // csv round-trip: refit matches the summary within tolerance
        let text = std::fs::read_to_string(&artifacts.csv_path).unwrap();
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for line in text.lines().skip(1) {
            let parts: Vec<&str> = line.split(',').collect();
            xs.push(parts[0].parse::<f64>().unwrap());
            ys.push(parts[1].parse::<f64>().unwrap());
        }
        let refit = crate::fitting::fit_decay(&xs, &ys, DecayModel::RamseyEnvelope).unwrap();
        assert!((refit.decay_time() - t2).abs() < 1e-3 * t2);
    }

    #[test]
    fn out_dir_resolution_order() {
        let config_dir = Some("cfg");
        let flag = PathBuf::from("flag");
        assert_eq!(
            resolve_out_dir(Some(&flag), config_dir),
            PathBuf::from("flag")
        );
        assert_eq!(resolve_out_dir(None, config_dir), PathBuf::from("cfg"));
    }

    #[test]
    fn empty_config_runs_to_completion() {
        let dir = temp_dir();
        let config = ExperimentConfig::from_json("{}").unwrap();
        let overrides = RunOverrides {
            out_dir: Some(dir.path().to_path_buf()),
            shots: Some(20),
            ..RunOverrides::default()
        };
        let artifacts = cmd_run(&config, &overrides).unwrap();
        assert!(artifacts.csv_path.exists());
        assert!(artifacts.summary_path.unwrap().exists());
    }
}
